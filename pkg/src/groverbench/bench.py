"""Experiment runner: seeded trial plans, result tables, and plot data.

A plan is a grid of (qubits, algorithm, trial) cells.  Every cell gets a
seed derived from the base seed and the cell id alone, never from
execution order, so plans are reproducible and cells can run
concurrently.  Per-cell failures become error rows instead of aborting
the batch.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ops import Algorithm, predicted_layers
from .search import SearchConfig, SearchOutcome, run_search

TARGET_POLICIES = ("fixed", "random-per-trial")


@dataclass
class ExperimentPlan:
    """Grid of benchmark cells plus the shared run protocol."""

    qubit_list: list[int]
    algorithms: list[Algorithm]
    trials: int = 5
    shots: int = 1024
    base_seed: int = 0
    target_policy: str = "random-per-trial"
    target: int | None = None
    block_size: int = 4

    def __post_init__(self) -> None:
        if not self.qubit_list:
            raise ValueError("plan needs at least one qubit count")
        if any(not 2 <= r <= 24 for r in self.qubit_list):
            raise ValueError("qubit counts must lie in [2, 24]")
        if not self.algorithms:
            raise ValueError("plan needs at least one algorithm")
        self.algorithms = [Algorithm(a) for a in self.algorithms]
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.target_policy not in TARGET_POLICIES:
            raise ValueError(f"target policy must be one of {TARGET_POLICIES}")
        if self.target_policy == "fixed":
            if self.target is None:
                raise ValueError("fixed target policy requires a target")
            smallest = min(self.qubit_list)
            if not 0 <= self.target < (1 << smallest):
                raise ValueError(
                    f"fixed target {self.target} out of range for {smallest} qubits"
                )


@dataclass
class TrialRow:
    qubits: int
    algorithm: Algorithm
    trial: int
    accuracy_pct: float
    time_s: float
    hits: int = 0
    shots: int = 0
    layers: int = 0
    oracle_calls: int = 0


@dataclass
class AggregateRow:
    qubits: int
    algorithm: Algorithm
    accuracy_pct: float
    time_s: float


@dataclass
class ErrorRow:
    qubits: int
    algorithm: Algorithm
    trial: int
    message: str


@dataclass
class ResultTable:
    """Trial rows with exact per-(qubits, algorithm) aggregates."""

    rows: list[TrialRow] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)
    errors: list[ErrorRow] = field(default_factory=list)

    @classmethod
    def from_rows(cls, rows: list[TrialRow], errors: list[ErrorRow]) -> "ResultTable":
        groups: dict[tuple[int, Algorithm], list[TrialRow]] = {}
        for row in rows:
            groups.setdefault((row.qubits, row.algorithm), []).append(row)
        aggregates = []
        for (qubits, algorithm), members in groups.items():
            # Exact mean: accumulate integer hit counts, divide once.
            hits = sum(row.hits for row in members)
            shots = sum(row.shots for row in members)
            aggregates.append(
                AggregateRow(
                    qubits=qubits,
                    algorithm=algorithm,
                    accuracy_pct=100.0 * hits / shots,
                    time_s=sum(row.time_s for row in members) / len(members),
                )
            )
        return cls(rows=rows, aggregates=aggregates, errors=errors)


def cell_seed(base_seed: int, qubits: int, algorithm: Algorithm, trial: int) -> int:
    """Deterministic per-cell seed: base seed plus a stable cell digest."""
    tag = f"{qubits}:{Algorithm(algorithm).value}:{trial}".encode()
    return base_seed + int.from_bytes(hashlib.sha256(tag).digest()[:6], "big")


def _cell_target(plan: ExperimentPlan, seed: int, qubits: int) -> int:
    if plan.target_policy == "fixed":
        return plan.target
    rng = np.random.default_rng(seed + 1)
    return int(rng.integers(0, 1 << qubits))


def _run_cell(
    plan: ExperimentPlan, qubits: int, algorithm: Algorithm, trial: int
) -> TrialRow:
    seed = cell_seed(plan.base_seed, qubits, algorithm, trial)
    config = SearchConfig(
        r=qubits,
        target=_cell_target(plan, seed, qubits),
        algorithm=algorithm,
        b=plan.block_size,
        shots=plan.shots,
        seed=seed,
    )
    outcome: SearchOutcome = run_search(config)
    hits = round(outcome.success_fraction * plan.shots)
    return TrialRow(
        qubits=qubits,
        algorithm=algorithm,
        trial=trial,
        accuracy_pct=100.0 * hits / plan.shots,
        time_s=outcome.wall_time,
        hits=hits,
        shots=plan.shots,
        layers=outcome.layers,
        oracle_calls=outcome.oracle_calls,
    )


def run_plan(plan: ExperimentPlan, jobs: int = 1) -> ResultTable:
    """Execute every cell of the plan; failures become error rows."""
    cells = [
        (qubits, algorithm, trial)
        for qubits in plan.qubit_list
        for algorithm in plan.algorithms
        for trial in range(1, plan.trials + 1)
    ]

    def execute(cell: tuple[int, Algorithm, int]):
        qubits, algorithm, trial = cell
        try:
            return _run_cell(plan, qubits, algorithm, trial)
        except Exception as exc:  # noqa: BLE001 - cell isolation is the contract
            return ErrorRow(qubits, algorithm, trial, f"{type(exc).__name__}: {exc}")

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(execute, cells))
    else:
        results = [execute(cell) for cell in cells]

    rows = [item for item in results if isinstance(item, TrialRow)]
    errors = [item for item in results if isinstance(item, ErrorRow)]
    return ResultTable.from_rows(rows, errors)


# ---------------------------------------------------------------------------
# Export


CSV_COLUMNS = ["qubits", "algorithm", "trial", "accuracy_pct", "time_s"]


def _table_csv(table: ResultTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(CSV_COLUMNS)
    for row in table.rows:
        writer.writerow(
            [row.qubits, row.algorithm.value, row.trial, row.accuracy_pct, row.time_s]
        )
    return buffer.getvalue()


def _table_json(table: ResultTable) -> str:
    payload = {
        "rows": [
            {
                "qubits": row.qubits,
                "algorithm": row.algorithm.value,
                "trial": row.trial,
                "accuracy_pct": row.accuracy_pct,
                "time_s": row.time_s,
            }
            for row in table.rows
        ],
        "aggregates": [
            {
                "qubits": agg.qubits,
                "algorithm": agg.algorithm.value,
                "accuracy_pct": agg.accuracy_pct,
                "time_s": agg.time_s,
            }
            for agg in table.aggregates
        ],
        "errors": [
            {
                "qubits": err.qubits,
                "algorithm": err.algorithm.value,
                "trial": err.trial,
                "message": err.message,
            }
            for err in table.errors
        ],
    }
    return json.dumps(payload, indent=2)


def _table_markdown(table: ResultTable) -> str:
    algorithms = []
    for row in table.rows:
        if row.algorithm not in algorithms:
            algorithms.append(row.algorithm)
    header = ["Qubits", "Trial"]
    for algorithm in algorithms:
        header += [f"{algorithm.value} Acc.", f"{algorithm.value} Time(s)"]
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join(["---"] * len(header)) + "|",
    ]
    by_cell = {(row.qubits, row.algorithm, row.trial): row for row in table.rows}
    by_agg = {(agg.qubits, agg.algorithm): agg for agg in table.aggregates}
    qubit_counts = sorted({row.qubits for row in table.rows})
    trials = sorted({row.trial for row in table.rows})
    for qubits in qubit_counts:
        for trial in trials:
            cells = [str(qubits), str(trial)]
            for algorithm in algorithms:
                row = by_cell.get((qubits, algorithm, trial))
                if row is None:
                    cells += ["err", "err"]
                else:
                    cells += [f"{row.accuracy_pct:.2f}", f"{row.time_s:.5f}"]
            lines.append("| " + " | ".join(cells) + " |")
        cells = [str(qubits), "Avg."]
        for algorithm in algorithms:
            agg = by_agg.get((qubits, algorithm))
            if agg is None:
                cells += ["err", "err"]
            else:
                cells += [f"{agg.accuracy_pct:.2f}", f"{agg.time_s:.5f}"]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def emit_table(table: ResultTable, format: str) -> bytes:
    """Serialize the table as ``csv``, ``json``, or ``markdown``."""
    if format == "csv":
        return _table_csv(table).encode()
    if format == "json":
        return _table_json(table).encode()
    if format == "markdown":
        return _table_markdown(table).encode()
    raise ValueError(f"unknown table format {format!r}")


def emit_scaling_series(table: ResultTable, block_size: int = 4) -> dict[str, bytes]:
    """Per-algorithm scaling series: runtime and layer counts versus qubits.

    Returns a mapping of file name to JSON bytes, two files per
    algorithm.  The layer file carries the closed-form prediction next
    to the measured counters so external plots can overlay them.
    Needs at least two distinct qubit counts — a single point has no
    scaling shape.
    """
    qubit_counts = sorted({row.qubits for row in table.rows})
    if len(qubit_counts) < 2:
        raise ValueError("scaling series need results for at least two qubit counts")
    k = block_size.bit_length() - 1
    files: dict[str, bytes] = {}
    algorithms = sorted({row.algorithm for row in table.rows}, key=lambda a: a.value)
    for algorithm in algorithms:
        rows = [row for row in table.rows if row.algorithm == algorithm]
        counts = sorted({row.qubits for row in rows})
        runtime = []
        layers = []
        for qubits in counts:
            members = [row for row in rows if row.qubits == qubits]
            runtime.append([qubits, sum(row.time_s for row in members) / len(members)])
            layers.append([qubits, members[0].layers])
        layer_payload: dict = {
            "algorithm": algorithm.value,
            "unit": "layers",
            "measured": layers,
        }
        if algorithm is not Algorithm.GRK:
            layer_payload["predicted"] = [
                [qubits, predicted_layers(algorithm, qubits, k)] for qubits in counts
            ]
        files[f"layers_vs_qubits_{algorithm.value}.json"] = json.dumps(
            layer_payload, indent=2
        ).encode()
        files[f"runtime_vs_qubits_{algorithm.value}.json"] = json.dumps(
            {"algorithm": algorithm.value, "unit": "seconds", "measured": runtime},
            indent=2,
        ).encode()
    return files
