"""End-to-end search drivers with full query accounting.

Four drivers share the kernel layer:

* :func:`run_standard_grover` amplifies over the whole register.
* :func:`run_grk_partial` locates the block holding the target: a burn-in
  of global iterations, block-local rotations that freeze every other
  block, and one global cleanup that empties the non-target blocks.
* :func:`run_dfgs` resolves ``k`` index bits at a time from the MSB side,
  one segment search per layer.
* :func:`run_bdgs` resolves segments from both ends of the index at once;
  forward and backward passes touch disjoint bits, so a wall-clock layer
  counts one round of the two concurrent segment searches.

DFGS and BDGS default to compact working registers: each segment search
runs on a fresh ``2**width`` register holding just the segment subspace,
with every already-determined bit folded into the oracle condition.  The
full-register mode (block-restricted diffusion on the entire ``2**r``
state) is retained for cross-validation at desk scale (``r <= 12``);
both modes resolve identical bit values and cost identical queries.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .ops import (
    Algorithm,
    BlockPartition,
    OracleSpec,
    grk_query_count,
    grover_angle,
    grover_iteration,
    optimal_iterations,
)
from .statevector import (
    StateVector,
    _axis_selector,
    _check_qubits,
    place_segment,
    sample,
    segment_mask,
    uniform_state,
)

MAX_SEGMENT_ATTEMPTS = 8

# Segment extraction reads the argmax when its probability clears this bar;
# anything less certain is sampled and then confirmed against the oracle.
_EXACT_THRESHOLD = 1.0 - 1e-9


class SegmentSearchError(RuntimeError):
    """A segment's value could not be confirmed within the attempt budget."""


@dataclass
class SearchConfig:
    """One search instance: register size, target, and run protocol."""

    r: int
    target: int
    algorithm: Algorithm = Algorithm.GS
    b: int = 4
    shots: int = 1024
    seed: int = 0

    def __post_init__(self) -> None:
        _check_qubits(self.r)
        self.algorithm = Algorithm(self.algorithm)
        if not 0 <= self.target < (1 << self.r):
            raise ValueError(f"target {self.target} out of range for {self.r} qubits")
        if self.b < 2 or self.b & (self.b - 1):
            raise ValueError(f"branching factor must be a power of two >= 2, got {self.b}")
        if self.b > (1 << self.r):
            raise ValueError(f"branching factor {self.b} exceeds the index space")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")

    @property
    def k(self) -> int:
        """Segment width in bits: log2(b)."""
        return self.b.bit_length() - 1


@dataclass
class FoundBits:
    """Record of index bits already determined by completed segment searches.

    The mask only ever grows; overlapping segments are rejected because
    they indicate a driver scheduling bug.
    """

    mask: int = 0
    value: int = 0
    history: list[tuple[tuple[int, int], int]] = field(default_factory=list)

    def record(self, r: int, segment: tuple[int, int], seg_value: int) -> None:
        lo, hi = segment
        bits = segment_mask(r, lo, hi)
        if bits & self.mask:
            raise ValueError(
                f"segment [{lo}, {hi}] overlaps bits already determined "
                "(driver scheduling bug)"
            )
        self.mask |= bits
        self.value |= place_segment(r, seg_value, lo, hi)
        self.history.append(((lo, hi), seg_value))

    def complete(self, r: int) -> bool:
        return self.mask == (1 << r) - 1


@dataclass
class SearchOutcome:
    """Result of one driver run.

    ``certainty`` is the probability mass the final pre-measurement state
    puts on ``measured_index`` (for the block-partial driver: on the
    resolved block).  ``wall_time`` covers state preparation through
    final measurement and is the one field excluded from determinism
    guarantees.
    """

    measured_index: int
    success_fraction: float
    layers: int
    oracle_calls: int
    wall_time: float
    trial_seed: int
    certainty: float

    def to_dict(self) -> dict:
        return {
            "measured_index": self.measured_index,
            "success_fraction": self.success_fraction,
            "layers": self.layers,
            "oracle_calls": self.oracle_calls,
            "wall_time": self.wall_time,
            "trial_seed": self.trial_seed,
            "certainty": self.certainty,
        }


@dataclass
class SearchContext:
    """Working state shared by the segment searches of one layered run."""

    r: int
    k: int
    rng: np.random.Generator
    mode: str = "compact"
    state: StateVector | None = None
    max_attempts: int = MAX_SEGMENT_ATTEMPTS
    oracles: list[OracleSpec] = field(default_factory=list)
    certainty: float = 1.0


# ---------------------------------------------------------------------------
# Segment scheduling


def dfgs_segments(r: int, k: int) -> list[tuple[int, int]]:
    """MSB-to-LSB segment plan covering all ``r`` positions, ``k`` at a time."""
    return [(lo, min(lo + k - 1, r - 1)) for lo in range(0, r, k)]


def forward_segments(r: int, k: int) -> list[tuple[int, int]]:
    """Forward-pass plan: positions ``0 .. floor(r/2)-1`` from the MSB side."""
    half = r // 2
    return [(lo, min(lo + k - 1, half - 1)) for lo in range(0, half, k)]


def backward_segments(r: int, k: int) -> list[tuple[int, int]]:
    """Backward-pass plan: positions ``r-1`` down to ``floor(r/2)``."""
    half = r // 2
    plan = []
    hi = r - 1
    while hi >= half:
        lo = max(hi - k + 1, half)
        plan.append((lo, hi))
        hi = lo - 1
    return plan


# ---------------------------------------------------------------------------
# Segment search


def _conditioned_uniform(r: int, found: FoundBits) -> StateVector:
    """Uniform superposition over every index consistent with ``found``."""
    n = 1 << r
    support = 1 << (r - bin(found.mask).count("1"))
    amps = np.zeros(n, dtype=np.complex128)
    idx = np.arange(n)
    amps[(idx & found.mask) == found.value] = 1.0 / math.sqrt(support)
    return StateVector(r, amps)


def _segment_marginal(state: StateVector, lo: int, hi: int) -> np.ndarray:
    """Probability of each segment value, summed over all other positions."""
    r = state.num_qubits
    probs = state.probabilities().reshape((2,) * r)
    other = tuple(ax for ax in range(r) if not lo <= ax <= hi)
    if other:
        probs = probs.sum(axis=other)
    return probs.reshape(-1)


def _collapse_segment(state: StateVector, lo: int, hi: int, value: int) -> StateVector:
    """Project onto segment == value and renormalize (measurement collapse)."""
    r = state.num_qubits
    bits = segment_mask(r, lo, hi)
    placed = place_segment(r, value, lo, hi)
    src = state.amplitudes.reshape((2,) * r)
    keep = _axis_selector(r, bits, placed)
    kept = src[keep]
    mass = float(np.sum(np.abs(kept) ** 2))
    if mass <= 0.0:
        raise SegmentSearchError("collapse onto a zero-probability segment value")
    out = np.zeros_like(state.amplitudes).reshape((2,) * r)
    out[keep] = kept / math.sqrt(mass)
    return StateVector(r, out.reshape(-1))


def _amplify_and_extract(
    ctx: SearchContext,
    oracle: OracleSpec,
    segment: tuple[int, int],
    found: FoundBits,
    fresh: bool,
) -> tuple[int, float]:
    """Run the segment's amplification rounds and pick a value.

    Returns ``(value, probability)`` where the probability is the mass
    the post-amplification marginal puts on the chosen value.  The
    argmax is read directly when it is certain; otherwise the value is
    sampled with the run's generator.
    """
    lo, hi = segment
    width = hi - lo + 1
    reps = optimal_iterations(1 << width)
    if ctx.mode == "compact":
        register = uniform_state(width)
        for _ in range(reps):
            register = grover_iteration(register, oracle)
        marginal = register.probabilities()
    else:
        if fresh or ctx.state is None:
            ctx.state = _conditioned_uniform(ctx.r, found)
        diffusion_mask = ((1 << ctx.r) - 1) ^ segment_mask(ctx.r, lo, hi)
        for _ in range(reps):
            ctx.state = grover_iteration(ctx.state, oracle, diffusion_mask)
        marginal = _segment_marginal(ctx.state, lo, hi)
    top = int(np.argmax(marginal))
    if marginal[top] > _EXACT_THRESHOLD:
        return top, float(marginal[top])
    value = int(ctx.rng.choice(marginal.size, p=marginal / marginal.sum()))
    return value, float(marginal[value])


def segment_partial_search(
    ctx: SearchContext,
    segment: tuple[int, int] | None,
    target: int,
    found: FoundBits,
) -> FoundBits:
    """Resolve one bit segment of the target and record it in ``found``.

    Builds the segment-restricted oracle conditioned on every determined
    bit, amplifies for ``optimal_iterations(2**width)`` rounds, and
    extracts the segment value.  A width-2 segment is exact, so the
    argmax is taken as-is.  Narrower residual segments are not exact:
    the sampled value is confirmed with a classical oracle probe and, on
    a miss, retried up to ``ctx.max_attempts`` times — a width-1 miss
    leaves only one other candidate, so that case resolves
    deterministically.  An empty segment is a no-op.
    """
    if segment is None:
        return found
    lo, hi = segment
    if lo > hi:
        return found
    width = hi - lo + 1
    if width > ctx.k:
        raise ValueError(f"segment [{lo}, {hi}] wider than {ctx.k} bits")
    if segment_mask(ctx.r, lo, hi) & found.mask:
        raise ValueError(
            f"segment [{lo}, {hi}] overlaps determined bits (driver scheduling bug)"
        )

    oracle = OracleSpec(ctx.r, target, (lo, hi), found.mask, found.value)
    ctx.oracles.append(oracle)

    value, prob = _amplify_and_extract(ctx, oracle, segment, found, fresh=False)
    if prob > _EXACT_THRESHOLD:
        accepted_prob = prob
    else:
        verified = False
        for _ in range(ctx.max_attempts):
            probe = found.value | place_segment(ctx.r, value, lo, hi)
            if oracle.query_index(probe):
                verified = True
                break
            if width == 1:
                value = 1 - value
            else:
                value, prob = _amplify_and_extract(ctx, oracle, segment, found, fresh=True)
        if not verified:
            raise SegmentSearchError(
                f"segment [{lo}, {hi}] not confirmed in {ctx.max_attempts} attempts"
            )
        accepted_prob = 1.0  # oracle-confirmed

    if ctx.mode == "full":
        ctx.state = _collapse_segment(ctx.state, lo, hi, value)
    found.record(ctx.r, (lo, hi), value)
    ctx.certainty *= min(accepted_prob, 1.0)
    return found


# ---------------------------------------------------------------------------
# Drivers


def _derive_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, 2**63))


def _check_mode(mode: str, r: int) -> None:
    if mode not in ("compact", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "full" and r > 12:
        raise ValueError("full-register cross-validation mode is limited to r <= 12")


def run_standard_grover(config: SearchConfig) -> SearchOutcome:
    """Full-register search: optimal iteration count, then ``shots`` draws."""
    if config.algorithm is not Algorithm.GS:
        raise ValueError(f"config requests {config.algorithm}, not GS")
    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    oracle = OracleSpec(config.r, config.target)
    state = uniform_state(config.r)
    reps = optimal_iterations(1 << config.r)
    for _ in range(reps):
        state = grover_iteration(state, oracle)
    histogram = sample(state, config.shots, _derive_seed(rng))
    wall = time.perf_counter() - start
    return SearchOutcome(
        measured_index=histogram.mode(),
        success_fraction=histogram.fraction(config.target),
        layers=reps,
        oracle_calls=oracle.query_count,
        wall_time=wall,
        trial_seed=config.seed,
        certainty=float(state.probabilities()[config.target]),
    )


def _grk_global_step(
    a: float, b_amp: float, g: float, n: int, block: int
) -> tuple[float, float, float]:
    mu = ((n - block) * g + (block - 1) * b_amp - a) / n
    return 2.0 * mu + a, 2.0 * mu - b_amp, 2.0 * mu - g


def _grk_local_step(a: float, b_amp: float, block: int) -> tuple[float, float]:
    mu = ((block - 1) * b_amp - a) / block
    return 2.0 * mu + a, 2.0 * mu - b_amp


def grk_reference_amplitudes(
    n_states: int, b: int, t_global: int, t_local: int, cleanup: bool = True
) -> tuple[float, float, float]:
    """Exact amplitudes of the block-partial schedule, tracked as scalars.

    By symmetry the state has only three amplitude classes: the target,
    the other items of the target block, and the items of every other
    block.  This closed recurrence is the independent reference the
    statevector driver is checked against.
    """
    block = n_states // b
    a = b_amp = g = 1.0 / math.sqrt(n_states)
    for _ in range(t_global):
        a, b_amp, g = _grk_global_step(a, b_amp, g, n_states, block)
    for _ in range(t_local):
        a, b_amp = _grk_local_step(a, b_amp, block)
    if cleanup:
        a, b_amp, g = _grk_global_step(a, b_amp, g, n_states, block)
    return a, b_amp, g


@lru_cache(maxsize=None)
def _grk_schedule(r: int, b: int) -> tuple[int, int]:
    """Pick (global, local) iteration counts for the block-partial driver.

    Scans the three-class recurrence for the cheapest schedule whose
    block-success probability matches or beats full search at the same
    size, subject to the query budget ``ceil(grk_query_count) + 1``
    (burn-in + locals + one cleanup).  The local sweep is evaluated in
    closed form: one local iteration rotates the in-block component by
    exactly ``2*arcsin(1/sqrt(B))`` while the other blocks stay frozen.
    """
    n = 1 << r
    block = n // b
    if block < 2:
        raise ValueError("block-partial search needs at least two items per block")
    budget = math.ceil(grk_query_count(n, b)) + 1
    t_opt = optimal_iterations(n)
    p_full = math.sin((2 * t_opt + 1) * grover_angle(n)) ** 2

    omega_local = grover_angle(block)
    root = math.sqrt(block - 1)
    t1_cap = min(budget - 1, t_opt + 1)
    t2_cap = min(budget - 1, optimal_iterations(block) + 1)

    best: tuple[int, float, int, int] | None = None      # (queries, -p, t1, t2)
    best_any: tuple[float, int, int, int] | None = None  # (-p, queries, t1, t2)
    a = b_amp = g = 1.0 / math.sqrt(n)
    for t1 in range(t1_cap + 1):
        t2_hi = min(t2_cap, budget - 1 - t1)
        if t2_hi >= 0:
            radius = math.hypot(a, root * b_amp)
            phase = math.atan2(a, root * b_amp)
            steps = np.arange(t2_hi + 1)
            angles = phase + 2.0 * omega_local * steps
            a2 = radius * np.sin(angles)
            b2 = radius * np.cos(angles) / root
            mu = ((n - block) * g + (block - 1) * b2 - a2) / n
            p_block = (2.0 * mu + a2) ** 2 + (block - 1) * (2.0 * mu - b2) ** 2
            queries = t1 + steps + 1
            top = int(np.argmax(p_block))
            cand = (-float(p_block[top]), int(queries[top]), t1, int(steps[top]))
            if best_any is None or cand < best_any:
                best_any = cand
            feasible = np.nonzero(p_block >= p_full)[0]
            if feasible.size:
                j = int(feasible[0])
                cand = (int(queries[j]), -float(p_block[j]), t1, int(steps[j]))
                if best is None or cand < best:
                    best = cand
        a, b_amp, g = _grk_global_step(a, b_amp, g, n, block)

    if best is not None:
        return best[2], best[3]
    return best_any[2], best_any[3]


def run_grk_partial(config: SearchConfig) -> tuple[int, SearchOutcome]:
    """Block-partial search: returns the resolved block id and the outcome.

    ``success_fraction`` counts shots that landed anywhere in the target
    block (the block is what this search resolves); ``certainty`` is the
    block's total probability in the final state.  Oracle calls stay
    within ``ceil(grk_query_count(N, b)) + 1``.
    """
    if config.algorithm is not Algorithm.GRK:
        raise ValueError(f"config requests {config.algorithm}, not GRK")
    n = 1 << config.r
    if config.b > n // 2:
        raise ValueError("block-partial search needs at least two items per block")
    partition = BlockPartition(config.r, config.b)
    t_global, t_local = _grk_schedule(config.r, config.b)
    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    oracle = OracleSpec(config.r, config.target)
    state = uniform_state(config.r)
    for _ in range(t_global):
        state = grover_iteration(state, oracle)
    for _ in range(t_local):
        state = grover_iteration(state, oracle, partition.block_mask)
    state = grover_iteration(state, oracle)  # global cleanup
    histogram = sample(state, config.shots, _derive_seed(rng))
    wall = time.perf_counter() - start

    target_block = partition.block_of(config.target)
    block_votes: dict[int, int] = {}
    block_hits = 0
    for index, count in histogram.counts.items():
        blk = partition.block_of(index)
        block_votes[blk] = block_votes.get(blk, 0) + count
        if blk == target_block:
            block_hits += count
    resolved = min(block_votes, key=lambda blk: (-block_votes[blk], blk))

    size = partition.block_size
    probs = state.probabilities()
    block_probability = float(probs[target_block * size : (target_block + 1) * size].sum())
    outcome = SearchOutcome(
        measured_index=histogram.mode(),
        success_fraction=block_hits / config.shots,
        layers=oracle.query_count,
        oracle_calls=oracle.query_count,
        wall_time=wall,
        trial_seed=config.seed,
        certainty=block_probability,
    )
    return resolved, outcome


def _layered_outcome(
    config: SearchConfig,
    found: FoundBits,
    layers: int,
    ctx: SearchContext,
    wall: float,
) -> SearchOutcome:
    if not found.complete(config.r):
        raise SegmentSearchError("segment plan terminated without covering all bits")
    measured = found.value
    # The final register is a computational basis state, so every shot
    # lands on the reconstructed index.
    success = 1.0 if measured == config.target else 0.0
    calls = sum(oracle.query_count for oracle in ctx.oracles)
    return SearchOutcome(
        measured_index=measured,
        success_fraction=success,
        layers=layers,
        oracle_calls=calls,
        wall_time=wall,
        trial_seed=config.seed,
        certainty=ctx.certainty,
    )


def run_dfgs(config: SearchConfig, mode: str = "compact") -> SearchOutcome:
    """Depth-first layered search: resolve every segment MSB to LSB."""
    if config.algorithm is not Algorithm.DFGS:
        raise ValueError(f"config requests {config.algorithm}, not DFGS")
    _check_mode(mode, config.r)
    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    ctx = SearchContext(config.r, config.k, rng, mode=mode)
    found = FoundBits()
    plan = dfgs_segments(config.r, config.k)
    for segment in plan:
        segment_partial_search(ctx, segment, config.target, found)
    wall = time.perf_counter() - start
    return _layered_outcome(config, found, len(plan), ctx, wall)


def run_bdgs(config: SearchConfig, mode: str = "compact") -> SearchOutcome:
    """Bi-directional layered search: forward and backward passes meet in
    the middle.

    The passes touch disjoint bit ranges and may run concurrently; this
    driver executes them sequentially, interleaved by layer, and reports
    ``layers`` under the parallel accounting (the longer of the two
    passes).
    """
    if config.algorithm is not Algorithm.BDGS:
        raise ValueError(f"config requests {config.algorithm}, not BDGS")
    _check_mode(mode, config.r)
    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    ctx = SearchContext(config.r, config.k, rng, mode=mode)
    found = FoundBits()
    forward = forward_segments(config.r, config.k)
    backward = backward_segments(config.r, config.k)
    layers = max(len(forward), len(backward))
    for i in range(layers):
        if i < len(forward):
            segment_partial_search(ctx, forward[i], config.target, found)
        if i < len(backward):
            segment_partial_search(ctx, backward[i], config.target, found)
    wall = time.perf_counter() - start
    return _layered_outcome(config, found, layers, ctx, wall)


def run_search(config: SearchConfig) -> SearchOutcome:
    """Dispatch to the driver selected by ``config.algorithm``."""
    if config.algorithm is Algorithm.GS:
        return run_standard_grover(config)
    if config.algorithm is Algorithm.GRK:
        return run_grk_partial(config)[1]
    if config.algorithm is Algorithm.DFGS:
        return run_dfgs(config)
    return run_bdgs(config)


def verify_outcome(outcome: SearchOutcome, config: SearchConfig) -> bool:
    """True iff the run recovered the configured target index."""
    return outcome.measured_index == config.target
