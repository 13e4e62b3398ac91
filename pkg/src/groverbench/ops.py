"""Oracles with query accounting, the composed search iteration, and
closed-form iteration/query predictors.

One search iteration is: flip the sign of the amplitudes the oracle
marks (one query), then invert every amplitude about its block mean.
With an empty block mask the second step is the global diffuser and the
pair rotates the state toward the target by twice the base angle
``arcsin(1/sqrt(M))`` per application, which is what all the predictors
below count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .statevector import (
    BasisPredicate,
    StateVector,
    extract_segment,
    invert_about_mean,
    phase_flip,
    place_segment,
    segment_mask,
)


class Algorithm(str, Enum):
    """Search variants covered by the drivers and predictors."""

    GS = "GS"
    GRK = "GRK"
    DFGS = "DFGS"
    BDGS = "BDGS"


@dataclass
class OracleSpec:
    """Phase oracle for a single marked index, restricted to a bit segment.

    The flip condition is: the basis state agrees with ``target`` on the
    active segment AND matches every already-determined bit.  With the
    full-range segment and no determined bits this is the textbook
    single-target oracle.  ``query_count`` increments by exactly one per
    application, whether the oracle acts on the full register, on a
    compact working register holding just the segment subspace, or as a
    classical index probe.
    """

    r: int
    target: int
    active_segment: tuple[int, int] | None = None
    determined_mask: int = 0
    determined_value: int = 0
    query_count: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.target < (1 << self.r):
            raise ValueError(f"target {self.target} out of range for {self.r} qubits")
        if self.active_segment is None:
            self.active_segment = (0, self.r - 1)
        lo, hi = self.active_segment
        seg = segment_mask(self.r, lo, hi)
        if seg & self.determined_mask:
            raise ValueError("active segment overlaps determined bits")
        if self.determined_value & ~self.determined_mask:
            raise ValueError("determined value has bits outside its mask")

    @property
    def segment_width(self) -> int:
        lo, hi = self.active_segment
        return hi - lo + 1

    @property
    def segment_value(self) -> int:
        """Bits of the target on the active segment, right-aligned."""
        lo, hi = self.active_segment
        return extract_segment(self.r, self.target, lo, hi)

    def flip_predicate(self) -> BasisPredicate:
        """Full-register predicate for the states that get their sign flipped."""
        lo, hi = self.active_segment
        seg = segment_mask(self.r, lo, hi)
        return BasisPredicate(
            seg | self.determined_mask,
            (self.target & seg) | self.determined_value,
        )

    def apply(self, state: StateVector) -> StateVector:
        """One oracle query: sign-flip the marked amplitudes of ``state``.

        Accepts either the full ``r``-qubit register or a compact working
        register whose dimension matches the active segment width (the
        segment subspace with all conditioning folded in).
        """
        self.query_count += 1
        if state.num_qubits == self.r:
            return phase_flip(state, self.flip_predicate())
        if state.num_qubits == self.segment_width:
            width = self.segment_width
            pred = BasisPredicate((1 << width) - 1, self.segment_value)
            return phase_flip(state, pred)
        raise ValueError(
            f"state on {state.num_qubits} qubits matches neither the full register "
            f"({self.r}) nor the segment width ({self.segment_width})"
        )

    def query_index(self, index: int) -> bool:
        """Classical probe: does ``index`` satisfy the flip condition?

        Costs one query, like any other oracle use.
        """
        self.query_count += 1
        return self.flip_predicate().matches(index)


@dataclass(frozen=True)
class BlockPartition:
    """Split of a ``2**r`` index space into ``b`` equal blocks by top bits."""

    r: int
    b: int

    def __post_init__(self) -> None:
        if self.b < 2 or self.b & (self.b - 1):
            raise ValueError(f"branching factor must be a power of two >= 2, got {self.b}")
        if self.b > (1 << self.r):
            raise ValueError(f"branching factor {self.b} exceeds the index space 2^{self.r}")

    @property
    def k(self) -> int:
        """Bits resolved per layer: log2(b)."""
        return self.b.bit_length() - 1

    @property
    def block_size(self) -> int:
        return (1 << self.r) // self.b

    @property
    def block_mask(self) -> int:
        """Mask of the block-id bits (the top ``k`` positions)."""
        return segment_mask(self.r, 0, self.k - 1)

    def block_of(self, index: int) -> int:
        return index >> (self.r - self.k)


@dataclass(frozen=True)
class PredictedCost:
    """Closed-form cost prediction for one algorithm at one size."""

    algorithm: Algorithm
    iterations: float
    oracle_calls: float
    layers: int | None


# ---------------------------------------------------------------------------
# Angles and iteration counts


def grover_angle(search_dim: int) -> float:
    """Base rotation angle ``arcsin(1/sqrt(M))`` of one iteration over M states."""
    if search_dim < 2:
        raise ValueError(f"search dimension must be >= 2, got {search_dim}")
    return math.asin(1.0 / math.sqrt(search_dim))


def optimal_iterations(search_dim: int) -> int:
    """Iteration count maximizing the target amplitude over M states.

    Rounds ``pi/(4*arcsin(1/sqrt(M))) - 1/2`` half-up, never below 1.
    Equals 1 at M = 4 (exact success) and 804 at M = 2**20.
    """
    return max(1, math.floor(math.pi / (4.0 * grover_angle(search_dim))))


def grover_iteration(
    state: StateVector, oracle: OracleSpec, diffusion_mask: int = 0
) -> StateVector:
    """One amplification step: oracle sign flip, then blockwise inversion
    about the mean restricted by ``diffusion_mask``.

    The composed map equals the product of the two textbook reflections
    (including the conventional overall sign), so repeated application
    drives the state onto the marked index.  Increments the oracle's
    query counter by one.
    """
    flipped = oracle.apply(state)
    return invert_about_mean(flipped, diffusion_mask)


# ---------------------------------------------------------------------------
# Closed-form query counts


def grk_query_count(n_states: int, b: int) -> float:
    """Query bound for block-partial search: ``pi/4 * sqrt(N) * sqrt((b-1)/b)``."""
    if b < 2:
        raise ValueError(f"branching factor must be >= 2, got {b}")
    if n_states % b:
        raise ValueError(f"branching factor {b} does not divide {n_states}")
    return math.pi / 4.0 * math.sqrt(n_states) * math.sqrt((b - 1) / b)


def bdgs_level_iterations(n_states: int, b: int, level: int) -> float:
    """Iteration budget of one bi-directional layer at depth ``level``.

    Each pass searches half the index space, so the budget at depth
    ``level`` is ``pi/4 * (sqrt((N/2)/b^level) - sqrt((N/2)/b^(level+1)))``.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    if b ** (level + 1) > n_states / 2:
        raise ValueError(
            f"level {level} too deep: b^{level + 1} exceeds half the index space"
        )
    half = n_states / 2.0
    return math.pi / 4.0 * (math.sqrt(half / b**level) - math.sqrt(half / b ** (level + 1)))


def _bdgs_depth(r: int, k: int) -> float:
    return r / (2.0 * k)


def bdgs_terminal_iterations(n_states: int, b: int, r: int, k: int) -> float:
    """Residual cleanup cost when the level count ``r/(2k)`` is fractional.

    Zero whenever the layers divide evenly; otherwise the partial bottom
    level from depth ``floor(r/2k)`` down to ``r/2k``.  Together with the
    full levels this telescopes exactly to :func:`bdgs_total_queries`.
    """
    depth = _bdgs_depth(r, k)
    full = math.floor(depth)
    half = n_states / 2.0
    return math.pi / 4.0 * (math.sqrt(half / b**full) - math.sqrt(half / b**depth))


def bdgs_total_queries(n_states: int, b: int, r: int, k: int) -> float:
    """Total oracle-call bound for bi-directional layered search.

    ``pi/(4*sqrt(2)) * sqrt(N) * (1 - sqrt(1/b^(r/2k)))`` with N = 2**r
    and b = 2**k.  This bounds total oracle work; it is not the
    wall-clock layer count, which is ``ceil(r/(2k))``.
    """
    if n_states != 1 << r:
        raise ValueError(f"n_states {n_states} is not 2^{r}")
    if b != 1 << k:
        raise ValueError(f"branching factor {b} is not 2^{k}")
    depth = _bdgs_depth(r, k)
    return (
        math.pi
        / (4.0 * math.sqrt(2.0))
        * math.sqrt(n_states)
        * (1.0 - math.sqrt(1.0 / b**depth))
    )


def predicted_layers(algorithm: Algorithm | str, r: int, k: int) -> int:
    """Wall-clock layer prediction per algorithm.

    GS runs ``optimal_iterations(2**r)`` sequential iterations; DFGS
    resolves ``ceil(r/k)`` segments one after another; BDGS runs its
    forward and backward passes in parallel, so only ``ceil(r/(2k))``
    rounds count.  GRK has no closed-form layer count here (its schedule
    is size-dependent), so it is rejected.
    """
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.GS:
        return optimal_iterations(1 << r)
    if algorithm is Algorithm.DFGS:
        return math.ceil(r / k)
    if algorithm is Algorithm.BDGS:
        return math.ceil(r / (2 * k))
    raise ValueError("no closed-form layer count for GRK; use predict_cost")


def predict_cost(algorithm: Algorithm | str, r: int, b: int) -> PredictedCost:
    """Bundle the closed-form predictions for one (algorithm, size) cell."""
    algorithm = Algorithm(algorithm)
    n = 1 << r
    if b < 2 or b & (b - 1):
        raise ValueError(f"branching factor must be a power of two >= 2, got {b}")
    k = b.bit_length() - 1
    if algorithm is Algorithm.GS:
        exact = math.pi / (4.0 * grover_angle(n)) - 0.5
        t = optimal_iterations(n)
        return PredictedCost(algorithm, exact, float(t), t)
    if algorithm is Algorithm.GRK:
        bound = grk_query_count(n, b)
        return PredictedCost(algorithm, bound, bound + 1.0, None)
    if algorithm is Algorithm.DFGS:
        planned = 0
        for lo in range(0, r, k):
            width = min(lo + k - 1, r - 1) - lo + 1
            planned += optimal_iterations(1 << width) if width else 0
        return PredictedCost(algorithm, float(planned), float(planned), math.ceil(r / k))
    bound = bdgs_total_queries(n, b, r, k)
    return PredictedCost(algorithm, bound, bound, math.ceil(r / (2 * k)))
