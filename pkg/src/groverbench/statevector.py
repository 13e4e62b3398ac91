"""Dense statevector kernels for amplitude amplification.

A register of ``r`` qubits is a vector of ``2**r`` complex amplitudes
indexed by the computational-basis integer ``y``.  Qubit positions are
counted from the most significant bit of ``y``: position 0 is the MSB,
position ``r - 1`` the LSB.  "Forward" bit groups therefore sit at the
top of the index and "backward" groups at the bottom.  Predicates and
block masks are plain integer bit masks over ``y``; :func:`segment_mask`
converts an inclusive position range into such a mask.

Kernels never renormalize a state.  The reflections implemented here
preserve the norm by construction, and :func:`sample` rejects states
whose norm has drifted, so a normalization failure always points at a
bug in the caller instead of being silently masked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

MAX_QUBITS = 24

# L2-norm drift beyond this is a corrupted state, not floating-point noise.
NORM_TOL = 1e-8


def _check_qubits(r: int) -> None:
    if not 1 <= r <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {r}")


@dataclass
class StateVector:
    """Amplitudes of an ``r``-qubit register over the computational basis."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        _check_qubits(self.num_qubits)
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        expected = 1 << self.num_qubits
        if self.amplitudes.shape != (expected,):
            raise ValueError(
                f"expected {expected} amplitudes for {self.num_qubits} qubits, "
                f"got shape {self.amplitudes.shape}"
            )

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> StateVector:
        return StateVector(self.num_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class BasisPredicate:
    """Bit-mask condition selecting basis states with ``y & mask == value``.

    Matches exactly ``2**(r - popcount(mask))`` of the ``2**r`` basis
    states; an empty mask matches everything.
    """

    fixed_mask: int
    fixed_value: int

    def __post_init__(self) -> None:
        if self.fixed_mask < 0 or self.fixed_value < 0:
            raise ValueError("mask and value must be nonnegative")
        if self.fixed_value & ~self.fixed_mask:
            raise ValueError(
                f"value {self.fixed_value:#x} has bits outside mask {self.fixed_mask:#x}"
            )

    def matches(self, index: int) -> bool:
        return (index & self.fixed_mask) == self.fixed_value


@dataclass
class ShotHistogram:
    """Counts of sampled basis-state indices; values sum to ``total_shots``."""

    counts: dict[int, int]
    total_shots: int

    def __post_init__(self) -> None:
        if self.total_shots < 1:
            raise ValueError("total_shots must be positive")
        if sum(self.counts.values()) != self.total_shots:
            raise ValueError("histogram counts do not sum to total_shots")

    def mode(self) -> int:
        """Most frequent index; ties broken toward the smallest index."""
        return min(self.counts, key=lambda i: (-self.counts[i], i))

    def fraction(self, index: int) -> float:
        return self.counts.get(index, 0) / self.total_shots


# ---------------------------------------------------------------------------
# Bit-position helpers (position 0 = MSB)


def segment_mask(r: int, lo: int, hi: int) -> int:
    """Integer mask covering qubit positions ``lo..hi`` inclusive."""
    if not 0 <= lo <= hi < r:
        raise ValueError(f"segment [{lo}, {hi}] out of range for {r} qubits")
    width = hi - lo + 1
    return ((1 << width) - 1) << (r - 1 - hi)


def extract_segment(r: int, index: int, lo: int, hi: int) -> int:
    """Value of ``index`` on positions ``lo..hi``, right-aligned."""
    width = hi - lo + 1
    return (index >> (r - 1 - hi)) & ((1 << width) - 1)


def place_segment(r: int, value: int, lo: int, hi: int) -> int:
    """Inverse of :func:`extract_segment`: shift ``value`` into place."""
    width = hi - lo + 1
    if value >> width:
        raise ValueError(f"value {value} does not fit in {width} bits")
    return value << (r - 1 - hi)


def _axis_selector(r: int, mask: int, value: int) -> tuple:
    """Slicing tuple picking the sub-hypercube where masked bits equal value."""
    sel: list = []
    for ax in range(r):
        bit = r - 1 - ax
        if (mask >> bit) & 1:
            sel.append((value >> bit) & 1)
        else:
            sel.append(slice(None))
    return tuple(sel)


# ---------------------------------------------------------------------------
# Kernels


def basis_state(r: int, index: int) -> StateVector:
    """Computational basis state |index> on ``r`` qubits."""
    _check_qubits(r)
    if not 0 <= index < (1 << r):
        raise ValueError(f"index {index} out of range for {r} qubits")
    amps = np.zeros(1 << r, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(r, amps)


def uniform_state(r: int) -> StateVector:
    """Equal superposition over all ``2**r`` basis states."""
    _check_qubits(r)
    n = 1 << r
    return StateVector(r, np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128))


def phase_flip(state: StateVector, pred: BasisPredicate) -> StateVector:
    """Negate the amplitude of every basis state matching ``pred``.

    Self-inverse and norm-preserving; an empty mask applies a global
    phase of -1.
    """
    r = state.num_qubits
    if pred.fixed_mask >> r:
        raise ValueError(f"predicate mask {pred.fixed_mask:#x} wider than {r} qubits")
    out = state.amplitudes.copy()
    view = out.reshape((2,) * r)
    sel = _axis_selector(r, pred.fixed_mask, pred.fixed_value)
    view[sel] = -view[sel]
    return StateVector(r, out)


def invert_about_mean(state: StateVector, block_mask: int = 0) -> StateVector:
    """Replace every amplitude ``a`` with ``2*mean - a`` within its block.

    Blocks are the groups of basis states sharing the same value on the
    masked bits; the unmasked bits index positions inside a block.  An
    empty mask gives the global diffuser (one block).  A full mask makes
    every block a single amplitude, so the operation degenerates to the
    identity.  Applying the same mask twice restores the input.
    """
    r = state.num_qubits
    if block_mask >> r:
        raise ValueError(f"block mask {block_mask:#x} wider than {r} qubits")
    arr = state.amplitudes.reshape((2,) * r)
    free_axes = tuple(ax for ax in range(r) if not (block_mask >> (r - 1 - ax)) & 1)
    if not free_axes:
        return state.copy()
    mean = arr.mean(axis=free_axes, keepdims=True)
    out = (2.0 * mean - arr).reshape(-1)
    result = StateVector(r, out)
    assert abs(result.norm() - 1.0) < NORM_TOL, "inversion about mean lost the norm"
    return result


def sample(state: StateVector, shots: int, seed: int) -> ShotHistogram:
    """Draw ``shots`` independent basis-state indices with probability |a|^2.

    Deterministic for a fixed ``seed``.  Rejects a state whose L2 norm
    deviates from 1 by more than ``NORM_TOL``: by the no-renormalize
    policy that signals an upstream kernel bug.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    total = float(probs.sum())
    if abs(math.sqrt(total) - 1.0) > NORM_TOL:
        raise ValueError(
            f"state norm {math.sqrt(total):.12f} deviates from 1 beyond {NORM_TOL}; "
            "refusing to sample an unnormalized state"
        )
    rng = np.random.default_rng(seed)
    draws = rng.choice(probs.size, size=shots, p=probs / total)
    values, counts = np.unique(draws, return_counts=True)
    return ShotHistogram({int(v): int(c) for v, c in zip(values, counts)}, shots)


def operator_matrix(r: int, operation: Callable[[StateVector], StateVector]) -> np.ndarray:
    """Explicit ``2**r x 2**r`` matrix of a state-to-state operation.

    Built column by column by applying ``operation`` to each basis
    vector.  Brute force for equivalence checks only, hence the size
    guard.
    """
    _check_qubits(r)
    if r > 6:
        raise ValueError(f"dense operator construction is capped at 6 qubits, got {r}")
    dim = 1 << r
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for j in range(dim):
        matrix[:, j] = operation(basis_state(r, j)).amplitudes
    return matrix


# ---------------------------------------------------------------------------
# Fixture serialization: states as JSON-friendly [re, im] pairs


def state_to_pairs(state: StateVector) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]


def state_from_pairs(pairs: list[list[float]]) -> StateVector:
    n = len(pairs)
    r = n.bit_length() - 1
    if n <= 0 or (1 << r) != n:
        raise ValueError(f"amplitude count {n} is not a power of two")
    amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    return StateVector(r, amps)
