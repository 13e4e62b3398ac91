"""Driver-level tests: segment scheduling, exactness, query accounting,
cross-validation of the compact and full register modes."""

import math

import numpy as np
import pytest

import groverbench as gb
from groverbench.search import (
    _grk_local_step,
    _grk_schedule,
    grk_reference_amplitudes,
)


def outcome_key(outcome: gb.SearchOutcome) -> tuple:
    """All fields that participate in the determinism contract (no wall time)."""
    return (
        outcome.measured_index,
        outcome.success_fraction,
        outcome.layers,
        outcome.oracle_calls,
        outcome.trial_seed,
        outcome.certainty,
    )


# ---------------------------------------------------------------------------
# Segment plans


def test_dfgs_segments_cover_all_bits():
    assert gb.dfgs_segments(8, 2) == [(0, 1), (2, 3), (4, 5), (6, 7)]
    assert gb.dfgs_segments(7, 2) == [(0, 1), (2, 3), (4, 5), (6, 6)]
    assert gb.dfgs_segments(20, 2)[-1] == (18, 19)
    assert len(gb.dfgs_segments(20, 2)) == 10


def test_forward_backward_segments_meet_in_the_middle():
    assert gb.forward_segments(8, 2) == [(0, 1), (2, 3)]
    assert gb.backward_segments(8, 2) == [(6, 7), (4, 5)]
    # Odd half: the forward pass narrows at the boundary.
    assert gb.forward_segments(6, 2) == [(0, 1), (2, 2)]
    assert gb.backward_segments(6, 2) == [(4, 5), (3, 3)]
    assert gb.forward_segments(5, 2) == [(0, 1)]
    assert gb.backward_segments(5, 2) == [(3, 4), (2, 2)]


def test_segment_plans_are_disjoint_and_complete():
    for r in range(2, 21):
        for k in (1, 2, 3):
            mask = 0
            for lo, hi in gb.forward_segments(r, k) + gb.backward_segments(r, k):
                bits = gb.segment_mask(r, lo, hi)
                assert mask & bits == 0
                mask |= bits
            assert mask == (1 << r) - 1


# ---------------------------------------------------------------------------
# Standard search driver


def test_standard_grover_r4():
    config = gb.SearchConfig(r=4, target=11, algorithm="GS", shots=1024, seed=3)
    outcome = gb.run_standard_grover(config)
    assert outcome.oracle_calls == 3
    assert outcome.layers == 3
    # Deterministic draw from P = 0.9613...; 5 sigma of 1024 shots is ~3%.
    assert 0.93 <= outcome.success_fraction <= 0.995
    assert outcome.certainty == pytest.approx(math.sin(7 * math.asin(0.25)) ** 2, abs=1e-9)


def test_standard_grover_r8_saturates():
    config = gb.SearchConfig(r=8, target=200, algorithm="GS", shots=1024, seed=1)
    outcome = gb.run_standard_grover(config)
    assert outcome.oracle_calls == 12
    assert outcome.success_fraction >= 1023 / 1024
    assert outcome.measured_index == 200


def test_standard_grover_deterministic():
    config = gb.SearchConfig(r=6, target=40, algorithm="GS", shots=512, seed=77)
    assert outcome_key(gb.run_standard_grover(config)) == outcome_key(
        gb.run_standard_grover(config)
    )


def test_standard_grover_rejects_other_algorithms():
    config = gb.SearchConfig(r=4, target=1, algorithm="BDGS")
    with pytest.raises(ValueError):
        gb.run_standard_grover(config)


# ---------------------------------------------------------------------------
# Block-partial (GRK) driver


def test_grk_resolves_target_block_r4():
    config = gb.SearchConfig(r=4, target=13, algorithm="GRK", b=4, shots=1024, seed=5)
    block, outcome = gb.run_grk_partial(config)
    assert block == 3  # top two bits of 13
    assert outcome.oracle_calls <= math.ceil(gb.grk_query_count(16, 4)) + 1
    assert outcome.success_fraction == 1.0
    assert outcome.certainty == pytest.approx(1.0, abs=1e-12)


def test_grk_r8_query_bound_and_concentration():
    config = gb.SearchConfig(r=8, target=77, algorithm="GRK", b=4, shots=1024, seed=11)
    block, outcome = gb.run_grk_partial(config)
    assert block == 77 >> 6
    assert outcome.oracle_calls <= 12
    assert outcome.success_fraction >= 0.95
    # Block-subspace success at least matches full search at the same size.
    p_full = math.sin(25 * math.asin(1 / 16)) ** 2
    assert outcome.certainty >= p_full


def test_grk_statevector_matches_reference_recurrence():
    r, b, target = 8, 4, 141
    n = 1 << r
    t_global, t_local = _grk_schedule(r, b)
    partition = gb.BlockPartition(r, b)
    oracle = gb.OracleSpec(r, target)
    state = gb.uniform_state(r)
    for _ in range(t_global):
        state = gb.grover_iteration(state, oracle)
    for _ in range(t_local):
        state = gb.grover_iteration(state, oracle, partition.block_mask)
    state = gb.grover_iteration(state, oracle)
    a, b_amp, g = grk_reference_amplitudes(n, b, t_global, t_local)

    block = partition.block_of(target)
    size = partition.block_size
    amps = state.amplitudes.real
    assert amps[target] == pytest.approx(a, abs=1e-12)
    for i in range(block * size, (block + 1) * size):
        if i != target:
            assert amps[i] == pytest.approx(b_amp, abs=1e-12)
    outside = [i for i in range(n) if partition.block_of(i) != block]
    np.testing.assert_allclose(amps[outside], g, atol=1e-12)


def test_grk_local_rotation_closed_form():
    # One local step rotates the in-block pair by exactly 2*arcsin(1/sqrt(B)).
    block = 16
    omega = math.asin(1 / math.sqrt(block))
    a, b_amp = 0.3, 0.05
    root = math.sqrt(block - 1)
    radius = math.hypot(a, root * b_amp)
    phase = math.atan2(a, root * b_amp)
    for step in range(1, 9):
        a, b_amp = _grk_local_step(a, b_amp, block)
        assert a == pytest.approx(radius * math.sin(phase + 2 * step * omega), abs=1e-12)
        assert b_amp == pytest.approx(
            radius * math.cos(phase + 2 * step * omega) / root, abs=1e-12
        )


@pytest.mark.parametrize("r", [4, 6, 8, 10])
def test_grk_schedule_feasible_within_budget(r):
    n = 1 << r
    t_global, t_local = _grk_schedule(r, 4)
    budget = math.ceil(gb.grk_query_count(n, 4)) + 1
    assert t_global + t_local + 1 <= budget
    a, b_amp, g = grk_reference_amplitudes(n, 4, t_global, t_local)
    p_block = a * a + (n // 4 - 1) * b_amp * b_amp
    t_opt = gb.optimal_iterations(n)
    p_full = math.sin((2 * t_opt + 1) * gb.grover_angle(n)) ** 2
    assert p_block >= p_full


def test_grk_rejects_single_item_blocks():
    config = gb.SearchConfig(r=2, target=1, algorithm="GRK", b=4)
    with pytest.raises(ValueError):
        gb.run_grk_partial(config)


def test_grk_deterministic():
    config = gb.SearchConfig(r=6, target=9, algorithm="GRK", b=4, shots=256, seed=13)
    assert outcome_key(gb.run_grk_partial(config)[1]) == outcome_key(
        gb.run_grk_partial(config)[1]
    )


# ---------------------------------------------------------------------------
# Depth-first layered driver


def test_dfgs_r4_history():
    config = gb.SearchConfig(r=4, target=9, algorithm="DFGS", b=4, shots=64, seed=0)
    rng = np.random.default_rng(config.seed)
    ctx = gb.SearchContext(config.r, config.k, rng)
    found = gb.FoundBits()
    for segment in gb.dfgs_segments(config.r, config.k):
        gb.segment_partial_search(ctx, segment, config.target, found)
    # 9 = 1001: MSB pair resolves to 10, then the LSB pair to 01.
    assert found.history == [((0, 1), 0b10), ((2, 3), 0b01)]
    assert found.value == 9

    outcome = gb.run_dfgs(config)
    assert outcome.measured_index == 9
    assert outcome.layers == 2


def test_dfgs_r8_exact():
    config = gb.SearchConfig(r=8, target=173, algorithm="DFGS", shots=1024, seed=2)
    outcome = gb.run_dfgs(config)
    assert outcome.success_fraction == 1.0
    assert outcome.measured_index == 173
    assert outcome.certainty == pytest.approx(1.0, abs=1e-12)


def test_dfgs_r20_layers():
    config = gb.SearchConfig(r=20, target=987654, algorithm="DFGS", shots=16, seed=4)
    outcome = gb.run_dfgs(config)
    assert outcome.layers == 10
    assert outcome.oracle_calls == 10
    assert outcome.measured_index == 987654


# ---------------------------------------------------------------------------
# Bi-directional layered driver


def test_bdgs_r8_resolves_from_both_ends():
    target = 0b01101111
    config = gb.SearchConfig(r=8, target=target, algorithm="BDGS", shots=64, seed=6)
    rng = np.random.default_rng(config.seed)
    ctx = gb.SearchContext(config.r, config.k, rng)
    found = gb.FoundBits()
    for segment in gb.forward_segments(8, 2):
        gb.segment_partial_search(ctx, segment, target, found)
    assert [value for _, value in found.history] == [0b01, 0b10]
    for segment in gb.backward_segments(8, 2):
        gb.segment_partial_search(ctx, segment, target, found)
    assert [value for _, value in found.history][2:] == [0b11, 0b11]
    assert found.value == target
    assert found.complete(8)


def test_bdgs_r4_parallel_accounting():
    config = gb.SearchConfig(r=4, target=5, algorithm="BDGS", shots=64, seed=8)
    outcome = gb.run_bdgs(config)
    assert outcome.layers == 1
    assert outcome.oracle_calls == 2
    assert outcome.measured_index == 5


def test_bdgs_r20():
    config = gb.SearchConfig(r=20, target=314159, algorithm="BDGS", shots=1024, seed=9)
    outcome = gb.run_bdgs(config)
    assert outcome.layers == 5
    assert outcome.oracle_calls == 10
    assert outcome.success_fraction == 1.0
    assert outcome.certainty == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("r", [2, 3, 5, 7, 9])
def test_bdgs_odd_and_tiny_registers(r):
    # Residual width-1 segments resolve deterministically via the
    # verify-and-complement path, at the cost of extra oracle probes.
    rng = np.random.default_rng(500 + r)
    for _ in range(8):
        target = int(rng.integers(0, 1 << r))
        config = gb.SearchConfig(r=r, target=target, algorithm="BDGS", shots=16, seed=int(rng.integers(2**31)))
        outcome = gb.run_bdgs(config)
        assert outcome.measured_index == target
        assert outcome.oracle_calls >= outcome.layers


def test_bdgs_r6_exhaustive():
    # floor(6/2) = 3 is odd, so both passes end in a width-1 segment.
    for target in range(64):
        config = gb.SearchConfig(r=6, target=target, algorithm="BDGS", shots=16, seed=target)
        outcome = gb.run_bdgs(config)
        assert outcome.measured_index == target
        assert outcome.success_fraction == 1.0


def test_layer_accounting_matches_predictions():
    for r in range(4, 21, 2):
        target = (1 << r) // 3
        bdgs = gb.run_bdgs(gb.SearchConfig(r=r, target=target, algorithm="BDGS", shots=8, seed=1))
        dfgs = gb.run_dfgs(gb.SearchConfig(r=r, target=target, algorithm="DFGS", shots=8, seed=1))
        assert bdgs.layers == gb.predicted_layers("BDGS", r, 2) == math.ceil(r / 4)
        assert dfgs.layers == gb.predicted_layers("DFGS", r, 2) == math.ceil(r / 2)


def test_layered_drivers_deterministic():
    for algorithm, runner in (("BDGS", gb.run_bdgs), ("DFGS", gb.run_dfgs)):
        config = gb.SearchConfig(r=7, target=99, algorithm=algorithm, shots=32, seed=21)
        assert outcome_key(runner(config)) == outcome_key(runner(config))


# ---------------------------------------------------------------------------
# segment_partial_search contract


def test_segment_search_empty_segment_is_noop():
    ctx = gb.SearchContext(4, 2, np.random.default_rng(0))
    found = gb.FoundBits()
    out = gb.segment_partial_search(ctx, None, 5, found)
    assert out is found
    assert found.mask == 0
    assert ctx.oracles == []


def test_segment_search_rejects_overlap():
    ctx = gb.SearchContext(4, 2, np.random.default_rng(0))
    found = gb.FoundBits()
    gb.segment_partial_search(ctx, (0, 1), 5, found)
    with pytest.raises(ValueError, match="scheduling"):
        gb.segment_partial_search(ctx, (1, 2), 5, found)


def test_segment_search_rejects_wide_segment():
    ctx = gb.SearchContext(6, 2, np.random.default_rng(0))
    with pytest.raises(ValueError, match="wider"):
        gb.segment_partial_search(ctx, (0, 2), 5, gb.FoundBits())


def test_segment_search_width1_resolves_with_probes():
    for target_bit in (0, 1):
        ctx = gb.SearchContext(3, 2, np.random.default_rng(3))
        found = gb.FoundBits()
        gb.segment_partial_search(ctx, (0, 0), target_bit << 2, found)
        assert found.history == [((0, 0), target_bit)]
        # One amplification query plus at least one verification probe.
        assert ctx.oracles[0].query_count >= 2
        assert ctx.certainty == 1.0


def test_segment_search_attempt_budget_exhaustion():
    ctx = gb.SearchContext(3, 2, np.random.default_rng(3), max_attempts=0)
    with pytest.raises(gb.SegmentSearchError):
        gb.segment_partial_search(ctx, (0, 0), 4, gb.FoundBits())


def test_found_bits_monotonic_and_complete():
    found = gb.FoundBits()
    found.record(4, (0, 1), 0b10)
    found.record(4, (2, 3), 0b01)
    assert found.value == 0b1001
    assert found.complete(4)
    with pytest.raises(ValueError):
        found.record(4, (3, 3), 1)


# ---------------------------------------------------------------------------
# Full-register cross-validation


@pytest.mark.parametrize("r", [4, 5, 6, 8, 10])
def test_compact_and_full_modes_agree(r):
    rng = np.random.default_rng(900 + r)
    for _ in range(6):
        target = int(rng.integers(0, 1 << r))
        seed = int(rng.integers(2**31))
        for algorithm, runner in (("BDGS", gb.run_bdgs), ("DFGS", gb.run_dfgs)):
            config = gb.SearchConfig(r=r, target=target, algorithm=algorithm, shots=16, seed=seed)
            compact = runner(config, mode="compact")
            full = runner(config, mode="full")
            assert compact.measured_index == full.measured_index == target
            assert compact.oracle_calls == full.oracle_calls
            assert compact.layers == full.layers
            assert compact.certainty == pytest.approx(full.certainty, abs=1e-12)


def test_full_mode_respects_size_cap():
    config = gb.SearchConfig(r=13, target=1, algorithm="BDGS", shots=8, seed=0)
    with pytest.raises(ValueError, match="r <= 12"):
        gb.run_bdgs(config, mode="full")


def test_unknown_mode_rejected():
    config = gb.SearchConfig(r=4, target=1, algorithm="DFGS", shots=8, seed=0)
    with pytest.raises(ValueError, match="mode"):
        gb.run_dfgs(config, mode="dense")


def test_segment_order_independence():
    # Disjoint bit ranges: forward-first, backward-first, and interleaved
    # execution must reconstruct the same index.
    r, k, target = 6, 2, 0b110110
    fwd = gb.forward_segments(r, k)
    bwd = gb.backward_segments(r, k)
    orders = [fwd + bwd, bwd + fwd, [fwd[0], bwd[0], fwd[1], bwd[1]]]
    values = []
    for order in orders:
        ctx = gb.SearchContext(r, k, np.random.default_rng(4))
        found = gb.FoundBits()
        for segment in order:
            gb.segment_partial_search(ctx, segment, target, found)
        assert found.complete(r)
        values.append(found.value)
    assert values == [target, target, target]


# ---------------------------------------------------------------------------
# Dispatch, verification, config validation


def test_run_search_dispatch():
    for algorithm in ("GS", "GRK", "DFGS", "BDGS"):
        config = gb.SearchConfig(r=4, target=6, algorithm=algorithm, shots=64, seed=2)
        outcome = gb.run_search(config)
        assert outcome.oracle_calls >= outcome.layers >= 1


def test_verify_outcome():
    config = gb.SearchConfig(r=4, target=7, algorithm="BDGS", shots=16, seed=0)
    outcome = gb.run_bdgs(config)
    assert gb.verify_outcome(outcome, config)
    other = gb.SearchConfig(r=4, target=8, algorithm="BDGS", shots=16, seed=0)
    assert not gb.verify_outcome(outcome, other)


def test_search_config_validation():
    with pytest.raises(ValueError):
        gb.SearchConfig(r=4, target=16)
    with pytest.raises(ValueError):
        gb.SearchConfig(r=4, target=-1)
    with pytest.raises(ValueError):
        gb.SearchConfig(r=4, target=3, b=3)
    with pytest.raises(ValueError):
        gb.SearchConfig(r=4, target=3, b=1)
    with pytest.raises(ValueError):
        gb.SearchConfig(r=4, target=3, shots=0)
    with pytest.raises(ValueError):
        gb.SearchConfig(r=30, target=3)
    assert gb.SearchConfig(r=4, target=3, b=8).k == 3
