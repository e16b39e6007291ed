"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import shapecode as sc


def test_version():
    assert sc.__version__


def test_slc_round_trip():
    data = b"The quick brown fox jumps over the lazy dog, twice over." * 20
    for m in (1, 2, 4, 8):
        code = sc.slc_encode(data, m)
        assert len(code) == len(data)  # rate 1
        assert sc.slc_decode(code, m) == data


def test_slc_reduces_zero_fraction():
    data = ("the count of monte cristo " * 2000).encode()
    nbits = len(data) * 8
    uncoded = sc.zero_fractions(data, [nbits])[0]
    shaped = sc.zero_fractions(sc.slc_encode(data, 4), [nbits])[0]
    assert shaped < uncoded


def test_mlc_round_trip_and_cost():
    costs = [0.0, 0.58, 0.87, 1.29]
    lower = b"lower page payload for the mlc shaping codec" * 40
    upper = b"upper page payload, different content entirely" * 40
    upper = upper[: len(lower)]
    lc, uc = sc.mlc_encode(lower, upper, 4, costs)
    ld, ud = sc.mlc_decode(lc, uc, 4, costs)
    assert ld == lower and ud == upper
    assert sc.average_cell_cost(lc, uc, costs) < sc.average_cell_cost(lower, upper, costs)


def test_enumerative_indexer_matches_worked_example():
    idx = sc.EnumerativeIndexer(0b1110, 4, [0, 1, 1, 2])
    assert idx.encode(1) == 0b1110
    assert idx.rank(0b1110) == 1
    assert list(idx.class_sizes) == [1, 4, 6, 4, 1]
    assert idx.count_with_prefix(2.0, [1, 1]) == 2


def test_bsc_is_seeded():
    data = bytes(range(256)) * 16
    a = sc.bsc_transmit(data, 0.1, 7)
    assert a == sc.bsc_transmit(data, 0.1, 7)
    assert a != data


def test_theorem_values():
    per_word, per_bit = sc.asymptotic_cost([0.4, 0.3, 0.2, 0.1], [0, 1, 1, 2], 2)
    assert math.isclose(per_word, 0.7, abs_tol=1e-12)
    assert math.isclose(per_bit, 0.35, abs_tol=1e-12)

    assert sc.pair_recurrence_prob(0.6, 0.4, 2) == pytest.approx(4 / 9)
    raw, clamped = sc.pair_recurrence_upper(0.6, 0.4, 0.05, 1, 1)
    assert clamped == 1.0 and raw == pytest.approx(0.4 / 0.6 + 0.41 / 0.59)

    gap = sc.optimality_gap([0.4, 0.3, 0.2, 0.1], [0, 1, 1, 2])
    assert gap["gap"] > 0.01


def test_grid_solver_brackets_monte_carlo():
    grid = sc.grid_lower_bound([0.6, 0.4], 0.05, L=40, ne=3, nd=8)
    assert grid["converged"]
    mc = sc.mc_pair_walk_recurrence([0.6, 0.4], 0.05, 3, 8, trials=20000, seed=5)
    upper_raw, upper = sc.pair_recurrence_upper(0.6, 0.4, 0.05, 3, 8)
    sigma = (mc * (1 - mc) / 20000) ** 0.5
    assert grid["value"] <= mc + 3 * sigma
    assert mc <= upper + 3 * sigma


def test_instability_protocol_runs():
    batch = sc.estimate_instability(
        [0.4, 0.3, 0.2, 0.1], 2, 0.05, [5, 50], trials=40, seed=9, sequence_words=500
    )
    assert batch["time_unit"] == "words"
    assert batch["fraction"][0] >= 0.9
    bound = sc.instability_bound([0.4, 0.3, 0.2, 0.1], 2, 0.05, 50)
    assert bound["bound"] >= batch["fraction"][1] - 3 * batch["stderr"][1]


def test_cost_model_from_cer():
    def rising(cross):
        cycles = [250.0 * k for k in range(1, 40)]
        rates = [0.004 * t / cross for t in cycles]
        return (cycles, rates)

    flat = ([100.0, 4000.0, 9000.0], [1e-4, 1e-4, 1e-4])
    costs = sc.cost_model_from_cer([flat, rising(6900), rising(4600), rising(3100)], 4000, 0.004)
    assert [round(c, 2) for c in costs] == [0.0, 0.58, 0.87, 1.29]
