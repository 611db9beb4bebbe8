import math

import numpy as np
import pytest

from oxgrid.errors import InputError
from oxgrid.harness import (
    ExperimentConfig,
    aggregate_connectivity_rows,
    aggregate_giant_rows,
    estimate_distinct_probability,
    rows_to_csv,
    run_tree_comparison,
    sweep_connectivity,
    sweep_count_ratio,
    sweep_giant,
)
from oxgrid.theory import expected_trees_exact, extinction_probabilities


def test_experiment_config_validation():
    with pytest.raises(InputError):
        ExperimentConfig(kind="bogus", grid=[1])
    with pytest.raises(InputError):
        ExperimentConfig(kind="giant", grid=[])
    with pytest.raises(InputError):
        ExperimentConfig.from_dict({"kind": "giant", "grid": [1], "oops": 2})


# ----------------------------------------------------------------------
# tree-count comparison report
# ----------------------------------------------------------------------


def test_tree_comparison_analytics_and_dog_flag():
    report = run_tree_comparison(reps=0)
    rows = {(r["dataset"], r["shape"]): r for r in report["rows"]}
    for name in ("human_elephant", "human_monkey", "human_cat", "human_lemur"):
        for shape in ("1,1", "2,1", "1,2"):
            row = rows[(name, shape)]
            assert row["expected_recomputed"] == pytest.approx(
                row["expected_published"], rel=0.03
            )
            assert not row["published_mismatch"]
    dog = rows[("human_dog", "1,1")]
    assert dog["published_mismatch"]
    assert dog["expected_recomputed"] == pytest.approx(1.07, abs=0.01)
    assert dog["expected_published"] == 0.86
    assert any("human_dog" in f and "(1,1)" in f for f in report["flags"])


def test_tree_comparison_tail_probabilities():
    report = run_tree_comparison(reps=0)
    rows = {(r["dataset"], r["shape"]): r for r in report["rows"]}
    # observed 0 trees on the lemur grid: tail is the zero-class probability
    lemur = rows[("human_lemur", "1,1")]
    assert lemur["observed"] == 0
    assert lemur["poisson_tail"] == pytest.approx(math.exp(-lemur["expected_recomputed"]))
    # observed 12 on the monkey grid: upper tail at the recomputed mean
    monkey = rows[("human_monkey", "1,1")]
    assert monkey["observed"] == 12
    assert 0.0 < monkey["poisson_tail"] < 1.0


def test_tree_comparison_simulation_matches_exact_expectation():
    # simulated means must track the exact finite-size expectation (the
    # asymptotic value differs by a visible 1-2 percent at these sizes)
    report = run_tree_comparison(reps=3000, seed=5)
    rows = {(r["dataset"], r["shape"]): r for r in report["rows"]}
    for shape in ("1,1", "2,1", "1,2"):
        row = rows[("human_monkey", shape)]
        i, j = (int(x) for x in shape.split(","))
        exact = expected_trees_exact(i, j, row["m"], row["n"], row["t"])
        assert abs(row["sim_mean"] - exact) <= 4 * row["sim_se"]


# ----------------------------------------------------------------------
# sweeps
# ----------------------------------------------------------------------


def test_sweep_giant_tracks_extinction_fractions():
    rows = sweep_giant([(2000, 2000, 3862)], reps=8, seed=7)
    agg = aggregate_giant_rows(rows)[0]
    ext = extinction_probabilities(1.5, 1.5)
    assert agg["giant_left_fraction"] == pytest.approx(1 - ext.xi_left, abs=1e-3)
    assert abs(agg["mean_largest_left_fraction"] - agg["giant_left_fraction"]) <= 0.03
    assert agg["max_second_largest_size"] <= 80
    assert agg["reps"] == 8


def test_sweep_connectivity_orders_by_c():
    rows = sweep_connectivity(400, 400, [0.5, 2.0], reps=30, seed=1)
    agg = {r["c"]: r for r in aggregate_connectivity_rows(rows)}
    assert agg[0.5]["p_connected"] <= 0.2
    assert agg[2.0]["p_connected"] >= 0.8
    assert agg[0.5]["expected_trees_11"] > 1.0 > agg[2.0]["expected_trees_11"]


def test_sweep_connectivity_rejects_tiny_c():
    with pytest.raises(InputError):
        sweep_connectivity(400, 400, [0.05], reps=1)


def test_sweep_count_ratio_rows():
    rows = sweep_count_ratio([(50, 50, 100), (80, 80, 160)], mc_reps=0, seed=0)
    assert [r["m"] for r in rows] == [50, 80]
    for row in rows:
        assert 0.9 <= row["exact_over_asymptotic"] <= 1.1
        assert row["bracket_lo"] < 1.0 == row["bracket_hi"]


def test_estimate_distinct_probability_unconditioned_matches_product():
    m = n = 100
    t = 50
    exact = math.prod(1 - i / (m * n) for i in range(t))
    est = estimate_distinct_probability(m, n, t, reps=4000, seed=3)
    assert abs(est["p_distinct"] - exact) <= 3 * est["se"]


def test_estimate_distinct_probability_conditioned_in_bracket():
    est = estimate_distinct_probability(100, 100, 150, reps=2000, seed=4, conditioned=True)
    lo = math.exp(-(150 / 100) * (150 / 100))
    assert est["p_distinct"] + 2 * est["se"] >= lo
    assert est["p_distinct"] <= 1.0


# ----------------------------------------------------------------------
# determinism and output
# ----------------------------------------------------------------------


def test_sweeps_reproduce_bit_exactly_across_thread_counts():
    a = sweep_giant([(300, 300, 580)], reps=6, seed=11, threads=1)
    b = sweep_giant([(300, 300, 580)], reps=6, seed=11, threads=2)
    assert a == b
    c = sweep_connectivity(200, 200, [1.5], reps=6, seed=11, threads=2)
    d = sweep_connectivity(200, 200, [1.5], reps=6, seed=11, threads=1)
    assert c == d


def test_rows_carry_seeds_and_aggregate_is_recomputable():
    rows = sweep_giant([(300, 300, 580)], reps=5, seed=13)
    assert all(r["master_seed"] == 13 for r in rows)
    assert sorted(r["replicate_index"] for r in rows) == list(range(5))
    agg = aggregate_giant_rows(rows)[0]
    manual = np.mean([r["largest_left_fraction"] for r in rows])
    assert agg["mean_largest_left_fraction"] == pytest.approx(manual, rel=1e-15)


def test_rows_to_csv_stable_columns():
    rows = [{"a": 1, "b": 2.5}, {"a": 3, "b": 4.5, "c": "x"}]
    text = rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "a,b,c"
    assert lines[1] == "1,2.5,"
    assert rows_to_csv([]) == ""
