import math

import pytest

from oxgrid.errors import SizeError
from oxgrid.oracle import (
    enumerate_bipartite_trees,
    exhaustive_census,
    tp_equivalence_test,
    tv_distance,
)
from oxgrid.rng import make_stream
from oxgrid.theory import count_exact, labeled_tree_count


def test_census_smallest_instances():
    c = exhaustive_census(2, 2, 2)
    assert (c.total_sequences, c.valid_count) == (16, 4)
    # two perfect matchings, each producible in two orders
    assert c.outcome_frequencies == {(0, 3): 2, (1, 2): 2}
    c = exhaustive_census(1, 1, 1)
    assert (c.total_sequences, c.valid_count) == (1, 1)


def test_census_known_counts():
    assert exhaustive_census(2, 2, 3).valid_count == 36
    assert exhaustive_census(1, 2, 2).valid_count == 2
    assert exhaustive_census(2, 3, 4).valid_count == 504
    assert exhaustive_census(2, 2, 4).valid_count == 196


def test_census_matches_formula_exactly():
    c = exhaustive_census(2, 2, 3)
    assert c.valid_count == count_exact(2, 2, 3)


def test_census_frequencies_sum_to_valid_count():
    c = exhaustive_census(2, 3, 4)
    assert sum(c.outcome_frequencies.values()) == c.valid_count
    assert len(c.outcome_frequencies) == 30


def test_census_infeasible_t_short_circuits():
    c = exhaustive_census(3, 5, 2)
    assert c.valid_count == 0
    assert c.outcome_frequencies == {}
    assert c.total_sequences == 15**2


def test_census_cap():
    with pytest.raises(SizeError):
        exhaustive_census(3, 3, 9)  # 9^9 > 1e7
    with pytest.raises(SizeError):
        exhaustive_census(4, 4, 6, cap=10**6)


def test_census_chunking_is_associative():
    # partitioning the index space differently must not change anything
    a = exhaustive_census(2, 3, 4, chunk=7)
    b = exhaustive_census(2, 3, 4)
    assert a == b


def test_enumerate_trees_matches_formula():
    assert enumerate_bipartite_trees(1, 1) == 1
    assert enumerate_bipartite_trees(2, 2) == 4
    assert enumerate_bipartite_trees(2, 3) == 12
    assert enumerate_bipartite_trees(3, 3) == 81
    assert enumerate_bipartite_trees(4, 4) == labeled_tree_count(4, 4)
    with pytest.raises(SizeError):
        enumerate_bipartite_trees(5, 5)


def test_tv_distance():
    assert tv_distance({(0,): 1.0}, {(0,): 1.0}) == 0.0
    assert tv_distance({(0,): 1.0}, {(1,): 1.0}) == 1.0
    assert tv_distance({(0,): 0.5, (1,): 0.5}, {(0,): 1.0}) == pytest.approx(0.5)


def test_equivalence_single_outcome_is_exact():
    report = tp_equivalence_test(1, 1, 3, 500, make_stream(1))
    assert report.tv_distance == 0.0
    assert report.n_outcomes == 1
    assert report.passed


def test_equivalence_small_campaign():
    report = tp_equivalence_test(2, 2, 2, 50_000, make_stream(2))
    assert report.passed
    assert report.threshold == pytest.approx(3 * math.sqrt(2 / 50_000))
