import pytest

from conftest import rand_connected
from distembed.embedding import verify_nc_distortion
from distembed.errors import BudgetExceeded
from distembed.graph import (Graph, all_pairs_distances, cycle_graph, path_graph)
from distembed.oracle import SearchBudget, brute_force_embed, min_distortion_integer


def test_c4_into_c8():
    g, h = cycle_graph(4), cycle_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    found = brute_force_embed(g, dg, h, dh, 2)
    assert found is not None
    assert verify_nc_distortion(g, h, dg, dh, found, 2) is None
    assert brute_force_embed(g, dg, h, dh, 1) is None


def test_cycle_into_path_infeasible():
    g, h = cycle_graph(4), path_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    for d in (1, 2):
        assert brute_force_embed(g, dg, h, dh, d) is None


def test_identity_edge():
    g = path_graph(2)
    d = all_pairs_distances(g)
    found = brute_force_embed(g, d, g, d, 1)
    assert found is not None and found.total


def test_min_distortion():
    c6 = cycle_graph(6)
    d6 = all_pairs_distances(c6)
    assert min_distortion_integer(c6, d6, c6, d6, 3) == 1
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    c20 = cycle_graph(20)
    assert min_distortion_integer(star, all_pairs_distances(star), c20,
                                  all_pairs_distances(c20), 4) == 3
    tree = path_graph(6)
    c4 = cycle_graph(4)
    assert min_distortion_integer(c4, all_pairs_distances(c4), tree,
                                  all_pairs_distances(tree), 3) is None


def test_budget_exceeded_is_distinct():
    g = cycle_graph(6)
    h = cycle_graph(14)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    with pytest.raises(BudgetExceeded):
        brute_force_embed(g, dg, h, dh, 2, budget=SearchBudget(max_nodes=2))


def test_bijective_mode_requires_exact_codomain():
    g = path_graph(3)
    h = path_graph(4)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    assert brute_force_embed(g, dg, h, dh, 2, bijective=True) is None
    assert brute_force_embed(g, dg, h, dh, 2, bijective=True,
                             codomain=frozenset({0, 1, 2})) is not None


def test_deterministic(rng):
    for _ in range(10):
        g = rand_connected(rng.randrange(2, 6), rng)
        h = cycle_graph(rng.randrange(4, 9))
        dg, dh = all_pairs_distances(g), all_pairs_distances(h)
        a = brute_force_embed(g, dg, h, dh, 2)
        b = brute_force_embed(g, dg, h, dh, 2)
        assert a == b
        if a is not None:
            assert verify_nc_distortion(g, h, dg, dh, a, 2) is None
