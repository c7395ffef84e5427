from fractions import Fraction

import pytest

from conftest import rand_connected
from distembed.errors import InputError
from distembed.graph import (Graph, all_pairs_distances, cycle_graph, path_graph)
from distembed.oracle import brute_force_embed
from distembed.reduction import (bijective_reduction_gate, gen_reduction_instances,
                                 solve_rational, solve_scaled_instance,
                                 subdivide_red_blue)


def test_subdivide_c3_once_gives_alternating_c6():
    rb = subdivide_red_blue(cycle_graph(3), 1)
    assert rb.graph.n == 6
    assert rb.red == frozenset({0, 1, 2})
    assert all(rb.graph.degree(v) == 2 for v in range(6))
    dh = all_pairs_distances(rb.graph)
    for u in rb.red:
        for v in rb.red:
            assert dh.dist(u, v) % 2 == 0


def test_subdivide_identity_case():
    h = cycle_graph(5)
    rb = subdivide_red_blue(h, 0)
    assert rb.graph == h and not rb.blue and rb.factor == 1


def test_subdivide_edge_three_times():
    rb = subdivide_red_blue(path_graph(2), 3)
    assert rb.graph.n == 5
    assert all_pairs_distances(rb.graph).dist(0, 1) == 4


@pytest.mark.parametrize("p", [0, 1, 2, 3, 4])
def test_subdivision_distance_law(p, rng):
    for _ in range(6):
        h = rand_connected(rng.randrange(2, 8), rng)
        dh = all_pairs_distances(h)
        rb = subdivide_red_blue(h, p)
        dh2 = all_pairs_distances(rb.graph)
        for u in range(h.n):
            for v in range(h.n):
                assert dh2.dist(u, v) == (p + 1) * dh.dist(u, v)


def test_bijective_gate():
    h = cycle_graph(3)
    assert bijective_reduction_gate(subdivide_red_blue(h, 0), 2)
    for d in (1, 2, 3):
        assert bijective_reduction_gate(subdivide_red_blue(h, d), d)
        assert not bijective_reduction_gate(subdivide_red_blue(h, d + 1), d)
    assert bijective_reduction_gate(subdivide_red_blue(h, 2), 2)


def test_instances_start_with_unsubdivided():
    g, h = path_graph(2), path_graph(3)
    first = next(gen_reduction_instances(g, h, 2, 1))
    assert first[0].factor == 1 and first[1] == 2


def test_instances_cap():
    g = path_graph(40)
    h = cycle_graph(120)
    with pytest.raises(InputError, match="cap"):
        list(gen_reduction_instances(g, h, 2, 1, cap=16))


def test_some_instance_feasible_p2_into_p3():
    g, h = path_graph(2), path_graph(3)
    hits = 0
    for instance, d_prime in gen_reduction_instances(g, h, 2, 1):
        if solve_scaled_instance(g, instance, d_prime) is not None:
            hits += 1
    assert hits > 0


def test_no_instance_feasible_c4_into_p4_d1():
    g, h = cycle_graph(4), path_graph(4)
    for instance, d_prime in gen_reduction_instances(g, h, 1, 1):
        assert solve_scaled_instance(g, instance, d_prime) is None


def test_rational_pipeline_matches_fraction_oracle(rng):
    for _ in range(25):
        g = rand_connected(rng.randrange(2, 6), rng)
        h = rand_connected(rng.randrange(2, 7), rng)
        dg, dh = all_pairs_distances(g), all_pairs_distances(h)
        d_num, d_den = rng.choice([(3, 2), (5, 3), (5, 2), (7, 4), (2, 1)])
        want = brute_force_embed(g, dg, h, dh, Fraction(d_num, d_den))
        got = solve_rational(g, dg, h, dh, d_num, d_den)
        assert (want is None) == (got is None)


def test_rational_c4_c8_three_halves_infeasible():
    g, h = cycle_graph(4), cycle_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    assert solve_rational(g, dg, h, dh, 3, 2) is None
    assert solve_rational(g, dg, h, dh, 2, 1) is not None
