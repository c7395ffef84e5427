import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rand_connected
from distembed.errors import InputError
from distembed.graph import (Graph, HostSpec, all_pairs_distances,
                             components_after_removal, cycle_graph, degree_gate,
                             generate, load_guest, load_host, parse_edge_list,
                             path_graph, theta_graph)


def test_distances_path():
    g = path_graph(3)
    d = all_pairs_distances(g)
    assert d.dist(0, 2) == 2
    assert d.dist(1, 1) == 0


def test_distances_cycle():
    d = all_pairs_distances(cycle_graph(6))
    assert d.dist(0, 3) == 3
    assert d.dist(0, 5) == 1


def test_distances_weighted_path():
    g = Graph(3, [(0, 1), (1, 2)], {(0, 1): 3, (1, 2): 2})
    d = all_pairs_distances(g)
    assert d.dist(0, 2) == 5


def test_components_path_split():
    g = path_graph(3)
    assert components_after_removal(g, {1}) == [frozenset({0}), frozenset({2})]


def test_components_connected():
    g = cycle_graph(6)
    assert components_after_removal(g, set()) == [frozenset(range(6))]


def test_components_two_arcs():
    g = cycle_graph(6)
    assert components_after_removal(g, {0, 3}) == [frozenset({1, 2}),
                                                   frozenset({4, 5})]


def test_degree_gate_values():
    assert degree_gate(5, 2, 2) is False  # bound 2+2 = 4
    assert degree_gate(2, 2, 1) is True
    assert degree_gate(13, 3, 2) is False  # bound 3+6 = 9


@given(g=st.integers(0, 30), h=st.integers(0, 6), d=st.integers(1, 5))
def test_degree_gate_monotone(g, h, d):
    if degree_gate(g, h, d):
        assert degree_gate(g, h, d + 1)


def test_generate_cycle():
    g = generate(HostSpec.parse("cycle:4"))
    assert g.edges() == ((0, 1), (0, 3), (1, 2), (2, 3))


def test_generate_theta_two_arms_is_cycle():
    g = generate(HostSpec.parse("theta:2,2"))
    dg = all_pairs_distances(g)
    assert g.n == 4 and all(g.degree(v) == 2 for v in range(4))
    assert dg.diameter() == 2


def test_generate_theta_k3():
    g = generate(HostSpec.parse("theta:2,2,2"))
    assert g.n == 5
    assert g.degree(0) == 3 and g.degree(1) == 3


def test_theta_parallel_edge_guard():
    with pytest.raises(InputError):
        HostSpec("theta", arms=(1, 1, 3))
    # a single length-1 arm is fine
    g, paths = theta_graph((1, 3))
    assert g.n == 4 and (0, 1) in g.edges()


def test_host_spec_errors():
    with pytest.raises(InputError):
        HostSpec.parse("cycle:2")
    with pytest.raises(InputError):
        HostSpec.parse("blob:9")
    with pytest.raises(InputError):
        HostSpec.parse("theta:4")


def test_parse_edge_list_reindex_and_comments():
    g, labels = parse_edge_list("# header\n10 30\n\n30 20 # trailing\n")
    assert labels == [10, 20, 30]
    assert g.edges() == ((0, 2), (1, 2))


def test_parse_edge_list_weighted():
    g, _ = parse_edge_list("0 1 3\n1 2 2\n")
    assert g.weighted and g.weight(0, 1) == 3


def test_parse_edge_list_diagnostics():
    with pytest.raises(InputError, match="line 2"):
        parse_edge_list("0 1\n0 x\n")
    with pytest.raises(InputError, match="line 2"):
        parse_edge_list("0 1\n2 3 4 5\n")
    with pytest.raises(InputError, match="mixed"):
        parse_edge_list("0 1\n1 2 7\n")


def test_guest_must_be_connected():
    with pytest.raises(InputError, match="connected"):
        load_guest("0 1\n2 3\n")


def test_weighted_host_rejected():
    with pytest.raises(InputError, match="weighted hosts"):
        load_host("0 1 2\n")


def test_graph_invariant_errors():
    with pytest.raises(InputError):
        Graph(2, [(0, 0)])
    with pytest.raises(InputError):
        Graph(2, [(0, 1), (1, 0)])
    with pytest.raises(InputError):
        Graph(2, [(0, 2)])
    with pytest.raises(InputError):
        Graph(2, [(0, 1)], {(0, 1): 0})


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_distance_matrix_axioms(data):
    import random as _random
    seed = data.draw(st.integers(0, 10**6))
    rng = _random.Random(seed)
    n = data.draw(st.integers(2, 24))
    g = rand_connected(n, rng)
    d = all_pairs_distances(g)
    for u in range(n):
        assert d.dist(u, u) == 0
        for v in range(u + 1, n):
            assert d.dist(u, v) == d.dist(v, u) > 0
    for u in range(n):
        for v in range(n):
            for w in range(n):
                assert d.dist(u, w) <= d.dist(u, v) + d.dist(v, w)


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_components_partition_properties(data):
    import random as _random
    rng = _random.Random(data.draw(st.integers(0, 10**6)))
    n = data.draw(st.integers(2, 14))
    g = rand_connected(n, rng)
    removed = set(data.draw(st.lists(st.integers(0, n - 1), max_size=n)))
    comps = components_after_removal(g, removed)
    union = set()
    for comp in comps:
        assert not (comp & union)
        union |= comp
        # internally connected
        sub = {v: [w for w in g.adj[v] if w in comp] for v in comp}
        seen = {min(comp)}
        stack = [min(comp)]
        while stack:
            for w in sub[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        assert seen == comp
    assert union == set(range(n)) - removed
    # no edges between distinct components
    for u, v in g.edges():
        for comp in comps:
            assert not ((u in comp) ^ (v in comp)) or u in removed or v in removed
