import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rand_connected
from distembed.embedding import (Embedding, distortion_report, embedding_from_json,
                                 embedding_to_json, host_dot, union_embedding,
                                 verify_nc_distortion)
from distembed.errors import (ConflictError, InjectivityError, PartialityError)
from distembed.graph import (Graph, all_pairs_distances, cycle_graph, path_graph)


def ident(n):
    return Embedding({i: i for i in range(n)}, n)


def test_report_identity_isometry():
    g = cycle_graph(6)
    d = all_pairs_distances(g)
    rep = distortion_report(g, g, d, d, ident(6))
    assert rep.expansion == rep.contraction == rep.distortion == 1


def test_report_antipodal_edge():
    g = path_graph(2)
    h = cycle_graph(6)
    rep = distortion_report(g, h, all_pairs_distances(g), all_pairs_distances(h),
                            Embedding({0: 0, 1: 3}, 2))
    assert rep.expansion == 3
    assert rep.contraction == Fraction(1, 3)
    assert rep.distortion == 1
    assert rep.non_contracting


def test_report_c4_into_c8_doubling():
    g = cycle_graph(4)
    h = cycle_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    f = Embedding({i: 2 * i for i in range(4)}, 4)
    # independent check over all 6 pairs
    exp = Fraction(0)
    con = Fraction(0)
    for u in range(4):
        for v in range(u + 1, 4):
            exp = max(exp, Fraction(dh.dist(2 * u, 2 * v), dg.dist(u, v)))
            con = max(con, Fraction(dg.dist(u, v), dh.dist(2 * u, 2 * v)))
    rep = distortion_report(g, h, dg, dh, f)
    assert (rep.expansion, rep.contraction) == (exp, con) == (2, Fraction(1, 2))
    assert rep.distortion == exp * con


def test_report_requires_total():
    g = path_graph(3)
    d = all_pairs_distances(g)
    with pytest.raises(PartialityError):
        distortion_report(g, g, d, d, Embedding({0: 0}))


def test_embedding_rejects_collision():
    with pytest.raises(InjectivityError):
        Embedding({0: 5, 1: 5})


def test_verify_identity_ok():
    g = cycle_graph(6)
    d = all_pairs_distances(g)
    assert verify_nc_distortion(g, g, d, d, ident(6), 1) is None


def test_verify_c4_c8():
    g, h = cycle_graph(4), cycle_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    f = Embedding({i: 2 * i for i in range(4)}, 4)
    assert verify_nc_distortion(g, h, dg, dh, f, 2) is None
    violation = verify_nc_distortion(g, h, dg, dh, f, 1)
    assert violation is not None and violation.kind == "expansion"
    assert violation.host_dist == 2 and violation.guest_dist == 1


def test_verify_detects_collapse():
    g, h = path_graph(3), cycle_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    f = Embedding.__new__(Embedding)
    f.mapping = {0: 0, 1: 1, 2: 1}  # bypass constructor to reach the checker
    f.total = True
    violation = verify_nc_distortion(g, h, dg, dh, f, 2)
    assert violation is not None and violation.kind == "injectivity"


def test_union_embedding():
    assert union_embedding([{0: 0}, {0: 0, 1: 2}]).mapping == {0: 0, 1: 2}
    with pytest.raises(ConflictError) as err:
        union_embedding([{0: 0}, {0: 1}])
    assert err.value.vertex == 0


def test_union_three_arc_cover():
    parts = [{0: 0, 1: 1, 2: 2}, {2: 2, 3: 3, 4: 4}, {4: 4, 5: 5, 0: 0}]
    merged = union_embedding(parts, 6)
    assert merged.total and merged.mapping == {i: i for i in range(6)}


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_verify_report_round_trip(data):
    import random as _random
    rng = _random.Random(data.draw(st.integers(0, 10**6)))
    n = data.draw(st.integers(2, 6))
    g = rand_connected(n, rng)
    N = data.draw(st.integers(n, 10))
    h = cycle_graph(max(N, 3))
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    hosts = list(range(h.n))
    rng.shuffle(hosts)
    f = Embedding(dict(zip(range(n), hosts)), n)
    d = data.draw(st.integers(1, 4))
    rep = distortion_report(g, h, dg, dh, f)
    ok = verify_nc_distortion(g, h, dg, dh, f, d) is None
    assert ok == (rep.contraction <= 1 and rep.expansion <= d)
    if ok:  # monotone in d
        assert verify_nc_distortion(g, h, dg, dh, f, d + 1) is None


def test_json_round_trip():
    g, h = cycle_graph(4), cycle_graph(8)
    dg, dh = all_pairs_distances(g), all_pairs_distances(h)
    f = Embedding({i: 2 * i for i in range(4)}, 4)
    payload = embedding_to_json(g, h, dg, dh, f)
    assert payload["expansion"] == "2/1"
    assert payload["contraction"] == "1/2"
    assert payload["distortion"] == "2/1"  # certified non-contracting bound
    again = embedding_from_json(json.loads(json.dumps(payload)))
    assert again == f


def test_host_dot_marks_preimages_and_partition():
    h = cycle_graph(4)
    f = Embedding({0: 1}, 1)
    dot = host_dot(h, f, red=frozenset({0, 1}))
    assert 'fillcolor="lightgray"' in dot
    assert dot.count('color="red"') == 2
    assert dot.count('color="blue"') == 2
