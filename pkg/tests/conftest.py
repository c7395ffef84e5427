import random

import pytest

from distembed.graph import Graph, all_pairs_distances


def rand_connected(n, rng, extra_max=3, max_degree=None):
    """Random connected graph: spanning tree plus a few extra edges."""
    while True:
        edges = set()
        verts = list(range(n))
        rng.shuffle(verts)
        for i in range(1, n):
            u, v = verts[i], verts[rng.randrange(i)]
            edges.add((min(u, v), max(u, v)))
        for _ in range(rng.randrange(0, extra_max)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = Graph(n, sorted(edges))
        if max_degree is None or g.max_degree() <= max_degree:
            return g


def rand_tree(n, rng):
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


@pytest.fixture
def rng():
    return random.Random(0xD15C0)


def dist(g):
    return all_pairs_distances(g)
