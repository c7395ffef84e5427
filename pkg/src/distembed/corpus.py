"""Deterministic instance corpora for the acceptance sweeps and benchmarks.

Trees are enumerated exhaustively up to isomorphism (Pruefer sequences +
AHU canonical codes), unicyclic hosts by filtered edge subsets, and the
random guests come from a fixed-seed generator so every run sees the same
corpus.
"""
from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, product

from .graph import Graph


def _ahu_code(n: int, adj: list[list[int]]) -> str:
    """Canonical string code of a tree (rooted at its center set)."""

    def encode(root: int, parent: int) -> str:
        subs = sorted(encode(w, root) for w in adj[root] if w != parent)
        return "(" + "".join(subs) + ")"

    if n == 1:
        return "()"
    # peel leaves to find the 1- or 2-vertex center
    degree = [len(a) for a in adj]
    layer = [v for v in range(n) if degree[v] <= 1]
    removed = [False] * n
    remaining = n
    while remaining > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            remaining -= 1
            for w in adj[v]:
                if not removed[w]:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    centers = [v for v in range(n) if not removed[v]]
    return min(encode(c, -1) for c in centers)


@lru_cache(maxsize=None)
def all_trees(n: int) -> list[Graph]:
    """All non-isomorphic trees on n vertices."""
    if n == 1:
        return [Graph(1, [])]
    if n == 2:
        return [Graph(2, [(0, 1)])]
    seen: dict[str, Graph] = {}
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        seq_list = list(seq)
        leaves = sorted(v for v in range(n) if degree[v] == 1)
        work_degree = degree[:]
        avail = leaves[:]
        for v in seq_list:
            leaf = avail.pop(0)
            edges.append((leaf, v))
            work_degree[v] -= 1
            if work_degree[v] == 1:
                # insert keeping avail sorted
                lo = 0
                while lo < len(avail) and avail[lo] < v:
                    lo += 1
                avail.insert(lo, v)
        edges.append((avail[0], avail[1]))
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        code = _ahu_code(n, adj)
        if code not in seen:
            seen[code] = Graph(n, edges)
    return [seen[c] for c in sorted(seen)]


def trees_up_to(n: int) -> list[Graph]:
    out = []
    for k in range(1, n + 1):
        out.extend(all_trees(k))
    return out


def _canonical_edges(g: Graph) -> tuple:
    """Isomorphism-canonical edge list by minimum over all permutations."""
    from itertools import permutations
    best = None
    verts = list(range(g.n))
    for perm in permutations(verts):
        relabeled = tuple(sorted(tuple(sorted((perm[u], perm[v])))
                                 for u, v in g.edges()))
        if best is None or relabeled < best:
            best = relabeled
    return best


@lru_cache(maxsize=None)
def unicyclic_graphs(n: int) -> list[Graph]:
    """All non-isomorphic connected graphs on n vertices with exactly n edges."""
    if n < 3:
        return []
    all_edges = list(combinations(range(n), 2))
    seen = {}
    for chosen in combinations(all_edges, n):
        g = Graph(n, chosen)
        if not g.is_connected():
            continue
        key = _canonical_edges(g)
        if key not in seen:
            seen[key] = g
    return [seen[k] for k in sorted(seen)]


def random_connected_guests(count: int, max_n: int, max_degree: int,
                            seed: int = 20240817) -> list[Graph]:
    """Fixed-seed random connected guests with bounded degree, deduplicated."""
    rng = random.Random(seed)
    out: list[Graph] = []
    seen: set[tuple] = set()
    attempts = 0
    while len(out) < count and attempts < count * 200:
        attempts += 1
        n = rng.randrange(3, max_n + 1)
        edges = set()
        verts = list(range(n))
        rng.shuffle(verts)
        for i in range(1, n):
            u, v = verts[i], verts[rng.randrange(i)]
            edges.add((min(u, v), max(u, v)))
        for _ in range(rng.randrange(0, n)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u != v:
                edges.add((min(u, v), max(u, v)))
        g = Graph(n, sorted(edges))
        if g.max_degree() > max_degree:
            continue
        key = (n, g.edges())
        if key in seen:
            continue
        seen.add(key)
        out.append(g)
    return out


def stars(max_leaves: int) -> list[Graph]:
    return [Graph(m + 1, [(0, i) for i in range(1, m + 1)])
            for m in range(2, max_leaves + 1)]


def cycles(lo: int, hi: int) -> list[Graph]:
    from .graph import cycle_graph
    return [cycle_graph(n) for n in range(lo, hi + 1)]


def cycle_sweep_guests(min_count: int = 200) -> list[Graph]:
    """The cycle acceptance corpus: all trees on <= 7 vertices (stars
    included), C3..C7, and fixed-seed random connected guests with max
    degree 6 (= 2d at the largest swept distortion)."""
    out = trees_up_to(7) + cycles(3, 7)
    need = max(0, min_count - len(out))
    out.extend(random_connected_guests(need + 10, 7, 6))
    return out
