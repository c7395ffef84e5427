"""Graph representation, shortest-path distances, and host generators.

Vertices are dense ints 0..n-1.  Graphs are immutable once built: the
adjacency structure is a tuple of sorted tuples and may be shared freely
across threads.  Optional edge weights are positive integers (used only
for weighted guests into cycles).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InputError

# Sentinel for "no path": max signed 32-bit value, so that any real distance
# comparison stays exact in plain int arithmetic.
INF_DIST = 2**31 - 1


class Graph:
    """Immutable undirected graph with dense 0-based vertex ids."""

    __slots__ = ("n", "adj", "weights", "_edge_list")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 weights: Optional[dict[tuple[int, int], int]] = None):
        if n < 0:
            raise InputError("vertex count must be non-negative")
        seen = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        norm_weights: Optional[dict[tuple[int, int], int]] = (
            {} if weights is not None else None
        )
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise InputError(f"parallel edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
            if norm_weights is not None:
                w = weights.get((u, v), weights.get((v, u)))  # type: ignore[union-attr]
                if w is None:
                    raise InputError(f"missing weight for edge {key}")
                if not isinstance(w, int) or w < 1:
                    raise InputError(f"weight of edge {key} must be an integer >= 1")
                norm_weights[key] = w
        self.n = n
        self.adj = tuple(tuple(sorted(nbrs)) for nbrs in adj)
        self.weights = norm_weights
        self._edge_list = tuple(sorted(seen))

    # -- basic accessors -------------------------------------------------

    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edge_list

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def weight(self, u: int, v: int) -> int:
        if self.weights is None:
            return 1
        return self.weights[(u, v) if u < v else (v, u)]

    def max_weight(self) -> int:
        if self.weights is None:
            return 1
        return max(self.weights.values(), default=1)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.n == other.n
                and self._edge_list == other._edge_list
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.n, self._edge_list))

    def __repr__(self):
        tag = "weighted " if self.weighted else ""
        return f"<{tag}Graph n={self.n} m={len(self._edge_list)}>"


class DistanceMatrix:
    """All-pairs shortest-path table; INF_DIST marks disconnected pairs."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[int]]):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)

    def __getitem__(self, uv: tuple[int, int]) -> int:
        u, v = uv
        return self.rows[u][v]

    def dist(self, u: int, v: int) -> int:
        return self.rows[u][v]

    def eccentricity(self, u: int) -> int:
        return max(self.rows[u])

    def diameter(self) -> int:
        return max(self.eccentricity(u) for u in range(self.n)) if self.n else 0


def _bfs_row(g: Graph, src: int) -> list[int]:
    row = [INF_DIST] * g.n
    row[src] = 0
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            du = row[u]
            for w in g.adj[u]:
                if row[w] == INF_DIST:
                    row[w] = du + 1
                    nxt.append(w)
        frontier = nxt
    return row


def _dijkstra_row(g: Graph, src: int) -> list[int]:
    row = [INF_DIST] * g.n
    row[src] = 0
    heap = [(0, src)]
    while heap:
        du, u = heapq.heappop(heap)
        if du > row[u]:
            continue
        for w in g.adj[u]:
            alt = du + g.weight(u, w)
            if alt < row[w]:
                row[w] = alt
                heapq.heappush(heap, (alt, w))
    return row


def all_pairs_distances(g: Graph) -> DistanceMatrix:
    """Exact shortest-path distances: BFS per source, Dijkstra if weighted."""
    per_source = _dijkstra_row if g.weighted else _bfs_row
    return DistanceMatrix([per_source(g, s) for s in range(g.n)])


def components_after_removal(g: Graph, removed: frozenset[int] | set[int]) -> list[frozenset[int]]:
    """Connected components of V(g) minus `removed`, ordered by smallest member."""
    removed = set(removed)
    seen: set[int] = set()
    comps: list[frozenset[int]] = []
    for start in range(g.n):
        if start in removed or start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            for w in g.adj[stack.pop()]:
                if w not in removed and w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def degree_gate(guest_max_degree: int, host_max_degree: int, d: int) -> bool:
    """Necessary-condition gate on degrees.

    Returns False (reject) when the guest's maximum degree exceeds the size
    of a radius-d host ball boundary, i.e. sum_{0<=i<d} hD*(hD-1)^i; a True
    result does not promise embeddability.
    """
    if d < 1:
        raise InputError("distortion must be >= 1")
    bound = 0
    term = host_max_degree
    for _ in range(d):
        bound += term
        term *= max(host_max_degree - 1, 0)
    return guest_max_degree <= bound


# -- host specifications ----------------------------------------------------


@dataclass(frozen=True)
class HostSpec:
    """Structured host: path:N, cycle:N, theta:l1,...,lk, or an explicit graph."""

    family: str
    length: int = 0
    arms: tuple[int, ...] = ()
    graph: Optional[Graph] = field(default=None, compare=False)

    def __post_init__(self):
        if self.family == "path":
            if self.length < 1:
                raise InputError("path host needs at least one vertex")
        elif self.family == "cycle":
            if self.length < 3:
                raise InputError("cycle host needs at least three vertices")
        elif self.family == "theta":
            if len(self.arms) < 2:
                raise InputError("theta host needs k >= 2 arms")
            if any(l < 1 for l in self.arms):
                raise InputError("theta arm lengths must be >= 1")
            if sum(1 for l in self.arms if l == 1) > 1:
                raise InputError("at most one theta arm of length 1 (parallel edges)")
        elif self.family == "general":
            if self.graph is None:
                raise InputError("general host needs an explicit graph")
        else:
            raise InputError(f"unknown host family {self.family!r}")

    @staticmethod
    def parse(text: str) -> "HostSpec":
        """Parse CLI syntax: path:N | cycle:N | theta:l1,l2,...,lk."""
        kind, _, rest = text.partition(":")
        try:
            if kind == "path":
                return HostSpec("path", length=int(rest))
            if kind == "cycle":
                return HostSpec("cycle", length=int(rest))
            if kind == "theta":
                arms = tuple(int(tok) for tok in rest.split(","))
                return HostSpec("theta", arms=arms)
        except ValueError as exc:
            raise InputError(f"bad host spec {text!r}: {exc}") from None
        raise InputError(f"unknown host spec {text!r}")


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("cycle needs at least three vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def theta_graph(arms: Sequence[int]) -> tuple[Graph, list[list[int]]]:
    """Generalized theta graph: k internally disjoint s-t paths.

    Vertex 0 is s, vertex 1 is t, then the interior vertices of each arm in
    arm order.  Also returns, per arm, the full vertex sequence s..t.
    """
    HostSpec("theta", arms=tuple(arms))  # validation
    edges: list[tuple[int, int]] = []
    arm_paths: list[list[int]] = []
    nxt = 2
    for length in arms:
        seq = [0]
        prev = 0
        for _ in range(length - 1):
            seq.append(nxt)
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
        seq.append(1)
        arm_paths.append(seq)
    return Graph(nxt, edges), arm_paths


def generate(spec: HostSpec) -> Graph:
    """Concrete host graph for a spec."""
    if spec.family == "path":
        return path_graph(spec.length)
    if spec.family == "cycle":
        return cycle_graph(spec.length)
    if spec.family == "theta":
        return theta_graph(spec.arms)[0]
    assert spec.graph is not None
    return spec.graph


# -- edge-list text format ---------------------------------------------------


def parse_edge_list(text: str) -> tuple[Graph, list[int]]:
    """Parse the "u v [w]" edge-list format.

    '#' starts a comment, blank lines are skipped.  Vertex labels may be any
    non-negative integers; they are re-indexed densely (sorted order) and the
    original labels are returned alongside the graph.
    """
    edges: list[tuple[int, int]] = []
    weights: dict[tuple[int, int], int] = {}
    weighted = None
    labels: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'u v' or 'u v w', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = int(parts[2]) if len(parts) == 3 else None
        except ValueError:
            raise InputError(f"line {lineno}: non-integer field in {raw!r}") from None
        if u < 0 or v < 0:
            raise InputError(f"line {lineno}: negative vertex label")
        if weighted is None:
            weighted = w is not None
        elif weighted != (w is not None):
            raise InputError(f"line {lineno}: mixed weighted and unweighted edges")
        labels.add(u)
        labels.add(v)
        edges.append((u, v))
        if w is not None:
            weights[(u, v)] = w
    order = sorted(labels)
    index = {lab: i for i, lab in enumerate(order)}
    dense_edges = [(index[u], index[v]) for u, v in edges]
    dense_weights = (
        {(index[u], index[v]): w for (u, v), w in weights.items()} if weighted else None
    )
    return Graph(len(order), dense_edges, dense_weights), order


def load_guest(text: str) -> tuple[Graph, list[int]]:
    """Parse and validate a guest graph: must be connected and non-empty."""
    g, labels = parse_edge_list(text)
    if g.n == 0:
        raise InputError("guest graph is empty")
    if not g.is_connected():
        raise InputError("guest graph must be connected")
    return g, labels


def load_host(text: str) -> tuple[Graph, list[int]]:
    """Parse and validate a host graph: weights are not supported on hosts."""
    g, labels = parse_edge_list(text)
    if g.weighted:
        raise InputError("weighted hosts are not supported")
    return g, labels
