"""Window dynamic programs for embedding into cycles and lines.

The solver stitches together partial embeddings ("windows") of radius
R = d*M+1 around consecutive host positions, where M is the maximum guest
edge weight (1 when unweighted).  A window is described by its ordered
vertex sequence plus offsets inside the window, every window must behave
like an embedding locally, and consecutive windows must agree on their
overlap; a source-to-sink path in the succession graph glues into a full
embedding.

Cycle positions are 0..N-1 (arithmetic mod N); lines use positions 1..N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .embedding import Embedding, union_embedding, verify_nc_distortion
from .errors import InputError
from .graph import (DistanceMatrix, Graph, all_pairs_distances,
                    components_after_removal, cycle_graph, degree_gate)
from .oracle import DEFAULT_BUDGET, SearchBudget, brute_force_embed


@dataclass(frozen=True)
class Anchor:
    """Fixed partial embedding into a distinguished zone of the host.

    For cycles the zone is S_0 = [-(dM+1), dM+1] around position 0; for
    lines it is a prefix [1..a1] or suffix [N-a2+1..N].  `zone` stores the
    inclusive position range the zone occupies.
    """

    mapping: tuple[tuple[int, int], ...]  # sorted (guest vertex, position)
    zone: tuple[int, int]

    @staticmethod
    def make(mapping: dict[int, int], zone: tuple[int, int]) -> "Anchor":
        return Anchor(tuple(sorted(mapping.items())), zone)

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)

    def domain(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.mapping)


@dataclass(frozen=True)
class WindowPartialEmbedding:
    """A partial embedding into the window [mid-R, mid+R].

    `verts` are ordered by image position; `offsets[i]` is the distance of
    verts[i]'s position from the window start mid-R, strictly increasing and
    within [0, 2R].
    """

    mid: int
    verts: tuple[int, ...]
    offsets: tuple[int, ...]

    def positions(self, radius: int) -> tuple[int, ...]:
        base = self.mid - radius
        return tuple(base + o for o in self.offsets)

    def as_dict(self, radius: int) -> dict[int, int]:
        base = self.mid - radius
        return {v: base + o for v, o in zip(self.verts, self.offsets)}

    def domain(self) -> frozenset[int]:
        return frozenset(self.verts)

    def dom_slice(self, radius: int, lo: int, hi: int) -> frozenset[int]:
        """Vertices mapped into [mid+lo, mid+hi]."""
        return frozenset(v for v, o in zip(self.verts, self.offsets)
                         if lo <= o - radius <= hi)


# -- shape enumeration -------------------------------------------------------
#
# A window shape is the mid-independent part of a WindowPartialEmbedding:
# the vertex sequence plus offsets.  Shapes already satisfy the conditions
# that do not depend on the anchor: pairwise non-contraction and expansion d
# inside the window (linear distances), and closed neighbourhoods of the
# vertices sitting exactly on the mid.


def _enumerate_shapes(g: Graph, dg: DistanceMatrix, d: int, radius: int,
                      cap_expansion: bool = True
                      ) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    budget = 2 * radius
    shapes: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def pair_ok(u, ou, v, ov) -> bool:
        # offset separation upper-bounds the true host distance, so the
        # non-contraction side always prunes; the expansion side only prunes
        # when the host metric along the window is the linear one.
        sep = abs(ou - ov)
        duv = dg.dist(u, v)
        if sep < duv:
            return False
        return not cap_expansion or sep <= d * duv

    def extend(verts: list[int], offsets: list[int]):
        last_v, last_o = verts[-1], offsets[-1]
        for w in range(g.n):
            if w in verts:
                continue
            dw = dg.dist(last_v, w)
            hi = min(d * dw, budget - last_o) if cap_expansion else budget - last_o
            for gap in range(dw, hi + 1):
                ow = last_o + gap
                if all(pair_ok(v, o, w, ow) for v, o in zip(verts, offsets)):
                    verts.append(w)
                    offsets.append(ow)
                    emit(verts, offsets)
                    extend(verts, offsets)
                    verts.pop()
                    offsets.pop()

    def emit(verts: list[int], offsets: list[int]):
        # closed neighbourhood of the mid position (condition iv)
        dom = set(verts)
        for v, o in zip(verts, offsets):
            if o == radius:
                if any(nb not in dom for nb in g.adj[v]):
                    return
        shapes.append((tuple(verts), tuple(offsets)))

    for u in range(g.n):
        for x0 in range(budget + 1):
            emit([u], [x0])
            extend([u], [x0])
    return shapes


def count_sequences_with_span(g: Graph, dg: DistanceMatrix, start: int, span: int
                              ) -> int:
    """Number of vertex sequences from `start` whose image gaps sum to `span`.

    Gaps are only constrained from below by guest distances (the
    non-contraction side), which is exactly the quantity the window count
    law bounds by (4d(2d+2))^span.
    """
    def count_from(u: int, used: frozenset[int], remaining: int) -> int:
        total = 1 if remaining == 0 else 0
        if remaining == 0:
            return total
        for w in range(g.n):
            if w in used:
                continue
            dw = dg.dist(u, w)
            for gap in range(dw, remaining + 1):
                total += count_from(w, used | {w}, remaining - gap)
        return total

    return count_from(start, frozenset([start]), span)


# -- engine ------------------------------------------------------------------


class _WindowEngine:
    """Shared machinery for the cycle solver and the anchored line solvers.

    `pos_metric`, when given, replaces the linear/cyclic position distance;
    the theta solver uses it so that arm sub-solves see true host distances
    (routes around the other arms included).
    """

    def __init__(self, g: Graph, dg: DistanceMatrix, d: int, mode: str, N: int,
                 invariant_checks: bool = False, pos_metric=None):
        self.g = g
        self.dg = dg
        self.d = d
        self.M = g.max_weight()
        self.R = d * self.M + 1
        self.B = 2 * self.R
        self.mode = mode  # "cycle" | "line"
        self.N = N
        self.invariant_checks = invariant_checks
        self.pos_metric = pos_metric
        self.shapes = _enumerate_shapes(g, dg, d, self.R,
                                        cap_expansion=pos_metric is None)

    # host distance between positions
    def hdist(self, p: int, q: int) -> int:
        if self.pos_metric is not None:
            return self.pos_metric(p, q)
        if self.mode == "cycle":
            delta = (p - q) % self.N
            return min(delta, self.N - delta)
        return abs(p - q)

    def norm_pos(self, p: int) -> int:
        return p % self.N if self.mode == "cycle" else p

    # -- per-anchor feasibility ------------------------------------------

    def window_feasible(self, f: WindowPartialEmbedding, anchor: Anchor) -> bool:
        W = anchor.domain()
        if f.domain() & W:
            return False
        # S_mid must avoid the anchor zone entirely.
        zlo, zhi = anchor.zone
        lo, hi = f.mid - self.R, f.mid + self.R
        if self.mode == "cycle":
            # zone is S_0; windows live at mids in [2R+1, N-(2R+1)]
            if not (self.B + 1 <= f.mid <= self.N - (self.B + 1)):
                return False
        else:
            if lo <= zhi and zlo <= hi:
                return False
            if lo < 1 or hi > self.N:
                return False
        fmap = f.as_dict(self.R)
        if self.pos_metric is not None:
            # shape enumeration only pruned the non-contraction side; the
            # true metric decides both sides here
            items = sorted(fmap.items())
            for i, (u, pu) in enumerate(items):
                for v, pv in items[i + 1:]:
                    duv = self.dg.dist(u, v)
                    sep = self.hdist(pu, pv)
                    if sep < duv or sep > self.d * duv:
                        return False
        # cross-checks against the anchor (condition iii)
        for w, pw in anchor.mapping:
            for u, pu in fmap.items():
                duw = self.dg.dist(u, w)
                sep = self.hdist(pu, pw)
                if sep < duw or sep > self.d * duw:
                    return False
        # disjoint left/right component views (condition v)
        L, R_ = self.flank_sets(f, W)
        return not (L & R_)

    def flank_sets(self, f: WindowPartialEmbedding, W: frozenset[int]
                   ) -> tuple[frozenset[int], frozenset[int]]:
        """L(f), R(f): components of G minus (W u Dom) hanging off each side."""
        dom = f.domain()
        comps = components_after_removal(self.g, W | dom)
        left_slice = f.dom_slice(self.R, -self.R, -1)
        right_slice = f.dom_slice(self.R, 1, self.R)
        L: set[int] = set()
        R_: set[int] = set()
        for comp in comps:
            nbrs = {w for v in comp for w in self.g.adj[v]}
            if nbrs & left_slice:
                L |= comp
            if nbrs & right_slice:
                R_ |= comp
        return frozenset(L), frozenset(R_)

    # -- succession --------------------------------------------------------

    def right_signature(self, f: WindowPartialEmbedding) -> tuple:
        """Restriction of f to offsets >= 1 in absolute positions."""
        base = f.mid - self.R
        return tuple((v, base + o) for v, o in zip(f.verts, f.offsets) if o >= 1)

    def left_signature(self, f: WindowPartialEmbedding) -> tuple:
        base = f.mid - self.R
        return tuple((v, base + o) for v, o in zip(f.verts, f.offsets)
                     if o <= self.B - 1)

    def succession_ok(self, f_a: WindowPartialEmbedding, f_b: WindowPartialEmbedding,
                      flanks: dict) -> bool:
        """Conditions (iii)/(iv): extreme slices flow into the other flank."""
        la, ra = flanks[f_a]
        lb, rb = flanks[f_b]
        if not f_a.dom_slice(self.R, -self.R, -self.R) <= lb:
            return False
        if not f_b.dom_slice(self.R, self.R, self.R) <= ra:
            return False
        if self.invariant_checks:
            assert ra == rb | f_b.dom_slice(self.R, self.R, self.R)
            assert lb == la | f_a.dom_slice(self.R, -self.R, -self.R)
        return True

    # -- DP ----------------------------------------------------------------

    def solve(self, anchor: Anchor, mids: range,
              last_vertex: Optional[int] = None) -> Optional[dict[int, int]]:
        """Search an embeddable window sequence extending the anchor.

        Returns the glued vertex->position map, or None.  `last_vertex`
        forces that vertex to occupy the maximum position (line only).
        """
        g, W = self.g, anchor.domain()
        rest = frozenset(range(g.n)) - W
        anchor_map = anchor.as_dict()

        if not rest:
            if last_vertex is not None and anchor_map:
                top = max(anchor_map.values())
                if anchor_map.get(last_vertex) != top:
                    return None
            if not self._total_map_ok(anchor_map):
                return None
            return {v: self.norm_pos(p) for v, p in anchor_map.items()}

        windows_by_mid: dict[int, list[WindowPartialEmbedding]] = {}
        flanks: dict[WindowPartialEmbedding, tuple] = {}
        for mid in mids:
            here = []
            for verts, offsets in self.shapes:
                f = WindowPartialEmbedding(mid, verts, offsets)
                if self.window_feasible(f, anchor):
                    here.append(f)
                    flanks[f] = self.flank_sets(f, W)
            if here:
                windows_by_mid[mid] = here

        def is_source(f: WindowPartialEmbedding) -> bool:
            L, R_ = flanks[f]
            return not L and R_ == rest - f.domain()

        def is_sink(f: WindowPartialEmbedding) -> bool:
            L, R_ = flanks[f]
            if R_ or L != rest - f.domain():
                return False
            if last_vertex is not None:
                fmap = f.as_dict(self.R)
                if last_vertex not in fmap:
                    return False
                if fmap[last_vertex] != max(fmap.values()):
                    return False
                if anchor_map and max(anchor_map.values()) > fmap[last_vertex]:
                    return False
            return True

        # BFS over the succession graph from all sources, in canonical order.
        parent: dict[WindowPartialEmbedding, Optional[WindowPartialEmbedding]] = {}
        frontier: list[WindowPartialEmbedding] = []
        for mid in sorted(windows_by_mid):
            for f in windows_by_mid[mid]:
                if f not in parent and is_source(f):
                    parent[f] = None
                    frontier.append(f)
        while frontier:
            nxt: list[WindowPartialEmbedding] = []
            for f_a in frontier:
                if is_sink(f_a):
                    return self._reconstruct(parent, f_a, anchor_map)
                succ_bucket = windows_by_mid.get(f_a.mid + 1, ())
                sig = self.right_signature(f_a)
                for f_b in succ_bucket:
                    if f_b in parent:
                        continue
                    if self.left_signature(f_b) != sig:
                        continue
                    if self.succession_ok(f_a, f_b, flanks):
                        parent[f_b] = f_a
                        nxt.append(f_b)
            frontier = nxt
        return None

    def _total_map_ok(self, mapping: dict[int, int]) -> bool:
        if len(mapping) != self.g.n:
            return False
        for u in range(self.g.n):
            for v in range(u + 1, self.g.n):
                duv = self.dg.dist(u, v)
                sep = self.hdist(mapping[u], mapping[v])
                if sep < duv or sep > self.d * duv:
                    return False
        return True

    def _reconstruct(self, parent, sink, anchor_map) -> dict[int, int]:
        chain = []
        f: Optional[WindowPartialEmbedding] = sink
        while f is not None:
            chain.append(f.as_dict(self.R))
            f = parent[f]
        merged = union_embedding(chain + [anchor_map])
        raw = dict(merged.items())
        # An embeddable sequence always glues into a total valid map; a
        # failure here is a solver bug, not an infeasible instance.
        if len(raw) != self.g.n or not self._total_map_ok(raw):
            raise AssertionError("window chain did not glue into a valid embedding")
        return {v: self.norm_pos(p) for v, p in raw.items()}


# -- public operations: cycles -----------------------------------------------


def enumerate_anchors(g: Graph, dg: DistanceMatrix, d: int) -> list[Anchor]:
    """All cycle anchors: maps of some W into S_0 with position 0 occupied.

    Each anchor is internally non-contracting with expansion at most d, and
    anchors are ordered by the vertex mapped to position 0 (the paper's
    guess), then by shape.
    """
    M = g.max_weight()
    radius = d * M + 1
    anchors = []
    for verts, offsets in _enumerate_shapes(g, dg, d, radius):
        if radius in offsets:
            base = -radius
            mapping = {v: base + o for v, o in zip(verts, offsets)}
            anchors.append(Anchor.make(mapping, (-radius, radius)))

    def v0(anchor: Anchor) -> int:
        return next(v for v, p in anchor.mapping if p == 0)

    anchors.sort(key=lambda a: (v0(a), a.mapping))
    return anchors


def is_feasible(f: WindowPartialEmbedding, psi: Anchor, g: Graph,
                dg: DistanceMatrix, d: int, N: int) -> bool:
    """Full feasibility of a cycle window with respect to an anchor."""
    engine = _WindowEngine(g, dg, d, "cycle", N)
    radius = engine.R
    dom = f.domain()
    if not dom or len(dom) != len(f.verts):
        return False
    if list(f.offsets) != sorted(set(f.offsets)) or f.offsets[-1] > 2 * radius:
        return False
    fmap = f.as_dict(radius)
    for u in dom:
        for v in dom:
            if u < v:
                duv = dg.dist(u, v)
                sep = engine.hdist(fmap[u], fmap[v])
                if sep < duv or sep > d * duv:
                    return False
    return engine.window_feasible(f, psi)


def succeeds(f_a: WindowPartialEmbedding, f_b: WindowPartialEmbedding,
             psi: Anchor, g: Graph, dg: DistanceMatrix, d: int, N: int) -> bool:
    """Does f_b (at mid+1) succeed f_a with respect to the anchor?"""
    if f_b.mid != f_a.mid + 1:
        return False
    engine = _WindowEngine(g, dg, d, "cycle", N)
    if engine.right_signature(f_a) != engine.left_signature(f_b):
        return False
    W = psi.domain()
    flanks = {f_a: engine.flank_sets(f_a, W), f_b: engine.flank_sets(f_b, W)}
    return engine.succession_ok(f_a, f_b, flanks)


def check_succession_identities(f_a: WindowPartialEmbedding,
                                f_b: WindowPartialEmbedding, psi: Anchor,
                                g: Graph, dg: DistanceMatrix, d: int, N: int
                                ) -> bool:
    """Both flank identities of an accepted succession (solver invariant)."""
    engine = _WindowEngine(g, dg, d, "cycle", N)
    W = psi.domain()
    la, ra = engine.flank_sets(f_a, W)
    lb, rb = engine.flank_sets(f_b, W)
    top = f_b.dom_slice(engine.R, engine.R, engine.R)
    bottom = f_a.dom_slice(engine.R, -engine.R, -engine.R)
    return ra == rb | top and lb == la | bottom


def empty_arc_lengths(n_host: int, used_positions: Iterable[int]) -> list[int]:
    """Lengths of all maximal runs of unused consecutive cycle positions."""
    used = sorted(set(used_positions))
    if not used:
        return [n_host]
    runs = []
    for a, b in zip(used, used[1:] + [used[0] + n_host]):
        if b - a - 1 > 0:
            runs.append(b - a - 1)
    return runs


def embed_into_cycle(g: Graph, dg: DistanceMatrix, N: int, d: int,
                     budget: SearchBudget = DEFAULT_BUDGET,
                     invariant_checks: bool = False) -> Optional[Embedding]:
    """Non-contracting distortion-d embedding of a connected guest into C_N.

    Large hosts (N > 4dMn) reduce to the line solver on a 2dMn-vertex arc;
    tiny hosts (N < 4dM+6), where the anchor window cannot avoid candidate
    windows, fall back to the exhaustive oracle.
    """
    if d < 1:
        raise InputError("distortion must be >= 1")
    if not g.is_connected():
        raise InputError("guest must be connected")
    M = g.max_weight()
    if not degree_gate(g.max_degree(), 2, d * M):
        return None
    if g.n > N:
        return None
    if N < 4 * d * M + 6:
        host = cycle_graph(N)
        return brute_force_embed(g, dg, host, all_pairs_distances(host), d,
                                 budget=budget)
    if N > 4 * d * M * g.n:
        span = 2 * d * M * g.n
        line_map = _embed_into_line_map(g, dg, span, d, invariant_checks)
        if line_map is None:
            return None
        return _verified_cycle_embedding(g, dg, N, d,
                                         {v: p - 1 for v, p in line_map.items()})
    engine = _WindowEngine(g, dg, d, "cycle", N, invariant_checks)
    mids = range(engine.B + 1, N - engine.B)
    for anchor in enumerate_anchors(g, dg, d):
        found = engine.solve(anchor, mids)
        if found is not None:
            return _verified_cycle_embedding(g, dg, N, d, found)
    return None


def _verified_cycle_embedding(g, dg, N, d, mapping) -> Embedding:
    host = cycle_graph(N)
    dh = all_pairs_distances(host)
    emb = Embedding(mapping, g.n)
    violation = verify_nc_distortion(g, host, dg, dh, emb, d)
    if violation is not None:
        raise AssertionError(f"cycle solver produced an invalid witness: {violation}")
    return emb


def embed_weighted_into_cycle(g: Graph, dg: DistanceMatrix, N: int, d: int,
                              budget: SearchBudget = DEFAULT_BUDGET
                              ) -> Optional[Embedding]:
    """Weighted-guest variant: same DP with radius dM+1 and budget 2dM+2."""
    return embed_into_cycle(g, dg, N, d, budget=budget)


# -- public operations: lines --------------------------------------------------


def _validate_line_anchor(anchor: Anchor, N: int, lo: int, hi: int) -> None:
    zlo, zhi = anchor.zone
    if not (1 <= zlo <= zhi <= N) and anchor.mapping:
        raise InputError("anchor zone out of host range")
    if not (lo <= zlo and zhi <= hi):
        raise InputError("anchor zone outside its declared side")
    for _, p in anchor.mapping:
        if not (zlo <= p <= zhi):
            raise InputError(f"anchored position {p} outside zone {anchor.zone}")


def _anchors_jointly_ok(g: Graph, dg: DistanceMatrix, d: int,
                        merged: dict[int, int], pos_metric=None) -> bool:
    items = sorted(merged.items())
    for i, (u, pu) in enumerate(items):
        for v, pv in items[i + 1:]:
            duv = dg.dist(u, v)
            sep = abs(pu - pv) if pos_metric is None else pos_metric(pu, pv)
            if sep < duv or sep > d * duv:
                return False
    return True


def _line_engine_solve(g, dg, N, d, psi1: Anchor, psi2: Anchor,
                       last_vertex: Optional[int] = None,
                       invariant_checks: bool = False,
                       pos_metric=None) -> Optional[dict[int, int]]:
    merged = psi1.as_dict()
    for v, p in psi2.mapping:
        if v in merged:
            raise InputError("anchor domains must be disjoint")
        merged[v] = p
    if len(set(merged.values())) != len(merged):
        return None
    if not _anchors_jointly_ok(g, dg, d, merged, pos_metric):
        return None
    M = g.max_weight()
    z1_end = psi1.zone[1] if psi1.mapping else 0
    z2_start = psi2.zone[0] if psi2.mapping else N + 1
    if z1_end >= z2_start:
        raise InputError("prefix and suffix zones overlap")
    # Window span bound: with both extremes pinned the image span is fixed.
    # Only valid for the genuine line metric.
    positions = [p for _, p in psi1.mapping] + [p for _, p in psi2.mapping]
    if (pos_metric is None and positions and 1 in positions and N in positions
            and N > 2 * d * M * g.n):
        return None

    engine = _WindowEngine(g, dg, d, "line", N, invariant_checks,
                           pos_metric=pos_metric)
    zone = (min(psi1.zone[0] if psi1.mapping else 1,
                psi2.zone[0] if psi2.mapping else N),
            max(psi1.zone[1] if psi1.mapping else 1,
                psi2.zone[1] if psi2.mapping else N))
    anchor = Anchor(tuple(sorted(merged.items())), zone)
    # Valid window mids keep S_a clear of both zones.
    lo_mid = z1_end + engine.R + 1
    hi_mid = z2_start - engine.R - 1
    rest = frozenset(range(g.n)) - anchor.domain()
    if not rest:
        return engine.solve(anchor, range(0), last_vertex=last_vertex)
    if lo_mid > hi_mid:
        return _small_gap_fallback(g, dg, d, N, merged, z1_end, z2_start,
                                   last_vertex, pos_metric)
    # The engine's feasibility check tests zone overlap from anchor.zone,
    # which for two zones is handled by the mid range restriction here.
    return _two_zone_solve(engine, psi1, psi2, merged, range(lo_mid, hi_mid + 1),
                           last_vertex)


def _two_zone_solve(engine: _WindowEngine, psi1: Anchor, psi2: Anchor,
                    merged: dict[int, int], mids: range,
                    last_vertex: Optional[int]) -> Optional[dict[int, int]]:
    zone = (psi1.zone if psi1.mapping else (1, 0))
    anchor = Anchor(tuple(sorted(merged.items())), zone)
    return engine.solve(anchor, mids, last_vertex=last_vertex)


def _small_gap_fallback(g, dg, d, N, merged, z1_end, z2_start,
                        last_vertex, pos_metric=None) -> Optional[dict[int, int]]:
    """Free region narrower than a window: place the rest by backtracking."""
    free_vs = sorted(set(range(g.n)) - set(merged))
    free_ps = [p for p in range(z1_end + 1, z2_start)]
    if len(free_vs) > len(free_ps):
        return None
    assignment = dict(merged)

    def ok(v, p) -> bool:
        for u, q in assignment.items():
            duv = dg.dist(u, v)
            sep = abs(p - q) if pos_metric is None else pos_metric(p, q)
            if sep < duv or sep > d * duv:
                return False
        return True

    def place(i: int) -> bool:
        if i == len(free_vs):
            if last_vertex is not None:
                top = max(assignment.values())
                if assignment.get(last_vertex) != top:
                    return False
            return True
        v = free_vs[i]
        for p in free_ps:
            if p in assignment.values() or not ok(v, p):
                continue
            assignment[v] = p
            if place(i + 1):
                return True
            del assignment[v]
        return False

    return dict(assignment) if place(0) else None


def embed_line_fixed_ends(g: Graph, dg: DistanceMatrix, N: int, d: int,
                          psi1: Anchor, psi2: Anchor,
                          invariant_checks: bool = False) -> Optional[Embedding]:
    """Extend prefix/suffix anchors to a full embedding into the line 1..N.

    Unanchored vertices are placed strictly between the two zones.  Returns
    the embedding (positions 1..N) or None.
    """
    if d < 1:
        raise InputError("distortion must be >= 1")
    if psi1.mapping:
        _validate_line_anchor(psi1, N, 1, psi1.zone[1])
    if psi2.mapping:
        _validate_line_anchor(psi2, N, psi2.zone[0], N)
    found = _line_engine_solve(g, dg, N, d, psi1, psi2,
                               invariant_checks=invariant_checks)
    return _verified_line_embedding(g, dg, N, d, found)


def embed_line_prefix_last(g: Graph, dg: DistanceMatrix, N: int, d: int,
                           psi1: Anchor, last_vertex: int,
                           invariant_checks: bool = False) -> Optional[Embedding]:
    """Extension where `last_vertex` receives the maximum host position."""
    if d < 1:
        raise InputError("distortion must be >= 1")
    if psi1.mapping:
        _validate_line_anchor(psi1, N, 1, psi1.zone[1])
    empty = Anchor((), (N + 1, N))
    found = _line_engine_solve(g, dg, N, d, psi1, empty,
                               last_vertex=last_vertex,
                               invariant_checks=invariant_checks)
    return _verified_line_embedding(g, dg, N, d, found)


def _embed_into_line_map(g: Graph, dg: DistanceMatrix, N: int, d: int,
                         invariant_checks: bool = False
                         ) -> Optional[dict[int, int]]:
    """No-anchor line embedding; WLOG some vertex maps to position 1."""
    M = g.max_weight()
    if not degree_gate(g.max_degree(), 2, d * M):
        return None
    if g.n > N:
        return None
    radius = d * M + 1
    span = min(N, 2 * radius + 1)
    for verts, offsets in _enumerate_shapes(g, dg, d, radius):
        if offsets[0] != 0 or offsets[-1] >= span:
            continue
        mapping = {v: 1 + o for v, o in zip(verts, offsets)}
        psi1 = Anchor.make(mapping, (1, span))
        empty = Anchor((), (N + 1, N))
        found = _line_engine_solve(g, dg, N, d, psi1, empty,
                                   invariant_checks=invariant_checks)
        if found is not None:
            return found
    return None


def embed_into_line(g: Graph, dg: DistanceMatrix, N: int, d: int,
                    invariant_checks: bool = False) -> Optional[Embedding]:
    """Non-contracting distortion-d embedding into the line 1..N."""
    if d < 1:
        raise InputError("distortion must be >= 1")
    if not g.is_connected():
        raise InputError("guest must be connected")
    found = _embed_into_line_map(g, dg, N, d, invariant_checks)
    return _verified_line_embedding(g, dg, N, d, found)


def _verified_line_embedding(g, dg, N, d, mapping) -> Optional[Embedding]:
    if mapping is None:
        return None
    from .graph import path_graph
    host = path_graph(N)
    shifted = {v: p - 1 for v, p in mapping.items()}
    emb = Embedding(shifted, g.n)
    violation = verify_nc_distortion(g, host, dg, all_pairs_distances(host), emb, d)
    if violation is not None:
        raise AssertionError(f"line solver produced an invalid witness: {violation}")
    return Embedding(dict(mapping.items()), g.n)
