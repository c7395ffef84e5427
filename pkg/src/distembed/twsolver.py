"""Bijective embedding into bounded-treewidth hosts via a nice-decomposition DP.

Each decomposition node u carries windows: partial embeddings of guest
subsets into the ball B(u,d+1) around the bag.  A window must act like an
embedding locally, residual guest components may hang off at most one
decomposition side each, and windows at adjacent nodes must be restrictions
of one another on the shared ball.  Side bookkeeping ("M-sets": which guest
components are committed beyond the ball on each side) decomposes exactly
across tree edges, which forces every guest vertex to be placed exactly
once.

The succession relation used here is the restriction-consistency one: a
vertex of either window whose image lies in the other window's ball must
belong to that window too, with the same image.  Frontier bookkeeping then
equates a parent-side M-set with the child's M-sets plus the domain
difference.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .embedding import Embedding, verify_nc_distortion
from .errors import InputError
from .graph import DistanceMatrix, Graph, components_after_removal, degree_gate
from .treedecomp import NiceTreeDecomposition, ball_union


@dataclass(frozen=True)
class TwPartialEmbedding:
    """Window at a decomposition node: sorted (guest, host) pairs."""

    node: int
    items: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def domain(self) -> frozenset[int]:
        return frozenset(v for v, _ in self.items)

    def dom_slice(self, dh: DistanceMatrix, bag: frozenset[int], lo: int, hi: int
                  ) -> frozenset[int]:
        """Vertices whose image sits at min-distance [lo,hi] from the bag."""
        out = []
        for v, hv in self.items:
            dist = min((dh.dist(hv, b) for b in bag), default=0)
            if lo <= dist <= hi:
                out.append(v)
        return frozenset(out)


class TwContext:
    """Per-instance caches: balls, decomposition side sets, window lists."""

    def __init__(self, g: Graph, dg: DistanceMatrix, h: Graph, dh: DistanceMatrix,
                 ntd: NiceTreeDecomposition, d: int,
                 codomain: Optional[frozenset[int]] = None):
        self.g, self.dg, self.h, self.dh, self.ntd, self.d = g, dg, h, dh, ntd, d
        self.codomain = frozenset(range(h.n)) if codomain is None else codomain
        self.balls = [ball_union(h, dh, bag, d + 1) for bag in ntd.bags]
        self._compute_sides()
        self._window_cache: dict[frozenset[int], list[tuple]] = {}

    def _compute_sides(self) -> None:
        ntd = self.ntd
        n_nodes = len(ntd.bags)
        sub_union: list[frozenset[int]] = [frozenset()] * n_nodes
        for u in ntd.postorder():
            acc = ntd.bags[u]
            for c in ntd.children[u]:
                acc |= sub_union[c]
            sub_union[u] = acc
        up_union: list[frozenset[int]] = [frozenset()] * n_nodes
        order = ntd.postorder()[::-1]  # root first
        for u in order:
            for c in ntd.children[u]:
                others = frozenset()
                for s in ntd.children[u]:
                    if s != c:
                        others |= sub_union[s]
                up_union[c] = ntd.bags[u] | up_union[u] | others
        # side_sets[u][v] = host vertices on the v side of u
        self.side_sets: list[dict[int, frozenset[int]]] = [dict() for _ in range(n_nodes)]
        for u in range(n_nodes):
            for c in ntd.children[u]:
                self.side_sets[u][c] = sub_union[c]
            p = ntd.parent[u]
            if p >= 0:
                self.side_sets[u][p] = up_union[u]

    # -- window enumeration -------------------------------------------------

    def windows(self, u: int, surjective: bool) -> list[TwPartialEmbedding]:
        """Pairwise-valid injective maps into ball(u) [onto it when bijective]."""
        ball = frozenset(sorted(self.balls[u] & self.codomain))
        key = ball
        if key not in self._window_cache:
            self._window_cache[key] = self._enumerate_maps(ball)
        out = []
        want = len(ball)
        for items in self._window_cache[key]:
            if surjective and len(items) != want:
                continue
            out.append(TwPartialEmbedding(u, items))
        return out

    def _enumerate_maps(self, ball: frozenset[int]) -> list[tuple]:
        g, dg, dh, d = self.g, self.dg, self.dh, self.d
        hosts = sorted(ball)
        results: list[tuple] = []
        assignment: list[tuple[int, int]] = []
        used: set[int] = set()

        def ok(v: int, hv: int) -> bool:
            for u, hu in assignment:
                duv = dg.dist(u, v)
                dhuv = dh.dist(hu, hv)
                if dhuv < duv or dhuv > d * duv:
                    return False
            return True

        def rec(idx: int) -> None:
            if idx == len(hosts):
                results.append(tuple(sorted(assignment)))
                return
            hv = hosts[idx]
            rec(idx + 1)  # host vertex left uncovered
            for v in range(g.n):
                if v in used or not ok(v, hv):
                    continue
                used.add(v)
                assignment.append((v, hv))
                rec(idx + 1)
                assignment.pop()
                used.discard(v)

        rec(0)
        return results

    # -- M-sets ---------------------------------------------------------------

    def side_of_image(self, u: int, hv: int) -> Optional[int]:
        """The unique neighbor side holding host vertex hv, None if in the bag."""
        if hv in self.ntd.bags[u]:
            return None
        for v, side in self.side_sets[u].items():
            if hv in side:
                return v
        return None

    def m_sets(self, f: TwPartialEmbedding) -> Optional[dict[int, frozenset[int]]]:
        """M[f,v] per neighbor v, or None when some component touches two
        sides or the bag (feasibility condition (ii) fails)."""
        u = f.node
        dom = f.domain()
        comps = components_after_removal(self.g, dom)
        fmap = f.as_dict()
        msets: dict[int, set[int]] = {v: set() for v in self.ntd.neighbors(u)}
        for comp in comps:
            touched: set[Optional[int]] = set()
            for x in comp:
                for nb in self.g.adj[x]:
                    if nb in fmap:
                        touched.add(self.side_of_image(u, fmap[nb]))
            if None in touched:
                # adjacent to a bag image: condition (iii) already fails
                return None
            if len(touched) > 1:
                # one residual component committed to two sides
                return None
            if touched:
                msets[touched.pop()] |= comp
        return {v: frozenset(s) for v, s in msets.items()}


def tw_feasible(f: TwPartialEmbedding, ctx: TwContext) -> bool:
    """Full feasibility: local distortion, closed bag neighbourhoods, and
    pairwise-disjoint side commitments."""
    dom = f.domain()
    fmap = f.as_dict()
    ball = ctx.balls[f.node] & ctx.codomain
    if any(hv not in ball for hv in fmap.values()):
        return False
    items = sorted(fmap.items())
    for i, (u, hu) in enumerate(items):
        for v, hv in items[i + 1:]:
            duv = ctx.dg.dist(u, v)
            dhuv = ctx.dh.dist(hu, hv)
            if dhuv < duv or dhuv > ctx.d * duv:
                return False
    bag = ctx.ntd.bags[f.node]
    for v, hv in fmap.items():
        if hv in bag and any(nb not in dom for nb in ctx.g.adj[v]):
            return False
    return ctx.m_sets(f) is not None


def tw_succeeds(f_u: TwPartialEmbedding, f_v: TwPartialEmbedding,
                ctx: TwContext) -> bool:
    """Succession between parent window f_u and child window f_v.

    Checks restriction consistency in both directions plus the two frontier
    identities tying the parent-side and child-side M-sets together.
    """
    u, v = f_u.node, f_v.node
    if ctx.ntd.parent[v] != u:
        return False
    mu, mv = f_u.as_dict(), f_v.as_dict()
    ball_u, ball_v = ctx.balls[u] & ctx.codomain, ctx.balls[v] & ctx.codomain
    for x, hx in mu.items():
        if hx in ball_v and mv.get(x) != hx:
            return False
    for x, hx in mv.items():
        if hx in ball_u and mu.get(x) != hx:
            return False
    for x in set(mu) & set(mv):
        if mu[x] != mv[x]:
            return False
    msets_u = ctx.m_sets(f_u)
    msets_v = ctx.m_sets(f_v)
    if msets_u is None or msets_v is None:
        return False
    dom_u, dom_v = f_u.domain(), f_v.domain()
    if dom_u:
        below: frozenset[int] = frozenset()
        for w in ctx.ntd.neighbors(v):
            if w != u:
                below |= msets_v[w]
        if msets_u[v] != below | (dom_v - dom_u):
            return False
    if dom_v:
        above = frozenset()
        for w in ctx.ntd.neighbors(u):
            if w != v:
                above |= msets_u[w]
        if msets_v[u] != above | (dom_u - dom_v):
            return False
    return True


def bijective_embed_tw(g: Graph, h: Graph, ntd: NiceTreeDecomposition, d: int,
                       red_set: Optional[frozenset[int]] = None,
                       dg: Optional[DistanceMatrix] = None,
                       dh: Optional[DistanceMatrix] = None
                       ) -> Optional[Embedding]:
    """Bijective non-contracting distortion-d embedding onto V(h) or red_set.

    Bottom-up table over (window, covered guest set) entries; an entry is
    kept when every child admits a succeeding entry whose subtrees place
    exactly the vertices committed to them.  The witness is the union of the
    selected windows and is re-verified before being returned.
    """
    from .graph import all_pairs_distances
    if d < 1:
        raise InputError("distortion must be >= 1")
    if not g.is_connected():
        raise InputError("guest must be connected")
    codomain = frozenset(range(h.n)) if red_set is None else frozenset(red_set)
    if g.n != len(codomain):
        raise InputError("bijective embedding needs |V(G)| == |codomain|")
    if not degree_gate(g.max_degree(), h.max_degree(), d):
        return None
    dg = dg if dg is not None else all_pairs_distances(g)
    dh = dh if dh is not None else all_pairs_distances(h)
    ctx = TwContext(g, dg, h, dh, ntd, d, codomain)
    full = frozenset(range(g.n))

    # table[u]: (window, covered) -> fragment (guest -> host for covered set)
    table: list[dict[tuple[TwPartialEmbedding, frozenset[int]], dict[int, int]]] = [
        dict() for _ in ntd.bags]

    for u in ntd.postorder():
        kids = ntd.children[u]
        entries: dict[tuple[TwPartialEmbedding, frozenset[int]], dict[int, int]] = {}
        for f_u in ctx.windows(u, surjective=True):
            if not tw_feasible(f_u, ctx):
                continue
            msets_u = ctx.m_sets(f_u)
            if msets_u is None:
                continue
            dom_u = f_u.domain()
            fmap_u = f_u.as_dict()
            if not kids:
                entries[(f_u, dom_u)] = dict(fmap_u)
                continue
            # candidate child entries per child, filtered by succession and
            # by the committed-side bookkeeping
            per_child: list[list[tuple[frozenset[int], dict[int, int]]]] = []
            ok = True
            for c in kids:
                cands: list[tuple[frozenset[int], dict[int, int]]] = []
                for (f_c, covered_c), frag_c in table[c].items():
                    if not tw_succeeds(f_u, f_c, ctx):
                        continue
                    # the c subtree must place exactly M[f_u,c] beyond dom_u
                    if dom_u and covered_c - dom_u != msets_u[c]:
                        continue
                    cands.append((covered_c, frag_c))
                if not cands:
                    ok = False
                    break
                per_child.append(cands)
            if not ok:
                continue
            if len(kids) == 1:
                combos = [[cand] for cand in per_child[0]]
            else:
                combos = [[a, b] for a in per_child[0] for b in per_child[1]]
            for combo in combos:
                covered = dom_u
                frag = dict(fmap_u)
                clash = False
                for covered_c, frag_c in combo:
                    if (covered_c - dom_u) & (covered - dom_u):
                        clash = True
                        break
                    for x, hx in frag_c.items():
                        if frag.get(x, hx) != hx:
                            clash = True
                            break
                        frag[x] = hx
                    if clash:
                        break
                    covered |= covered_c
                if clash:
                    continue
                key = (f_u, covered)
                if key not in entries:
                    entries[key] = frag
        table[u] = entries

    for (f_r, covered), frag in sorted(table[ntd.root].items(),
                                       key=lambda kv: sorted(kv[1].items())):
        if covered != full:
            continue
        emb = Embedding(frag, g.n)
        violation = verify_nc_distortion(g, h, dg, dh, emb, d)
        if violation is not None:
            raise AssertionError(f"treewidth DP produced invalid witness: {violation}")
        return emb
    return None
