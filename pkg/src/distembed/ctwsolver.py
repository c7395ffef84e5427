"""General (injective) embedding into hosts of bounded connected treewidth.

Window machinery is shared with the bijective solver; what changes is that
local non-contraction no longer implies global non-contraction, so each
state additionally carries type-lists: per decomposition side, the
beta-truncated distance profiles D_H(F(x), bag vertex) - D_G(x, y) of every
guest vertex committed to that side, indexed by the side's window vertices.
Lists built at a child transfer to the parent through four min/max rules,
profiles of freshly committed vertices are added directly, and lists of
different sides must pairwise agree.  States compose bottom-up over the
nice decomposition; assembled fragments are distance-verified incrementally
so the verdict is exact at desk scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional, Union

from .embedding import Embedding, verify_nc_distortion
from .errors import InputError
from .graph import DistanceMatrix, Graph, all_pairs_distances, components_after_removal
from .treedecomp import (NiceTreeDecomposition, TreeDecomposition, make_nice)
from .twsolver import TwContext, TwPartialEmbedding, tw_feasible, tw_succeeds

INF = math.inf


def beta(k, gamma: int, d: int):
    """Truncation bounding the type alphabet: values >= 2*gamma+3d+3 become inf."""
    if k is INF:
        return INF
    return k if k < 2 * gamma + 3 * d + 3 else INF


# -- connectified decompositions ----------------------------------------------


@dataclass
class ConnectedNiceDecomposition:
    nice: NiceTreeDecomposition
    connected_td: TreeDecomposition
    gamma: int
    width: int
    longest_geodesic_cycle: Optional[int]


def lex_shortest_path(h: Graph, dh: DistanceMatrix, a: int, b: int) -> list[int]:
    """Lexicographically least shortest a-b path (ties broken by vertex id)."""
    path = [a]
    cur = a
    while cur != b:
        cur = min(w for w in h.adj[cur] if dh.dist(w, b) == dh.dist(cur, b) - 1)
        path.append(cur)
    return path


def longest_geodesic_cycle(h: Graph) -> Optional[int]:
    """Length of the longest induced cycle; None when the host is too big."""
    if h.n > 16:
        return None
    best = None
    adj = [set(a) for a in h.adj]
    for mask in range(1, 1 << h.n):
        verts = [v for v in range(h.n) if mask >> v & 1]
        if len(verts) < 3:
            continue
        vs = set(verts)
        if any(len(adj[v] & vs) != 2 for v in verts):
            continue
        # all degrees two inside: a disjoint union of cycles; need exactly one
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            for w in adj[stack.pop()] & vs:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == len(verts):
            if best is None or len(verts) > best:
                best = len(verts)
    return best


def _bag_components(h: Graph, bag: frozenset[int]) -> list[frozenset[int]]:
    comps = []
    remaining = set(bag)
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            for w in h.adj[stack.pop()]:
                if w in remaining and w not in comp:
                    comp.add(w)
                    stack.append(w)
        comps.append(frozenset(comp))
        remaining -= comp
    return sorted(comps, key=min)


def connectify(decomposition: Union[TreeDecomposition, NiceTreeDecomposition],
               h: Graph, dh: DistanceMatrix) -> ConnectedNiceDecomposition:
    """Greedy bag connectification with verified axioms and measured width.

    Bags gain lexicographically-least geodesics until each induces a
    connected host subgraph; the subtree property is repaired by closure and
    the loop re-runs until a fixpoint.  Width may grow; it is measured and
    reported, never hidden.
    """
    if not h.is_connected():
        raise InputError("connectified decompositions need a connected host")
    if isinstance(decomposition, NiceTreeDecomposition):
        edges = [(u, decomposition.parent[u]) for u in range(len(decomposition.bags))
                 if decomposition.parent[u] >= 0]
        td = TreeDecomposition(list(decomposition.bags), edges)
    else:
        td = TreeDecomposition(list(decomposition.bags),
                               list(decomposition.tree_edges))

    bags = [set(b) for b in td.bags]
    adj = td.neighbors()

    def close_subtrees() -> None:
        for x in range(h.n):
            holding = [i for i, b in enumerate(bags) if x in b]
            if len(holding) <= 1:
                continue
            anchor = holding[0]
            for other in holding[1:]:
                # walk the tree path anchor..other, adding x along the way
                prev = {anchor: -1}
                stack = [anchor]
                while stack:
                    node = stack.pop()
                    if node == other:
                        break
                    for w in adj[node]:
                        if w not in prev:
                            prev[w] = node
                            stack.append(w)
                node = other
                while node != -1:
                    bags[node].add(x)
                    node = prev[node]

    changed = True
    while changed:
        changed = False
        for i, bag in enumerate(bags):
            comps = _bag_components(h, frozenset(bag))
            while len(comps) > 1:
                a = min(comps[0])
                b = min(comps[1])
                for x in lex_shortest_path(h, dh, a, b):
                    bag.add(x)
                changed = True
                comps = _bag_components(h, frozenset(bag))
        if changed:
            close_subtrees()

    connected_td = TreeDecomposition([frozenset(b) for b in bags], td.tree_edges)
    connected_td.validate(h)
    for bag in connected_td.bags:
        if bag and len(_bag_components(h, bag)) != 1:
            raise AssertionError("connectify left a disconnected bag")
    nice = make_nice(connected_td, h)
    gamma = 0
    for bag in nice.bags:
        for a in bag:
            for b in bag:
                gamma = max(gamma, dh.dist(a, b))
    return ConnectedNiceDecomposition(nice, connected_td, gamma,
                                      connected_td.width,
                                      longest_geodesic_cycle(h))


# -- types ---------------------------------------------------------------------


@dataclass(frozen=True)
class TypeList:
    """A [f_u, v] type-list: the bag and side-window orderings plus the set
    of type vectors (one row per bag vertex, one column per window vertex)."""

    bag: tuple[int, ...]
    side_dom: tuple[int, ...]
    types: frozenset  # of tuple[tuple[value, ...], ...]

    def empty(self) -> bool:
        return not self.types


def _profile(image: int, x: int, bag: tuple[int, ...], side_dom: tuple[int, ...],
             dg: DistanceMatrix, dh: DistanceMatrix, gamma: int, d: int) -> tuple:
    return tuple(
        tuple(beta(dh.dist(image, a) - dg.dist(x, y), gamma, d) for y in side_dom)
        for a in bag)


def build_type_list(committed: dict[int, int], bag: tuple[int, ...],
                    side_dom: tuple[int, ...], dg: DistanceMatrix,
                    dh: DistanceMatrix, gamma: int, d: int) -> TypeList:
    """Canonical list per the existence construction: one truncated profile
    per committed vertex (committed = side-window vertices plus everything
    placed beyond that side, with their images)."""
    types = frozenset(
        _profile(hx, x, bag, side_dom, dg, dh, gamma, d)
        for x, hx in committed.items())
    return TypeList(bag, side_dom, types)


def compatible(tl: TypeList, f_u: TwPartialEmbedding, side_dom: tuple[int, ...],
               dg: DistanceMatrix, dh: DistanceMatrix, gamma: int, d: int) -> bool:
    """Every side-window vertex's exact profile appears in the list."""
    if tl.side_dom != side_dom:
        return False
    fmap = f_u.as_dict()
    for x in side_dom:
        want = _profile(fmap[x], x, tl.bag, side_dom, dg, dh, gamma, d)
        if want not in tl.types:
            return False
    return True


def agree(tl1: TypeList, tl2: TypeList, dg: DistanceMatrix) -> bool:
    """Pairwise witness condition between lists of two different sides."""
    if not tl1.types or not tl2.types:
        return True
    for t1 in tl1.types:
        for t2 in tl2.types:
            found = False
            for i, x in enumerate(tl1.side_dom):
                for j, y in enumerate(tl2.side_dom):
                    if all(t1[k][i] + t2[k][j] >= dg.dist(x, y)
                           for k in range(len(tl1.bag))):
                        found = True
                        break
                if found:
                    break
            if not found and tl1.side_dom and tl2.side_dom:
                return False
    return True


def transfer_type(t1: tuple, bag_v: tuple[int, ...], dom_w: tuple[int, ...],
                  bag_u: tuple[int, ...], dom_v: tuple[int, ...],
                  f_images: dict[int, int], dg: DistanceMatrix,
                  dh: DistanceMatrix, gamma: int, d: int) -> Optional[tuple]:
    """Re-express a [f_v,w] type as a [f_u,v] type (the four beta rules).

    Returns None when the transfer is undefined (empty source window for a
    vertex outside it).
    """
    w_index = {y: j for j, y in enumerate(dom_w)}
    v_set = set(bag_v)
    rows = []
    for a in bag_u:
        row = []
        for x in dom_v:
            if x in w_index:
                if a in v_set:
                    val = t1[bag_v.index(a)][w_index[x]]
                else:
                    val = beta(min(dh.dist(a, b) + t1[k][w_index[x]]
                                   for k, b in enumerate(bag_v)), gamma, d)
            else:
                if not dom_w:
                    return None
                if a in v_set:
                    val = beta(max(t1[bag_v.index(a)][j] - dg.dist(x, y)
                                   for j, y in enumerate(dom_w)), gamma, d)
                else:
                    val = beta(max(
                        min(dh.dist(a, b) + t1[k][j] for k, b in enumerate(bag_v))
                        - dg.dist(x, y)
                        for j, y in enumerate(dom_w)), gamma, d)
            row.append(val)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class CtwState:
    """A u-state: feasible window plus one type-list per child side."""

    window: TwPartialEmbedding
    lists: tuple[tuple[int, TypeList], ...]  # (child node, list), sorted

    def list_for(self, child: int) -> Optional[TypeList]:
        for c, tl in self.lists:
            if c == child:
                return tl
        return None


def state_succeeds(s_u: CtwState, s_v: CtwState, ctx: TwContext, gamma: int,
                   parent_list_v: Optional[TypeList] = None,
                   other_lists_u: tuple[TypeList, ...] = ()) -> bool:
    """Succession of child state s_v under parent state s_u.

    Checks window succession plus the upward type transfers: every type of a
    child-side list must transfer (via the four beta rules) to a type of the
    parent's list for that child.  When the child's parent-side list and the
    parent's remaining lists are supplied, the downward transfers are checked
    symmetrically.
    """
    f_u, f_v = s_u.window, s_v.window
    if not tw_succeeds(f_u, f_v, ctx):
        return False
    u, v = f_u.node, f_v.node
    bag_u = tuple(sorted(ctx.ntd.bags[u]))
    bag_v = tuple(sorted(ctx.ntd.bags[v]))
    dom_uv = _side_dom(ctx, f_u, v)
    parent_tl_u = s_u.list_for(v)
    if parent_tl_u is None:
        return False
    for w, tl_child in s_v.lists:
        for t1 in tl_child.types:
            t2 = transfer_type(t1, bag_v, tl_child.side_dom, bag_u, dom_uv,
                               f_v.as_dict(), ctx.dg, ctx.dh, gamma, ctx.d)
            if t2 is None or t2 not in parent_tl_u.types:
                return False
    if parent_list_v is not None:
        dom_vu = _side_dom(ctx, f_v, u)
        for tl_other in other_lists_u:
            for t1 in tl_other.types:
                t2 = transfer_type(t1, bag_u, tl_other.side_dom, bag_v, dom_vu,
                                   f_u.as_dict(), ctx.dg, ctx.dh, gamma, ctx.d)
                if t2 is None or t2 not in parent_list_v.types:
                    return False
    return True


def _side_dom(ctx: TwContext, f: TwPartialEmbedding, nb: int) -> tuple[int, ...]:
    side = ctx.side_sets[f.node][nb]
    return tuple(sorted(x for x, hx in f.items if hx in side))


# -- the DP ---------------------------------------------------------------------


def embed_ctw(g: Graph, h: Graph, cnd: ConnectedNiceDecomposition, d: int,
              dg: Optional[DistanceMatrix] = None,
              dh: Optional[DistanceMatrix] = None) -> Optional[Embedding]:
    """Non-contracting distortion-d embedding (injective, not bijective).

    Bottom-up over states; fragments are merged with incremental pairwise
    distance checks, so every surviving root state is a verified embedding.
    """
    from .graph import degree_gate
    if d < 1:
        raise InputError("distortion must be >= 1")
    if not g.is_connected():
        raise InputError("guest must be connected")
    if not degree_gate(g.max_degree(), h.max_degree(), d):
        return None
    dg = dg if dg is not None else all_pairs_distances(g)
    dh = dh if dh is not None else all_pairs_distances(h)
    ntd = cnd.nice
    gamma = cnd.gamma
    ctx = TwContext(g, dg, h, dh, ntd, d)
    full = frozenset(range(g.n))

    def cross_ok(frag: dict[int, int], new: dict[int, int]) -> bool:
        for x, hx in new.items():
            for z, hz in frag.items():
                if z == x:
                    if hz != hx:
                        return False
                    continue
                dxz = dg.dist(x, z)
                hxz = dh.dist(hx, hz)
                if hxz < dxz or hxz > d * dxz:
                    return False
        return True

    # table[u]: list of (state, fragment)
    table: list[list[tuple[CtwState, dict[int, int]]]] = [[] for _ in ntd.bags]

    for u in ntd.postorder():
        kids = ntd.children[u]
        bag_u = tuple(sorted(ntd.bags[u]))
        out: list[tuple[CtwState, dict[int, int]]] = []
        seen: set[tuple] = set()
        for f_u in ctx.windows(u, surjective=False):
            if not tw_feasible(f_u, ctx):
                continue
            msets_u = ctx.m_sets(f_u)
            if msets_u is None:
                continue
            dom_u = f_u.domain()
            fmap_u = f_u.as_dict()
            if not kids:
                st = CtwState(f_u, ())
                key = (f_u.items, ())
                if key not in seen:
                    seen.add(key)
                    out.append((st, dict(fmap_u)))
                continue
            per_child: list[list[tuple[CtwState, dict[int, int]]]] = []
            viable = True
            for c in kids:
                cands = []
                for (s_c, frag_c) in table[c]:
                    if not tw_succeeds(f_u, s_c.window, ctx):
                        continue
                    covered_c = frozenset(frag_c)
                    if dom_u and covered_c - dom_u != msets_u[c]:
                        continue
                    if not cross_ok(frag_c, fmap_u):
                        continue
                    cands.append((s_c, frag_c))
                if not cands:
                    viable = False
                    break
                per_child.append(cands)
            if not viable:
                continue
            for combo in product(*per_child):
                frag = dict(fmap_u)
                clash = False
                for s_c, frag_c in combo:
                    if not cross_ok(frag, frag_c):
                        clash = True
                        break
                    frag.update(frag_c)
                if clash:
                    continue
                lists = []
                for c, (s_c, frag_c) in zip(kids, combo):
                    dom_uc = set(_side_dom(ctx, f_u, c))
                    committed = {x: hx for x, hx in frag_c.items()
                                 if x not in dom_u}
                    committed.update({x: fmap_u[x] for x in dom_uc})
                    dom_uc_t = tuple(sorted(dom_uc))
                    tl = build_type_list(committed, bag_u, dom_uc_t, dg, dh,
                                         gamma, d)
                    if not compatible(tl, f_u, dom_uc_t, dg, dh, gamma, d):
                        clash = True
                        break
                    lists.append((c, tl))
                if clash:
                    continue
                ok = True
                for i in range(len(lists)):
                    for j in range(i + 1, len(lists)):
                        if not agree(lists[i][1], lists[j][1], dg):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                state = CtwState(f_u, tuple(sorted(lists)))
                key = (f_u.items, tuple(sorted(frag.items())))
                if key in seen:
                    continue
                seen.add(key)
                out.append((state, frag))
        table[u] = out

    for state, frag in sorted(table[ntd.root],
                              key=lambda sf: sorted(sf[1].items())):
        if frozenset(frag) != full:
            continue
        emb = Embedding(frag, g.n)
        violation = verify_nc_distortion(g, h, dg, dh, emb, d)
        if violation is not None:
            raise AssertionError(f"ctw DP produced an invalid witness: {violation}")
        return emb
    return None
