"""Tree decompositions: validation, nice form, construction, PACE files.

Decomposition construction is deliberately plain: exact minimum width by
elimination-order DP for hosts up to 12 vertices, min-degree heuristic
beyond (the resulting width is measured and reported, never assumed).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError
from .graph import DistanceMatrix, Graph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass
class TreeDecomposition:
    """Bags indexed 0..k-1 plus tree edges between bag indices."""

    bags: list[frozenset[int]]
    tree_edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def validate(self, g: Graph) -> None:
        """Check the three tree-decomposition axioms against g."""
        k = len(self.bags)
        for a, b in self.tree_edges:
            if not (0 <= a < k and 0 <= b < k):
                raise InputError("decomposition edge references a missing bag")
        if k and len(self.tree_edges) != k - 1:
            raise InputError("decomposition tree must have exactly #bags-1 edges")
        adj = self.neighbors()
        if k:
            seen = {0}
            stack = [0]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != k:
                raise InputError("decomposition tree is disconnected")
        covered = set().union(*self.bags) if self.bags else set()
        if covered != set(range(g.n)):
            raise InputError("bags do not cover every host vertex")
        for u, v in g.edges():
            if not any(u in b and v in b for b in self.bags):
                raise InputError(f"edge ({u},{v}) is in no bag")
        for x in range(g.n):
            holding = [i for i, b in enumerate(self.bags) if x in b]
            # nodes holding x must induce a connected subtree
            seen = {holding[0]}
            stack = [holding[0]]
            hold = set(holding)
            while stack:
                for w in adj[stack.pop()]:
                    if w in hold and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if seen != hold:
                raise InputError(f"bags containing vertex {x} do not form a subtree")


@dataclass
class NiceTreeDecomposition:
    """Rooted binary decomposition with empty root/leaf bags.

    parent[root] == -1; kinds follow the standard leaf/introduce/forget/join
    taxonomy.
    """

    bags: list[frozenset[int]]
    parent: list[int]
    kinds: list[str]
    root: int
    children: list[list[int]] = field(init=False)

    def __post_init__(self):
        self.children = [[] for _ in self.bags]
        for v, p in enumerate(self.parent):
            if p >= 0:
                self.children[p].append(v)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=1) - 1

    def postorder(self) -> list[int]:
        order: list[int] = []
        stack = [self.root]
        while stack:
            u = stack.pop()
            order.append(u)
            stack.extend(self.children[u])
        order.reverse()
        return order

    def neighbors(self, u: int) -> list[int]:
        out = list(self.children[u])
        if self.parent[u] >= 0:
            out.append(self.parent[u])
        return out

    def validate(self, g: Graph) -> None:
        edges = [(u, self.parent[u]) for u in range(len(self.bags))
                 if self.parent[u] >= 0]
        TreeDecomposition(self.bags, edges).validate(g)
        if self.bags[self.root]:
            raise InputError("root bag must be empty")
        for u, kind in enumerate(self.kinds):
            kids = self.children[u]
            if kind == LEAF:
                if kids or self.bags[u]:
                    raise InputError("leaf nodes carry empty bags and no children")
            elif kind == INTRODUCE:
                if len(kids) != 1 or len(self.bags[u]) != len(self.bags[kids[0]]) + 1 \
                        or not self.bags[u] > self.bags[kids[0]]:
                    raise InputError(f"bad introduce node {u}")
            elif kind == FORGET:
                if len(kids) != 1 or len(self.bags[u]) != len(self.bags[kids[0]]) - 1 \
                        or not self.bags[u] < self.bags[kids[0]]:
                    raise InputError(f"bad forget node {u}")
            elif kind == JOIN:
                if len(kids) != 2 or any(self.bags[k] != self.bags[u] for k in kids):
                    raise InputError(f"bad join node {u}")
            else:
                raise InputError(f"unknown node kind {kind!r}")


def make_nice(td: TreeDecomposition, g: Graph) -> NiceTreeDecomposition:
    """Equivalent nice decomposition of the same width."""
    td.validate(g)
    if not td.bags:
        raise InputError("empty decomposition")

    bags: list[frozenset[int]] = []
    parent: list[int] = []
    kinds: list[str] = []

    def new_node(bag: frozenset[int], kind: str, par: int) -> int:
        bags.append(bag)
        parent.append(par)
        kinds.append(kind)
        return len(bags) - 1

    def chain_to(par: int, frm: frozenset[int], to: frozenset[int]) -> int:
        """Forget/introduce chain below `par`, transforming `to` up into `frm`.

        Nodes are created top-down: the node directly under `par` has bag
        one step away from `frm`, and the returned node carries bag `to`.
        """
        cur_bag = frm
        cur_par = par
        for x in sorted(frm - to, reverse=True):
            cur_bag = cur_bag - {x}
            cur_par = new_node(cur_bag, INTRODUCE, cur_par)
            # parent introduces x relative to this child
        for x in sorted(to - frm):
            cur_bag = cur_bag | {x}
            cur_par = new_node(cur_bag, FORGET, cur_par)
        return cur_par

    adj = td.neighbors()

    def build(node: int, prev: int, par: int) -> None:
        """Emit the subtree of decomposition node `node` under nice node `par`
        whose bag already equals td.bags[node]."""
        kids = [w for w in adj[node] if w != prev]
        if not kids:
            # close the branch: introduce steps down to the empty leaf
            cur = par
            bag = td.bags[node]
            for x in sorted(bag, reverse=True):
                bag = bag - {x}
                cur = new_node(bag, INTRODUCE, cur)
            return
        if len(kids) == 1:
            mid = chain_to(par, td.bags[node], td.bags[kids[0]])
            build(kids[0], node, mid)
            return
        # join: split children two ways, bag repeated
        left = new_node(td.bags[node], JOIN, par)
        right = new_node(td.bags[node], JOIN, par)
        kinds[par] = JOIN
        mid = chain_to(left, td.bags[node], td.bags[kids[0]])
        build(kids[0], node, mid)
        # remaining children hang off the right copy
        if len(kids) == 2:
            mid = chain_to(right, td.bags[node], td.bags[kids[1]])
            build(kids[1], node, mid)
        else:
            _build_multi(node, prev, right, kids[1:])

    def _build_multi(node: int, prev: int, par: int, kids: list[int]) -> None:
        if len(kids) == 1:
            mid = chain_to(par, td.bags[node], td.bags[kids[0]])
            build(kids[0], node, mid)
            return
        left = new_node(td.bags[node], JOIN, par)
        right = new_node(td.bags[node], JOIN, par)
        kinds[par] = JOIN
        mid = chain_to(left, td.bags[node], td.bags[kids[0]])
        build(kids[0], node, mid)
        _build_multi(node, prev, right, kids[1:])

    # root: pick decomposition node 0, forget everything above it
    root = new_node(frozenset(), FORGET, -1)
    top = chain_to(root, frozenset(), td.bags[0])
    build(0, -1, top)

    # fix up kinds: recompute from structure (chain bookkeeping above is
    # easier to settle in one pass here)
    ntd = NiceTreeDecomposition(bags, parent, [""] * len(bags), root)
    for u in range(len(bags)):
        kids = ntd.children[u]
        if not kids:
            ntd.kinds[u] = LEAF
            if bags[u]:
                raise AssertionError("non-empty leaf produced by make_nice")
        elif len(kids) == 2:
            ntd.kinds[u] = JOIN
        else:
            child = kids[0]
            if len(bags[u]) == len(bags[child]) + 1:
                ntd.kinds[u] = INTRODUCE
            elif len(bags[u]) == len(bags[child]) - 1:
                ntd.kinds[u] = FORGET
            else:
                raise AssertionError("bad chain step in make_nice")
    ntd.validate(g)
    if ntd.width != td.width:
        raise AssertionError("make_nice changed the width")
    return ntd


# -- construction -------------------------------------------------------------


def _fill_neighbors(g: Graph, v: int, alive: set[int]) -> set[int]:
    """Neighbors of v once eliminated vertices are contracted away.

    Returns the members of `alive` reachable from v via paths whose interior
    avoids `alive`; this is v's bag when eliminated at this point.
    """
    seen = {v}
    out: set[int] = set()
    stack = [v]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w in alive:
                out.add(w)
            else:
                stack.append(w)
    return out


def _width_of_order(g: Graph, order: Sequence[int]) -> int:
    alive = set(range(g.n))
    width = 0
    for v in order:
        alive.discard(v)
        width = max(width, len(_fill_neighbors(g, v, alive)))
    return width


def _exact_elimination_order(g: Graph) -> list[int]:
    """Optimal elimination order by DP over eliminated subsets (n <= 12)."""
    n = g.n
    full = (1 << n) - 1
    best = {0: 0}
    choice: dict[int, int] = {}
    masks_by_count: list[list[int]] = [[] for _ in range(n + 1)]
    for mask in range(full + 1):
        masks_by_count[bin(mask).count("1")].append(mask)
    for count in range(n):
        for mask in masks_by_count[count]:
            if mask not in best:
                continue
            base = best[mask]
            for v in range(n):
                bit = 1 << v
                if mask & bit:
                    continue
                alive = {u for u in range(n) if not (mask | bit) & (1 << u)}
                deg = len(_fill_neighbors(g, v, alive))
                cost = max(base, deg)
                nxt = mask | bit
                if cost < best.get(nxt, n + 1):
                    best[nxt] = cost
                    choice[nxt] = v
    order: list[int] = []
    mask = full
    while mask:
        v = choice[mask]
        order.append(v)
        mask &= ~(1 << v)
    order.reverse()
    return order


def _min_degree_order(g: Graph) -> list[int]:
    alive = set(range(g.n))
    order = []
    while alive:
        v = min(alive, key=lambda u: (len(_fill_neighbors(g, u, alive - {u})), u))
        order.append(v)
        alive.discard(v)
    return order


def decomposition_from_order(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Standard bags-from-elimination-order construction."""
    if g.n == 0:
        return TreeDecomposition([frozenset()], [])
    pos = {v: i for i, v in enumerate(order)}
    alive = set(range(g.n))
    bags: list[frozenset[int]] = []
    bag_of: dict[int, int] = {}
    edges: list[tuple[int, int]] = []
    for v in order:
        alive.discard(v)
        bags.append(frozenset(_fill_neighbors(g, v, alive) | {v}))
        bag_of[v] = len(bags) - 1
    for i, v in enumerate(order):
        later = [u for u in bags[i] if u != v]
        if later:
            anchor = min(later, key=lambda u: pos[u])
            edges.append((i, bag_of[anchor]))
    td = TreeDecomposition(bags, edges)
    td.validate(g)
    return td


EXACT_LIMIT = 12


def build_decomposition(g: Graph) -> TreeDecomposition:
    """Minimum-width decomposition for small hosts, min-degree beyond."""
    if g.n == 0:
        return TreeDecomposition([frozenset()], [])
    order = (_exact_elimination_order(g) if g.n <= EXACT_LIMIT
             else _min_degree_order(g))
    return decomposition_from_order(g, order)


# -- ball unions ---------------------------------------------------------------


def ball_union(h: Graph, dh: DistanceMatrix, bag: frozenset[int], r: int
               ) -> frozenset[int]:
    """Union of radius-r balls around the bag members."""
    return frozenset(x for x in range(h.n)
                     if any(dh.dist(x, b) <= r for b in bag))


# -- PACE-style files ----------------------------------------------------------


def parse_pace(text: str, host_labels: Optional[Sequence[int]] = None
               ) -> TreeDecomposition:
    """Parse "s td <#bags> <width+1> <N>" / "b <id> <v...>" / edge lines.

    Bag ids are 1-based per PACE convention.  Bag contents use the host
    file's vertex labels; `host_labels` (the re-index record from the host
    parse) translates them to dense ids.
    """
    header = None
    raw_bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    translate = None
    if host_labels is not None:
        translate = {lab: i for i, lab in enumerate(host_labels)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise InputError(f"line {lineno}: duplicate 's td' header")
            if len(parts) != 5 or parts[1] != "td":
                raise InputError(f"line {lineno}: malformed header")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            if header is None:
                raise InputError(f"line {lineno}: bag before header")
            try:
                bag_id = int(parts[1])
                verts = [int(x) for x in parts[2:]]
            except ValueError:
                raise InputError(f"line {lineno}: non-integer bag entry") from None
            if translate is not None:
                try:
                    verts = [translate[x] for x in verts]
                except KeyError as exc:
                    raise InputError(
                        f"line {lineno}: unknown host vertex {exc.args[0]}") from None
            raw_bags[bag_id] = frozenset(verts)
        else:
            if len(parts) != 2:
                raise InputError(f"line {lineno}: malformed decomposition edge")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise InputError(f"line {lineno}: non-integer edge") from None
    if header is None:
        raise InputError("missing 's td' header")
    n_bags = header[0]
    if set(raw_bags) != set(range(1, n_bags + 1)):
        raise InputError("bag ids must be exactly 1..#bags")
    bags = [raw_bags[i] for i in range(1, n_bags + 1)]
    dense_edges = [(a - 1, b - 1) for a, b in edges]
    return TreeDecomposition(bags, dense_edges)


def write_pace(td: TreeDecomposition, n_host: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n_host}"]
    for i, bag in enumerate(td.bags, 1):
        lines.append("b " + " ".join([str(i)] + [str(v) for v in sorted(bag)]))
    for a, b in td.tree_edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"
