"""Embedding into generalized theta graphs (k internally disjoint s-t arms).

The driver guesses the embedding restricted to the radius-2d^2 balls around
s and t, classifies the residual guest components by which ball side they
touch, assigns them to arms (a configuration), and solves each arm with the
anchored line machinery: full components by a fixed-ends run over the whole
arm, s-/t-components by the shortest embedding for each candidate last
vertex, short arms by explicit placement.  Arm sub-solves use true host
distances (an arm position pair may be closer through the other arms), and
every assembled candidate is verified exactly before being accepted.

Hosts whose s/t balls overlap (some arm of length <= 4d^2) fall back to the
exhaustive oracle, mirroring the small-N cycle fallback.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .embedding import Embedding, union_embedding, verify_nc_distortion
from .errors import ConflictError, InjectivityError, InputError
from .graph import (DistanceMatrix, Graph, all_pairs_distances,
                    components_after_removal, theta_graph)
from .linecycle import Anchor, _line_engine_solve
from .oracle import DEFAULT_BUDGET, SearchBudget, brute_force_embed

S_VERTEX, T_VERTEX = 0, 1


@dataclass
class ThetaHost:
    graph: Graph
    arms: tuple[int, ...]
    arm_paths: list[list[int]]  # per arm: host ids s .. t
    dh: DistanceMatrix

    @property
    def k(self) -> int:
        return len(self.arms)


def make_theta_host(arms) -> ThetaHost:
    graph, paths = theta_graph(tuple(arms))
    return ThetaHost(graph, tuple(arms), paths, all_pairs_distances(graph))


@dataclass
class ThetaBalls:
    """Radius-d and radius-2d^2 balls and the per-arm truncations."""

    d: int
    bs: frozenset[int]
    bt: frozenset[int]
    bs2: frozenset[int]
    bt2: frozenset[int]
    p_prime: list[list[int]]   # host ids of P_i minus (B_s u B_t)
    p_dprime: list[list[int]]  # host ids of P_i minus (B_s' u B_t')
    s_end: list[Optional[int]]  # endpoint of P_i'' adjacent to B_s', per arm
    t_end: list[Optional[int]]

    def short_arm(self, host: ThetaHost, i: int) -> bool:
        return host.arms[i] < 4 * self.d * self.d + 2 * self.d


def compute_balls(host: ThetaHost, d: int) -> ThetaBalls:
    dh = host.dh
    r2 = 2 * d * d
    bs = frozenset(v for v in range(host.graph.n) if dh.dist(v, S_VERTEX) <= d)
    bt = frozenset(v for v in range(host.graph.n) if dh.dist(v, T_VERTEX) <= d)
    bs2 = frozenset(v for v in range(host.graph.n) if dh.dist(v, S_VERTEX) <= r2)
    bt2 = frozenset(v for v in range(host.graph.n) if dh.dist(v, T_VERTEX) <= r2)
    p_prime, p_dprime, s_end, t_end = [], [], [], []
    for path in host.arm_paths:
        small = [v for v in path if v not in bs and v not in bt]
        big = [v for v in path if v not in bs2 and v not in bt2]
        p_prime.append(small)
        p_dprime.append(big)
        s_end.append(big[0] if big else None)
        t_end.append(big[-1] if big else None)
    return ThetaBalls(d, bs, bt, bs2, bt2, p_prime, p_dprime, s_end, t_end)


# -- anchor enumeration ---------------------------------------------------------


def enumerate_psi(g: Graph, dg: DistanceMatrix, host: ThetaHost, d: int
                  ) -> Iterator[dict[int, int]]:
    """All non-contracting expansion-d maps of guest subsets into B_s' u B_t'.

    Candidate domains come from radius-4d^2 guest balls around guessed
    centers (one per side); requiring each center to be the minimum-id
    member of its side makes the enumeration duplicate-free.  Includes the
    empty map and the one-sided maps.
    """
    balls = compute_balls(host, d)
    dh = host.dh
    s_targets = sorted(balls.bs2)
    t_targets = sorted(balls.bt2)
    reach = 4 * d * d

    def ball_g(c: int) -> frozenset[int]:
        return frozenset(v for v in range(g.n) if dg.dist(c, v) <= reach)

    def side_assignments(targets: list[int], cands: frozenset[int],
                         center: Optional[int], taken: dict[int, int]
                         ) -> Iterator[dict[int, int]]:
        """Injective maps of candidate guests onto a subset of `targets`."""
        out: dict[int, int] = {}

        def ok(v: int, hv: int) -> bool:
            for u, hu in out.items():
                duv = dg.dist(u, v)
                dhuv = dh.dist(hu, hv)
                if dhuv < duv or dhuv > d * duv:
                    return False
            for u, hu in taken.items():
                duv = dg.dist(u, v)
                dhuv = dh.dist(hu, hv)
                if dhuv < duv or dhuv > d * duv:
                    return False
            return True

        def rec(idx: int) -> Iterator[dict[int, int]]:
            if idx == len(targets):
                if center is None or center in out:
                    yield dict(out)
                return
            yield from rec(idx + 1)
            hv = targets[idx]
            if hv in taken.values():
                return
            for v in sorted(cands):
                if v in out or v in taken:
                    continue
                if center is not None and v < center:
                    continue
                if not ok(v, hv):
                    continue
                out[v] = hv
                yield from rec(idx + 1)
                del out[v]

        yield from rec(0)

    for cs in [None] + list(range(g.n)):
        s_cands = ball_g(cs) if cs is not None else frozenset()
        for s_map in side_assignments(s_targets, s_cands, cs, {}):
            if cs is not None and not s_map:
                continue
            for ct in [None] + list(range(g.n)):
                if ct is not None and ct in s_map:
                    continue
                t_cands = ball_g(ct) if ct is not None else frozenset()
                for t_map in side_assignments(t_targets, t_cands, ct, s_map):
                    if ct is not None and not t_map:
                        continue
                    merged = dict(s_map)
                    merged.update(t_map)
                    yield merged


# -- components and configurations ----------------------------------------------


@dataclass(frozen=True)
class ResidualComponent:
    vertices: frozenset[int]
    free: frozenset[int]          # not anchored by psi
    role: str                     # "s" | "t" | "full" | "none"
    pinned_arm: Optional[int]     # arm forced by anchored images, if any


def classify_components(g: Graph, psi: dict[int, int], host: ThetaHost,
                        balls: ThetaBalls) -> Optional[list[ResidualComponent]]:
    """Residual components of G minus the small-ball preimage, with roles.

    Returns None when some residual component is unusable: it touches
    neither side, or its anchored vertices straddle two arms.
    """
    u_set = frozenset(v for v, hv in psi.items()
                      if hv in balls.bs or hv in balls.bt)
    arm_of_host = {}
    for i, path in enumerate(host.arm_paths):
        for hv in path[1:-1]:
            arm_of_host[hv] = i
    out: list[ResidualComponent] = []
    for comp in components_after_removal(g, u_set):
        anchored = {v for v in comp if v in psi}
        free = comp - anchored
        if not free:
            continue  # fully anchored; nothing to place
        touches_s = touches_t = False
        arms: set[int] = set()
        for v in comp:
            if v in psi:
                hv = psi[v]
                if hv in balls.bs2:
                    touches_s = True
                if hv in balls.bt2:
                    touches_t = True
                if hv in arm_of_host:
                    arms.add(arm_of_host[hv])
            for nb in g.adj[v]:
                if nb in u_set:
                    if psi[nb] in balls.bs:
                        touches_s = True
                    if psi[nb] in balls.bt:
                        touches_t = True
        if len(arms) > 1:
            return None
        if touches_s and touches_t:
            role = "full"
        elif touches_s:
            role = "s"
        elif touches_t:
            role = "t"
        else:
            return None  # floating residual component: invalid for this psi
        out.append(ResidualComponent(comp, frozenset(free), role,
                                     arms.pop() if arms else None))
    return out


@dataclass(frozen=True)
class ThetaConfiguration:
    """Assignment of residual components to arms.

    `empty_arms` lists arms with nothing beyond the balls (the paper's
    fully-empty form); `per_arm` maps an arm index to its (form, components)
    where form 1/2 host a single s-/t-component, form 3 an s- and a
    t-component, form 4 a full component, and form 5 nothing.
    """

    empty_arms: frozenset[int]
    per_arm: tuple[tuple[int, int, tuple[ResidualComponent, ...]], ...]


_FORM_BY_ROLES = {("s",): 1, ("t",): 2, ("s", "t"): 3, ("full",): 4, (): 5}


def enumerate_configurations(g: Graph, psi: dict[int, int], host: ThetaHost,
                             d: int, comps: list[ResidualComponent],
                             balls: ThetaBalls) -> list[ThetaConfiguration]:
    """All role-consistent assignments of residual components to arms."""
    k = host.k
    if len(comps) > 2 * k:
        return []
    choices: list[list[int]] = []
    for comp in comps:
        arms = [comp.pinned_arm] if comp.pinned_arm is not None else list(range(k))
        choices.append(arms)
    configs: list[ThetaConfiguration] = []

    def rec(idx: int, assignment: list[int]) -> None:
        if idx == len(comps):
            per_arm: dict[int, list[ResidualComponent]] = {}
            for comp, arm in zip(comps, assignment):
                per_arm.setdefault(arm, []).append(comp)
            arm_entries = []
            for arm, members in sorted(per_arm.items()):
                if len(members) > 2:
                    return
                roles = tuple(sorted(m.role for m in members))
                if balls.short_arm(host, arm):
                    capacity = len(balls.p_dprime[arm])
                    if sum(len(m.free) for m in members) > capacity:
                        return
                    form = _FORM_BY_ROLES.get(roles)
                    if form is None:
                        return
                else:
                    form = _FORM_BY_ROLES.get(roles)
                    if form is None:
                        return
                arm_entries.append((arm, form, tuple(members)))
            empty = frozenset(range(k)) - set(per_arm)
            configs.append(ThetaConfiguration(empty, tuple(arm_entries)))
            return
        for arm in choices[idx]:
            assignment.append(arm)
            rec(idx + 1, assignment)
            assignment.pop()

    rec(0, [])
    return configs


# -- last vertices and shortest embeddings ---------------------------------------


def last_vertex_candidates(comp: frozenset[int], a: int, dg: DistanceMatrix,
                           d: int) -> list[int]:
    """Vertices of the component within d^2 of its maximum distance from a."""
    far = max(dg.dist(a, v) for v in comp)
    return sorted(v for v in comp if dg.dist(a, v) >= far - d * d)


class _ArmProblem:
    """Shared bookkeeping for one arm: positions, anchors, sub-guest."""

    def __init__(self, g: Graph, dg: DistanceMatrix, host: ThetaHost, d: int,
                 psi: dict[int, int], arm: int, reverse: bool = False):
        self.arm = arm
        self.reverse = reverse
        path = host.arm_paths[arm]
        self.path = path[::-1] if reverse else list(path)
        self.length = host.arms[arm]
        self.host = host
        pos_of_host = {hv: q for q, hv in enumerate(self.path)}
        # anchored guests sitting on this arm (s/t themselves included)
        self.anchored: dict[int, int] = {}
        for v, hv in psi.items():
            if hv in pos_of_host:
                self.anchored[v] = pos_of_host[hv]
        self.g, self.dg, self.d = g, dg, d

    def host_id(self, pos: int) -> int:
        return self.path[pos]

    def sub_instance(self, participants: frozenset[int]
                     ) -> tuple[Graph, DistanceMatrix, dict[int, int]]:
        """Induced sub-guest with full-graph distances, plus the id map."""
        order = sorted(participants)
        index = {v: i for i, v in enumerate(order)}
        edges = [(index[u], index[v]) for u, v in self.g.edges()
                 if u in index and v in index]
        sub = Graph(len(order), edges)
        rows = [[self.dg.dist(u, v) for v in order] for u in order]
        return sub, DistanceMatrix(rows), index

    def pos_metric(self):
        dh = self.host.dh
        path = self.path
        # line positions are 1-based: line j <-> arm position j-1
        return lambda p, q: dh.dist(path[p - 1], path[q - 1])


def shortest_component_embedding(g: Graph, dg: DistanceMatrix, host: ThetaHost,
                                 d: int, psi: dict[int, int], balls: ThetaBalls,
                                 comp: ResidualComponent, arm: int, last: int,
                                 reverse: bool) -> Optional[dict[int, int]]:
    """Shortest placement of an s-(or t-)component on an arm, given its last
    vertex.  Iterates candidate lengths ascending; the first anchored-line
    success, pre-filtered by the last-vertex ball checks, is minimal.

    Returns guest -> host-id for the component's free vertices, or None.
    """
    problem = _ArmProblem(g, dg, host, d, psi, arm, reverse=reverse)
    band = 2 * d * d
    # the paper's S_i: every anchored vertex on this arm's near band
    own_anchors = {v: q for v, q in problem.anchored.items() if q <= band}
    participants = frozenset(own_anchors) | comp.vertices
    sub, sub_dg, index = problem.sub_instance(participants)
    metric = problem.pos_metric()
    size = len(participants)
    lo = band + 1
    hi = min(band + 2 * d * size, problem.length - band - 1)
    dh = host.dh
    for length in range(lo, hi + 1):
        target = problem.host_id(length)
        ok = True
        for v, hv in psi.items():
            dvl = dg.dist(v, last)
            sep = dh.dist(hv, target)
            if sep < dvl or sep > d * dvl:
                ok = False
                break
        if not ok:
            continue
        n_line = length + 1
        psi1 = Anchor.make({index[v]: q + 1 for v, q in own_anchors.items()},
                           (1, band + 1))
        psi2 = Anchor.make({index[last]: n_line}, (n_line, n_line))
        found = _line_engine_solve(sub, sub_dg, n_line, d, psi1, psi2,
                                   pos_metric=metric)
        if found is not None:
            return {v: problem.host_id(found[index[v]] - 1)
                    for v in comp.free}
    return None


def solve_full_component(g: Graph, dg: DistanceMatrix, host: ThetaHost, d: int,
                         psi: dict[int, int], balls: ThetaBalls,
                         comp: ResidualComponent, arm: int
                         ) -> Optional[dict[int, int]]:
    """Fixed-ends run over the whole arm for a full component."""
    problem = _ArmProblem(g, dg, host, d, psi, arm)
    band = 2 * d * d
    participants = frozenset(problem.anchored) | comp.vertices
    sub, sub_dg, index = problem.sub_instance(participants)
    n_line = problem.length + 1
    lo_map = {index[v]: q + 1 for v, q in problem.anchored.items() if q <= band}
    hi_map = {index[v]: q + 1 for v, q in problem.anchored.items()
              if q >= problem.length - band}
    if len(lo_map) + len(hi_map) != len(problem.anchored):
        return None  # anchored image outside both bands: not a valid arm state
    psi1 = Anchor.make(lo_map, (1, band + 1))
    psi2 = Anchor.make(hi_map, (n_line - band, n_line))
    found = _line_engine_solve(sub, sub_dg, n_line, d, psi1, psi2,
                               pos_metric=problem.pos_metric())
    if found is None:
        return None
    return {v: problem.host_id(found[index[v]] - 1) for v in comp.free}


def place_short_arm(g: Graph, dg: DistanceMatrix, host: ThetaHost, d: int,
                    psi: dict[int, int], balls: ThetaBalls,
                    members: tuple[ResidualComponent, ...], arm: int
                    ) -> Iterator[dict[int, int]]:
    """Explicit injective placements of the members' free vertices into the
    short arm's beyond-ball positions, with immediate distance pruning."""
    dh = host.dh
    free = sorted(set().union(*(m.free for m in members)))
    slots = balls.p_dprime[arm]
    if len(free) > len(slots):
        return
    placed: dict[int, int] = {}

    def ok(v: int, hv: int) -> bool:
        for u, hu in placed.items():
            duv = dg.dist(u, v)
            sep = dh.dist(hu, hv)
            if sep < duv or sep > d * duv:
                return False
        for u, hu in psi.items():
            duv = dg.dist(u, v)
            sep = dh.dist(hu, hv)
            if sep < duv or sep > d * duv:
                return False
        return True

    def rec(idx: int) -> Iterator[dict[int, int]]:
        if idx == len(free):
            yield dict(placed)
            return
        v = free[idx]
        for hv in slots:
            if hv in placed.values() or not ok(v, hv):
                continue
            placed[v] = hv
            yield from rec(idx + 1)
            del placed[v]

    yield from rec(0)


# -- driver -----------------------------------------------------------------------


def embed_into_theta(g: Graph, dg: DistanceMatrix, host: ThetaHost, d: int,
                     budget: SearchBudget = DEFAULT_BUDGET) -> Optional[Embedding]:
    """Non-contracting distortion-d embedding into a generalized theta host."""
    if d < 1:
        raise InputError("distortion must be >= 1")
    if not g.is_connected():
        raise InputError("guest must be connected")
    if g.max_degree() > (host.k + 1) * d:
        return None
    if g.n > host.graph.n:
        return None
    dh = host.dh
    balls = compute_balls(host, d)
    if balls.bs2 & balls.bt2:
        # very short host: ball anchors cannot be disjoint
        return brute_force_embed(g, dg, host.graph, dh, d, budget=budget)

    # enumerate_psi is deterministic (centers ascend, positions in order),
    # so streaming keeps witnesses reproducible without materializing
    for psi in enumerate_psi(g, dg, host, d):
        u_set = frozenset(v for v, hv in psi.items()
                          if hv in balls.bs or hv in balls.bt)
        if any(g.degree(v) > 2 * d for v in range(g.n) if v not in u_set):
            continue
        if not psi:
            found = _solve_floating(g, dg, host, d, balls, budget)
            if found is not None:
                return found
            continue
        comps = classify_components(g, psi, host, balls)
        if comps is None:
            continue
        anchored_all = frozenset(psi)
        covered_targets = anchored_all | frozenset(
            v for comp in comps for v in comp.free)
        if covered_targets != frozenset(range(g.n)):
            continue  # some vertex is neither anchored nor in a residual part
        for config in enumerate_configurations(g, psi, host, d, comps, balls):
            found = _solve_configuration(g, dg, host, d, psi, balls, config)
            if found is not None:
                return found
    return None


def _solve_floating(g, dg, host, d, balls, budget) -> Optional[Embedding]:
    """Empty anchor: the whole guest floats beyond the balls on one arm."""
    for i in range(host.k):
        slots = frozenset(balls.p_dprime[i])
        if len(slots) < g.n:
            continue
        found = brute_force_embed(g, dg, host.graph, host.dh, d,
                                  codomain=slots, budget=budget)
        if found is not None:
            return found
    return None


def _solve_configuration(g, dg, host, d, psi, balls,
                         config: ThetaConfiguration) -> Optional[Embedding]:
    """Solve each arm of the configuration and verify the assembled map."""
    piece_choices: list[list[dict[int, int]]] = []
    for arm, form, members in config.per_arm:
        if balls.short_arm(host, arm):
            options = list(place_short_arm(g, dg, host, d, psi, balls,
                                           members, arm))
            if not options:
                return None
            piece_choices.append(options)
            continue
        for comp in members:
            if comp.role == "full":
                sol = solve_full_component(g, dg, host, d, psi, balls, comp, arm)
                if sol is None:
                    return None
                piece_choices.append([sol])
            else:
                reverse = comp.role == "t"
                anchor_pool = sorted(comp.vertices & frozenset(psi))
                if not anchor_pool:
                    return None
                a = anchor_pool[0]
                options = []
                for last in last_vertex_candidates(comp.vertices, a, dg, d):
                    if last in psi:
                        continue
                    sol = shortest_component_embedding(
                        g, dg, host, d, psi, balls, comp, arm, last, reverse)
                    if sol is not None:
                        options.append(sol)
                if not options:
                    return None
                piece_choices.append(options)

    dh = host.dh

    def assemble(idx: int, pieces: list[dict[int, int]]) -> Optional[Embedding]:
        if idx == len(piece_choices):
            try:
                merged = union_embedding([psi] + pieces, g.n)
            except (ConflictError, InjectivityError):
                return None
            if len(merged) != g.n:
                return None
            if verify_nc_distortion(g, host.graph, dg, dh, merged, d) is not None:
                return None
            return merged
        for option in piece_choices[idx]:
            result = assemble(idx + 1, pieces + [option])
            if result is not None:
                return result
        return None

    return assemble(0, [])
