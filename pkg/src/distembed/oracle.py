"""Exhaustive backtracking oracle: ground truth for small instances.

Variable order is most-constrained-first (fewest live host candidates),
values are tried in increasing host id, so results are deterministic.  No
symmetry breaking: correctness over speed, budgets protect runtime.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .embedding import Embedding
from .errors import BudgetExceeded
from .graph import INF_DIST, DistanceMatrix, Graph


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 50_000_000
    max_seconds: float = 600.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budget must be positive")


DEFAULT_BUDGET = SearchBudget()


def brute_force_embed(g: Graph, dg: DistanceMatrix, h: Graph, dh: DistanceMatrix,
                      d, bijective: bool = False,
                      codomain: Optional[frozenset[int]] = None,
                      budget: SearchBudget = DEFAULT_BUDGET) -> Optional[Embedding]:
    """Search for a non-contracting embedding with expansion at most d.

    Every assigned pair must satisfy D_G <= D_H <= d*D_G (d may be a
    Fraction).  `codomain` restricts images; `bijective` additionally forces
    |codomain| == n so that injectivity implies onto.  Returns the embedding
    or None; raises BudgetExceeded when undecided.
    """
    allowed = frozenset(range(h.n)) if codomain is None else frozenset(codomain)
    if bijective and len(allowed) != g.n:
        return None
    if g.n > len(allowed):
        return None
    if g.n == 0:
        return Embedding({}, 0)

    host_by_id = sorted(allowed)
    candidates: list[set[int]] = [set(host_by_id) for _ in range(g.n)]
    assignment: dict[int, int] = {}
    deadline = time.monotonic() + budget.max_seconds
    nodes = 0

    def consistent(v: int, hv: int) -> bool:
        for u, hu in assignment.items():
            dguv = dg.dist(u, v)
            dhuv = dh.dist(hu, hv)
            if dhuv >= INF_DIST or dhuv < dguv or dhuv > d * dguv:
                return False
        return True

    def pick_vertex() -> int:
        best, best_size = -1, None
        for v in range(g.n):
            if v in assignment:
                continue
            size = len(candidates[v])
            if best_size is None or size < best_size:
                best, best_size = v, size
        return best

    def search() -> bool:
        nonlocal nodes
        if len(assignment) == g.n:
            return True
        nodes += 1
        if nodes > budget.max_nodes or time.monotonic() > deadline:
            raise BudgetExceeded(f"oracle budget exhausted after {nodes} nodes")
        v = pick_vertex()
        for hv in sorted(candidates[v]):
            if hv in assignment.values():
                continue
            if not consistent(v, hv):
                continue
            assignment[v] = hv
            pruned: list[tuple[int, int]] = []
            ok = True
            for u in range(g.n):
                if u in assignment:
                    continue
                dguv = dg.dist(u, v)
                for hu in list(candidates[u]):
                    dhuv = dh.dist(hv, hu)
                    if dhuv >= INF_DIST or dhuv < dguv or dhuv > d * dguv:
                        candidates[u].discard(hu)
                        pruned.append((u, hu))
                if not candidates[u]:
                    ok = False
                    break
            if ok and search():
                return True
            for u, hu in pruned:
                candidates[u].add(hu)
            del assignment[v]
        return False

    if search():
        return Embedding(dict(assignment), g.n)
    return None


def min_distortion_integer(g: Graph, dg: DistanceMatrix, h: Graph, dh: DistanceMatrix,
                           d_max: int, budget: SearchBudget = DEFAULT_BUDGET
                           ) -> Optional[int]:
    """Least integer d <= d_max admitting a non-contracting distortion-d map."""
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    for d in range(1, d_max + 1):
        if brute_force_embed(g, dg, h, dh, d, budget=budget) is not None:
            return d
    return None
