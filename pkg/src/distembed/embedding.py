"""Embeddings, exact distortion arithmetic, and verification.

All ratio arithmetic is exact (fractions.Fraction over integer distances);
nothing here touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import ConflictError, InjectivityError, PartialityError
from .graph import INF_DIST, DistanceMatrix, Graph


class Embedding:
    """Injective (partial or total) map guest vertex -> host vertex.

    Injectivity is enforced at construction; non-contraction would imply it
    anyway, but the check is kept independent so that broken maps fail fast.
    """

    __slots__ = ("mapping", "total")

    def __init__(self, mapping: Mapping[int, int], guest_n: Optional[int] = None):
        images = set(mapping.values())
        if len(images) != len(mapping):
            by_image: dict[int, int] = {}
            for v, h in sorted(mapping.items()):
                if h in by_image:
                    raise InjectivityError(
                        f"vertices {by_image[h]} and {v} share host vertex {h}"
                    )
                by_image[h] = v
        self.mapping = dict(sorted(mapping.items()))
        self.total = guest_n is not None and len(self.mapping) == guest_n

    def __getitem__(self, v: int) -> int:
        return self.mapping[v]

    def __contains__(self, v: int) -> bool:
        return v in self.mapping

    def __len__(self) -> int:
        return len(self.mapping)

    def __eq__(self, other):
        return isinstance(other, Embedding) and self.mapping == other.mapping

    def items(self):
        return self.mapping.items()

    def __repr__(self):
        tag = "total" if self.total else "partial"
        return f"<Embedding {tag} {self.mapping}>"


@dataclass(frozen=True)
class DistortionReport:
    expansion: Fraction
    contraction: Fraction
    distortion: Fraction
    expansion_witness: tuple[int, int]
    contraction_witness: tuple[int, int]

    @property
    def non_contracting(self) -> bool:
        return self.contraction <= 1


@dataclass(frozen=True)
class Violation:
    """First (lexicographic) guest pair breaking non-contraction or expansion."""

    u: int
    v: int
    guest_dist: int
    host_dist: int
    kind: str  # "injectivity" | "contraction" | "expansion"

    def __str__(self):
        return (f"{self.kind} violation on pair ({self.u},{self.v}): "
                f"D_G={self.guest_dist}, D_H={self.host_dist}")


def _require_total_injective(g: Graph, f: Embedding) -> None:
    if len(f) != g.n or any(v not in f for v in range(g.n)):
        raise PartialityError("embedding must be total over the guest")


def distortion_report(g: Graph, h: Graph, dg: DistanceMatrix, dh: DistanceMatrix,
                      f: Embedding) -> DistortionReport:
    """Exact expansion/contraction/distortion over all unordered guest pairs."""
    _require_total_injective(g, f)
    if g.n < 2:
        one = Fraction(1)
        return DistortionReport(one, one, one, (0, 0), (0, 0))
    expansion = Fraction(0)
    contraction = Fraction(0)
    exp_wit = con_wit = (0, 1)
    for u in range(g.n):
        fu = f[u]
        for v in range(u + 1, g.n):
            dguv = dg.dist(u, v)
            dhuv = dh.dist(fu, f[v])
            if dhuv >= INF_DIST:
                raise PartialityError(
                    f"image pair ({fu},{f[v]}) is at infinite host distance")
            e = Fraction(dhuv, dguv)
            c = Fraction(dguv, dhuv)
            if e > expansion:
                expansion, exp_wit = e, (u, v)
            if c > contraction:
                contraction, con_wit = c, (u, v)
    return DistortionReport(expansion, contraction, expansion * contraction,
                            exp_wit, con_wit)


def verify_nc_distortion(g: Graph, h: Graph, dg: DistanceMatrix, dh: DistanceMatrix,
                         f: Embedding, d) -> Optional[Violation]:
    """Check D_G(u,v) <= D_H(F(u),F(v)) <= d*D_G(u,v) for every pair.

    Returns None when the embedding is non-contracting with expansion at
    most d, else the lexicographically first violating pair.  `d` may be an
    int or a Fraction; comparisons stay exact either way.
    """
    _require_total_injective(g, f)
    seen_images: dict[int, int] = {}
    for u in range(g.n):
        fu = f[u]
        if fu in seen_images:
            return Violation(seen_images[fu], u, dg.dist(seen_images[fu], u), 0,
                             "injectivity")
        seen_images[fu] = u
    for u in range(g.n):
        fu = f[u]
        for v in range(u + 1, g.n):
            dguv = dg.dist(u, v)
            dhuv = dh.dist(fu, f[v])
            if dhuv < dguv:
                return Violation(u, v, dguv, dhuv, "contraction")
            if dhuv > d * dguv:
                return Violation(u, v, dguv, dhuv, "expansion")
    return None


def union_embedding(parts: Iterable[Mapping[int, int]],
                    guest_n: Optional[int] = None) -> Embedding:
    """Union of pairwise consistent partial maps (the paper's glued map).

    Raises ConflictError naming the first vertex on which two parts disagree.
    """
    merged: dict[int, int] = {}
    for part in parts:
        for v, hv in part.items():
            if v in merged and merged[v] != hv:
                raise ConflictError(v, merged[v], hv)
            merged[v] = hv
    return Embedding(merged, guest_n)


# -- serialization -----------------------------------------------------------


def embedding_to_json(g: Graph, h: Graph, dg: DistanceMatrix, dh: DistanceMatrix,
                      f: Embedding) -> dict:
    """Embedding JSON payload with exact ratio strings ("a/b").

    The "distortion" field reports the certified bound: for a non-contracting
    embedding that is the expansion (the d in D_G <= D_H <= d*D_G), and the
    raw product e*c otherwise.
    """
    report = distortion_report(g, h, dg, dh, f)

    def frac(x: Fraction) -> str:
        return f"{x.numerator}/{x.denominator}"

    certified = max(report.expansion, report.distortion)
    return {
        "map": {str(v): hv for v, hv in f.items()},
        "expansion": frac(report.expansion),
        "contraction": frac(report.contraction),
        "distortion": frac(certified),
    }


def embedding_from_json(payload: Mapping) -> Embedding:
    try:
        mapping = {int(k): int(v) for k, v in payload["map"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise PartialityError(f"bad embedding JSON: {exc}") from None
    return Embedding(mapping)


def host_dot(h: Graph, f: Optional[Embedding] = None,
             red: Optional[frozenset[int]] = None) -> str:
    """DOT drawing of the host.

    Vertices with a preimage under `f` are filled; with a red/blue partition
    the fill follows the partition colors.
    """
    preimage: dict[int, int] = {}
    if f is not None:
        for v, hv in f.items():
            preimage[hv] = v
    lines = ["graph host {", "  node [shape=circle];"]
    for x in range(h.n):
        attrs = []
        if red is not None:
            attrs.append('color="red"' if x in red else 'color="blue"')
        if x in preimage:
            attrs.append('style="filled" fillcolor="lightgray"')
            attrs.append(f'label="{x}\\n<-{preimage[x]}"')
        else:
            attrs.append(f'label="{x}"')
        lines.append(f"  {x} [{' '.join(attrs)}];")
    for u, v in h.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
