"""Command-line front end.

Exit codes: 0 embedding found / verification ok, 1 infeasible (or
verification found a violation), 2 input error, 3 search budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional

from . import corpus
from .ctwsolver import connectify, embed_ctw
from .embedding import (Embedding, embedding_from_json, embedding_to_json,
                        host_dot, verify_nc_distortion)
from .errors import BudgetExceeded, InputError
from .graph import (Graph, HostSpec, all_pairs_distances, degree_gate, generate,
                    load_guest, load_host)
from .linecycle import embed_into_cycle, embed_into_line
from .oracle import DEFAULT_BUDGET, SearchBudget, brute_force_embed
from .reduction import solve_rational
from .theta import ThetaHost, embed_into_theta, make_theta_host
from .treedecomp import build_decomposition, make_nice, parse_pace
from .twsolver import bijective_embed_tw

EXIT_FOUND = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _read_threads_env() -> int:
    """EMBED_THREADS caps worker parallelism.  The solvers are deterministic
    and run serially in this implementation; the variable is validated and
    reserved (like EMBED_SEED) so scripted callers stay portable."""
    raw = os.environ.get("EMBED_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        val = int(raw)
    except ValueError:
        raise InputError(f"EMBED_THREADS must be an integer, got {raw!r}")
    if val < 1:
        raise InputError("EMBED_THREADS must be >= 1")
    return val


def _parse_distortion(text: str) -> tuple[int, int]:
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            d_num, d_den = int(num), int(den)
        except ValueError:
            raise InputError(f"bad distortion {text!r}") from None
    else:
        try:
            d_num, d_den = int(text), 1
        except ValueError:
            raise InputError(f"bad distortion {text!r}") from None
    if d_num < 1 or d_den < 1 or Fraction(d_num, d_den) < 1:
        raise InputError("distortion must be a rational >= 1")
    return d_num, d_den


class _HostInput:
    def __init__(self, spec: Optional[HostSpec], graph: Graph,
                 labels: Optional[list[int]], theta: Optional[ThetaHost]):
        self.spec = spec
        self.graph = graph
        self.labels = labels
        self.theta = theta


def _load_host_arg(text: str) -> _HostInput:
    if text.startswith("file:"):
        path = text[len("file:"):]
        try:
            with open(path) as fh:
                graph, labels = load_host(fh.read())
        except OSError as exc:
            raise InputError(f"cannot read host file: {exc}") from None
        return _HostInput(None, graph, labels, None)
    spec = HostSpec.parse(text)
    if spec.family == "theta":
        theta = make_theta_host(spec.arms)
        return _HostInput(spec, theta.graph, None, theta)
    return _HostInput(spec, generate(spec), None, None)


def _load_guest_arg(path: str) -> tuple[Graph, list[int]]:
    try:
        with open(path) as fh:
            return load_guest(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read graph file: {exc}") from None


def _pick_solver(host: _HostInput, bijective: bool, requested: str) -> str:
    if requested != "auto":
        return requested
    if host.spec is not None:
        if host.spec.family == "cycle":
            return "cycle"
        if host.spec.family == "path":
            return "line"
        if host.spec.family == "theta":
            return "theta"
    return "tw" if bijective else "ctw"


def _dispatch_solve(args, guest: Graph, host: _HostInput, d: int,
                    solver: str, budget: SearchBudget) -> Optional[Embedding]:
    dg = all_pairs_distances(guest)
    if solver == "cycle":
        if host.spec is None or host.spec.family != "cycle":
            raise InputError("cycle solver needs a cycle:N host")
        return embed_into_cycle(guest, dg, host.spec.length, d, budget=budget)
    if solver == "line":
        if host.spec is None or host.spec.family != "path":
            raise InputError("line solver needs a path:N host")
        found = embed_into_line(guest, dg, host.spec.length, d)
        if found is None:
            return None
        return Embedding({v: p - 1 for v, p in found.items()}, guest.n)
    if solver == "theta":
        if host.theta is None:
            raise InputError("theta solver needs a theta:l1,...,lk host")
        return embed_into_theta(guest, dg, host.theta, d, budget=budget)
    if solver == "oracle":
        dh = all_pairs_distances(host.graph)
        return brute_force_embed(guest, dg, host.graph, dh, d,
                                 bijective=args.bijective, budget=budget)
    if solver == "tw":
        ntd = _decomposition_for(args, host)
        return bijective_embed_tw(guest, host.graph, ntd, d, dg=dg)
    if solver == "ctw":
        ntd = _decomposition_for(args, host)
        dh = all_pairs_distances(host.graph)
        cnd = connectify(ntd, host.graph, dh)
        if not args.quiet:
            print(f"# decomposition width={cnd.width} gamma={cnd.gamma} "
                  f"longest_geodesic_cycle={cnd.longest_geodesic_cycle}",
                  file=sys.stderr)
        return embed_ctw(guest, host.graph, cnd, d, dg=dg, dh=dh)
    raise InputError(f"unknown solver {solver!r}")


def _decomposition_for(args, host: _HostInput):
    if getattr(args, "td", None):
        try:
            with open(args.td) as fh:
                td = parse_pace(fh.read(), host.labels)
        except OSError as exc:
            raise InputError(f"cannot read decomposition file: {exc}") from None
        td.validate(host.graph)
    else:
        td = build_decomposition(host.graph)
    return make_nice(td, host.graph)


def cmd_solve(args) -> int:
    guest, _ = _load_guest_arg(args.graph)
    if guest.weighted and not args.weighted:
        raise InputError("guest has edge weights; pass --weighted")
    host = _load_host_arg(args.host)
    d_num, d_den = _parse_distortion(args.distortion)
    budget = SearchBudget(args.max_nodes, args.max_seconds)
    dg = all_pairs_distances(guest)
    dh = all_pairs_distances(host.graph)

    if d_den != 1:
        # rational distortion: the subdivision / red-blue pipeline
        found = solve_rational(guest, dg, host.graph, dh, d_num, d_den,
                               bijective=args.bijective, budget=budget)
    else:
        d = d_num
        if args.weighted and guest.weighted:
            if host.spec is None or host.spec.family != "cycle":
                raise InputError("weighted guests are supported into cycles only")
            found = embed_into_cycle(guest, dg, host.spec.length, d, budget=budget)
        elif args.bijective:
            red = None
            ntd = _decomposition_for(args, host)
            found = bijective_embed_tw(guest, host.graph, ntd, d, red_set=red,
                                       dg=dg, dh=dh)
        else:
            solver = _pick_solver(host, args.bijective, args.solver)
            found = _dispatch_solve(args, guest, host, d, solver, budget)

    if found is None:
        print("infeasible")
        return EXIT_INFEASIBLE
    payload = embedding_to_json(guest, host.graph, dg, dh, found)
    print(json.dumps(payload, sort_keys=True))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(host_dot(host.graph, found))
    return EXIT_FOUND


def cmd_verify(args) -> int:
    guest, _ = _load_guest_arg(args.graph)
    host = _load_host_arg(args.host)
    d_num, d_den = _parse_distortion(args.distortion)
    try:
        with open(args.embedding) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read embedding JSON: {exc}") from None
    emb = embedding_from_json(payload)
    dg = all_pairs_distances(guest)
    dh = all_pairs_distances(host.graph)
    violation = verify_nc_distortion(guest, host.graph, dg, dh, emb,
                                     Fraction(d_num, d_den))
    if violation is None:
        report = embedding_to_json(guest, host.graph, dg, dh, emb)
        print(json.dumps({"ok": True, **report}, sort_keys=True))
        return EXIT_FOUND
    print(json.dumps({
        "ok": False, "kind": violation.kind,
        "pair": [violation.u, violation.v],
        "guest_dist": violation.guest_dist, "host_dist": violation.host_dist,
    }, sort_keys=True))
    return EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    args.solver = "oracle"
    return cmd_solve(args)


def cmd_gen(args) -> int:
    spec = HostSpec.parse(args.spec)
    g = generate(spec)
    out = io.StringIO()
    print(f"# {args.spec}", file=out)
    for u, v in g.edges():
        print(f"{u} {v}", file=out)
    text = out.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FOUND


def _bench_instances(suite: str):
    if suite == "cycles":
        guests = corpus.trees_up_to(6) + corpus.cycles(3, 6)
        for g in guests:
            for N in (8, 10, 12):
                for d in (1, 2):
                    yield g, ("cycle", N), d
    elif suite == "theta":
        from .theta import make_theta_host
        guests = corpus.trees_up_to(5) + corpus.cycles(3, 6)
        hosts = [(2, 3), (3, 3), (2, 2, 2), (3, 3, 3)]
        for g in guests:
            for arms in hosts:
                for d in (1, 2):
                    yield g, ("theta", arms), d
    else:
        raise InputError(f"unknown bench suite {suite!r}")


def cmd_bench(args) -> int:
    writer = csv.writer(sys.stdout)
    writer.writerow(["instance", "solver", "verdict", "nodes", "millis"])
    for g, host_desc, d in _bench_instances(args.suite):
        dg = all_pairs_distances(g)
        t0 = time.perf_counter()
        if host_desc[0] == "cycle":
            name = f"n{g.n}m{len(g.edges())}->C{host_desc[1]}:d{d}"
            found = embed_into_cycle(g, dg, host_desc[1], d)
            solver = "cycle"
        else:
            arms = host_desc[1]
            th = make_theta_host(arms)
            name = f"n{g.n}m{len(g.edges())}->theta{list(arms)}:d{d}"
            found = embed_into_theta(g, dg, th, d)
            solver = "theta"
        millis = int((time.perf_counter() - t0) * 1000)
        writer.writerow([name, solver, "feasible" if found else "infeasible",
                         g.n, millis])
    return EXIT_FOUND


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distembed",
        description="Exact non-contracting distortion-d embeddings of "
                    "connected graphs into structured hosts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--graph", required=True, help="guest edge-list file")
        p.add_argument("--host", required=True,
                       help="cycle:N | path:N | theta:l1,...,lk | file:PATH")
        p.add_argument("--distortion", required=True,
                       help="integer d, or a/b for the rational pipeline")
        p.add_argument("--td", help="PACE-style tree decomposition file")
        p.add_argument("--bijective", action="store_true")
        p.add_argument("--weighted", action="store_true",
                       help="accept integer edge weights on the guest")
        p.add_argument("--solver", default="auto",
                       choices=["auto", "cycle", "line", "tw", "ctw", "theta",
                                "oracle"])
        p.add_argument("--dot", help="write a DOT drawing of the host here")
        p.add_argument("--max-nodes", type=int, default=DEFAULT_BUDGET.max_nodes)
        p.add_argument("--max-seconds", type=float,
                       default=DEFAULT_BUDGET.max_seconds)
        p.add_argument("--quiet", action="store_true")

    p_solve = sub.add_parser("solve", help="decide and construct an embedding")
    add_common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", help="check an embedding JSON file")
    p_verify.add_argument("--graph", required=True)
    p_verify.add_argument("--host", required=True)
    p_verify.add_argument("--distortion", required=True)
    p_verify.add_argument("--embedding", required=True,
                          help="embedding JSON produced by solve")
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser("oracle", help="exhaustive search, small instances")
    add_common(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_gen = sub.add_parser("gen", help="emit a generated host as an edge list")
    p_gen.add_argument("spec", help="path:N | cycle:N | theta:l1,...,lk")
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=cmd_gen)

    p_bench = sub.add_parser("bench", help="run a CSV benchmark suite")
    p_bench.add_argument("--suite", default="cycles", choices=["cycles", "theta"])
    p_bench.set_defaults(func=cmd_bench)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _read_threads_env()
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
