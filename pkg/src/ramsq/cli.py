"""The ``ramsq`` command line tool.

Thin adapters only: every subcommand parses arguments, calls the library,
and prints a text or JSON report.  Exit codes: 0 success/pass, 1 verified
failure (a claim refuted or a validation failed), 2 usage or I/O error,
3 unknown outcome (budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bitset import popcount, to_list
from .core import BLUE, RED, Colour, read_cgr, write_cgr
from .errors import CertificateRefused, RamsqError
from .powers import graph6_encode, graph_power, path_graph, cycle_graph, square_cycle, square_path
from .search import SearchBudget

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


def _colour_arg(value: str) -> Colour:
    try:
        return Colour(value.lower())
    except ValueError:
        raise argparse.ArgumentTypeError(f"colour must be red or blue, got {value!r}")


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for key, value in report.items():
            print(f"{key}: {value}")


def _threads_default() -> int:
    try:
        return max(1, int(os.environ.get("RAMSQ_THREADS", "1")))
    except ValueError:
        return 1


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--json", action="store_true", help="machine-readable report")


def cmd_square(args) -> int:
    base = path_graph(args.n) if args.kind == "path" else cycle_graph(args.n)
    g = graph_power(base, args.k)
    text = graph6_encode(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_construct(args) -> int:
    from .construction import build_construction
    g, part = build_construction(args.n, args.variant, args.interior)
    write_cgr(g, args.output)
    _emit({"order": g.n, "variant": args.variant, "interior": str(part.interior),
           "output": args.output}, args.json)
    return EXIT_OK


def cmd_verify_construction(args) -> int:
    from .construction import Target, certify_no_mono_square, derive_partition
    g = read_cgr(args.path)
    try:
        part = derive_partition(g, args.n)
        cert = certify_no_mono_square(g, part, Target(args.target))
    except CertificateRefused as exc:
        _emit({"accepted": False, "refused": str(exc)}, args.json)
        return EXIT_FAIL
    report = {
        "accepted": cert.accepted,
        "target": cert.target.value,
        "n": cert.n,
        "components": [c.describe() for c in cert.components],
    }
    if args.exact:
        from .powers import square_cycle as sc, square_path as sp
        from .search import contains_mono_subgraph
        order = 3 * args.n + (2 if args.target == "p3n2" else 0)
        h = sc(order) if args.target == "c3n" else sp(order)
        budget = SearchBudget(max_nodes=args.budget_nodes)
        exact = {}
        for colour in (RED, BLUE):
            res = contains_mono_subgraph(g, colour, h, budget)
            exact[str(colour)] = "unknown" if res is None else res
        report["exact_search"] = exact
        if any(v == "unknown" for v in exact.values()):
            _emit(report, args.json)
            return EXIT_UNKNOWN
        if any(v is True for v in exact.values()):
            report["accepted"] = False
            _emit(report, args.json)
            return EXIT_FAIL
    _emit(report, args.json)
    return EXIT_OK if cert.accepted else EXIT_FAIL


def cmd_components(args) -> int:
    from .triangles import triangle_components
    g = read_cgr(args.path)
    lab = triangle_components(g, args.colour)
    report = {"colour": str(args.colour), "components": lab.count}
    if args.census:
        report["census"] = lab.tallies()
    _emit(report, args.json)
    return EXIT_OK


def cmd_factor(args) -> int:
    from .bitset import mask_of
    from .finders import corradi_hajnal_factor, tripartite_perfect_tctf
    from .powers import SimpleGraph
    from .triangles import greedy_tctf, max_triangle_factor_exact, triangle_components
    g = read_cgr(args.path)
    if args.mode in ("greedy", "exact"):
        lab = triangle_components(g, args.colour)
        if lab.count == 0:
            _emit({"triangles": 0, "detail": "no edges of that colour"}, args.json)
            return EXIT_OK
        comp = max(range(lab.count), key=lambda c: popcount(lab.support(c)))
        tf = (greedy_tctf(g, args.colour, comp, labelling=lab) if args.mode == "greedy"
              else max_triangle_factor_exact(g, args.colour, comp, labelling=lab))
        _emit({"mode": args.mode, "component": comp, "triangles": len(tf),
               "vertices": tf.vertex_count, "factor": tf.triangles}, args.json)
        return EXIT_OK
    if args.mode == "tripartite":
        n = g.n // 3
        parts = [mask_of(range(i * n, (i + 1) * n)) for i in range(3)]
        tf = tripartite_perfect_tctf(g, args.colour, *parts)
        _emit({"mode": "tripartite", "triangles": len(tf), "factor": tf.triangles}, args.json)
        return EXIT_OK
    h = SimpleGraph(g.n, [g.colour_adj(v, args.colour) for v in range(g.n)])
    tf = corradi_hajnal_factor(h)
    _emit({"mode": "corradi", "triangles": len(tf),
           "uncovered": g.n - tf.vertex_count, "factor": tf.triangles}, args.json)
    return EXIT_OK


def cmd_cliques(args) -> int:
    from .finders import greedy_clique_partition
    g = read_cgr(args.path)
    d = greedy_clique_partition(g, args.m)
    _emit({
        "m": args.m,
        "cliques": [{"colour": str(c), "vertices": to_list(mask)} for mask, c in d.cliques],
        "bin": to_list(d.bin),
        "bin_size": popcount(d.bin),
    }, args.json)
    return EXIT_OK


def cmd_stability(args) -> int:
    from .stability import StabilityParams, recover_partition
    g = read_cgr(args.path)
    params = StabilityParams(t=args.t, eps=args.eps, h=args.h, lam=getattr(args, "lambda"))
    out = recover_partition(g, params, args.m)
    if out.is_factor:
        _emit({"outcome": "factor", "colour": str(out.factor.colour),
               "triangles": len(out.factor.triangles)}, args.json)
        return EXIT_OK
    report = {
        "outcome": "partition",
        "classes": {name: to_list(mask) for name, mask in out.partition.classes().items()},
        "conditions": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in out.report.conditions
        ],
        "passed": out.report.passed,
    }
    _emit(report, args.json)
    return EXIT_OK if out.report.passed else EXIT_FAIL


def cmd_search(args) -> int:
    from .powers import SimpleGraph
    from .search import search_avoiding_colouring
    target = args.target
    if target == "k3":
        h = SimpleGraph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    elif target.startswith("square-path:"):
        h = square_path(int(target.split(":", 1)[1]))
    elif target.startswith("square-cycle:"):
        h = square_cycle(int(target.split(":", 1)[1]))
    else:
        print(f"unknown target {target!r}", file=sys.stderr)
        return EXIT_USAGE
    budget = SearchBudget(max_nodes=args.budget_nodes, fanout=args.threads)
    outcome = search_avoiding_colouring(args.order, h, budget)
    report = {"order": args.order, "target": target, "outcome": outcome.kind,
              "nodes": outcome.nodes}
    if outcome.is_witness and args.output:
        write_cgr(outcome.witness, args.output)
        report["witness"] = args.output
    _emit(report, args.json)
    return EXIT_UNKNOWN if outcome.kind == "unknown" else EXIT_OK


def cmd_embed(args) -> int:
    from .embedding import (
        EmbeddingParams,
        build_homomorphism,
        load_concentration_check,
        random_bandwidth_host,
        square_path_host,
        triangle_walks,
        validate_homomorphism,
    )
    from .triangles import greedy_tctf, triangle_components
    g = read_cgr(args.reduced)
    lab = triangle_components(g, args.colour)
    if lab.count == 0:
        print("reduced graph has no edges of that colour", file=sys.stderr)
        return EXIT_FAIL
    comp = max(range(lab.count), key=lambda c: popcount(lab.support(c)))
    tf = greedy_tctf(g, args.colour, comp, labelling=lab)
    if not tf.triangles:
        print("no triangle factor in the largest component", file=sys.stderr)
        return EXIT_FAIL
    tw = triangle_walks(g, args.colour, tf.triangles)
    if args.host.startswith("square-path:"):
        host = square_path_host(int(args.host.split(":", 1)[1]))
    elif args.host.startswith("random:"):
        m, b = map(int, args.host.split(":")[1:3])
        host = random_bandwidth_host(m, b, 0.5, args.seed)
    else:
        print(f"unknown host {args.host!r}", file=sys.stderr)
        return EXIT_USAGE
    params = EmbeddingParams(rho=args.rho, beta=args.beta, seed=args.seed)
    report: dict = {"triangles": len(tf.triangles), "host": args.host}
    if args.trials:
        stats = load_concentration_check(g, tw, host, params, args.trials)
        stats.pop("max_load_per_trial")
        report.update(stats)
        _emit(report, args.json)
        return EXIT_OK
    hm = build_homomorphism(g, tw, host, params)
    rep = validate_homomorphism(g, args.colour, host, hm)
    report.update({"edge_check": rep.edge_ok, "max_load": rep.max_load,
                   "fragment_vertices": hm.fragment_total})
    _emit(report, args.json)
    return EXIT_OK if rep.edge_ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ramsq",
        description="Two-coloured graph toolkit: extremal colourings, "
                    "triangle-connected factors, exact searches.")
    ap.add_argument("--threads", type=int, default=_threads_default(),
                    help="search fan-out width (default RAMSQ_THREADS or 1)")
    sp = ap.add_subparsers(dest="command", required=True)

    s = sp.add_parser("square", help="emit P_n^k or C_n^k as graph6")
    s.add_argument("--kind", choices=("path", "cycle"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("-k", type=int, default=2)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_square)

    s = sp.add_parser("construct", help="build the extremal colouring")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--variant", choices=("base", "plus2"), default="base")
    s.add_argument("--interior", default="all-red",
                   help="all-red | all-blue | seed:<k>")
    s.add_argument("-o", "--output", required=True)
    _add_common(s)
    s.set_defaults(fn=cmd_construct)

    s = sp.add_parser("verify-construction", help="certify non-containment")
    s.add_argument("path")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--target", choices=("p3n", "p3n2", "c3n"), required=True)
    s.add_argument("--exact", action="store_true",
                   help="cross-check with exhaustive search")
    s.add_argument("--budget-nodes", type=int, default=None)
    _add_common(s)
    s.set_defaults(fn=cmd_verify_construction)

    s = sp.add_parser("components", help="triangle components of one colour")
    s.add_argument("path")
    s.add_argument("--colour", type=_colour_arg, required=True)
    s.add_argument("--census", action="store_true")
    _add_common(s)
    s.set_defaults(fn=cmd_components)

    s = sp.add_parser("factor", help="triangle factors")
    s.add_argument("path")
    s.add_argument("--colour", type=_colour_arg, default=RED)
    s.add_argument("--mode", choices=("greedy", "exact", "tripartite", "corradi"),
                   default="greedy")
    _add_common(s)
    s.set_defaults(fn=cmd_factor)

    s = sp.add_parser("cliques", help="greedy monochromatic clique decomposition")
    s.add_argument("path")
    s.add_argument("--m", type=int, required=True)
    _add_common(s)
    s.set_defaults(fn=cmd_cliques)

    s = sp.add_parser("stability", help="recover the 6-class partition or a factor")
    s.add_argument("path")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--h", type=float, default=0.1)
    s.add_argument("--lambda", type=float, default=0.1)
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--json-report", dest="json", action="store_true")
    s.add_argument("--json", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(fn=cmd_stability)

    s = sp.add_parser("search", help="avoidance colouring search")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--target", required=True,
                   help="k3 | square-path:<n> | square-cycle:<n>")
    s.add_argument("--budget-nodes", type=int, default=None)
    s.add_argument("--threads", type=int, default=None)
    s.add_argument("-o", "--output", help="write a found witness as .cgr")
    _add_common(s)
    s.set_defaults(fn=cmd_search)

    s = sp.add_parser("embed", help="host-to-reduced-graph homomorphism")
    s.add_argument("--reduced", required=True)
    s.add_argument("--colour", type=_colour_arg, default=RED)
    s.add_argument("--host", required=True, help="square-path:<m> | random:<m>:<b>")
    s.add_argument("--rho", type=float, default=0.1)
    s.add_argument("--beta", type=float, default=0.05)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=0)
    _add_common(s)
    s.set_defaults(fn=cmd_embed)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "threads", None) is None:
        args.threads = _threads_default()
    try:
        return args.fn(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RamsqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
