"""``reebforge`` command line.

Exit codes: 0 success, 1 check/verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .assembler import assemble, plan_to_json
from .fuzz import Bounds, random_graph
from .graph_model import (
    GraphError,
    GraphParseError,
    LabeledGraph,
    export_dot,
    format_graph,
    has_good_function,
    parse_graph,
    synthesize_good_function,
    validate,
)
from .pl_oracle import MeshError, load_off, reeb_graph_pl
from .reeb_sweep import SweepError, verify_realization


class UsageError(Exception):
    pass


def _diag(kind: str, message: str) -> None:
    line = f"error: {kind}: {message}"
    if sys.stderr.isatty() and not os.environ.get("REEBFORGE_NO_COLOR"):
        line = f"\x1b[31m{line}\x1b[0m"
    print(line, file=sys.stderr)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _good_function(g: LabeledGraph, policy: str):
    if policy == "auto":
        policy = "respect-given-heights" if len(g.given_heights()) == len(g.vertices) \
            else "distinct-integers"
    return synthesize_good_function(g, policy)


def _admissible(g: LabeledGraph) -> None:
    problems = validate(g)
    if problems:
        raise GraphError("; ".join(str(d) for d in problems))


def cmd_check(args) -> int:
    g = parse_graph(_read(args.input))
    lines = [str(d) for d in validate(g)]
    if not has_good_function(g):
        lines.append("no good function: loop present")
    if not lines:
        lines.append(f"ok: good function exists ({len(g.vertices)} vertices, {len(g.edges)} edges)")
        _emit("\n".join(lines) + "\n", args.output)
        return 0
    _emit("\n".join(lines) + "\n", args.output)
    return 1


def cmd_realize(args) -> int:
    g = parse_graph(_read(args.input))
    _admissible(g)
    plan = assemble(g, _good_function(g, args.policy))
    _emit(plan_to_json(plan), args.output)
    return 0


def _verify_job(job):
    name, text, policy, timing = job
    g = parse_graph(text)
    _admissible(g)
    report = verify_realization(g, _good_function(g, policy))
    return name, report.passed, report.to_dict(timing=timing)


def cmd_verify(args) -> int:
    jobs = [(p, _read(p), args.policy, args.timing) for p in args.inputs]
    if args.random_count:
        bounds = Bounds(args.max_vertices, args.max_edges, args.max_genus)
        for i in range(args.random_count):
            seed = args.seed + i
            jobs.append((f"random:{seed}", format_graph(random_graph(seed, bounds)),
                         args.policy, args.timing))
    if not jobs:
        raise UsageError("verify needs an input path or --random-count")
    if args.batch > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.batch) as pool:
            results = list(pool.map(_verify_job, jobs, chunksize=8))
    else:
        results = [_verify_job(job) for job in jobs]
    if len(results) == 1:
        out = results[0][2]
    else:
        out = [{"input": name, **report} for name, _, report in results]
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return 0 if all(ok for _, ok, _ in results) else 1


def cmd_sweep_off(args) -> int:
    values = _read(args.values) if args.values else None
    w = reeb_graph_pl(load_off(_read(args.input), values))
    if args.format == "dot":
        _emit(w.to_dot(), args.output)
    else:
        _emit(json.dumps(w.to_dict(), indent=2) + "\n", args.output)
    return 0


def cmd_random(args) -> int:
    bounds = Bounds(args.max_vertices, args.max_edges, args.max_genus)
    g = random_graph(args.seed, bounds, heights=args.heights)
    if args.format == "dot":
        text = export_dot(g)
    elif args.format == "json":
        text = json.dumps({
            "vertices": [vx.id for vx in g.vertices],
            "edges": [{"u": e.u, "v": e.v, "genus": e.genus} for e in g.edges],
        }, indent=2) + "\n"
    else:
        text = format_graph(g)
    _emit(text, args.output)
    return 0


def cmd_export_dot(args) -> int:
    g = parse_graph(_read(args.input))
    gf = _good_function(g, args.policy) if args.heights else None
    _emit(export_dot(g, gf), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reebforge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, inputs=True):
        if inputs:
            sp.add_argument("input", help="input path, or - for stdin")
        sp.add_argument("--output", metavar="PATH")
        return sp

    def policy(sp):
        sp.add_argument("--policy", default="auto",
                        choices=["auto", "distinct-integers", "respect-given-heights"],
                        help="auto keeps heights from the file when every vertex has one")

    def bounds(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-vertices", type=int, default=10)
        sp.add_argument("--max-edges", type=int, default=15)
        sp.add_argument("--max-genus", type=int, default=4)

    common(sub.add_parser("check", help="is the graph admissible and loop free")).set_defaults(
        func=cmd_check)

    sp = common(sub.add_parser("realize", help="emit the realization plan as JSON"))
    policy(sp)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("verify", help="realize, sweep and check the result")
    sp.add_argument("inputs", nargs="*", metavar="input")
    sp.add_argument("--output", metavar="PATH")
    sp.add_argument("--random-count", type=int, default=0, metavar="N",
                    help="also verify N random graphs with seeds seed..seed+N-1")
    sp.add_argument("--batch", type=int, default=1, metavar="N", help="worker processes")
    sp.add_argument("--timing", action="store_true", help="fill in elapsed_ms")
    policy(sp)
    bounds(sp)
    sp.set_defaults(func=cmd_verify)

    sp = common(sub.add_parser("sweep-off", help="Reeb graph of a PL function on an OFF mesh"))
    sp.add_argument("--values", metavar="PATH", help="one scalar per vertex line")
    sp.add_argument("--format", choices=["json", "dot"], default="json")
    sp.set_defaults(func=cmd_sweep_off)

    sp = common(sub.add_parser("random", help="seeded random labeled graph"), inputs=False)
    bounds(sp)
    sp.add_argument("--heights", action="store_true", help="attach random good heights")
    sp.add_argument("--format", choices=["graph", "json", "dot"], default="graph")
    sp.set_defaults(func=cmd_random)

    sp = common(sub.add_parser("export-dot", help="graph as DOT"))
    sp.add_argument("--heights", action="store_true", help="label vertices with a good function")
    policy(sp)
    sp.set_defaults(func=cmd_export_dot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphParseError as exc:
        _diag(type(exc).__name__, str(exc))
        return 2
    except (GraphError, SweepError) as exc:
        _diag(type(exc).__name__, str(exc))
        return 1
    except (MeshError, UsageError) as exc:
        _diag(type(exc).__name__, str(exc))
        return 2

if __name__ == "__main__":
    sys.exit(main())
