"""Command-line entry point.

Data artifacts (matrix/graph files) go to --out or stdout so subcommands can
be piped; the JSON run report goes to stdout for checking commands (verify,
mincheck, spectra, oracle) and to stderr for data-producing ones.  Reports
deliberately exclude wall-clock fields: an identical invocation (flags,
seeds, budgets) must produce byte-identical JSON.

Exit codes: 0 success / verification pass, 1 verification failure,
2 argument or budget errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .budgets import Budgets
from .construct import (construct_ball_power, construct_cherry,
                        construct_neighborhood, format_blocking_set,
                        parse_blocking_set, read_blocking_set,
                        write_blocking_set)
from .errors import BlockforgeError, BudgetExceededError
from .expander import (blowup, complete_graph, format_graph, lps_graph,
                       parse_graph, power_graph, second_eigenvalue)
from .gf import field_create
from .linalg import format_matrix, parse_matrix
from .mincode import LinearCode, blocking_to_code, is_s_minimal
from .supply import (PointSupply, read_supply, supply_mds,
                     supply_random_verified, verify_general_position,
                     write_supply)
from .verify import (improved_s1_bound, is_strong_blocking,
                     is_strong_blocking_sampled, minimum_size_search)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _parse_field_arg(spec: str):
    parts = spec.split(",")
    if len(parts) == 1:
        return field_create(int(parts[0]), 1)
    if len(parts) == 2:
        return field_create(int(parts[0]), int(parts[1]))
    raise ValueError(f"--field wants 'p' or 'p,m', got {spec!r}")


def _envelope(subcommand: str, config: dict, result: dict) -> dict:
    return {"tool": "blockforge", "version": __version__,
            "subcommand": subcommand, "config": config, "result": result}


def _emit_report(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        _emit_text(report, stream)


def _emit_text(obj, stream, prefix="") -> None:
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)):
                stream.write(f"{prefix}{key}:\n")
                _emit_text(val, stream, prefix + "  ")
            else:
                stream.write(f"{prefix}{key}: {val}\n")
    elif isinstance(obj, list):
        for val in obj:
            _emit_text(val, stream, prefix + "- ")
    else:
        stream.write(f"{prefix}{obj}\n")


def _load_supply(path: str):
    if path == "-":
        return PointSupply(parse_matrix(sys.stdin.read()), provenance="stdin"), None
    return read_supply(path)


def _load_blocking(path: str):
    if path == "-":
        return parse_blocking_set(_read_text(path))
    return read_blocking_set(path)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_supply(args, budgets, fmt) -> int:
    fld = _parse_field_arg(args.field)
    if args.mode == "mds":
        supply = supply_mds(fld, args.k, args.n)
        report = verify_general_position(supply, args.s, args.t, budgets=budgets,
                                         seed=args.seed)
    else:
        if args.s is None or args.t is None:
            raise ValueError("random mode needs --s and --t")
        supply, report = supply_random_verified(fld, args.k, args.n, args.s,
                                                args.t, seed=args.seed,
                                                budgets=budgets)
    if args.out and args.out != "-":
        write_supply(args.out, supply, report)
    else:
        _write_text(args.out, format_matrix(supply.matrix))
    env = _envelope("supply", {"field": args.field, "k": args.k, "n": args.n,
                               "mode": args.mode, "s": args.s, "t": args.t,
                               "seed": args.seed, "out": args.out},
                    {"provenance": supply.provenance, "report": report.to_dict()})
    _emit_report(env, fmt, sys.stderr)
    return 0


def _cmd_graph(args, budgets, fmt) -> int:
    if args.kind == "lps":
        g = lps_graph(args.p, args.q)
        config = {"kind": "lps", "p": args.p, "q": args.q}
    elif args.kind == "complete":
        g = complete_graph(args.n)
        config = {"kind": "complete", "n": args.n}
    elif args.kind == "from-file":
        g = parse_graph(_read_text(args.infile))
        config = {"kind": "from-file", "in": args.infile}
    elif args.kind == "power":
        g = power_graph(parse_graph(_read_text(args.infile)), args.u)
        config = {"kind": "power", "in": args.infile, "u": args.u}
    else:  # blowup
        g = blowup(parse_graph(_read_text(args.infile)), args.D)
        config = {"kind": "blowup", "in": args.infile, "D": args.D}
    _write_text(args.out, format_graph(g))
    env = _envelope("graph", {**config, "out": args.out},
                    {"n": g.n, "m": g.m, "regular": g.is_regular()})
    _emit_report(env, fmt, sys.stderr)
    return 0


def _cmd_spectra(args, budgets, fmt) -> int:
    g = parse_graph(_read_text(args.graph))
    rep = second_eigenvalue(g, tol=args.tol, seed=args.seed)
    env = _envelope("spectra", {"graph": args.graph, "tol": args.tol,
                                "seed": args.seed}, rep.to_dict())
    _emit_report(env, fmt)
    return 0


def _cmd_construct(args, budgets, fmt) -> int:
    g = parse_graph(_read_text(args.graph))
    supply, report = _load_supply(args.supply)
    if report is None:
        report = verify_general_position(supply, budgets=budgets)
    if args.recipe == "cherry":
        if args.s != 2:
            raise ValueError("the cherry recipe builds strong 2-blocking sets; pass --s 2")
        b = construct_cherry(g, supply, report=report, budgets=budgets)
    elif args.recipe == "ballpower":
        b = construct_ball_power(g, supply, args.s, variant=args.variant,
                                 report=report, budgets=budgets)
    else:
        b = construct_neighborhood(g, supply, args.s, report=report,
                                   budgets=budgets)
    if args.out and args.out != "-":
        write_blocking_set(args.out, b)
    else:
        _write_text(args.out, format_blocking_set(b))
    env = _envelope("construct", {"recipe": args.recipe, "graph": args.graph,
                                  "supply": args.supply, "s": args.s,
                                  "variant": args.variant, "out": args.out},
                    {"points": b.size, "provenance": b.provenance})
    _emit_report(env, fmt, sys.stderr)
    return 0


def _cmd_verify(args, budgets, fmt) -> int:
    b = _load_blocking(args.set)
    if args.sampled:
        rep = is_strong_blocking_sampled(b, args.s, args.sampled, seed=args.seed)
    else:
        rep = is_strong_blocking(b, args.s, budget=budgets.subspaces,
                                 jobs=args.jobs, count_all=args.count_all)
    result = rep.to_dict()
    result["points"] = b.size
    if args.cq is not None and args.s == 1:
        result["improved_lower_bound"] = improved_s1_bound(args.cq, b.field.q, b.k)
    env = _envelope("verify", {"set": args.set, "s": args.s,
                               "sampled": args.sampled, "seed": args.seed,
                               "jobs": args.jobs, "count_all": args.count_all,
                               "cq": args.cq}, result)
    _emit_report(env, fmt)
    return 0 if rep.passed else 1


def _cmd_convert(args, budgets, fmt) -> int:
    b = _load_blocking(args.set)
    code = blocking_to_code(b)
    _write_text(args.out, format_matrix(code.generator))
    env = _envelope("convert", {"set": args.set, "out": args.out},
                    {"n": code.n, "k": code.k})
    _emit_report(env, fmt, sys.stderr)
    return 0


def _cmd_mincheck(args, budgets, fmt) -> int:
    gen = parse_matrix(_read_text(args.code))
    rep = is_s_minimal(LinearCode(gen), args.s, budget=budgets.minimal_subspaces)
    env = _envelope("mincheck", {"code": args.code, "s": args.s}, rep.to_dict())
    _emit_report(env, fmt)
    return 0 if rep.passed else 1


def _cmd_oracle(args, budgets, fmt) -> int:
    fld = _parse_field_arg(args.field)
    res = minimum_size_search(fld, args.k, args.s, budget=args.budget)
    env = _envelope("oracle", {"field": args.field, "k": args.k, "s": args.s,
                               "budget": args.budget},
                    {"size": res.size, "exact": res.exact,
                     "candidates_tested": res.candidates_tested,
                     "points": res.blocking_set.points.tolist()})
    _emit_report(env, fmt)
    return 0


def _cmd_bench(args, budgets, fmt) -> int:
    b = _load_blocking(args.set)
    t0 = time.perf_counter()
    rep = is_strong_blocking(b, args.s, budget=budgets.subspaces, jobs=args.jobs)
    elapsed = time.perf_counter() - t0
    # Timing goes to stderr; the stdout report stays deterministic.
    rate = rep.subspaces_checked / elapsed if elapsed > 0 else float("inf")
    sys.stderr.write(f"bench: {rep.subspaces_checked} subspaces in "
                     f"{elapsed:.3f}s ({rate:.0f}/s, jobs={args.jobs})\n")
    env = _envelope("bench", {"set": args.set, "s": args.s, "jobs": args.jobs},
                    {"subspaces_checked": rep.subspaces_checked,
                     "result": rep.result, "points": b.size})
    _emit_report(env, fmt)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockforge",
                                 description="strong blocking sets: construct, certify, verify, convert")
    ap.add_argument("--seed", type=int, default=0, help="seed for all randomized steps")
    ap.add_argument("--jobs", type=int, default=1, help="worker count for sharded verification")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    # the same flags are accepted after the subcommand as well; SUPPRESS
    # keeps a subcommand-level absence from clobbering a top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("supply", help="build a general-position point supply")
    p.add_argument("--field", required=True, help="p or p,m")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("mds", "random"), default="mds")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("graph", help="build or transform a graph")
    p.add_argument("kind", choices=("lps", "complete", "from-file", "power", "blowup"))
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--in", dest="infile", default="-")
    p.add_argument("--u", type=int, default=None)
    p.add_argument("--D", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("spectra", help="second-eigenvalue bound of a regular graph")
    p.add_argument("--graph", default="-")
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("construct", help="build a blocking-set candidate")
    p.add_argument("--recipe", choices=("cherry", "ballpower", "neighborhood"),
                   required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--supply", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--variant", choices=("ball", "pairwise"), default="ball")
    p.add_argument("--out", default=None)

    p = sub.add_parser("verify", help="check the strong s-blocking property")
    p.add_argument("--set", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--sampled", type=int, default=None,
                   help="check N random subspaces instead of all of them")
    p.add_argument("--count-all", action="store_true",
                   help="do not stop at the first counterexample")
    p.add_argument("--cq", type=float, default=None,
                   help="user-supplied c_q constant for the informational s=1 bound")

    p = sub.add_parser("convert", help="blocking set -> generator matrix")
    p.add_argument("--set", required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("mincheck", help="check s-minimality of a code")
    p.add_argument("--code", required=True)
    p.add_argument("--s", type=int, required=True)

    p = sub.add_parser("oracle", help="exact minimum-size search (small cases)")
    p.add_argument("--field", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--budget", type=int, default=1_000_000)

    p = sub.add_parser("bench", help="time the exhaustive verifier")
    p.add_argument("--set", required=True)
    p.add_argument("--s", type=int, required=True)

    return ap


_HANDLERS = {
    "supply": _cmd_supply,
    "graph": _cmd_graph,
    "spectra": _cmd_spectra,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "convert": _cmd_convert,
    "mincheck": _cmd_mincheck,
    "oracle": _cmd_oracle,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        budgets = Budgets.from_env()
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    try:
        return _HANDLERS[args.command](args, budgets, args.format)
    except BudgetExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, BlockforgeError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
