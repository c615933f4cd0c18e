"""Command line interface.

Every command builds one report dictionary; text and JSON output are both
rendered from it.  Witness joinings go to files, never into the report.
Exit status is 0 whenever a verdict was produced; library errors map to
their ``exit_code``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from . import disjointness as dj
from . import factor as fc
from . import joining as jn
from . import markov as mk
from . import ogj
from .errors import GraphJoinError, NotAnEigenpair, NotIsomorphism
from .graph import Graph, is_fully_supported, isomorphism, load_graph, parse_graph
from .linalg import rational_roots

SCHEMA = "graphjoin.report/1"
IO_ERROR = 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


@contextmanager
def _budgets(args) -> Iterator[None]:
    # flags win over the environment for the duration of one command
    flags = {"GRAPHJOIN_LP_VARS": getattr(args, "lp_vars", None),
             "GRAPHJOIN_SEARCH_MAPS": getattr(args, "search_maps", None)}
    saved = {k: os.environ.get(k) for k in flags}
    for k, v in flags.items():
        if v:
            os.environ[k] = str(v)
    try:
        yield
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v


def _write(outdir: str, name: str, text: str) -> str:
    path = Path(outdir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return str(path)


def _shared_eigenvalues(g: Graph, h: Graph) -> list[str]:
    roots, _ = rational_roots(dj.spectral_gcd(g, h))
    return [str(r) for r in sorted(roots) if r != 1]


# -- commands --------------------------------------------------------------------

def cmd_check(args) -> dict:
    g, h = load_graph(args.g), load_graph(args.h)
    costs = {Path(p).stem: ogj.parse_cost(_read(p), g, h) for p in args.cost or []}
    report: dict = {"left": g.name, "right": h.name, "mode": args.mode}
    witnesses: dict[str, jn.WeightJoining] = {}
    traces: list[dj.Trace] = []
    if args.mode == "all":
        verdict = dj.classify_pair(g, h, costs)
        report.update(strong=verdict.strong, weak=verdict.weak)
        traces = verdict.method_trace
        witnesses = verdict.witnesses
    elif args.mode == "strong":
        ok, t = dj.strong_disjoint(g, h)
        report["strong"] = ok
        traces = [t]
        if t.witness is not None:
            witnesses["strong"] = t.witness
    else:
        ok, t = dj.weak_disjoint(g, h)
        report["weak"] = ok
        traces = [t]
        if not ok and t.witness is not None:
            witnesses["weak"] = t.witness
    if is_fully_supported(g) and is_fully_supported(h) and args.mode in ("weak", "all"):
        report["shared_rational_eigenvalues"] = _shared_eigenvalues(g, h)
    if costs:
        report["costs"] = {}
        for name, cost in costs.items():
            ok, t = dj.c_disjoint(g, h, cost)
            if args.mode != "all":
                traces.append(t)
            entry = {"c_disjoint": ok, "product_value": str(jn.product_cost(g, h, cost))}
            try:
                value, _ = ogj.ogj_value(g, h, cost)
                entry["value"] = str(value)
            except GraphJoinError as exc:
                entry["value"] = None
                entry["value_skipped"] = str(exc)
            report["costs"][name] = entry
    report["trace"] = [t.as_dict() for t in traces]
    report["witness_files"] = {
        kind: _write(args.witness_dir, f"witness_{kind}.joining", k.to_text()) for kind, k in witnesses.items()
    }
    return report


def cmd_join(args) -> dict:
    construct = args.construct
    if construct == "diagonal":
        k = jn.diagonal_cycle_joining(int(args.g), int(args.h))
    else:
        g, h = load_graph(args.g), load_graph(args.h)
        if construct == "product":
            k = jn.product_joining(g, h)
        elif construct == "bijective":
            if args.iso:
                phi = fc.parse_factor_map(_read(args.iso), g, h).as_labels()
            else:
                found = isomorphism(g, h)
                if found is None:
                    raise NotIsomorphism(f"{g.name} and {h.name} are not isomorphic")
                phi = {g.labels[i]: h.labels[j] for i, j in found.items()}
            k = jn.bijective_joining(g, h, phi)
        else:
            lam = Fraction(args.eigenvalue)
            xs, ys = jn.left_eigenvectors(g, lam), jn.left_eigenvectors(h, lam)
            if not xs or not ys:
                raise NotAnEigenpair(f"{lam} is not a shared rational eigenvalue")
            t = jn.AUTO if args.t is None else Fraction(args.t)
            k = jn.perturbation_joining(g, h, lam, xs[0], ys[0], t)
    validation = jn.validate_joining(k)
    out = args.out or f"{construct}.joining"
    path = _write(".", out, k.to_text())
    report = {
        "construct": construct,
        "left": k.left.name,
        "right": k.right.name,
        "valid": validation.valid,
        "entries": len(k.entries),
        "joining_file": path,
    }
    if construct == "perturb":
        report["t"] = str(k.t)
    return report


def cmd_factor(args) -> dict:
    g, h = load_graph(args.g), load_graph(args.h)
    if args.search is not None:
        found = fc.common_factor_search(g, h, args.search)
        return {
            "left": g.name,
            "right": h.name,
            "max_size": args.search,
            "common_factors": [
                {"factor": k.to_json(), "left_map": fg.as_labels(), "right_map": fh.as_labels()} for k, fg, fh in found
            ],
        }
    maps = fc.find_factor_maps(g, h)
    return {"source": g.name, "target": h.name, "maps": [f.as_labels() for f in maps], "count": len(maps)}


def cmd_ogj(args) -> dict:
    g, h = load_graph(args.g), load_graph(args.h)
    cost = ogj.parse_cost(_read(args.cost), g, h)
    value, k = ogj.ogj_value(g, h, cost)
    out = args.out or "ogj.joining"
    return {
        "left": g.name,
        "right": h.name,
        "value": str(value),
        "product_value": str(jn.product_cost(g, h, cost)),
        "c_disjoint": value == jn.product_cost(g, h, cost),
        "joining_file": _write(".", out, k.to_text()),
    }


def cmd_persist(args) -> dict:
    g, h = load_graph(args.g), load_graph(args.h)
    rep = dj.persistence_experiment(dj.skeleton_of(g), dj.skeleton_of(h), args.samples, args.seed, args.mode)
    return {"left": g.name, "right": h.name, **rep.as_dict()}


def cmd_simulate(args) -> dict:
    text = _read(args.file)
    first = next((ln.split()[0] for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")), "")
    chain = mk.parse_chain(text) if first == "chain" else mk.chain_from_graph(parse_graph(text))
    sample = mk.simulate(chain, args.steps, args.seed)
    check = mk.empirical_check(sample, chain, Fraction(args.tolerance))
    report = {"states": list(chain.states), "steps": args.steps, **check.as_dict()}
    if args.trajectory:
        report["trajectory_file"] = _write(".", args.trajectory, " ".join(chain.states[s] for s in sample.path) + "\n")
    return report


# -- rendering -------------------------------------------------------------------------

def _render_text(report: dict, indent: str = "") -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict) and value:
            lines.append(f"{indent}{key}:")
            lines.append(_render_text(value, indent + "  "))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{indent}{key}:")
            for item in value:
                block = _render_text(item, indent + "    ")
                lines.append(indent + "  - " + block[len(indent) + 4:])
        else:
            if isinstance(value, bool):
                value = "yes" if value else "no"
            lines.append(f"{indent}{key}: {value}")
    return "\n".join(x for x in lines if x)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--lp-vars", type=int, help="LP variable budget (env GRAPHJOIN_LP_VARS)")
    common.add_argument("--search-maps", type=int, help="factor search budget (env GRAPHJOIN_SEARCH_MAPS)")

    parser = argparse.ArgumentParser(prog="graphjoin", description="Exact graph joining and disjointness tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide strong / weak / cost disjointness")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--mode", choices=["strong", "weak", "all"], default="all")
    p.add_argument("--cost", action="append", help="cost file; may be repeated")
    p.add_argument("--witness-dir", default=".")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("join", parents=[common], help="construct a joining and write it to a file")
    p.add_argument("g", help="left graph file (cycle size for --construct diagonal)")
    p.add_argument("h", help="right graph file (cycle size for --construct diagonal)")
    p.add_argument("--construct", choices=["product", "diagonal", "bijective", "perturb"], default="product")
    p.add_argument("--iso", help="bijection file in factor-map format")
    p.add_argument("--eigenvalue", default="0", help="shared rational eigenvalue for perturb")
    p.add_argument("--t", help="perturbation size (default: half the positivity margin)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("factor", parents=[common], help="factor maps or common factors")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--search", type=int, metavar="MAX_SIZE", help="search common factors up to this size")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("ogj", parents=[common], help="optimal graph joining value")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("cost")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ogj)

    p = sub.add_parser("persist", parents=[common], help="random weightings on two skeletons")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--mode", choices=["weak", "strong"], default="weak")
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("simulate", parents=[common], help="simulate a stationary walk or chain")
    p.add_argument("file")
    p.add_argument("--steps", type=int, default=10**5)
    p.add_argument("--tolerance", default="1/50")
    p.add_argument("--trajectory", help="write the visited states to this file")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _budgets(args):
            report = args.func(args)
    except GraphJoinError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return IO_ERROR
    report = {"schema": SCHEMA, "command": args.command, "seed": args.seed, **report}
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        print(_render_text(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
