"""Command-line entry point: ``randrep <command> ...``.

Exit status: 0 on success, 1 on invalid input, 2 when a size cap is hit.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction

import numpy as np

from . import CapExceeded
from .bounds import height_bound_report, theorem_bounds
from .certify import DEFAULT_NU_MAX, NotFound, find_certificate
from .experiment import ExperimentConfig, analyze_records, read_records, run_experiment
from .freegroup import sample_presentation
from .matrep import TupleSpace, exact_survival_curve, large_survival_probabilities, union_bound_curve
from .nbwalk import Multigraph, check_return_bound, nbw_distribution, nbw_sample_many
from .poly import common_arity, parse_polynomial

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 1, 2


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _density(text):
    try:
        Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    return text


def build_parser() -> Parser:
    p = Parser(prog="randrep", description=__doc__.splitlines()[0], allow_abbrev=False)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    s = sub.add_parser("sample-words", help="sample a random presentation", allow_abbrev=False)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--count", type=int)
    g.add_argument("--density", type=_density)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")

    s = sub.add_parser("walk", help="nonbacktracking walk on a multigraph", allow_abbrev=False)
    s.add_argument("--graph", required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--t", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--mc", type=int, metavar="N")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--check-bound", type=int, metavar="TMAX")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("search", help="search representations of random presentations", allow_abbrev=False)
    for name in ("--m", "--k", "--q", "--l"):
        s.add_argument(name, type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--relators", type=int, metavar="U")
    g.add_argument("--density", type=_density)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--emit-survivors", action="store_true")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--out", required=True)

    s = sub.add_parser("oracle", help="exact survival curve", allow_abbrev=False)
    for name in ("--m", "--k", "--q", "--l", "--u-max"):
        s.add_argument(name, type=int, required=True)
    s.add_argument("--out")

    s = sub.add_parser("certify", help="search a Nullstellensatz certificate", allow_abbrev=False)
    s.add_argument("--input", required=True)
    s.add_argument("--out", required=True)

    s = sub.add_parser("bounds", help="closed-form bounds as JSON", allow_abbrev=False)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--u", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--h", type=float)
    s.add_argument("--rank", type=int)

    s = sub.add_parser("experiment", help="run a configured experiment", allow_abbrev=False)
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--threads", type=int)
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--exact", action="store_true", default=None)

    s = sub.add_parser("analyze", help="decay analysis of experiment records", allow_abbrev=False)
    s.add_argument("--input", required=True)
    s.add_argument("--out")
    s.add_argument("--csv")
    s.add_argument("--oracle", action="store_true", help="overlay exact curve and union bound")
    return p


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sample_words(a):
    P = sample_presentation(a.m, a.l, count=a.count, density=a.density, seed=a.seed)
    _emit(P.to_text(), a.out)


def cmd_walk(a):
    with open(a.graph) as fh:
        G = Multigraph.from_text(fh.read())
    if not 0 <= a.start < G.vertex_count:
        raise ValueError(f"start vertex {a.start} outside 0..{G.vertex_count - 1}")
    out = {"t": a.t, "start": a.start}
    if a.mc:
        ends = nbw_sample_many(G, a.start, a.t, a.mc, np.random.default_rng(a.seed))
        counts = np.bincount(ends, minlength=G.vertex_count)
        dist = (counts / a.mc).tolist()
        out.update(mode="mc", samples=a.mc, distribution=dist, return_probability=dist[a.start])
    else:
        dist = nbw_distribution(G, a.start, a.t, exact=True)
        out.update(mode="exact", distribution=[str(x) for x in dist], return_probability=str(dist[a.start]))
    if a.check_bound:
        out["check_bound"] = check_return_bound(G, a.start, a.check_bound).as_dict()
    if a.json:
        print(json.dumps(out))
        return
    for v, pv in enumerate(out["distribution"]):
        print(f"P(N({a.t})={v}) = {pv}")
    print(f"P(return) = {out['return_probability']}")
    if a.check_bound:
        cb = out["check_bound"]
        print(f"return bound {cb['bound']} up to t={a.check_bound}: max {cb['max']} at t={cb['argmax']}, "
              f"{'holds' if cb['holds'] else 'VIOLATED'}")


def cmd_search(a):
    cfg = ExperimentConfig(m=a.m, k=a.k, l=a.l, fields=[a.q],
                           u=[a.relators] if a.relators is not None else [],
                           density=a.density, trials=a.trials, master_seed=a.seed,
                           output=a.out, threads=a.threads)
    return _run_and_report(cfg, a.emit_survivors)


def _run_and_report(cfg, emit_survivors=False):
    n = capped = 0
    for rec in run_experiment(cfg, emit_survivors=emit_survivors):
        n += 1
        capped += rec.get("status") == "cap_exceeded"
    print(f"{n} new records written to {cfg.output}", file=sys.stderr)
    if capped:
        print(f"cap exceeded in {capped} of {n} trials (recorded in {cfg.output})", file=sys.stderr)
        return EXIT_CAP
    return EXIT_OK


def cmd_oracle(a):
    space = TupleSpace(a.m, a.k, a.q)
    curve = exact_survival_curve(a.m, a.k, a.q, a.l, a.u_max, space=space)
    ub = union_bound_curve(large_survival_probabilities(a.m, a.k, a.q, a.l, space=space), a.u_max)
    lines = []
    for u, (p, b) in enumerate(zip(curve, ub)):
        lines.append(json.dumps({"m": a.m, "k": a.k, "q": a.q, "l": a.l, "u": u,
                                 "exact": str(p), "exact_float": float(p),
                                 "union_bound": str(b), "union_bound_float": float(b)}))
    _emit("\n".join(lines) + "\n", a.out)


def cmd_certify(a):
    with open(a.input) as fh:
        system = json.load(fh)
    try:
        n = int(system["n"])
        ps = [parse_polynomial(s, n) for s in system["ps"]]
        r = parse_polynomial(system["r"], n)
    except KeyError as exc:
        raise ValueError(f"certify input lacks field {exc}") from None
    common_arity(ps + [r])
    out = {"n": n, "ps": system["ps"], "r": system["r"]}
    try:
        cert = find_certificate(ps, r, system.get("degree_cap"), system.get("nu_max", DEFAULT_NU_MAX))
    except NotFound as exc:
        out.update(found=False, reason=str(exc))
    else:
        out.update(found=True, verified=True, **cert.as_dict())
    _emit(json.dumps(out, indent=2) + "\n", a.out)


def cmd_bounds(a):
    out = {"theorem": theorem_bounds(a.m, a.k, a.l, u=a.u).as_dict()}
    extra = (a.n, a.d, a.h)
    if any(x is not None for x in extra):
        if any(x is None for x in extra):
            raise ValueError("--n, --d and --h go together")
        out["height"] = height_bound_report(a.n, a.d, a.h, a.rank).as_dict()
    out["u_min"] = out["theorem"]["quantities"]["u_min"]
    print(json.dumps(out, indent=2))


def cmd_experiment(a):
    with open(a.config) as fh:
        cfg = ExperimentConfig.from_json(fh.read())
    for attr, val in (("output", a.out), ("threads", a.threads), ("trials", a.trials),
                      ("master_seed", a.seed), ("exact", a.exact)):
        if val is not None:
            setattr(cfg, attr, val)
    if not cfg.output:
        raise ValueError("no output path: set 'output' in the config or pass --out")
    return _run_and_report(cfg)


def cmd_analyze(a):
    records = read_records(a.input)
    if not records:
        raise ValueError(f"no records in {a.input}")
    reports = analyze_records(records, with_oracle=a.oracle)
    _emit(json.dumps([r.as_dict() for r in reports], indent=2) + "\n", a.out)
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            for i, rep in enumerate(reports):
                rows = rep.csv_rows()
                header = next(rows)
                if i == 0:
                    w.writerow(header)
                w.writerows(rows)


COMMANDS = {
    "sample-words": cmd_sample_words,
    "walk": cmd_walk,
    "search": cmd_search,
    "oracle": cmd_oracle,
    "certify": cmd_certify,
    "bounds": cmd_bounds,
    "experiment": cmd_experiment,
    "analyze": cmd_analyze,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        status = COMMANDS[args.command](args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
