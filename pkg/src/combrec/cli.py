"""Command-line interface.

Exit status is 0 on success, 1 on a domain error (bad signal, cap exceeded,
...) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .comb import (
    CoefficientSet,
    DiracComb,
    decompose,
    effective_triple,
    to_signal,
    uncertainty_report,
)
from .errors import CombrecError
from .fourier import Signal, forward_dft
from .harness import ExperimentConfig, emit_plot_data, records_to_csv, run_sweep, summarize
from .lattice import Grid, LatticeSet
from .recovery import (
    CombFamily,
    ObservedSpectrum,
    dra_recover,
    erase,
    ls_support_search,
    oracle_search,
    progression_erasure,
    random_erasure,
)
from .recovery.channel import _jsonable
from .restriction import (
    bourgain_generic_set,
    empirical_cpq,
    empirical_lambda_q,
    exact_c22,
    generic_set_failure_rate,
    lambda_to_restriction,
)


def _read(path: str):
    return json.loads(Path(path).read_text())


def _emit(obj, out: str | None):
    text = json.dumps(_jsonable(obj), indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_comb(data: dict, tol: float) -> DiracComb:
    if "parts" in data:
        return DiracComb.from_json(data)
    return decompose(Signal.from_json(data), tol)


def _load_set(grid: Grid, path: str) -> LatticeSet:
    return LatticeSet.from_json(grid, _read(path))


def cmd_analyze(args):
    c = _load_comb(_read(args.input), args.tol)
    report = {
        "N": c.grid.N, "d": c.grid.d, "gamma": c.gamma,
        "delta": c.delta, "M": c.M, "comb": c.to_json(),
    }
    if not c.is_zero():
        eff = effective_triple(c, args.p)
        report["effective"] = {
            "p": eff.p, "A1": eff.support.to_json(), "A1_size": len(eff.support),
            "weight": [eff.weight.real, eff.weight.imag], "mass": eff.mass,
        }
        report["uncertainty"] = uncertainty_report(c, args.p, tol=args.support_tol).to_json()
    _emit(report, args.out)


def cmd_erase(args):
    data = _read(args.input)
    if "parts" in data:
        f = to_signal(DiracComb.from_json(data))
    else:
        f = Signal.from_json(data)
    grid = f.grid
    if args.erased:
        S = _load_set(grid, args.erased)
    elif args.random is not None:
        S = random_erasure(grid, args.random, np.random.default_rng(args.seed))
    elif args.progression is not None:
        S = progression_erasure(grid, args.progression, args.start, args.step)
    else:
        S = grid.empty()
    _emit(erase(forward_dft(f), S).to_json(), args.out)


def cmd_recover(args):
    obs = ObservedSpectrum.from_json(_read(args.input))
    if args.method == "dra":
        out = dra_recover(obs, CoefficientSet.from_json(_read(args.coeffs)))
        _emit(out.to_json(), args.out)
    elif args.method == "ls":
        out = ls_support_search(obs, args.k, cap=args.cap, all_sizes=args.all_sizes)
        _emit(out.to_json(), args.out)
    else:
        coeffs = CoefficientSet.from_json(_read(args.coeffs))
        mass_p = args.p if args.mass is not None else None
        family = CombFamily(coeffs, args.gamma, mass_p, args.mass)
        res = oracle_search(obs, family, cap=args.cap)
        _emit({
            "count": len(res.candidates),
            "near_boundary": res.near_boundary,
            "candidates": [c.to_json() for c in res.candidates],
        }, args.out)


def cmd_restriction(args):
    grid = Grid(args.N, args.d)
    if args.kind == "generic-set":
        sigma = bourgain_generic_set(grid, args.q, args.seed)
        lam = empirical_lambda_q(sigma, args.q, args.trials, args.seed)
        report = {
            "sigma": sigma.to_json(),
            "lambda_q": lam.to_json(),
            "restriction": lambda_to_restriction(lam, grid).to_json(),
        }
        if args.threshold is not None:
            stat = generic_set_failure_rate(grid, args.q, args.threshold, args.sets,
                                            args.trials, args.seed)
            report["failure_statistic"] = stat.to_json()
        _emit(report, args.out)
        return
    sigma = _load_set(grid, args.set)
    if args.kind == "exact":
        est = exact_c22(sigma)
    else:
        est = empirical_cpq(sigma, args.p, args.q, args.trials, args.seed)
    _emit(est.to_json(), args.out)


def cmd_sweep(args):
    cfg = ExperimentConfig.load(args.config)
    if args.workers:
        cfg = replace(cfg, workers=args.workers)
    records = run_sweep(cfg)
    out = args.out or cfg.outputs.get("csv")
    text = records_to_csv(records)
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = args.summary or cfg.outputs.get("summary")
    if summary:
        Path(summary).write_text(json.dumps(summarize(records), indent=2) + "\n")
    plot = args.plot_csv or cfg.outputs.get("plot_csv")
    svg = args.svg or cfg.outputs.get("svg")
    if plot or svg:
        emit_plot_data(records, plot, svg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="combrec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decompose a signal and report effective supports")
    p.add_argument("--input", required=True, help="Signal or DiracComb JSON")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=0.0, help="value clustering tolerance")
    p.add_argument("--support-tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("erase", help="transform a signal and erase frequencies")
    p.add_argument("--input", required=True, help="Signal or DiracComb JSON")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--erased", help="JSON array of erased frequency coordinates")
    g.add_argument("--random", type=int, metavar="K", help="erase K random frequencies")
    g.add_argument("--progression", type=int, metavar="K", help="erase an arithmetic progression")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_erase)

    p = sub.add_parser("recover", help="recover a comb from an observed spectrum")
    rsub = p.add_subparsers(dest="method", required=True)
    r = rsub.add_parser("dra", help="direct rounding with a known alphabet")
    r.add_argument("--input", required=True)
    r.add_argument("--coeffs", required=True, help="coefficient JSON")
    r.add_argument("--out")
    r = rsub.add_parser("ls", help="least-squares search over supports of size k")
    r.add_argument("--input", required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--all-sizes", action="store_true")
    r.add_argument("--cap", type=int, default=10**6)
    r.add_argument("--out")
    r = rsub.add_parser("oracle", help="enumerate every consistent comb")
    r.add_argument("--input", required=True)
    r.add_argument("--coeffs", required=True)
    r.add_argument("--gamma", type=int, required=True)
    r.add_argument("--p", type=float, default=2.0)
    r.add_argument("--mass", type=float, help="required p-effective mass")
    r.add_argument("--cap", type=int)
    r.add_argument("--out")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("restriction", help="restriction constants")
    p.add_argument("kind", choices=("exact", "empirical", "generic-set"))
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--set", help="JSON array of frequency coordinates")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float,
                   help="generic-set: also report how often C(q) exceeds this value")
    p.add_argument("--sets", type=int, default=20, help="generic-set: sets sampled for --threshold")
    p.add_argument("--out")
    p.set_defaults(func=cmd_restriction)

    p = sub.add_parser("sweep", help="run a configured recovery sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--summary", help="JSON summary path")
    p.add_argument("--plot-csv")
    p.add_argument("--svg")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kind", None) in ("exact", "empirical") and not args.set:
        parser.error("--set is required for exact and empirical estimates")
    try:
        args.func(args)
    except (CombrecError, ValueError, KeyError, OSError) as exc:
        print(f"combrec: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
