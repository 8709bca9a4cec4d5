"""Command-line interface: ``fisherop {compute,optimize,estimate,paper-suite}``.

Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 a
paper-suite check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from fisherop import __version__
from fisherop.estimation import EstimationExperiment, cramer_rao_check
from fisherop.exceptions import DegenerateConfigurationError, NoInformationError, ValidationError
from fisherop.fisher import fisher_report
from fisherop.optimize import OptimizerConfig, optimize_measurement, optimize_probe_and_measurement
from fisherop.scenario import ScenarioSpec, load_scenario
from fisherop.suite import DEFAULT_SEED, run_paper_suite
from fisherop.tables import ScanTable

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_ACCEPTANCE = 0, 1, 2, 3

COMPUTE_COLUMNS = ["theta", "fisher_info", "complement", "h2", "var_bound", "seminorm_bound",
                   "j_eq1", "j_trace", "j_complement"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _provenance(spec: ScenarioSpec, seed: int) -> dict:
    return {"scenario_sha256": spec.sha256, "seed": seed, "tool": f"fisherop {__version__}"}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _single_theta(spec: ScenarioSpec) -> float:
    if len(spec.thetas) != 1:
        raise ValidationError("theta: this command needs a single theta, not a theta_grid")
    return float(spec.thetas[0])


def cmd_compute(args) -> int:
    spec = load_scenario(args.scenario)
    seed = spec.seed
    table = ScanTable(list(COMPUTE_COLUMNS), provenance=_provenance(spec, seed))
    for theta in spec.thetas:
        basis = spec.basis
        if basis is None:
            basis = optimize_measurement(spec.probe, spec.hamiltonian, theta, OptimizerConfig(seed=seed), spec.tol).best_basis
        r = fisher_report(spec.probe, spec.hamiltonian, basis, theta, spec.tol)
        table.add(*r.csv_row(), r.j_eq1, r.fisher_info, r.j_complement)
    _emit(table.render(args.format), args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    spec = load_scenario(args.scenario)
    theta = _single_theta(spec)
    seed = spec.seed if args.seed is None else args.seed
    cfg = OptimizerConfig(restarts=args.restarts, seed=seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.probe == "free":
            res = optimize_probe_and_measurement(spec.hamiltonian, theta, cfg, spec.tol)
        else:
            res = optimize_measurement(spec.probe, spec.hamiltonian, theta, cfg, spec.tol)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    doc = {"provenance": _provenance(spec, seed), "theta": theta, "probe_mode": args.probe, **res.to_dict()}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    line = (f"J <= 4Var <= seminorm: {res.j_achieved:.12g} <= {res.variance_bound:.12g} "
            f"<= {res.seminorm_bound:.12g}")
    print(line, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_estimate(args) -> int:
    spec = load_scenario(args.scenario)
    if spec.basis is None:
        raise ValidationError("basis: estimation needs a fixed basis, not 'optimize'")
    theta = _single_theta(spec)
    seed = spec.seed if args.seed is None else args.seed
    exp = EstimationExperiment(spec.scenario(), theta, args.n, args.trials, seed,
                               tuple(args.window) if args.window else None)
    rep = cramer_rao_check(exp)
    doc = {"provenance": _provenance(spec, seed), **rep.to_dict()}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    print(f"ratio = {rep.ratio:#.4g}", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_paper_suite(args) -> int:
    results = run_paper_suite(args.out, args.seed)
    for name, ok in results.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(results.values()) else EXIT_ACCEPTANCE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fisherop", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fisherop {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="Fisher information on a theta grid, all three routes")
    c.add_argument("scenario")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out")
    c.set_defaults(func=cmd_compute)

    o = sub.add_parser("optimize", help="optimal measurement (and probe) for a scenario")
    o.add_argument("scenario")
    o.add_argument("--probe", choices=("fixed", "free"), default="fixed")
    o.add_argument("--restarts", type=int, default=OptimizerConfig.restarts)
    o.add_argument("--seed", type=int)
    o.add_argument("--out")
    o.set_defaults(func=cmd_optimize)

    e = sub.add_parser("estimate", help="Monte-Carlo maximum-likelihood check of the Cramer-Rao bound")
    e.add_argument("scenario")
    e.add_argument("--n", type=int, required=True, help="samples per trial")
    e.add_argument("--trials", type=int, default=200)
    e.add_argument("--seed", type=int)
    e.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))
    e.add_argument("--out")
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("paper-suite", help="regenerate every reproduction table")
    s.add_argument("--out", default="paper_suite")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_paper_suite)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, NoInformationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (np.linalg.LinAlgError, FloatingPointError, DegenerateConfigurationError, ArithmeticError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
