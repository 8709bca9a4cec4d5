"""Reproduction tables for the headline numerical claims.

Each ``*_table`` function builds one :class:`ScanTable` and a pass flag
evaluated at the tolerances documented on the function.  The sample
sizes default to the full check; tests may pass smaller ones.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.stats import unitary_group

from fisherop import __version__, su2
from fisherop.estimation import EstimationExperiment, Scenario, cramer_rao_check
from fisherop.fisher import finite_difference_fisher, fisher_operator, fisher_report
from fisherop.optimize import OptimizerConfig, optimize_measurement, optimize_probe_and_measurement
from fisherop.qubit import QubitScenario, c_coefficients, j_closed_form, optimal_qubit
from fisherop.quantum import (
    HermitianOperator,
    PureState,
    evolve,
    random_basis,
    random_hermitian,
    random_state,
)
from fisherop.tables import ScanTable, digest

DEFAULT_SEED = 2026
QUBIT_CHIS = (0.0, np.pi / 3, 3 * np.pi / 2)
QUBIT_THETAS = (0.1, 1.0, 2.7)
PAPER_SUITE_FILES = ("qubit_optimum.csv", "closed_form.csv", "three_routes.csv", "bounds_chain.csv",
                     "noon_scaling.csv", "phase_state_scaling.csv", "wigner_realness.csv", "cramer_rao.json")


class SuiteResult(NamedTuple):
    table: ScanTable
    passed: bool


def rel_err(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([seed, stream])


def _provenance(name: str, seed: int, **config) -> dict:
    return {"table": name, "tool": f"fisherop {__version__}", "seed": seed,
            "config_sha256": digest({"name": name, "seed": seed, **config})}


def rotated_qubit(lambda1: float, lambda2: float, chi: float, v: np.ndarray):
    """Hamiltonian with eigenvalues ``lambda1, lambda2`` on the columns of ``v``, and its optimal probe."""
    h = HermitianOperator(v @ np.diag([lambda1, lambda2]) @ v.conj().T)
    probe = PureState.normalized(v[:, 0] + np.exp(1j * chi) * v[:, 1])
    return h, probe


def qubit_optimum_table(n_pairs: int = 100, seed: int = DEFAULT_SEED, config: OptimizerConfig | None = None,
                        rtol: float = 1e-6) -> SuiteResult:
    """Optimized measurement on the equal-weight probe reaches ``(lambda1 - lambda2)^2``."""
    config = config or OptimizerConfig(seed=seed)
    rng = _rng(seed, 1)
    t = ScanTable(["lambda1", "lambda2", "chi", "theta", "j_expected", "j_optimized", "rel_err", "restarts_used"],
                  provenance=_provenance("qubit_optimum", seed, n_pairs=n_pairs, rtol=rtol))
    ok = True
    for _ in range(n_pairs):
        l1, l2 = rng.uniform(-3, 3, 2)
        v = unitary_group.rvs(2, random_state=rng)
        for chi in QUBIT_CHIS:
            h, probe = rotated_qubit(l1, l2, chi, v)
            for theta in QUBIT_THETAS:
                res = optimize_measurement(probe, h, theta, config)
                e = rel_err(res.j_achieved, (l1 - l2) ** 2)
                ok &= e < rtol
                t.add(l1, l2, chi, theta, (l1 - l2) ** 2, res.j_achieved, e, res.restarts_used)
    return SuiteResult(t, bool(ok))


def random_qubit_scenario(rng: np.random.Generator) -> QubitScenario:
    l1, l2 = rng.uniform(-3, 3, 2)
    a, g = rng.uniform(0, np.pi / 2, 2)
    chi, theta = rng.uniform(0, 2 * np.pi, 2)
    return QubitScenario(l1, l2, a, g, chi, theta)


def closed_form_table(n: int = 1000, seed: int = DEFAULT_SEED, rtol: float = 1e-9) -> SuiteResult:
    """Closed-form ``J`` and ``cos^2 tau`` against the numeric Fisher operator."""
    rng = _rng(seed, 2)
    t = ScanTable(["lambda1", "lambda2", "alpha", "gamma", "beta", "j_closed", "j_numeric", "rel_err", "c_err"],
                  provenance=_provenance("closed_form", seed, n=n, rtol=rtol))
    ok = True
    for _ in range(n):
        s = random_qubit_scenario(rng)
        f = fisher_operator(s.probe(), s.hamiltonian(), s.basis(), s.theta)
        jn = f.sandwich(s.hamiltonian(), evolve(s.probe(), s.hamiltonian(), s.theta))
        jc = j_closed_form(s)
        c_err = float(np.max(np.abs(np.array(c_coefficients(s)) - f.coefficients)))
        e = rel_err(jc, jn)
        ok &= e < rtol and c_err < rtol
        t.add(s.lambda1, s.lambda2, s.alpha, s.gamma, s.beta, jc, jn, e, c_err)
    return SuiteResult(t, bool(ok))


def three_routes_table(n: int = 500, seed: int = DEFAULT_SEED, rtol: float = 1e-8,
                       fd_rtol: float = 1e-6) -> SuiteResult:
    """Distribution, trace and complement routes agree; finite differences to ``fd_rtol``."""
    rng = _rng(seed, 3)
    t = ScanTable(["dim", "theta", "j_eq1", "j_trace", "j_complement", "j_fd", "err_eq1_trace",
                   "err_trace_complement", "err_fd"],
                  provenance=_provenance("three_routes", seed, n=n, rtol=rtol, fd_rtol=fd_rtol))
    ok = True
    for _ in range(n):
        d = int(rng.integers(2, 9))
        h, psi, basis = random_hermitian(d, rng), random_state(d, rng), random_basis(d, rng)
        theta = float(rng.uniform(0, 2 * np.pi))
        r = fisher_report(psi, h, basis, theta)
        j_fd = finite_difference_fisher(psi, h, basis, theta)
        e1, e2, e3 = rel_err(r.j_eq1, r.fisher_info), rel_err(r.fisher_info, r.j_complement), rel_err(j_fd, r.fisher_info)
        ok &= e1 < rtol and e2 < rtol and e3 < fd_rtol
        t.add(d, theta, r.j_eq1, r.fisher_info, r.j_complement, j_fd, e1, e2, e3)
    return SuiteResult(t, bool(ok))


def bounds_chain_table(n: int = 50, seed: int = DEFAULT_SEED, config: OptimizerConfig | None = None,
                       slack: float = 1e-6) -> SuiteResult:
    """Bound chain ``0 <= J <= 4 Var H <= ||H||^2`` on fixed- and free-probe optima; free probe closes the gap."""
    config = config or OptimizerConfig(seed=seed)
    rng = _rng(seed, 4)
    t = ScanTable(["dim", "probe", "theta", "j_achieved", "var_bound", "seminorm_bound", "seminorm_gap",
                   "extremal_overlap", "chain_ok"],
                  provenance=_provenance("bounds_chain", seed, n=n, slack=slack))
    ok = True
    for _ in range(n):
        d = int(rng.integers(2, 7))
        h = random_hermitian(d, rng)
        theta = float(rng.uniform(0, 2 * np.pi))
        fixed = optimize_measurement(random_state(d, rng), h, theta, config)
        free = optimize_probe_and_measurement(h, theta, config)
        for label, res in (("fixed", fixed), ("free", free)):
            chain = (0 <= res.j_achieved <= res.variance_bound + slack
                     and res.variance_bound <= res.seminorm_bound + slack)
            gap = res.seminorm_bound - res.j_achieved
            ok &= chain
            if label == "free":
                ok &= abs(gap) < slack
            overlap = res.extremal_overlap if res.extremal_overlap is not None else float("nan")
            t.add(d, label, theta, res.j_achieved, res.variance_bound, res.seminorm_bound, gap, overlap, chain)
    return SuiteResult(t, bool(ok))


def noon_table(j_max: float = 10, points: int = 20, xis: int = 8, atol: float = 1e-8) -> SuiteResult:
    """NOON probe: ``J = n^2`` in the ``Jz`` basis and in the two-element basis for every scanned ``xi``."""
    thetas = np.linspace(0, np.pi, points)
    xi_values = np.linspace(0, 2 * np.pi, xis, endpoint=False)
    t = ScanTable(["j", "n", "n_squared", "jz_min", "jz_max", "pair_min", "pair_max", "xi_saturating"],
                  provenance=_provenance("noon_scaling", 0, j_max=j_max, points=points, xis=xis, atol=atol))
    ok = True
    for j in su2.half_integers(0.5, j_max):
        sys = su2.spin_operators(j)
        n = sys.photons
        jz = [su2.mz_fisher_noon(sys, 0.0, th).fisher_info for th in thetas]
        pair, saturating = [], 0
        for xi in xi_values:
            basis = su2.noon_optimal_pair_basis(sys, xi)
            vals = [su2.mz_fisher_noon(sys, 0.0, th, basis).fisher_info for th in thetas]
            pair += vals
            saturating += all(abs(v - n * n) < atol for v in vals)
        ok &= max(abs(v - n * n) for v in jz + pair) < atol
        t.add(j, n, n * n, min(jz), max(jz), min(pair), max(pair), saturating)
    return SuiteResult(t, bool(ok))


def phase_state_table(j_max: int = 10, points: int = 5, atol: float = 1e-8, k_tol: float = 1e-10) -> SuiteResult:
    """Phase state in the ``Jz`` basis: ``K = 0`` and ``J = 4 j (j+1) / 3`` for all ``theta`` and ``zeta``."""
    thetas = np.linspace(0, 2 * np.pi, points, endpoint=False) + 0.1
    t = ScanTable(["j", "expected", "j_min", "j_max", "complement_max"],
                  provenance=_provenance("phase_state_scaling", 0, j_max=j_max, points=points, atol=atol))
    ok = True
    for j in range(1, j_max + 1):
        sys = su2.spin_operators(j)
        expected = 4 * j * (j + 1) / 3
        reps = [su2.mz_fisher_phase_state(sys, zeta, th) for zeta in (0.0, 0.7) for th in thetas]
        js = [r.fisher_info for r in reps]
        kmax = max(r.complement for r in reps)
        ok &= max(abs(v - expected) for v in js) < atol and kmax < k_tol
        t.add(j, expected, min(js), max(js), kmax)
    return SuiteResult(t, bool(ok))


def wigner_table(j_max: float = 25, points: int = 32, atol: float = 1e-10) -> SuiteResult:
    """Imaginary part of ``exp(-i theta Jy)`` in the ``Jz`` basis."""
    thetas = np.linspace(0, 2 * np.pi, points, endpoint=False)
    t = ScanTable(["j", "max_imag"], provenance=_provenance("wigner_realness", 0, j_max=j_max, points=points))
    ok = True
    for j in su2.half_integers(0.5, j_max):
        sys = su2.spin_operators(j)
        worst = max(su2.wigner_realness_check(sys, th) for th in thetas)
        ok &= worst < atol
        t.add(j, worst)
    return SuiteResult(t, bool(ok))


def cramer_rao_experiments(samples: int = 10_000, trials: int = 200, seed: int = DEFAULT_SEED) -> dict:
    """Qubit optimum (``J = 1``) and NOON ``j = 2`` in the ``Jz`` basis (``J = 16``)."""
    opt = optimal_qubit(-0.5, 0.5)
    qubit = Scenario(opt.probe, HermitianOperator(np.diag([-0.5, 0.5])), opt.basis)
    sys = su2.spin_operators(2)
    noon = Scenario(su2.noon_state(sys), sys.jy, su2.jz_eigenbasis(sys))
    return {
        "qubit_optimum": EstimationExperiment(qubit, np.pi / 2, samples, trials, seed),
        "noon_j2": EstimationExperiment(noon, 0.3, samples, trials, seed),
    }


def cramer_rao_reports(samples: int = 10_000, trials: int = 200, seed: int = DEFAULT_SEED) -> tuple[dict, bool]:
    reports = {k: cramer_rao_check(e) for k, e in cramer_rao_experiments(samples, trials, seed).items()}
    doc = {
        "provenance": _provenance("cramer_rao", seed, samples=samples, trials=trials),
        "reports": {k: r.to_dict() for k, r in reports.items()},
    }
    return doc, all(r.passed for r in reports.values())


def run_paper_suite(out: Path | str, seed: int = DEFAULT_SEED) -> dict[str, bool]:
    """Write every reproduction table into ``out``; returns pass flags by file name."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    results: dict[str, bool] = {}
    tables = {
        "qubit_optimum.csv": lambda: qubit_optimum_table(seed=seed),
        "closed_form.csv": lambda: closed_form_table(seed=seed),
        "three_routes.csv": lambda: three_routes_table(seed=seed),
        "bounds_chain.csv": lambda: bounds_chain_table(seed=seed),
        "noon_scaling.csv": noon_table,
        "phase_state_scaling.csv": phase_state_table,
        "wigner_realness.csv": wigner_table,
    }
    assert (*tables, "cramer_rao.json") == PAPER_SUITE_FILES
    for name, build in tables.items():
        res = build()
        res.table.write(out / name)
        results[name] = res.passed
    doc, passed = cramer_rao_reports(seed=seed)
    (out / "cramer_rao.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    results["cramer_rao.json"] = passed
    return results
