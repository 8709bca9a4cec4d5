"""The ten acceptance criteria, each at its stated tolerance.

Every test records a one-line PASS/FAIL summary that is printed at the
end of the pytest run.
"""

import filecmp

import numpy as np
import pytest
from scipy.stats import unitary_group

from fisherop import cli, su2
from fisherop.estimation import EstimationExperiment, Scenario, cramer_rao_check
from fisherop.fisher import fisher_report
from fisherop.optimize import OptimizerConfig, optimize_measurement, optimize_probe_and_measurement
from fisherop.quantum import HermitianOperator, PureState, random_basis, random_hermitian, random_state
from fisherop.qubit import QubitScenario, j_closed_form, optimal_qubit
from fisherop.suite import DEFAULT_SEED, PAPER_SUITE_FILES
from fisherop.tables import read_csv

from oracles import fd_fisher

pytestmark = pytest.mark.slow


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def test_c01_qubit_optimum(record_criterion):
    rng = np.random.default_rng([DEFAULT_SEED, 101])
    cfg = OptimizerConfig(seed=DEFAULT_SEED)
    worst = 0.0
    for _ in range(100):
        l1, l2 = rng.uniform(-3, 3, 2)
        v = unitary_group.rvs(2, random_state=rng)
        h = HermitianOperator(v @ np.diag([l1, l2]) @ v.conj().T)
        for chi in (0.0, 1.1, 4.0):
            probe = PureState((v[:, 0] + np.exp(1j * chi) * v[:, 1]) / np.sqrt(2))
            for theta in (0.2, 1.3, 2.9):
                res = optimize_measurement(probe, h, theta, cfg)
                worst = max(worst, rel(res.j_achieved, (l1 - l2) ** 2))
    ok = worst < 1e-6
    record_criterion(1, ok, f"qubit optimum, 900 runs, max rel err {worst:.2e} (< 1e-6)")
    assert ok


def test_c02_closed_form(record_criterion):
    rng = np.random.default_rng([DEFAULT_SEED, 102])
    worst = 0.0
    for _ in range(1000):
        l1, l2 = rng.uniform(-3, 3, 2)
        a, g = rng.uniform(0, np.pi / 2, 2)
        chi, theta = rng.uniform(0, 2 * np.pi, 2)
        s = QubitScenario(l1, l2, a, g, chi, theta)
        j_num = fisher_report(s.probe(), s.hamiltonian(), s.basis(), theta).fisher_info
        worst = max(worst, rel(j_closed_form(s), j_num))
    ok = worst < 1e-9
    record_criterion(2, ok, f"closed form vs numeric, 1000 scenarios, max rel err {worst:.2e} (< 1e-9)")
    assert ok


def test_c03_three_routes(record_criterion):
    rng = np.random.default_rng([DEFAULT_SEED, 103])
    e_eq1 = e_cmp = e_fd = 0.0
    for _ in range(500):
        d = int(rng.integers(2, 9))
        h, psi, basis = random_hermitian(d, rng), random_state(d, rng), random_basis(d, rng)
        theta = rng.uniform(0, 2 * np.pi)
        r = fisher_report(psi, h, basis, theta)
        e_eq1 = max(e_eq1, rel(r.j_eq1, r.fisher_info))
        e_cmp = max(e_cmp, rel(r.fisher_info, 4 * (r.h2_expectation - r.complement)))
        e_fd = max(e_fd, rel(fd_fisher(psi.amplitudes, h.entries, basis.kets, theta), r.fisher_info))
    ok = e_eq1 < 1e-8 and e_cmp < 1e-8 and e_fd < 1e-6
    record_criterion(3, ok, f"three routes, 500 scenarios, eq1 {e_eq1:.1e}, complement {e_cmp:.1e}, "
                            f"finite difference {e_fd:.1e}")
    assert ok


def test_c04_bound_chain(record_criterion):
    rng = np.random.default_rng([DEFAULT_SEED, 104])
    cfg = OptimizerConfig(seed=DEFAULT_SEED)
    chain_ok, worst_gap = True, 0.0
    for _ in range(50):
        d = int(rng.integers(2, 7))
        h = random_hermitian(d, rng)
        theta = rng.uniform(0, 2 * np.pi)
        fixed = optimize_measurement(random_state(d, rng), h, theta, cfg)
        free = optimize_probe_and_measurement(h, theta, cfg)
        for res in (fixed, free):
            chain_ok &= 0 <= res.j_achieved <= res.variance_bound + 1e-6 <= res.seminorm_bound + 2e-6
        worst_gap = max(worst_gap, abs(free.seminorm_bound - free.j_achieved))
    ok = chain_ok and worst_gap < 1e-6
    record_criterion(4, ok, f"bound chain on 100 optima {'holds' if chain_ok else 'VIOLATED'}, "
                            f"free-probe seminorm gap {worst_gap:.1e} (< 1e-6)")
    assert ok


def test_c05_noon_heisenberg(record_criterion):
    thetas = np.linspace(0, 2 * np.pi, 20)
    worst = 0.0
    for j in su2.half_integers(0.5, 5):
        sys = su2.spin_operators(j)
        n = 2 * j
        for th in thetas:
            worst = max(worst, abs(su2.mz_fisher_noon(sys, 0.0, th).fisher_info - n**2))
    ok = worst < 1e-8
    record_criterion(5, ok, f"NOON in Jz basis, j = 1/2..5 x 20 theta, max |J - n^2| {worst:.1e} (< 1e-8)")
    assert ok


def test_c06_phase_states(record_criterion):
    worst_j = worst_k = 0.0
    for j in range(1, 11):
        sys = su2.spin_operators(j)
        for th in (0.0, 0.4, 2.2):
            r = su2.mz_fisher_phase_state(sys, 0.0, th)
            worst_j = max(worst_j, abs(r.fisher_info - 4 * j * (j + 1) / 3))
            worst_k = max(worst_k, r.complement)
    ok = worst_j < 1e-8 and worst_k < 1e-10
    record_criterion(6, ok, f"phase states j = 1..10, max |J - 4j(j+1)/3| {worst_j:.1e}, max K {worst_k:.1e}")
    assert ok


def test_c07_wigner_realness(record_criterion):
    thetas = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    worst = max(su2.wigner_realness_check(su2.spin_operators(j), th)
                for j in su2.half_integers(0.5, 25) for th in thetas)
    ok = worst < 1e-10
    record_criterion(7, ok, f"Jy rotation in Jz basis, j <= 25, max |Im| {worst:.1e} (< 1e-10)")
    assert ok


def test_c08_cramer_rao(record_criterion):
    t = 200
    opt = optimal_qubit(-0.5, 0.5)
    sys = su2.spin_operators(2)
    experiments = {
        "qubit": EstimationExperiment(Scenario(opt.probe, np.diag([-0.5, 0.5]), opt.basis),
                                      np.pi / 2, 10_000, t, DEFAULT_SEED),
        "noon_j2": EstimationExperiment(Scenario(su2.noon_state(sys), sys.jy, su2.jz_eigenbasis(sys)),
                                        0.3, 10_000, t, DEFAULT_SEED),
    }
    ratios = {k: cramer_rao_check(e).ratio for k, e in experiments.items()}
    lo = 1 - 3 / np.sqrt(t)
    ok = all(lo <= r <= 1.3 for r in ratios.values())
    detail = ", ".join(f"{k} {r:.3f}" for k, r in ratios.items())
    record_criterion(8, ok, f"MSE / (1/NJ): {detail} (band [{lo:.3f}, 1.3], seed {DEFAULT_SEED})")
    assert ok


def test_c09_non_unique_optimum(record_criterion):
    thetas = np.linspace(0, np.pi, 7)
    xis = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    worst = 0.0
    for j in su2.half_integers(0.5, 5):
        sys = su2.spin_operators(j)
        n2 = (2 * j) ** 2
        for th in thetas:
            worst = max(worst, abs(su2.mz_fisher_noon(sys, 0.0, th).fisher_info - n2))
            for xi in xis:
                r = su2.mz_fisher_noon(sys, 0.0, th, su2.noon_optimal_pair_basis(sys, xi))
                worst = max(worst, abs(r.fisher_info - n2))
    ok = worst < 1e-8
    record_criterion(9, ok, f"NOON pair basis (8 xi) and Jz basis both reach n^2, max dev {worst:.1e}")
    assert ok


def test_c10_paper_suite_reproducible(tmp_path, record_criterion):
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [cli.main(["paper-suite", "--out", str(d), "--seed", str(DEFAULT_SEED)]) for d in (a, b)]
    match, mismatch, errors = filecmp.cmpfiles(a, b, PAPER_SUITE_FILES, shallow=False)
    noon = read_csv((a / "noon_scaling.csv").read_text())
    n_to_j = dict(zip(noon.column("n"), noon.column("jz_min")))
    phase = read_csv((a / "phase_state_scaling.csv").read_text())
    j_to_phase = dict(zip(phase.column("j"), phase.column("j_min")))
    values_ok = (abs(n_to_j[2] - 4) < 1e-8 and abs(n_to_j[10] - 100) < 1e-8 and abs(n_to_j[20] - 400) < 1e-8
                 and abs(j_to_phase[1] - 8 / 3) < 1e-8 and abs(j_to_phase[10] - 440 / 3) < 1e-8)
    ok = codes == [0, 0] and not mismatch and not errors and values_ok
    record_criterion(10, ok, f"paper-suite exit codes {codes}, {len(match)}/{len(PAPER_SUITE_FILES)} files "
                             "byte-identical")
    assert ok
