import numpy as np
import pytest
from hypothesis import given, strategies as st

from fisherop import ValidationError
from fisherop.fisher import (
    analytic_probability_derivatives,
    complement_terms,
    finite_difference_fisher,
    fisher_from_distribution,
    fisher_information,
    fisher_operator,
    fisher_report,
    information_complement,
    probability_curvature,
    scenario_amplitudes,
    seminorm,
    tau_angles,
    transformed_fisher_operator,
    variance_bound,
)
from fisherop.quantum import evolve, random_basis, random_hermitian, random_state

import oracles

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)
thetas = st.floats(0, 2 * np.pi)

X_BASIS = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
HALF_SPIN = np.diag([-0.5, 0.5])
PLUS = np.array([1, 1]) / np.sqrt(2)


def scenario(seed, d):
    rng = np.random.default_rng(seed)
    return random_state(d, rng), random_hermitian(d, rng), random_basis(d, rng)


@given(seeds, dims, thetas)
def test_routes_agree(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    r = fisher_report(psi, h, basis, theta)
    assert r.j_eq1 == pytest.approx(r.fisher_info, rel=1e-8, abs=1e-12)
    assert r.j_complement == pytest.approx(r.fisher_info, rel=1e-8, abs=1e-12)


@given(seeds, dims, thetas)
def test_against_expm_finite_differences(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    j_oracle = oracles.fd_fisher(psi.amplitudes, h.entries, basis.kets, theta)
    assert fisher_information(psi, h, basis, theta) == pytest.approx(j_oracle, rel=1e-6, abs=1e-9)
    assert finite_difference_fisher(psi, h, basis, theta) == pytest.approx(j_oracle, rel=1e-6, abs=1e-9)


@given(seeds, dims, thetas)
def test_probability_derivatives(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    p, p_dot = analytic_probability_derivatives(psi, h, basis, theta)
    np.testing.assert_allclose(p, oracles.probabilities(psi.amplitudes, h.entries, basis.kets, theta), atol=1e-12)
    fd = oracles.fd_probability_derivative(psi.amplitudes, h.entries, basis.kets, theta)
    np.testing.assert_allclose(p_dot, fd, atol=1e-7 * max(1.0, seminorm(h)))
    assert abs(p_dot.sum()) < 1e-12


def test_curvature_against_finite_differences():
    psi, h, basis = scenario(7, 4)
    step = 1e-4
    pr = [oracles.probabilities(psi.amplitudes, h.entries, basis.kets, 0.3 + s) for s in (-step, 0, step)]
    np.testing.assert_allclose(probability_curvature(psi, h, basis, 0.3), (pr[0] - 2 * pr[1] + pr[2]) / step**2,
                               atol=1e-5)


def test_qubit_frozen_value():
    # p_+(theta) = cos^2(theta/2): at pi/2 p = (1/2, 1/2), pdot = (-1/2, 1/2), J = 1
    p, p_dot = analytic_probability_derivatives(PLUS, HALF_SPIN, X_BASIS, np.pi / 2)
    np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(p_dot, [-0.5, 0.5], atol=1e-15)
    assert fisher_information(PLUS, HALF_SPIN, X_BASIS, np.pi / 2) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("theta", [0.0, np.pi, 2 * np.pi])
def test_zero_crossing_limits(theta):
    # at theta = 0 or pi one outcome has probability 0; J stays 1 through the crossing
    r = fisher_report(PLUS, HALF_SPIN, X_BASIS, theta)
    assert r.fisher_info == pytest.approx(1.0, abs=1e-12)
    assert r.j_eq1 == pytest.approx(1.0, abs=1e-12)
    assert r.j_complement == pytest.approx(1.0, abs=1e-12)
    assert not r.singular
    dark = min(r.per_outcome, key=lambda o: o.r)
    assert not dark.tau_defined and dark.a == 0.0


def test_distribution_singular_and_removable():
    assert fisher_from_distribution([1.0, 0.0], [0.0, 0.3]) == np.inf
    assert fisher_from_distribution([1.0, 0.0], [0.0, 0.0]) == 0.0
    assert fisher_from_distribution([1.0, 0.0], [0.0, 0.0], [-0.7, 0.7]) == pytest.approx(1.4)


@pytest.mark.parametrize(
    "p, p_dot",
    [([0.5, 0.6], [0.1, -0.1]), ([1.2, -0.2], [0, 0]), ([0.5, 0.5], [0.1]), ([[0.5, 0.5]], [[0, 0]])],
)
def test_distribution_validation(p, p_dot):
    with pytest.raises(ValidationError):
        fisher_from_distribution(p, p_dot)


@given(seeds, dims, thetas)
def test_fisher_operator_properties(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    f = fisher_operator(psi, h, basis, theta)
    assert np.all((f.coefficients >= 0) & (f.coefficients <= 1))
    w = np.linalg.eigvalsh(f.matrix)
    assert w.min() >= -1e-12 and w.max() <= 4 + 1e-12
    psi_t = evolve(psi, h, theta)
    j = fisher_information(psi, h, basis, theta)
    assert f.sandwich(h, psi_t) == pytest.approx(j, rel=1e-12, abs=1e-14)
    hv = h.entries @ psi_t.amplitudes
    assert np.vdot(hv, f.matrix @ hv).real == pytest.approx(j, rel=1e-10, abs=1e-12)
    # the conjugated operator is sandwiched with the probe instead
    ft = transformed_fisher_operator(psi, h, basis, theta)
    assert ft.sandwich(h, psi) == pytest.approx(j, rel=1e-10, abs=1e-12)


@given(seeds, dims, thetas)
def test_complement_identities(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    k, a = information_complement(psi, h, basis, theta)
    amp = scenario_amplitudes(psi, h, basis, theta)
    mean = h.expectation(psi)
    assert np.dot(np.abs(amp.a), a) == pytest.approx(mean, abs=1e-10)
    assert k >= mean**2 - 1e-10
    np.testing.assert_allclose(a, complement_terms(amp.a, amp.h_basis), atol=1e-15)


def test_complement_is_minus_phase_velocity():
    psi, h, basis = scenario(3, 4)
    _, a = information_complement(psi, h, basis, 0.8)
    v = oracles.fd_phase_velocity(psi.amplitudes, h.entries, basis.kets, 0.8)
    np.testing.assert_allclose(a, -v, atol=1e-7)


@given(seeds, dims, thetas)
def test_bounds(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    j = fisher_information(psi, h, basis, theta)
    vb = variance_bound(psi, h)
    assert 0 <= j <= vb * (1 + 1e-10) + 1e-12
    assert vb <= seminorm(h) ** 2 * (1 + 1e-10)


@given(seeds, dims, thetas, st.floats(-20, 20))
def test_energy_shift_invariance(seed, d, theta, c):
    psi, h, basis = scenario(seed, d)
    j0 = fisher_information(psi, h, basis, theta)
    assert fisher_information(psi, h.shifted(c), basis, theta) == pytest.approx(j0, rel=1e-8, abs=1e-9)


@given(seeds, dims, thetas)
def test_outcome_relabeling_invariance(seed, d, theta):
    psi, h, basis = scenario(seed, d)
    order = np.random.default_rng(seed).permutation(d)
    j0 = fisher_information(psi, h, basis, theta)
    assert fisher_information(psi, h, basis.permuted(order), theta) == pytest.approx(j0, rel=1e-12, abs=1e-14)


def test_eigenbasis_measurement_has_no_information():
    psi, h, _ = scenario(5, 4)
    r = fisher_report(psi, h, h.eigenvectors, 1.1)
    assert r.fisher_info == pytest.approx(0.0, abs=1e-12)
    assert r.complement == pytest.approx(r.h2_expectation, rel=1e-12)


def test_tau_angles_flag_zero_amplitudes():
    psi_t = np.array([1.0, 0.0])
    t = tau_angles(psi_t, -1j * HALF_SPIN @ psi_t, np.eye(2))
    assert t.undefined.tolist() == [False, True]
    assert np.isnan(t.tau[1])
    assert t.tau[0] == pytest.approx(np.pi / 2)


def test_report_fields():
    r = fisher_report(PLUS, HALF_SPIN, X_BASIS, 0.4)
    assert list(r.to_dict()) == ["theta", "fisher_info", "complement", "h2", "var_bound", "seminorm_bound"]
    assert r.seminorm_bound == pytest.approx(1.0)
    assert r.h2_expectation == pytest.approx(0.25)
    assert r.h_expectation == pytest.approx(0.0, abs=1e-15)
