"""Classical Fisher information of a pure-state measurement process.

A scenario is a probe ``psi0``, a generator ``H`` and a complete basis
``{|k>}``; the parameter ``theta`` enters through ``exp(-i H theta)``.
The Fisher information is available by three routes that must agree:

* from the outcome distribution, ``sum_k pdot_k**2 / p_k``;
* the trace form ``<psi_t| H F_t H |psi_t>`` with the Fisher operator
  ``F_t = 4 sum_k cos^2(tau_k) |k><k|``;
* ``4 (<H^2> - K)`` where ``K = sum_k A_k**2`` is the information
  complement.

Zero-amplitude outcomes (``r_k = 0``) are handled by their limits: the
amplitude passes through zero radially, so ``cos^2 tau_k -> 1`` and
``A_k -> 0``.  This keeps the routes equal at those points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.exceptions import ValidationError
from fisherop.quantum import (
    MeasurementBasis,
    PureState,
    as_basis,
    as_operator,
    as_state,
    check_dims,
    decompose,
    evolve,
    propagator,
)


def fisher_from_distribution(p, p_dot, p_ddot=None, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Fisher information ``sum_k pdot_k^2 / p_k`` of a parametric distribution.

    Outcomes with ``p_k`` below the probability floor are treated as
    follows: if ``pdot_k^2`` is also below the floor the term is the
    removable ``0/0`` limit, which equals ``2 * pddot_k`` when second
    derivatives are supplied and is dropped otherwise.  A vanishing
    probability with non-vanishing slope is a genuine singularity and the
    function returns ``inf``.

    Args:
        p: probabilities at the parameter value.
        p_dot: first derivatives with respect to the parameter.
        p_ddot: optional second derivatives, used only for the 0/0 limit.

    Returns:
        The Fisher information, or ``inf`` at a singular point.
    """
    p = np.asarray(p, dtype=float)
    p_dot = np.asarray(p_dot, dtype=float)
    if p.shape != p_dot.shape or p.ndim != 1:
        raise ValidationError(f"p and p_dot must be vectors of equal length, got {p.shape} and {p_dot.shape}")
    if p_ddot is not None:
        p_ddot = np.asarray(p_ddot, dtype=float)
        if p_ddot.shape != p.shape:
            raise ValidationError(f"p_ddot has shape {p_ddot.shape}, expected {p.shape}")
    if np.any(p < -tol.probability_floor):
        raise ValidationError(f"negative probability {p.min():.3e}")
    if abs(p.sum() - 1.0) > tol.probability_sum:
        raise ValidationError(f"probabilities sum to {p.sum():.15g}, not 1")

    eps = tol.probability_floor
    regular = p >= eps
    small = ~regular
    if np.any(small & (p_dot**2 >= eps)):
        return float("inf")
    total = float(np.sum(p_dot[regular] ** 2 / p[regular]))
    if p_ddot is not None and np.any(small):
        total += float(np.sum(2.0 * p_ddot[small]))
    return total


class ScenarioAmplitudes(NamedTuple):
    """Amplitudes of ``psi_t``, ``dpsi_t`` and ``d2psi_t`` in the measurement basis."""

    a: np.ndarray
    a_dot: np.ndarray
    a_ddot: np.ndarray
    h_basis: np.ndarray
    psi_theta: PureState


def scenario_amplitudes(psi0, h, basis, theta: float) -> ScenarioAmplitudes:
    psi0, h, basis = as_state(psi0), as_operator(h), as_basis(basis)
    check_dims(psi0, h, basis)
    psi_t = evolve(psi0, h, theta)
    u_dag = basis.kets.conj().T
    v = psi_t.amplitudes
    hv = h.entries @ v
    a = u_dag @ v
    a_dot = -1j * (u_dag @ hv)
    a_ddot = -(u_dag @ (h.entries @ hv))
    return ScenarioAmplitudes(a, a_dot, a_ddot, u_dag @ h.entries @ basis.kets, psi_t)


def analytic_probability_derivatives(psi0, h, basis, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Outcome probabilities and their exact first derivatives.

    Uses ``d/dtheta |psi> = -i H |psi>`` so that
    ``pdot_k = 2 Re[<psi|k><k|dpsi>]``.
    """
    amp = scenario_amplitudes(psi0, h, basis, theta)
    p = np.abs(amp.a) ** 2
    p_dot = 2.0 * np.real(np.conj(amp.a) * amp.a_dot)
    return p, p_dot


def probability_curvature(psi0, h, basis, theta: float) -> np.ndarray:
    """Exact second derivatives of the outcome probabilities."""
    amp = scenario_amplitudes(psi0, h, basis, theta)
    return 2.0 * (np.abs(amp.a_dot) ** 2 + np.real(np.conj(amp.a) * amp.a_ddot))


class TauAngles(NamedTuple):
    tau: np.ndarray
    undefined: np.ndarray


def tau_angles(psi_theta, psi_dot, basis, tol: Tolerances = DEFAULT_TOLERANCES) -> TauAngles:
    """Angle between each amplitude ``<k|psi>`` and its velocity ``<k|dpsi>``.

    ``tau_k = arg<k|dpsi> - arg<k|psi>`` wrapped to ``(-pi, pi]``; entries
    are NaN and flagged where either amplitude is below the degeneracy
    threshold.
    """
    basis = as_basis(basis)
    psi = np.asarray(getattr(psi_theta, "amplitudes", psi_theta), dtype=complex)
    dpsi = np.asarray(psi_dot, dtype=complex)
    if psi.shape != (basis.dim,) or dpsi.shape != (basis.dim,):
        raise ValidationError(f"state and velocity must have dimension {basis.dim}")
    u_dag = basis.kets.conj().T
    return _tau_from_amplitudes(u_dag @ psi, u_dag @ dpsi, tol)


def crossing_mask(a: np.ndarray, a_dot: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Outcomes whose amplitude is zero to working precision.

    Either ``r_k`` is below the absolute degeneracy threshold, or it is so
    small relative to its velocity that its phase is round-off.  In both
    cases the amplitude is treated as passing radially through zero.
    """
    r = np.abs(a)
    return (r < tol.degenerate_amplitude) | (r < tol.crossing_ratio * np.abs(a_dot))


def _tau_from_amplitudes(a, a_dot, tol: Tolerances) -> TauAngles:
    undefined = crossing_mask(a, a_dot, tol) | (np.abs(a_dot) < tol.degenerate_amplitude)
    tau = np.angle(a_dot * np.conj(a))
    tau = np.where(tau <= -np.pi, np.pi, tau)
    tau = np.where(undefined, np.nan, tau)
    return TauAngles(tau, undefined)


def _cos2_tau(a, a_dot, tol: Tolerances) -> tuple[np.ndarray, np.ndarray]:
    tau, undefined = _tau_from_amplitudes(a, a_dot, tol)
    c = np.cos(np.where(undefined, 0.0, tau)) ** 2
    flux2 = np.abs(a_dot) ** 2
    r = np.abs(a)
    crossing = crossing_mask(a, a_dot, tol)
    for k in np.flatnonzero(undefined):
        if flux2[k] < tol.flux_floor_sq:
            c[k] = 0.0
        elif crossing[k]:
            # radial passage through zero: rdot^2 -> |<k|H|psi>|^2
            c[k] = 1.0
        else:
            rdot = np.real(np.conj(a[k]) * a_dot[k]) / r[k]
            c[k] = min(rdot**2 / flux2[k], 1.0)
    return c, undefined


@dataclass(frozen=True)
class FisherOperator:
    """``4 sum_k c_k |k><k|`` with ``c_k = cos^2 tau_k`` in ``[0, 1]``."""

    coefficients: np.ndarray
    basis: MeasurementBasis
    undefined: np.ndarray = field(repr=False)

    @property
    def matrix(self) -> np.ndarray:
        u = self.basis.kets
        return (u * (4.0 * self.coefficients)) @ u.conj().T

    def sandwich(self, h, psi) -> float:
        """``<psi| H F H |psi>``."""
        hv = as_operator(h).entries @ as_state(psi).amplitudes
        proj = self.basis.kets.conj().T @ hv
        return float(4.0 * np.sum(self.coefficients * np.abs(proj) ** 2))


def fisher_operator(psi0, h, basis, theta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> FisherOperator:
    """Fisher operator at ``theta``, diagonal in the measurement basis."""
    basis = as_basis(basis)
    amp = scenario_amplitudes(psi0, h, basis, theta)
    c, undefined = _cos2_tau(amp.a, amp.a_dot, tol)
    return FisherOperator(c, basis, undefined)


def transformed_fisher_operator(psi0, h, basis, theta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> FisherOperator:
    """``exp(iH theta) F_theta exp(-iH theta)``, for sandwiching with the probe ``psi0``.

    The coefficients are those of ``F_theta``; only the kets are rotated.
    Recomputing the Fisher operator in the rotated basis gives a different
    operator in general.
    """
    h = as_operator(h)
    f = fisher_operator(psi0, h, basis, theta, tol)
    rotated = propagator(h, -theta) @ f.basis.kets
    return FisherOperator(f.coefficients, MeasurementBasis(rotated, f.basis.tol), f.undefined)


def complement_terms(a: np.ndarray, h_basis: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """``A_k = sum_l |H_kl| r_l cos(phi_l - phi_k + Omega_kl)``.

    ``A_k`` is set to its limit 0 at zero crossings (see :func:`crossing_mask`).
    """
    return np.asarray(_complement_parts(a, h_basis, tol)[0], dtype=float)


def _complement_parts(a, h_basis, tol: Tolerances):
    """``A`` together with ``K`` and ``<H^2>`` accumulated in extended precision.

    ``J/4 = <H^2> - K`` cancels badly when ``J`` is small, so both sums are
    formed in ``longdouble`` from the same float64 inputs.
    """
    ld = np.longdouble
    r = np.abs(a).astype(ld)
    flux = h_basis @ a
    zero = crossing_mask(a, -1j * flux, tol)
    phi = np.where(zero, 0.0, np.angle(a)).astype(ld)
    mag = np.abs(h_basis).astype(ld)
    omega = np.angle(h_basis).astype(ld)
    arg = phi[None, :] - phi[:, None] + omega
    terms = np.sum(mag * r[None, :] * np.cos(arg), axis=1)
    terms = np.where(zero, ld(0), terms)
    # |(H a)_k|^2 from the same polar inputs
    re = np.sum(mag * r[None, :] * np.cos(omega + phi[None, :]), axis=1)
    im = np.sum(mag * r[None, :] * np.sin(omega + phi[None, :]), axis=1)
    return terms, np.sum(terms**2), np.sum(re**2 + im**2)


def information_complement(psi0, h, basis, theta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[float, np.ndarray]:
    """Information complement ``K = sum_k A_k^2`` and the vector ``A``."""
    amp = scenario_amplitudes(psi0, h, basis, theta)
    a_terms, k, _ = _complement_parts(amp.a, amp.h_basis, tol)
    return float(k), np.asarray(a_terms, dtype=float)


def seminorm(h) -> float:
    """Spectral spread ``lambda_max - lambda_min``."""
    w = as_operator(h).eigenvalues
    return float(w[-1] - w[0])


def variance_bound(psi0, h) -> float:
    """``4 Var_psi0(H)``: the largest Fisher information any basis can give for this probe."""
    psi0, h = as_state(psi0), as_operator(h)
    check_dims(psi0, h)
    hv = h.entries @ psi0.amplitudes
    mean = float(np.vdot(psi0.amplitudes, hv).real)
    return 4.0 * max(float(np.vdot(hv, hv).real) - mean**2, 0.0)


@dataclass(frozen=True)
class OutcomeDiagnostics:
    r: float
    phi: float
    tau: float
    tau_defined: bool
    a: float


@dataclass(frozen=True)
class FisherReport:
    theta: float
    fisher_info: float
    complement: float
    h2_expectation: float
    variance_bound: float
    seminorm_bound: float
    per_outcome: tuple[OutcomeDiagnostics, ...]
    j_eq1: float
    j_complement: float
    h_expectation: float
    singular: bool = False

    FIELDS = ("theta", "fisher_info", "complement", "h2", "var_bound", "seminorm_bound")

    def to_dict(self) -> dict[str, float]:
        return dict(
            zip(
                self.FIELDS,
                (self.theta, self.fisher_info, self.complement, self.h2_expectation,
                 self.variance_bound, self.seminorm_bound),
            )
        )

    def csv_row(self) -> list[float]:
        return list(self.to_dict().values())


def fisher_report(psi0, h, basis, theta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> FisherReport:
    """Evaluate every Fisher quantity of a scenario at one parameter value.

    ``fisher_info`` is the trace-form value; the distribution and
    complement routes are carried alongside for cross-checking.
    """
    psi0, h, basis = as_state(psi0), as_operator(h), as_basis(basis)
    amp = scenario_amplitudes(psi0, h, basis, theta)
    c, undefined = _cos2_tau(amp.a, amp.a_dot, tol)
    flux2 = np.abs(amp.a_dot) ** 2
    j_trace = float(4.0 * np.sum(c * flux2))

    p = np.abs(amp.a) ** 2
    p_dot = 2.0 * np.real(np.conj(amp.a) * amp.a_dot)
    p_ddot = 2.0 * (flux2 + np.real(np.conj(amp.a) * amp.a_ddot))
    j_eq1 = fisher_from_distribution(p, p_dot, p_ddot, tol)

    a_ld, k_ld, h2_ld = _complement_parts(amp.a, amp.h_basis, tol)
    a_terms = np.asarray(a_ld, dtype=float)
    k = float(k_ld)
    h2 = float(np.sum(flux2))
    mean = h.expectation(psi0)

    tau, _ = _tau_from_amplitudes(amp.a, amp.a_dot, tol)
    dec = decompose(amp.psi_theta, basis, tol)
    outcomes = tuple(
        OutcomeDiagnostics(float(dec.radii[i]), float(dec.phases[i]), float(tau[i]), not bool(undefined[i]), float(a_terms[i]))
        for i in range(basis.dim)
    )
    return FisherReport(
        theta=float(theta),
        fisher_info=j_trace,
        complement=k,
        h2_expectation=h2,
        variance_bound=variance_bound(psi0, h),
        seminorm_bound=seminorm(h) ** 2,
        per_outcome=outcomes,
        j_eq1=j_eq1,
        j_complement=float(4 * (h2_ld - k_ld)),
        h_expectation=mean,
        singular=bool(np.isinf(j_eq1)),
    )


def fisher_information(psi0, h, basis, theta: float, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Trace-form Fisher information ``<psi_t| H F_t H |psi_t>``."""
    amp = scenario_amplitudes(psi0, h, basis, theta)
    c, _ = _cos2_tau(amp.a, amp.a_dot, tol)
    return float(4.0 * np.sum(c * np.abs(amp.a_dot) ** 2))


def finite_difference_fisher(psi0, h, basis, theta: float, step: float | None = None,
                             tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Fisher information with ``pdot`` from central differences of ``p``.

    Probabilities come from ``scipy.linalg.expm`` rather than the cached
    spectrum, so this route shares no code with the analytic ones beyond
    the final sum.
    """
    from scipy.linalg import expm

    psi0, h, basis = as_state(psi0), as_operator(h), as_basis(basis)
    check_dims(psi0, h, basis)
    step = tol.finite_difference_step if step is None else step
    u_dag = basis.kets.conj().T

    def probs(t):
        return np.abs(u_dag @ (expm(-1j * t * h.entries) @ psi0.amplitudes)) ** 2

    p = probs(theta)
    p_dot = (probs(theta + step) - probs(theta - step)) / (2 * step)
    return fisher_from_distribution(p / p.sum(), p_dot, None, tol)
