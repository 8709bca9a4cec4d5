"""Search for Fisher-optimal measurement bases and probes.

A basis is encoded as ``dim**2`` unconstrained reals: one angle and one
phase for each of the ``dim(dim-1)/2`` complex Givens rotations, followed
by ``dim`` diagonal phases.  The objective is the information complement
``K`` (fixed probe) or ``-J`` (free probe); both are minimized with BFGS
on finite-difference gradients from deterministic, seeded restarts.

Two lower bounds make a run self-certifying and end the restart loop
early: ``K >= <H>^2`` for any basis (so ``J <= 4 Var H``), and
``J <= (lambda_max - lambda_min)^2`` for any probe.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.fisher import complement_terms, crossing_mask, seminorm, variance_bound
from fisherop.quantum import (
    MeasurementBasis,
    PureState,
    as_operator,
    as_state,
    check_dims,
    propagator,
)


def rotation_pairs(dim: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(dim) for q in range(p + 1, dim)]


def n_parameters(dim: int) -> int:
    return dim * dim


def _apply_adjoint(params: np.ndarray, dim: int, vectors: np.ndarray) -> np.ndarray:
    """``U(params)^dagger @ vectors`` without forming ``U``.

    ``U = G_1 G_2 ... G_m D`` so ``U^dagger = D^dagger G_m^dagger ... G_1^dagger``.
    """
    out = np.array(vectors, dtype=complex, copy=True)
    pairs = rotation_pairs(dim)
    for n, (p, q) in enumerate(pairs):
        t, f = params[2 * n], params[2 * n + 1]
        c, s, e = np.cos(t), np.sin(t), np.exp(1j * f)
        # G acts on (p, q) as [[c, -conj(e) s], [e s, c]]; the phase must sit in the
        # mixing terms, otherwise it is just a column phase and only real rotations remain
        xp, xq = out[p].copy(), out[q].copy()
        out[p] = c * xp + np.conj(e) * s * xq
        out[q] = -e * s * xp + c * xq
    phases = params[2 * len(pairs): 2 * len(pairs) + dim]
    return np.exp(-1j * phases)[:, None] * out if out.ndim == 2 else np.exp(-1j * phases) * out


def givens_unitary(params, dim: int) -> np.ndarray:
    """Decode a parameter vector of length ``dim**2`` into a unitary matrix."""
    params = np.asarray(params, dtype=float)
    if params.shape != (n_parameters(dim),):
        raise ValueError(f"expected {n_parameters(dim)} parameters, got {params.shape}")
    return _apply_adjoint(params, dim, np.eye(dim)).conj().T


def _complement_fast(params, dim, psi_t, h_psi_t, tol: Tolerances) -> float:
    ab = _apply_adjoint(params, dim, np.column_stack([psi_t, h_psi_t]))
    a, b = ab[:, 0], ab[:, 1]
    r = np.abs(a)
    ok = ~crossing_mask(a, b, tol)
    terms = np.real(np.conj(a[ok]) * b[ok]) / r[ok]
    return float(np.sum(terms**2))


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iterations: int = 2000
    tolerance: float = 1e-10
    stall_window: int = 10
    gradient_tolerance: float = 1e-10
    seed: int = 0
    certify: bool = True
    certify_tolerance: float = 1e-12
    method: str = "BFGS, forward finite-difference gradient"


@dataclass
class OptimizationResult:
    best_basis: MeasurementBasis
    best_probe: PureState
    j_achieved: float
    complement: float
    variance_bound: float
    seminorm_bound: float
    restarts_used: int
    converged: bool
    certified: bool
    stationarity_residual: float
    stationarity_residual_raw: float
    trace: list[float] = field(default_factory=list, repr=False)
    extremal_overlap: float | None = None
    degenerate_extremes: bool = False

    def to_dict(self) -> dict:
        d = {
            "j_achieved": self.j_achieved,
            "var_bound": self.variance_bound,
            "seminorm_bound": self.seminorm_bound,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "certified": self.certified,
            "stationarity_residual": self.stationarity_residual,
            "dim": self.best_basis.dim,
            "probe": complex_pairs(self.best_probe.amplitudes),
            # row-major; the kets are the columns
            "basis": complex_pairs(self.best_basis.kets.ravel()),
        }
        if self.extremal_overlap is not None:
            d["extremal_overlap"] = self.extremal_overlap
            d["degenerate_extremes"] = self.degenerate_extremes
        return d


def complex_pairs(a: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a).ravel()]


def stationarity_residual(psi0, h, basis, theta: float, centered: bool = True,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``max_p |A_p - r_p B_p|`` over outcomes where ``B_p`` is defined.

    ``B_p = -sum_k A_k |H_kp| sin(phi_p - phi_k + Omega_kp) / sum_k r_k |H_kp| sin(...)``.
    With ``centered`` the generator is shifted to zero mean energy in the
    probe first; ``J`` does not change, but the optimum then has every
    ``A_k = 0``.  In an uncentered frame the Fisher-optimal basis satisfies
    ``A_p = -r_p B_p`` instead, so the raw residual is ``2 |A_p|`` there.
    """
    psi0, h = as_state(psi0), as_operator(h)
    basis = basis if isinstance(basis, MeasurementBasis) else MeasurementBasis(basis)
    if centered:
        h = h.shifted(-h.expectation(psi0))
    psi_t = propagator(h, theta) @ psi0.amplitudes
    u = basis.kets
    a = u.conj().T @ psi_t
    hb = u.conj().T @ h.entries @ u
    a_terms = complement_terms(a, hb, tol)
    r = np.abs(a)
    phi = np.angle(a)
    mag, omega = np.abs(hb), np.angle(hb)
    worst = 0.0
    for p in range(basis.dim):
        s = np.sin(phi[p] - phi + omega[:, p])
        den = float(np.sum(r * mag[:, p] * s))
        if abs(den) < tol.stationarity_denominator:
            continue
        b_p = -float(np.sum(a_terms * mag[:, p] * s)) / den
        worst = max(worst, abs(a_terms[p] - r[p] * b_p))
    return worst


class _Run:
    def __init__(self, fun, cfg: OptimizerConfig):
        self.fun, self.cfg = fun, cfg
        self.trace: list[float] = []
        self.stalled = False

    def callback(self, intermediate_result):
        self.trace.append(float(intermediate_result.fun))
        w = self.cfg.stall_window
        if len(self.trace) > w and self.trace[-w - 1] - self.trace[-1] < self.cfg.tolerance:
            self.stalled = True
            raise StopIteration

    def run(self, x0):
        self.trace.append(float(self.fun(x0)))
        res = minimize(self.fun, x0, method="BFGS", callback=self.callback,
                       options={"maxiter": self.cfg.max_iterations, "gtol": self.cfg.gradient_tolerance})
        converged = self.stalled or res.success or res.status == 2
        return res, converged


def optimize_measurement(psi0, h, theta: float = 0.0, config: OptimizerConfig = OptimizerConfig(),
                         tol: Tolerances = DEFAULT_TOLERANCES) -> OptimizationResult:
    """Minimize the information complement over measurement bases for a fixed probe."""
    psi0, h = as_state(psi0), as_operator(h)
    dim = check_dims(psi0, h)
    psi_t = propagator(h, theta) @ psi0.amplitudes
    h_psi_t = h.entries @ psi_t
    h2 = float(np.vdot(h_psi_t, h_psi_t).real)
    mean = h.expectation(psi0)
    vb = variance_bound(psi0, h)

    def fun(x):
        return _complement_fast(x, dim, psi_t, h_psi_t, tol)

    best = None
    restarts_used = 0
    certified = False
    for i in range(config.restarts):
        rng = np.random.default_rng([config.seed, i])
        x0 = rng.uniform(0.0, 2 * np.pi, n_parameters(dim))
        run = _Run(fun, config)
        res, converged = run.run(x0)
        restarts_used = i + 1
        if best is None or res.fun < best[0].fun:
            best = (res, converged, run.trace)
        gap = 4.0 * (best[0].fun - mean**2)
        if config.certify and gap <= config.certify_tolerance * vb + 1e-14 * h2:
            certified = True
            break

    res, converged, trace = best
    basis = MeasurementBasis(givens_unitary(res.x, dim), tol)
    a_terms = complement_terms(basis.kets.conj().T @ psi_t,
                               basis.kets.conj().T @ h.entries @ basis.kets, tol)
    k = float(np.sum(a_terms**2))
    if not converged:
        warnings.warn("measurement optimization did not converge; returning best-so-far", RuntimeWarning)
    return OptimizationResult(
        best_basis=basis,
        best_probe=psi0,
        j_achieved=4.0 * (h2 - k),
        complement=k,
        variance_bound=vb,
        seminorm_bound=seminorm(h) ** 2,
        restarts_used=restarts_used,
        converged=bool(converged),
        certified=certified,
        stationarity_residual=stationarity_residual(psi0, h, basis, theta, True, tol),
        stationarity_residual_raw=stationarity_residual(psi0, h, basis, theta, False, tol),
        trace=trace,
    )


def extremal_overlap(psi, h, rel_tol: float = 1e-9) -> tuple[float, bool]:
    """Squared norm of ``psi`` inside the extremal eigenspaces of ``h``, and whether either is degenerate."""
    h = as_operator(h)
    w, v = h.spectrum
    spread = max(w[-1] - w[0], 1.0)
    low = w <= w[0] + rel_tol * spread
    high = w >= w[-1] - rel_tol * spread
    cols = v[:, low | high]
    proj = cols.conj().T @ as_state(psi).amplitudes
    return float(np.vdot(proj, proj).real), bool(low.sum() > 1 or high.sum() > 1)


def optimize_probe_and_measurement(h, theta: float = 0.0, config: OptimizerConfig = OptimizerConfig(),
                                   tol: Tolerances = DEFAULT_TOLERANCES) -> OptimizationResult:
    """Maximize ``J`` jointly over the probe and the measurement basis."""
    h = as_operator(h)
    dim = h.dim
    prop = propagator(h, theta)
    hm = h.entries
    nb = n_parameters(dim)
    bound = seminorm(h) ** 2

    def split(x):
        z = x[nb:nb + dim] + 1j * x[nb + dim:]
        return x[:nb], z / np.linalg.norm(z)

    def fun(x):
        bx, psi0 = split(x)
        psi_t = prop @ psi0
        hpsi = hm @ psi_t
        h2 = float(np.vdot(hpsi, hpsi).real)
        return -4.0 * (h2 - _complement_fast(bx, dim, psi_t, hpsi, tol))

    best = None
    restarts_used = 0
    certified = False
    for i in range(config.restarts):
        rng = np.random.default_rng([config.seed, i])
        x0 = np.concatenate([rng.uniform(0.0, 2 * np.pi, nb), rng.normal(size=2 * dim)])
        run = _Run(fun, config)
        res, converged = run.run(x0)
        restarts_used = i + 1
        if best is None or res.fun < best[0].fun:
            best = (res, converged, run.trace)
        if config.certify and -best[0].fun >= bound - config.certify_tolerance * max(1.0, bound):
            certified = True
            break

    res, converged, trace = best
    bx, psi0 = split(res.x)
    probe = PureState(psi0, tol)
    basis = MeasurementBasis(givens_unitary(bx, dim), tol)
    psi_t = prop @ psi0
    a_terms = complement_terms(basis.kets.conj().T @ psi_t, basis.kets.conj().T @ hm @ basis.kets, tol)
    k = float(np.sum(a_terms**2))
    h2 = float(np.vdot(hm @ psi_t, hm @ psi_t).real)
    overlap, degenerate = extremal_overlap(probe, h)
    if not converged:
        warnings.warn("probe/measurement optimization did not converge; returning best-so-far", RuntimeWarning)
    return OptimizationResult(
        best_basis=basis,
        best_probe=probe,
        j_achieved=4.0 * (h2 - k),
        complement=k,
        variance_bound=variance_bound(probe, h),
        seminorm_bound=bound,
        restarts_used=restarts_used,
        converged=bool(converged),
        certified=certified,
        stationarity_residual=stationarity_residual(probe, h, basis, theta, True, tol),
        stationarity_residual_raw=stationarity_residual(probe, h, basis, theta, False, tol),
        trace=trace,
        extremal_overlap=overlap,
        degenerate_extremes=degenerate,
    )
