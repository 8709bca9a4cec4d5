"""Monte-Carlo check of the Cramer-Rao bound with a maximum-likelihood estimator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.exceptions import NoInformationError, ValidationError
from fisherop.fisher import fisher_information, seminorm
from fisherop.quantum import (
    HermitianOperator,
    MeasurementBasis,
    PureState,
    as_basis,
    as_operator,
    as_state,
    check_dims,
)


@dataclass(frozen=True, eq=False)
class Scenario:
    probe: PureState
    hamiltonian: HermitianOperator
    basis: MeasurementBasis

    def __post_init__(self) -> None:
        object.__setattr__(self, "probe", as_state(self.probe))
        object.__setattr__(self, "hamiltonian", as_operator(self.hamiltonian))
        object.__setattr__(self, "basis", as_basis(self.basis))
        check_dims(self.probe, self.hamiltonian, self.basis)

    @property
    def dim(self) -> int:
        return self.probe.dim

    def probabilities(self, thetas) -> np.ndarray:
        """Outcome probabilities, shape ``(len(thetas), dim)`` (or ``(dim,)`` for a scalar)."""
        w, v = self.hamiltonian.spectrum
        th = np.atleast_1d(np.asarray(thetas, dtype=float))
        coeff = v.conj().T @ self.probe.amplitudes
        overlap = self.basis.kets.conj().T @ v
        amps = (np.exp(-1j * np.outer(th, w)) * coeff) @ overlap.T
        p = np.abs(amps) ** 2
        return p[0] if np.ndim(thetas) == 0 else p

    def fisher_info(self, theta: float) -> float:
        return fisher_information(self.probe, self.hamiltonian, self.basis, theta)


def sample_outcomes(scenario: Scenario, theta: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Counts per outcome for ``n`` single-shot measurements (inverse-CDF sampling)."""
    p = scenario.probabilities(theta)
    cdf = np.cumsum(p)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.bincount(np.minimum(idx, len(p) - 1), minlength=len(p))


class MLEResult(NamedTuple):
    theta_hat: float
    at_boundary: bool
    floor_hit: bool


def mle_estimate(scenario: Scenario, counts, window: tuple[float, float], grid_points: int = 256,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> MLEResult:
    """Maximize ``sum_k n_k log p_k(theta)`` over ``window``.

    A 256-point grid locates the peak, then golden-section search refines
    it between the neighbouring grid points.  If the grid maximum sits on
    the window edge the estimate stays there and ``at_boundary`` is set.
    """
    counts = np.asarray(counts, dtype=float)
    lo, hi = map(float, window)
    if not lo < hi:
        raise ValidationError(f"empty estimation window {window}")
    grid = np.linspace(lo, hi, grid_points)
    pg = scenario.probabilities(grid)
    if np.all(np.ptp(pg, axis=0) < tol.probability_floor):
        raise NoInformationError("outcome probabilities do not depend on theta inside the window")
    eps = tol.probability_floor
    floor_hit = bool(np.any((pg < eps) & (counts > 0)))
    loglik = np.log(np.maximum(pg, eps)) @ counts
    i = int(np.argmax(loglik))
    if i == 0 or i == grid_points - 1:
        return MLEResult(float(grid[i]), True, floor_hit)

    def neg(th):
        return -float(np.log(np.maximum(scenario.probabilities(th), eps)) @ counts)

    res = minimize_scalar(neg, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden",
                          options={"xtol": 1e-12})
    th = float(np.clip(res.x, grid[i - 1], grid[i + 1]))
    if neg(th) > -loglik[i]:
        th = float(grid[i])
    return MLEResult(th, False, floor_hit)


@dataclass(frozen=True)
class EstimationExperiment:
    scenario: Scenario
    true_theta: float
    samples: int
    trials: int
    seed: int = 0
    window: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.samples < 1 or self.trials < 1:
            raise ValidationError("samples and trials must both be >= 1")
        lo, hi = self.search_window
        if not lo < self.true_theta < hi:
            raise ValidationError(f"true_theta={self.true_theta} is not inside the window ({lo}, {hi})")

    @property
    def search_window(self) -> tuple[float, float]:
        if self.window is not None:
            return tuple(map(float, self.window))
        spread = seminorm(self.scenario.hamiltonian)
        if spread == 0:
            raise NoInformationError("Hamiltonian is proportional to the identity")
        half = np.pi / (2 * spread)
        return (self.true_theta - half, self.true_theta + half)


@dataclass(frozen=True)
class CramerRaoReport:
    n: int
    t: int
    j_true: float
    bound: float
    empirical_variance: float
    ratio: float
    bias: float
    boundary_hits: int
    lower_ok: bool | None
    upper_ok: bool | None

    @property
    def assertions_skipped(self) -> bool:
        return self.lower_ok is None

    @property
    def passed(self) -> bool:
        return bool(self.lower_ok is not False and self.upper_ok is not False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "j_true": self.j_true,
            "bound": self.bound,
            "empirical_variance": self.empirical_variance,
            "ratio": self.ratio,
            "bias": self.bias,
            "boundary_hits": self.boundary_hits,
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
        }


def run_trials(exp: EstimationExperiment) -> np.ndarray:
    """One MLE per trial; trial ``i`` draws from ``default_rng(seed + i)``."""
    window = exp.search_window
    out = np.empty(exp.trials)
    for i in range(exp.trials):
        rng = np.random.default_rng(exp.seed + i)
        counts = sample_outcomes(exp.scenario, exp.true_theta, exp.samples, rng)
        out[i] = mle_estimate(exp.scenario, counts, window).theta_hat
    return out


def cramer_rao_check(exp: EstimationExperiment) -> CramerRaoReport:
    """Compare the MLE mean-squared error with ``1 / (N J)``.

    The lower check is ``ratio >= 1 - 3/sqrt(T)``; the upper check
    ``ratio <= 1.3`` applies only when ``N >= 10**4``.  Both are skipped
    (``None``) for a single trial.
    """
    j = exp.scenario.fisher_info(exp.true_theta)
    if not j > 0:
        raise NoInformationError(f"J(theta) = {j}; the bound is infinite")
    estimates = run_trials(exp)
    lo, hi = exp.search_window
    hits = int(np.sum(np.isclose(estimates, lo) | np.isclose(estimates, hi)))
    err = estimates - exp.true_theta
    mse = float(np.mean(err**2))
    bound = 1.0 / (exp.samples * j)
    ratio = mse / bound
    if exp.trials < 2:
        lower_ok = upper_ok = None
    else:
        lower_ok = bool(ratio >= 1.0 - 3.0 / np.sqrt(exp.trials))
        upper_ok = bool(ratio <= 1.3) if exp.samples >= 10_000 else None
    return CramerRaoReport(exp.samples, exp.trials, j, bound, mse, ratio, float(np.mean(err)), hits, lower_ok, upper_ok)
