"""Closed-form Fisher information for a probe spanning two energy levels.

Conventions: ``|lambda_1>, |lambda_2>`` are the computational basis of
``C^2``; the probe is ``cos(g)|1> + exp(i chi) sin(g)|2>`` and the
measurement kets are ``(cos a, sin a)`` and ``(-sin a, cos a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.exceptions import DegenerateConfigurationError, NoInformationError, ValidationError
from fisherop.quantum import HermitianOperator, MeasurementBasis, PureState

HALF_PI = np.pi / 2


@dataclass(frozen=True)
class QubitScenario:
    lambda1: float
    lambda2: float
    alpha: float
    gamma: float
    chi: float = 0.0
    theta: float = 0.0

    def __post_init__(self) -> None:
        if self.lambda1 == self.lambda2:
            raise NoInformationError("lambda1 == lambda2: the probe only acquires a global phase")
        for name in ("alpha", "gamma"):
            v = getattr(self, name)
            if not 0.0 < v < HALF_PI:
                raise ValidationError(f"{name}={v!r} must lie strictly inside (0, pi/2)")

    @property
    def ratio(self) -> float:
        """``A = lambda2 / lambda1``."""
        if self.lambda1 == 0:
            raise DegenerateConfigurationError("A = lambda2/lambda1 is undefined for lambda1 = 0")
        return self.lambda2 / self.lambda1

    @property
    def beta(self) -> float:
        return float(np.mod(self.chi - (self.lambda2 - self.lambda1) * self.theta, 2 * np.pi))

    @property
    def r1(self) -> float:
        return float(np.tan(self.alpha) * np.tan(self.gamma))

    @property
    def r2(self) -> float:
        return float(np.tan(self.gamma) / np.tan(self.alpha))

    def hamiltonian(self) -> HermitianOperator:
        return HermitianOperator(np.diag([self.lambda1, self.lambda2]).astype(complex))

    def probe(self) -> PureState:
        return PureState([np.cos(self.gamma), np.exp(1j * self.chi) * np.sin(self.gamma)])

    def basis(self) -> MeasurementBasis:
        c, s = np.cos(self.alpha), np.sin(self.alpha)
        return MeasurementBasis(np.array([[c, -s], [s, c]], dtype=complex))

    def shifted(self, offset: float) -> "QubitScenario":
        return QubitScenario(self.lambda1 + offset, self.lambda2 + offset, self.alpha, self.gamma, self.chi, self.theta)


def c_coefficients(s: QubitScenario, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[float, float]:
    """``cos^2 tau_k`` for both outcomes from the ratio construction.

    Raises:
        DegenerateConfigurationError: ``lambda1 = 0`` or a vanishing denominator.
    """
    a = s.ratio
    cb = np.cos(s.beta)
    out = []
    for k, r in ((1, s.r1), (2, s.r2)):
        sign = 1.0 if k == 1 else -1.0
        num = (a * r**2 + sign * (a + 1) * cb * r + 1) ** 2
        den = (r**2 + 2 * sign * cb * r + 1) * (a**2 * r**2 + 2 * sign * a * cb * r + 1)
        if abs(den) < tol.closed_form_denominator:
            raise DegenerateConfigurationError(f"denominator {den:.3e} for outcome {k}")
        c = 1.0 - num / den
        if -tol.clamp_slack <= c < 0.0:
            c = 0.0
        elif 1.0 < c <= 1.0 + tol.clamp_slack:
            c = 1.0
        out.append(float(c))
    return out[0], out[1]


def _closed_form_parts(s: QubitScenario) -> tuple[float, float]:
    a, g, b = s.alpha, s.gamma, s.beta
    # with d = cos 2(a-g) + cos 2(a+g) + 2 cos b sin 2a sin 2g, the factors d - 2 and d + 2
    # are written in half-angle form so they do not cancel near the singular points
    ss = np.sin(2 * a) * np.sin(2 * g)
    d_minus = -4 * (np.sin(a - g) ** 2 + ss * np.sin(b / 2) ** 2)
    d_plus = 4 * (np.cos(a + g) ** 2 + ss * np.cos(b / 2) ** 2)
    num = -4 * (s.lambda1 - s.lambda2) ** 2 * ss**2 * np.sin(b) ** 2
    return float(num), float(d_minus * d_plus)


def closed_form_is_singular(s: QubitScenario, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True where the closed form is ``0/0`` and :func:`j_closed_form` returns its limit."""
    return abs(_closed_form_parts(s)[1]) < tol.closed_form_denominator


def j_closed_form(s: QubitScenario, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Fisher information ``J(alpha, beta, gamma)`` of the qubit scenario.

    The denominator vanishes only when ``sin(beta) = 0`` and the probe's
    Bloch vector is parallel to a measurement axis (``alpha = gamma`` at
    ``beta = 0``, ``alpha + gamma = pi/2`` at ``beta = pi``).  There the
    value is the limit along ``beta``, i.e. along the evolution:
    ``(lambda1 - lambda2)^2 sin^2(2 alpha)``.
    """
    num, den = _closed_form_parts(s)
    if abs(den) < tol.closed_form_denominator:
        return float((s.lambda1 - s.lambda2) ** 2 * np.sin(2 * s.alpha) ** 2)
    return num / den


class OptimalQubit(NamedTuple):
    probe: PureState
    basis: MeasurementBasis
    j_max: float


def optimal_qubit(lambda1: float, lambda2: float, chi: float = 0.0) -> OptimalQubit:
    """Equal-weight probe and the ``(|1> +- |2>)/sqrt 2`` measurement; ``J = (lambda1 - lambda2)^2``."""
    if lambda1 == lambda2:
        raise NoInformationError("lambda1 == lambda2: no probe carries information")
    probe = PureState(np.array([1.0, np.exp(1j * chi)]) / np.sqrt(2))
    basis = MeasurementBasis(np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2))
    return OptimalQubit(probe, basis, float((lambda1 - lambda2) ** 2))
