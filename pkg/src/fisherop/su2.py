"""Spin-j operators, NOON and phase states, and Mach-Zehnder Fisher information.

In a lossless Mach-Zehnder interferometer with ``n`` photons the phase
difference is generated by ``Jy`` on the spin ``j = n/2`` representation,
and a photon-number-difference measurement is the ``Jz`` eigenbasis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.exceptions import ValidationError
from fisherop.fisher import FisherReport, fisher_report
from fisherop.quantum import HermitianOperator, MeasurementBasis, PureState, eigendecompose, propagator


@dataclass(frozen=True, eq=False)
class SpinSystem:
    j: float
    jx: HermitianOperator
    jy: HermitianOperator
    jz: HermitianOperator

    @property
    def dim(self) -> int:
        return self.jz.dim

    @property
    def photons(self) -> int:
        return int(round(2 * self.j))

    @property
    def casimir(self) -> float:
        return self.j * (self.j + 1)

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(self.dim) - self.j


def _check_spin(j) -> float:
    two_j = Fraction(j).limit_denominator(1000) * 2
    if two_j.denominator != 1 or two_j <= 0 or abs(float(two_j) - 2 * float(j)) > 1e-12:
        raise ValidationError(f"j={j!r} must be a positive integer or half-integer")
    return float(two_j) / 2


def spin_operators(j) -> SpinSystem:
    """Angular-momentum matrices in the ``Jz`` eigenbasis, ``m`` ascending from ``-j``."""
    j = _check_spin(j)
    m = np.arange(int(round(2 * j)) + 1) - j
    # <m+1| J+ |m> = sqrt(j(j+1) - m(m+1))
    j_plus = np.diag(np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1)), k=-1).astype(complex)
    j_minus = j_plus.conj().T
    return SpinSystem(
        j=j,
        jx=HermitianOperator((j_plus + j_minus) / 2),
        jy=HermitianOperator((j_plus - j_minus) / 2j),
        jz=HermitianOperator(np.diag(m).astype(complex)),
    )


def jz_eigenbasis(sys: SpinSystem) -> MeasurementBasis:
    return MeasurementBasis.computational(sys.dim)


def jy_eigenbasis(sys: SpinSystem) -> MeasurementBasis:
    """``|j, m>_y`` kets as columns, ``m`` ascending.

    Each ket has its largest component real positive.  Because ``Jy`` is
    imaginary, ``conj(|j,m>_y)`` is an eigenket for ``-m``; the ``-m`` ket
    is set to exactly that conjugate (which the phase rule would also
    select) so that symmetric superpositions are real in the ``Jz`` basis.
    """
    w, v = eigendecompose(sys.jy.entries)
    v = np.array(v)
    d = sys.dim
    for i in range(d // 2):
        v[:, i] = np.conj(v[:, d - 1 - i])
    if d % 2:
        mid = v[:, d // 2]
        v[:, d // 2] = np.real(mid) * np.sign(np.real(mid[np.argmax(np.abs(mid))]))
    return MeasurementBasis(v)


def noon_state(sys: SpinSystem, chi: float = 0.0) -> PureState:
    """``(|j,+j>_y + exp(i chi)|j,-j>_y) / sqrt 2``."""
    ky = jy_eigenbasis(sys).kets
    return PureState.normalized(ky[:, -1] + np.exp(1j * chi) * ky[:, 0])


def noon_optimal_pair_basis(sys: SpinSystem, xi: float = 0.0) -> MeasurementBasis:
    """``(|j,+j>_y +- exp(i xi)|j,-j>_y)/sqrt 2`` completed by the remaining ``Jy`` kets."""
    ky = jy_eigenbasis(sys).kets
    top, bottom = ky[:, -1], ky[:, 0]
    plus = (top + np.exp(1j * xi) * bottom) / np.sqrt(2)
    minus = (top - np.exp(1j * xi) * bottom) / np.sqrt(2)
    if sys.dim == 2:
        return MeasurementBasis(np.column_stack([plus, minus]))
    return MeasurementBasis(np.column_stack([plus, minus, ky[:, 1:-1]]))


def phase_state(sys: SpinSystem, zeta: float = 0.0) -> PureState:
    """``(2j+1)^(-1/2) sum_m exp(i m zeta) |j,m>_y``."""
    ky = jy_eigenbasis(sys).kets
    return PureState.normalized(ky @ np.exp(1j * sys.m_values * zeta))


def mz_fisher_noon(sys: SpinSystem, chi: float = 0.0, theta: float = 0.0,
                   basis: MeasurementBasis | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FisherReport:
    """NOON probe under ``Jy`` measured in ``basis`` (``Jz`` eigenbasis by default)."""
    basis = jz_eigenbasis(sys) if basis is None else basis
    return fisher_report(noon_state(sys, chi), sys.jy, basis, theta, tol)


def mz_fisher_phase_state(sys: SpinSystem, zeta: float = 0.0, theta: float = 0.0,
                          basis: MeasurementBasis | None = None, tol: Tolerances = DEFAULT_TOLERANCES) -> FisherReport:
    """Phase-state probe under ``Jy`` measured in ``basis`` (``Jz`` eigenbasis by default)."""
    basis = jz_eigenbasis(sys) if basis is None else basis
    return fisher_report(phase_state(sys, zeta), sys.jy, basis, theta, tol)


def wigner_rotation(sys: SpinSystem, theta: float) -> np.ndarray:
    """``<j,m1| exp(-i theta Jy) |j,m2>`` in the ``Jz`` basis, via the spectrum of ``Jy``."""
    return propagator(sys.jy, theta)


def wigner_realness_check(sys: SpinSystem, theta: float) -> float:
    """Largest imaginary part of the ``Jy`` rotation matrix in the ``Jz`` basis."""
    return float(np.max(np.abs(wigner_rotation(sys, theta).imag)))


def half_integers(lo: float, hi: float) -> list[float]:
    """``[lo, lo + 1/2, ..., hi]``."""
    return [k / 2 for k in range(int(round(2 * lo)), int(round(2 * hi)) + 1)]
