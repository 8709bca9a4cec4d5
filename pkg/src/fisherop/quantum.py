"""Dense pure-state quantum mechanics: operators, states, bases, evolution.

Everything here is a thin, validated layer over numpy.  Objects are
immutable; the only lazily computed attribute is the spectrum of a
:class:`HermitianOperator`, which is deterministic and safe to compute
more than once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Union

import numpy as np
from scipy.stats import unitary_group

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.exceptions import DimensionError, ValidationError

ArrayLike = Union[np.ndarray, list, tuple]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def fix_column_phases(vectors: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real and positive.

    Among entries whose magnitude is within ``rel_tol`` of the maximum the
    first one wins, which keeps the choice stable under round-off.
    """
    out = np.array(vectors, dtype=complex, copy=True)
    for c in range(out.shape[1]):
        mag = np.abs(out[:, c])
        top = mag.max()
        if top == 0.0:
            continue
        i = int(np.flatnonzero(mag >= top * (1.0 - rel_tol))[0])
        out[:, c] *= np.exp(-1j * np.angle(out[i, c]))
        out[i, c] = abs(out[i, c])
    return out


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigendecompose(matrix: ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Eigenvalues (ascending) and phase-fixed unitary eigenvectors of a Hermitian matrix."""
    m = np.asarray(matrix, dtype=complex)
    _check_hermitian(m, tol.hermiticity)
    w, v = np.linalg.eigh(m)
    v = fix_column_phases(v)
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(w, v)


def _check_hermitian(m: np.ndarray, tol: float) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValidationError(f"operator must be a non-empty square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValidationError(f"operator is not Hermitian: max |H - H^dagger| = {dev:.3e} > {tol:.0e}")


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hamiltonian or observable stored as a dense complex matrix."""

    entries: np.ndarray
    tol: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        _check_hermitian(m, self.tol.hermiticity)
        # symmetrize away the sub-tolerance residue so eigh sees an exact Hermitian
        object.__setattr__(self, "entries", _frozen((m + m.conj().T) / 2))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigendecompose(self.entries, self.tol)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.spectrum.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.spectrum.eigenvectors

    def expectation(self, psi: "PureState | ArrayLike") -> float:
        v = as_state(psi).amplitudes
        return float(np.vdot(v, self.entries @ v).real)

    def shifted(self, c: float) -> "HermitianOperator":
        return HermitianOperator(self.entries + c * np.eye(self.dim), self.tol)

    def __matmul__(self, other):
        if isinstance(other, PureState):
            return self.entries @ other.amplitudes
        return self.entries @ np.asarray(other)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector."""

    amplitudes: np.ndarray
    tol: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self) -> None:
        v = np.asarray(self.amplitudes, dtype=complex)
        if v.ndim != 1 or v.size == 0:
            raise ValidationError(f"state must be a non-empty vector, got shape {v.shape}")
        err = abs(float(np.vdot(v, v).real) - 1.0)
        if err > self.tol.normalization:
            raise ValidationError(f"state is not normalized: | <psi|psi> - 1 | = {err:.3e}")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @classmethod
    def normalized(cls, vector: ArrayLike, tol: Tolerances = DEFAULT_TOLERANCES) -> "PureState":
        v = np.asarray(vector, dtype=complex)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(v / n, tol)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def overlap(self, other: "PureState | ArrayLike") -> complex:
        return complex(np.vdot(self.amplitudes, as_state(other).amplitudes))


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Complete orthonormal basis, kets stored as the columns of a unitary."""

    kets: np.ndarray
    tol: Tolerances = DEFAULT_TOLERANCES

    def __post_init__(self) -> None:
        u = np.asarray(self.kets, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] == 0:
            raise ValidationError(f"basis must be a square matrix of column kets, got shape {u.shape}")
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        if dev > self.tol.unitarity:
            raise ValidationError(f"basis is not orthonormal: max |U^dagger U - 1| = {dev:.3e}")
        object.__setattr__(self, "kets", _frozen(u))

    @classmethod
    def computational(cls, dim: int) -> "MeasurementBasis":
        return cls(np.eye(dim))

    @classmethod
    def eigenbasis(cls, op: HermitianOperator | ArrayLike) -> "MeasurementBasis":
        return cls(as_operator(op).eigenvectors)

    @property
    def dim(self) -> int:
        return self.kets.shape[0]

    def ket(self, k: int) -> np.ndarray:
        return self.kets[:, k]

    def permuted(self, order) -> "MeasurementBasis":
        return MeasurementBasis(self.kets[:, list(order)], self.tol)


@dataclass(frozen=True)
class AmplitudeDecomposition:
    """Polar form ``<k|psi> = r_k exp(i phi_k)`` of a state in a basis."""

    amplitudes: np.ndarray
    radii: np.ndarray
    phases: np.ndarray
    probabilities: np.ndarray
    degenerate: np.ndarray

    def reconstruct(self, basis: MeasurementBasis) -> np.ndarray:
        return basis.kets @ (self.radii * np.exp(1j * self.phases))


def as_operator(h) -> HermitianOperator:
    return h if isinstance(h, HermitianOperator) else HermitianOperator(np.asarray(h))


def as_state(psi) -> PureState:
    return psi if isinstance(psi, PureState) else PureState(np.asarray(psi))


def as_basis(basis) -> MeasurementBasis:
    return basis if isinstance(basis, MeasurementBasis) else MeasurementBasis(np.asarray(basis))


def check_dims(*objs) -> int:
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def propagator(h: HermitianOperator | ArrayLike, theta: float) -> np.ndarray:
    """``exp(-i H theta)`` assembled from the cached spectrum."""
    h = as_operator(h)
    w, v = h.spectrum
    return (v * np.exp(-1j * w * theta)) @ v.conj().T


def evolve(psi0, h, theta: float) -> PureState:
    """Schrodinger evolution ``exp(-i H theta) |psi0>``."""
    psi0, h = as_state(psi0), as_operator(h)
    check_dims(psi0, h)
    if theta == 0:
        return psi0
    w, v = h.spectrum
    out = v @ (np.exp(-1j * w * theta) * (v.conj().T @ psi0.amplitudes))
    return PureState(out, psi0.tol)


def decompose(psi, basis, tol: Tolerances = DEFAULT_TOLERANCES) -> AmplitudeDecomposition:
    """Radii, phases in ``[0, 2pi)`` and probabilities of ``psi`` in ``basis``.

    Amplitudes with ``r_k`` below ``tol.degenerate_amplitude`` get phase 0
    and are marked in ``degenerate``.
    """
    psi, basis = as_state(psi), as_basis(basis)
    check_dims(psi, basis)
    a = basis.kets.conj().T @ psi.amplitudes
    r = np.abs(a)
    degenerate = r < tol.degenerate_amplitude
    phases = np.mod(np.angle(a), 2 * np.pi)
    phases[degenerate] = 0.0
    # mod can return exactly 2pi for tiny negative angles
    phases[phases >= 2 * np.pi] = 0.0
    return AmplitudeDecomposition(a, r, phases, r**2, degenerate)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> HermitianOperator:
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator(scale * (x + x.conj().T) / 2)


def random_state(dim: int, rng: np.random.Generator) -> PureState:
    return PureState.normalized(rng.normal(size=dim) + 1j * rng.normal(size=dim))


def random_basis(dim: int, rng: np.random.Generator) -> MeasurementBasis:
    if dim == 1:
        return MeasurementBasis.computational(1)
    return MeasurementBasis(unitary_group.rvs(dim, random_state=rng))
