"""Reference computations that share no code path with the package."""

import numpy as np
from scipy.linalg import expm


def hermitian3_eigenvalues(a):
    """Closed-form (trigonometric) roots of the characteristic cubic of a 3x3 Hermitian matrix."""
    a = np.asarray(a, dtype=complex)
    p1 = abs(a[0, 1]) ** 2 + abs(a[0, 2]) ** 2 + abs(a[1, 2]) ** 2
    q = np.trace(a).real / 3
    p2 = sum((a[i, i].real - q) ** 2 for i in range(3)) + 2 * p1
    p = np.sqrt(p2 / 6)
    b = (a - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(b).real / 2, -1, 1)
    phi = np.arccos(r) / 3
    e1 = q + 2 * p * np.cos(phi)
    e3 = q + 2 * p * np.cos(phi + 2 * np.pi / 3)
    return np.sort([e3, 3 * q - e1 - e3, e1])


def evolve_expm(psi0, h, theta):
    return expm(-1j * theta * np.asarray(h)) @ np.asarray(psi0)


def probabilities(psi0, h, basis, theta):
    return np.abs(np.asarray(basis).conj().T @ evolve_expm(psi0, h, theta)) ** 2


def amplitudes(psi0, h, basis, theta):
    return np.asarray(basis).conj().T @ evolve_expm(psi0, h, theta)


def fd_probability_derivative(psi0, h, basis, theta, step=1e-6):
    return (probabilities(psi0, h, basis, theta + step) - probabilities(psi0, h, basis, theta - step)) / (2 * step)


def fd_fisher(psi0, h, basis, theta, step=1e-6):
    p = probabilities(psi0, h, basis, theta)
    dp = fd_probability_derivative(psi0, h, basis, theta, step)
    return float(np.sum(dp**2 / p))


def fd_phase_velocity(psi0, h, basis, theta, step=1e-6):
    """``r_k dphi_k/dtheta`` from central differences of the unwrapped phase."""
    a_plus = amplitudes(psi0, h, basis, theta + step)
    a_minus = amplitudes(psi0, h, basis, theta - step)
    dphi = np.angle(a_plus * np.conj(a_minus)) / (2 * step)
    return np.abs(amplitudes(psi0, h, basis, theta)) * dphi


def fisher_by_brute_force_bases(psi0, h, theta, n, rng):
    """Largest Fisher information over ``n`` Haar-random bases."""
    from scipy.stats import unitary_group

    d = len(psi0)
    best = 0.0
    for _ in range(n):
        u = unitary_group.rvs(d, random_state=rng)
        best = max(best, fd_fisher(psi0, h, u, theta))
    return best


def rayleigh_spread(h, n, rng, polish=False):
    """Largest minus smallest Rayleigh quotient over ``n`` random states.

    With ``polish`` the best and worst samples seed a local optimization of
    the quotient, which closes the sampling gap without an eigensolver.
    """
    from scipy.optimize import minimize

    h = np.asarray(h)
    d = h.shape[0]
    v = rng.normal(size=(d, n)) + 1j * rng.normal(size=(d, n))
    v /= np.linalg.norm(v, axis=0)
    q = np.einsum("in,ij,jn->n", v.conj(), h, v).real
    if not polish:
        return q.max() - q.min()

    def quotient(x):
        z = x[:d] + 1j * x[d:]
        return np.vdot(z, h @ z).real / np.vdot(z, z).real

    ends = []
    for sign, i in ((-1, np.argmax(q)), (1, np.argmin(q))):
        x0 = np.concatenate([v[:, i].real, v[:, i].imag])
        ends.append(quotient(minimize(lambda x: sign * quotient(x), x0, method="BFGS").x))
    return ends[0] - ends[1]


def expectation(h, psi):
    psi = np.asarray(psi)
    return np.vdot(psi, np.asarray(h) @ psi).real
