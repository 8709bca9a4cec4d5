"""
Interferometry with NOON and phase states
=========================================

An n-photon Mach-Zehnder interferometer is a spin j = n/2 rotated about y.
Counting photons in each output port is a Jz measurement.  NOON probes
reach the Heisenberg value n^2, phase states 4j(j+1)/3 ~ n^2/3.
"""

import numpy as np

from fisherop import su2

print(" j    n   J(NOON)     n^2   J(phase)    4j(j+1)/3")
for j in su2.half_integers(0.5, 6):
    sys = su2.spin_operators(j)
    noon = su2.mz_fisher_noon(sys, theta=0.3).fisher_info
    phase = su2.mz_fisher_phase_state(sys, theta=0.3).fisher_info
    print(f"{j:4.1f} {sys.photons:3d}  {noon:9.4f} {sys.photons**2:6d}  {phase:9.4f}   {4 * j * (j + 1) / 3:9.4f}")

# the optimum is not unique: a basis built on the two extremal Jy kets does just as well
sys = su2.spin_operators(3)
print("\nj = 3, pair basis:")
for xi in np.linspace(0, np.pi, 4):
    basis = su2.noon_optimal_pair_basis(sys, xi)
    print(f"  xi = {xi:.3f}: J = {su2.mz_fisher_noon(sys, theta=1.0, basis=basis).fisher_info:.10f}")

# the rotation matrix is real in the Jz basis, as Wigner's d-matrix should be
worst = max(su2.wigner_realness_check(su2.spin_operators(j), t)
            for j in (5, 12.5, 25) for t in np.linspace(0, 2 * np.pi, 16))
print(f"\nmax |Im d^j(theta)| for j up to 25: {worst:.1e}")
