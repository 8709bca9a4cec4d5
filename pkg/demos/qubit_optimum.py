"""
Fisher information of a two-level probe
=======================================

A probe spread over two energy levels, measured in a real rotated basis.
The closed form and the numeric Fisher operator agree, and the optimum
(equal weights, measurement axis at 45 degrees) reaches (l1 - l2)^2.
"""

import numpy as np

from fisherop.fisher import fisher_operator, fisher_report
from fisherop.qubit import QubitScenario, j_closed_form, optimal_qubit

l1, l2 = -0.4, 1.1

# J as the measurement axis turns, for an equal-weight probe with beta = pi/2
print("alpha      J(closed)        J(numeric)")
for alpha in np.linspace(0.1, 1.4, 6):
    s = QubitScenario(l1, l2, alpha, np.pi / 4, chi=np.pi / 2)
    num = fisher_report(s.probe(), s.hamiltonian(), s.basis(), s.theta).fisher_info
    print(f"{alpha:.3f}   {j_closed_form(s):.12f}   {num:.12f}")

# the per-outcome weights cos^2(tau_k) behind those numbers
s = QubitScenario(l1, l2, 0.3, 0.9, chi=0.4)
f = fisher_operator(s.probe(), s.hamiltonian(), s.basis(), 0.0)
print("\ncos^2 tau at alpha=0.3, gamma=0.9:", f.coefficients)

opt = optimal_qubit(l1, l2)
for theta in (0.0, 0.7, 2.0):
    j = fisher_report(opt.probe, np.diag([l1, l2]), opt.basis, theta).fisher_info
    print(f"optimal setting, theta={theta}: J = {j:.12f}   (l1 - l2)^2 = {opt.j_max:.12f}")
