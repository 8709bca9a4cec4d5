"""
Maximum likelihood against the Cramer-Rao bound
===============================================

Simulate N single-shot measurements, estimate theta by maximum likelihood,
repeat T times and compare the mean squared error with 1/(N J).
"""

import numpy as np

from fisherop import su2
from fisherop.estimation import EstimationExperiment, Scenario, cramer_rao_check

sys = su2.spin_operators(2)
noon = Scenario(su2.noon_state(sys), sys.jy, su2.jz_eigenbasis(sys))
print(f"NOON j=2, J(0.3) = {noon.fisher_info(0.3):.6f}")

print("    N      MSE           1/(NJ)        ratio")
for n in (500, 2000, 10_000):
    rep = cramer_rao_check(EstimationExperiment(noon, 0.3, n, 200, seed=2026))
    print(f"{n:6d}  {rep.empirical_variance:.4e}    {rep.bound:.4e}    {rep.ratio:.3f}")

# the likelihood of a NOON measurement repeats every pi/n; the default window is one period
exp = EstimationExperiment(noon, 0.3, 2000, 1, seed=0)
print("search window:", np.round(exp.search_window, 4))
