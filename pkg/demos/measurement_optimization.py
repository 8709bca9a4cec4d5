"""
Searching for the best measurement
==================================

For a fixed probe the best basis achieves 4 Var(H); letting the probe vary
as well reaches the spectral spread squared.  The search minimizes the
information complement K over Givens-parameterized unitaries.
"""

import numpy as np

from fisherop.fisher import fisher_information
from fisherop.optimize import OptimizerConfig, optimize_measurement, optimize_probe_and_measurement
from fisherop.quantum import random_basis, random_hermitian, random_state

rng = np.random.default_rng(7)
h = random_hermitian(4, rng)
psi = random_state(4, rng)
theta = 0.6

random_js = [fisher_information(psi, h, random_basis(4, rng), theta) for _ in range(200)]
print(f"200 random bases: mean J = {np.mean(random_js):.4f}, best J = {max(random_js):.4f}")

fixed = optimize_measurement(psi, h, theta, OptimizerConfig(seed=1))
print(f"optimized basis:  J = {fixed.j_achieved:.10f}  4 Var H = {fixed.variance_bound:.10f}"
      f"  (restarts {fixed.restarts_used}, certified {fixed.certified})")
print(f"  complement K went {fixed.trace[0]:.4f} -> {fixed.trace[-1]:.10f} in {len(fixed.trace) - 1} iterations")
print(f"  stationarity residual {fixed.stationarity_residual:.1e} (mean-energy frame),"
      f" {fixed.stationarity_residual_raw:.2f} (raw frame)")

free = optimize_probe_and_measurement(h, theta, OptimizerConfig(seed=1))
print(f"free probe:       J = {free.j_achieved:.10f}  ||H||^2 = {free.seminorm_bound:.10f}")
print(f"  weight of the optimal probe on the extremal eigenvectors: {free.extremal_overlap:.10f}")
