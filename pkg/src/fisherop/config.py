"""Numerical tolerances shared by every module.

All thresholds live in one frozen record so that a scenario file can
override them in one place (see :func:`fisherop.scenario.load_scenario`).
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-12
    unitarity: float = 1e-10
    normalization: float = 1e-12
    probability_sum: float = 1e-10
    degenerate_amplitude: float = 1e-14
    # r_k below this multiple of |<k|H|psi>| is round-off around a zero crossing
    crossing_ratio: float = 1.5e-8
    probability_floor: float = 1e-12
    flux_floor_sq: float = 1e-24
    stationarity_denominator: float = 1e-12
    closed_form_denominator: float = 1e-12
    clamp_slack: float = 1e-10
    finite_difference_step: float = 1e-6

    def updated(self, **overrides: float) -> "Tolerances":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown tolerance field(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})


DEFAULT_TOLERANCES = Tolerances()
