"""Scenario documents (JSON) describing probe, dynamics, measurement and theta values.

Complex numbers are ``[re, im]`` pairs.  Recognised kinds:

``explicit``
    ``hamiltonian`` (matrix), ``probe`` (vector), ``basis`` (matrix of
    column kets, or ``"optimize"``).
``qubit``
    ``lambda1``, ``lambda2``, ``alpha``, ``gamma``, optional ``chi``;
    ``basis`` may be ``"optimize"``.
``noon`` / ``phase_state``
    ``j``, optional ``chi`` (noon) or ``zeta`` (phase_state), ``basis`` in
    ``jz``, ``optimal_pair`` (with optional ``xi``) or ``optimize``.

Every document carries exactly one of ``theta`` or ``theta_grid``
(``{"start", "stop", "points"}``, endpoints included), and optionally
``seed`` and ``tolerances``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fisherop import su2
from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.estimation import Scenario
from fisherop.exceptions import ValidationError
from fisherop.qubit import QubitScenario
from fisherop.quantum import HermitianOperator, MeasurementBasis, PureState
from fisherop.tables import digest

KINDS = ("explicit", "qubit", "noon", "phase_state")


@dataclass(frozen=True, eq=False)
class ScenarioSpec:
    kind: str
    probe: PureState
    hamiltonian: HermitianOperator
    basis: MeasurementBasis | None
    thetas: np.ndarray
    seed: int
    tol: Tolerances
    sha256: str

    @property
    def optimize_basis(self) -> bool:
        return self.basis is None

    def scenario(self, basis: MeasurementBasis | None = None) -> Scenario:
        return Scenario(self.probe, self.hamiltonian, basis if basis is not None else self.basis)


def _pair(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v)):
        raise ValidationError(f"{where}: expected a [re, im] pair, got {v!r}")
    return complex(v[0], v[1])


def parse_vector(doc, name: str) -> np.ndarray:
    if not isinstance(doc, list) or not doc:
        raise ValidationError(f"{name}: expected a non-empty list of [re, im] pairs")
    return np.array([_pair(v, f"{name}[{i}]") for i, v in enumerate(doc)])


def parse_matrix(doc, name: str) -> np.ndarray:
    if not isinstance(doc, list) or not doc:
        raise ValidationError(f"{name}: expected a non-empty list of rows")
    n = len(doc)
    rows = []
    for i, row in enumerate(doc):
        if not isinstance(row, list) or len(row) != n:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ValidationError(f"{name} row {i}: expected {n} entries, got {got}")
        rows.append([_pair(v, f"{name}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows)


def _number(doc: dict, key: str, default=None) -> float:
    if key not in doc:
        if default is None:
            raise ValidationError(f"{key}: required field missing")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"{key}: expected a number, got {v!r}")
    return float(v)


def _thetas(doc: dict) -> np.ndarray:
    has_t, has_g = "theta" in doc, "theta_grid" in doc
    if has_t == has_g:
        raise ValidationError("theta/theta_grid: exactly one must be given")
    if has_t:
        return np.array([_number(doc, "theta")])
    g = doc["theta_grid"]
    if isinstance(g, list) and len(g) == 3:
        g = dict(zip(("start", "stop", "points"), g))
    if not isinstance(g, dict):
        raise ValidationError("theta_grid: expected {start, stop, points}")
    pts = g.get("points")
    if isinstance(pts, bool) or not isinstance(pts, int) or pts < 1:
        raise ValidationError(f"theta_grid.points: expected a positive integer, got {pts!r}")
    return np.linspace(_number(g, "start"), _number(g, "stop"), pts)


def _wrap(fn, field_name: str):
    try:
        return fn()
    except ValidationError as e:
        msg = str(e)
        raise ValidationError(msg if msg.startswith(field_name) else f"{field_name}: {msg}") from None


def parse_scenario(doc: dict, raw: bytes | None = None) -> ScenarioSpec:
    if not isinstance(doc, dict):
        raise ValidationError("scenario: top level must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ValidationError(f"kind: expected one of {KINDS}, got {kind!r}")
    overrides = doc.get("tolerances", {})
    if not isinstance(overrides, dict):
        raise ValidationError("tolerances: expected an object")
    try:
        tol = DEFAULT_TOLERANCES.updated(**overrides)
    except (ValueError, TypeError) as e:
        raise ValidationError(f"tolerances: {e}") from None
    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f"seed: expected an integer, got {seed!r}")
    thetas = _thetas(doc)
    basis_doc = doc.get("basis")

    if kind == "explicit":
        for key in ("hamiltonian", "probe", "basis"):
            if key not in doc:
                raise ValidationError(f"{key}: required field missing")
        h = _wrap(lambda: HermitianOperator(parse_matrix(doc["hamiltonian"], "hamiltonian"), tol), "hamiltonian")
        probe = _wrap(lambda: PureState(parse_vector(doc["probe"], "probe"), tol), "probe")
        if basis_doc == "optimize":
            basis = None
        else:
            basis = _wrap(lambda: MeasurementBasis(parse_matrix(basis_doc, "basis"), tol), "basis")
        dims = {"hamiltonian": h.dim, "probe": probe.dim}
        if basis is not None:
            dims["basis"] = basis.dim
        if len(set(dims.values())) != 1:
            raise ValidationError(f"dimension mismatch between fields: {dims}")
    elif kind == "qubit":
        q = _wrap(lambda: QubitScenario(_number(doc, "lambda1"), _number(doc, "lambda2"),
                                        _number(doc, "alpha"), _number(doc, "gamma"), _number(doc, "chi", 0.0)),
                  "qubit")
        h, probe = q.hamiltonian(), q.probe()
        if basis_doc not in (None, "alpha", "optimize"):
            raise ValidationError(f"basis: expected 'alpha' or 'optimize' for a qubit scenario, got {basis_doc!r}")
        basis = None if basis_doc == "optimize" else q.basis()
    else:
        sys = _wrap(lambda: su2.spin_operators(_number(doc, "j")), "j")
        h = sys.jy
        if kind == "noon":
            probe = su2.noon_state(sys, _number(doc, "chi", 0.0))
        else:
            probe = su2.phase_state(sys, _number(doc, "zeta", 0.0))
        choice = basis_doc or "jz"
        if choice == "jz":
            basis = su2.jz_eigenbasis(sys)
        elif choice == "optimal_pair":
            basis = su2.noon_optimal_pair_basis(sys, _number(doc, "xi", 0.0))
        elif choice == "optimize":
            basis = None
        else:
            raise ValidationError(f"basis: expected jz, optimal_pair or optimize, got {choice!r}")

    sha = digest(raw) if raw is not None else digest(doc)
    return ScenarioSpec(kind, probe, h, basis, thetas, seed, tol, sha)


def load_scenario(path: Path | str) -> ScenarioSpec:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ValidationError(f"scenario file: {e}") from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ValidationError(f"scenario file: invalid JSON ({e})") from None
    return parse_scenario(doc, raw)
