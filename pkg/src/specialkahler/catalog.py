"""Named example models with expected values.

Each entry stores a model in model-file form together with a table of
expected values (K, metric, kinetic matrix, section, prepotential existence)
at named points.  Provenance tags say where each value comes from:

``paper``    the worked example this toolkit is built around,
``derived``  worked out by hand from closed forms (noted per value),
``trivial``  follows from a symmetry of the construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modelfile import ModelDescription, parse_model_text

__all__ = ["Expected", "CatalogEntry", "CheckResult", "catalog_get", "catalog_names", "catalog_entries",
           "evaluate_quantity", "check_entry"]


@dataclass(frozen=True)
class Expected:
    """One expected value: ``quantity`` of the model at ``point``."""

    quantity: str  # 'K' | 'metric' | 'kinetic' | 'section' | 'exists'
    point: tuple
    value: object
    tol: float
    provenance: str
    note: str = ""


@dataclass(frozen=True)
class CheckResult:
    expected: Expected
    actual: object
    error: float
    passed: bool


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    model: ModelDescription
    expected: tuple
    summary: str

    @property
    def name(self) -> str:
        return self.model.name

    @property
    def flavor(self) -> str:
        return self.model.flavor

    @property
    def prepotential(self):
        return self.model.prepotential

    @property
    def coords(self):
        return self.model.coords

    @property
    def base_point(self):
        return self.model.base_point

    @property
    def provenance(self) -> str:
        return self.model.provenance

    def to_text(self) -> str:
        return self.model.to_text()


def _entry(text: str, summary: str, expected: Sequence[Expected]) -> CatalogEntry:
    return CatalogEntry(parse_model_text(text), tuple(expected), summary)


def _pt(*z):
    return tuple(complex(c) for c in z)


_I = 1j

_ENTRIES = [
    _entry(
        """
[metadata]
name = "paper-n1"
flavor = "local"
provenance = "paper"
[variables]
names = "z"
base_point = "1"
[local]
fields = "X0", "X1"
prepotential = "-i*X0*X1"
coords = "1", "z"
[scan]
box = "0.1:3, -2:2"
""",
        "n = 1 local model F = -i X0 X1 in the frame with a prepotential",
        [
            Expected("section", _pt(2 + 1j), np.array([1, 2 + 1j, -1j * (2 + 1j), -1j]), 1e-12, "paper",
                     "v = (1, z, -i z, -i)"),
            *[Expected(q, _pt(z), val, 1e-12, "paper", note)
              for z in (1, 2 + 1j, 0.5 - 0.3j)
              for q, val, note in (
                  ("K", -np.log(2 * (z + np.conj(z))).real, "exp(-K) = 2(z + conj z)"),
                  ("metric", np.array([[1 / (z + np.conj(z)) ** 2]]), "g = (z + conj z)^-2"),
                  ("kinetic", np.diag([-1j * z, -1j / z]), "N = diag(-i z, -i/z)"))],
            Expected("exists", _pt(1), True, 0.0, "paper"),
        ],
    ),
    _entry(
        """
[metadata]
name = "paper-n1-dual"
flavor = "local"
provenance = "paper"
[variables]
names = "z"
base_point = "1"
[local]
section = "1", "i", "-i*z", "z"
[scan]
box = "0.1:3, -2:2"
""",
        "paper-n1 rotated by the electric-magnetic duality on X1; no prepotential exists",
        [
            *[Expected(q, _pt(z), val, 1e-12, "paper", note)
              for z in (1, 2 + 1j)
              for q, val, note in (
                  ("K", -np.log(2 * (z + np.conj(z))).real, "Kahler potential unchanged"),
                  ("metric", np.array([[1 / (z + np.conj(z)) ** 2]]), "metric unchanged"),
                  ("kinetic", -1j * z * np.eye(2), "N = -i z times identity"))],
            Expected("exists", _pt(1), False, 0.0, "paper", "no prepotential in this frame"),
            Expected("exists", _pt(2 + 1j), False, 0.0, "paper", "no prepotential in this frame"),
        ],
    ),
    _entry(
        """
[metadata]
name = "paper-n1-swapped"
flavor = "local"
provenance = "derived"
description = "paper-n1 with Z = (z, 1), the inversion z -> 1/z up to a Kahler factor"
[variables]
names = "z"
base_point = "2"
[local]
fields = "X0", "X1"
prepotential = "-i*X0*X1"
coords = "z", "1"
[scan]
box = "0.1:3, -2:2"
""",
        "F = -i X0 X1 with Z = (z, 1)",
        [
            Expected("K", _pt(2), -np.log(8.0), 1e-12, "derived", "exp(-K) = 2(z + conj z)"),
            Expected("metric", _pt(2), np.array([[1 / 16]]), 1e-12, "derived", "g = (z + conj z)^-2"),
            Expected("kinetic", _pt(2), np.diag([-0.5j, -2j]), 1e-12, "derived",
                     "N = diag(-i X1/X0, -i X0/X1)"),
            Expected("exists", _pt(2), True, 0.0, "derived"),
        ],
    ),
    _entry(
        """
[metadata]
name = "minimal-n1"
flavor = "local"
provenance = "derived"
description = "quadratic prepotential with unit-disk domain"
[variables]
names = "z"
base_point = "0"
[local]
fields = "X0", "X1"
prepotential = "-0.5*i*(X0^2 - X1^2)"
coords = "1", "z"
[scan]
box = "-0.6:0.6, -0.6:0.6"
""",
        "F = -(i/2)((X0)^2 - (X1)^2), Z = (1, z), domain |z| < 1",
        [
            Expected("K", _pt(0), -np.log(2.0), 1e-12, "derived", "exp(-K) = 2(1 - |z|^2)"),
            Expected("K", _pt(0.5j), -np.log(1.5), 1e-12, "derived", "exp(-K) = 2(1 - |z|^2)"),
            Expected("metric", _pt(0), np.array([[1.0]]), 1e-12, "derived", "g = (1 - |z|^2)^-2"),
            Expected("metric", _pt(0.5j), np.array([[1 / 0.75 ** 2]]), 1e-12, "derived",
                     "g = (1 - |z|^2)^-2"),
            Expected("kinetic", _pt(0), np.diag([-1j, -1j]), 1e-12, "derived",
                     "conj F_IJ + 2i (Im F X)_I (Im F X)_J / (X Im F X)"),
            Expected("exists", _pt(0), True, 0.0, "derived"),
        ],
    ),
    _entry(
        """
[metadata]
name = "stu"
flavor = "local"
provenance = "non-paper"
description = "cubic n = 3 model used as a stress test; not part of the worked example"
[variables]
names = "z1", "z2", "z3"
base_point = "-i", "-i", "-i"
[local]
fields = "X0", "X1", "X2", "X3"
prepotential = "X1*X2*X3/X0"
coords = "1", "z1", "z2", "z3"
[scan]
box = "-2:2, -3:-0.2", "-2:2, -3:-0.2", "-2:2, -3:-0.2"
""",
        "F = X1 X2 X3 / X0, Z = (1, z1, z2, z3), domain Im z < 0",
        [
            Expected("K", _pt(-1j, -1j, -1j), -np.log(8.0), 1e-12, "derived",
                     "exp(-K) = -8 Im z1 Im z2 Im z3"),
            Expected("metric", _pt(-1j, -1j, -1j), 0.25 * np.eye(3), 1e-12, "derived",
                     "g = diag(1 / (4 (Im z_a)^2))"),
            Expected("metric", _pt(1 - 2j, -1j, 0.5 - 0.5j), np.diag([1 / 16, 1 / 4, 1.0]), 1e-12, "derived",
                     "g = diag(1 / (4 (Im z_a)^2))"),
            Expected("exists", _pt(-1j, -1j, -1j), True, 0.0, "derived"),
        ],
    ),
    _entry(
        """
[metadata]
name = "rigid-quadratic"
flavor = "rigid"
provenance = "derived"
description = "F = tau (X1)^2 / 2 with tau = i"
[variables]
names = "z"
base_point = "1+i"
[rigid]
fields = "X1"
prepotential = "0.5*i*X1^2"
coords = "z"
[scan]
box = "-2:2, -2:2"
""",
        "F = (i/2)(X1)^2, flat metric G = 2 Im tau = 2",
        [
            Expected("K", _pt(1 + 1j), 4.0, 1e-12, "derived", "K = 2 Im(tau) |z|^2"),
            Expected("metric", _pt(1 + 1j), np.array([[2.0]]), 1e-12, "derived", "G = 2 Im tau"),
            Expected("kinetic", _pt(1 + 1j), np.array([[1j]]), 1e-12, "derived", "N = tau"),
        ],
    ),
    _entry(
        """
[metadata]
name = "rigid-quadratic-tau"
flavor = "rigid"
provenance = "derived"
description = "F = tau (X1)^2 / 2 with tau = 1 + 2i"
[variables]
names = "z"
base_point = "0.5"
[rigid]
fields = "X1"
prepotential = "0.5*(1+2i)*X1^2"
coords = "z"
[scan]
box = "-2:2, -2:2"
""",
        "F = (1+2i)(X1)^2 / 2, flat metric G = 4",
        [
            Expected("K", _pt(0.5), 1.0, 1e-12, "derived", "K = 2 Im(tau) |z|^2"),
            Expected("metric", _pt(0.5), np.array([[4.0]]), 1e-12, "derived", "G = 2 Im tau"),
            Expected("kinetic", _pt(0.5), np.array([[1 + 2j]]), 1e-12, "derived", "N = tau"),
        ],
    ),
    _entry(
        """
[metadata]
name = "rigid-two-field"
flavor = "rigid"
provenance = "derived"
description = "two fields with a cubic coupling"
[variables]
names = "z1", "z2"
base_point = "0.3", "0.6"
[rigid]
fields = "X1", "X2"
prepotential = "0.5*i*X1^2 + 0.5*i*X2^2 + X1^2*X2/6"
coords = "z1", "z2"
[scan]
box = "-1:1, -0.5:0.5", "-1:1, -0.5:0.5"
""",
        "F = (i/2)((X1)^2 + (X2)^2) + (X1)^2 X2 / 6",
        [
            Expected("kinetic", _pt(0.3, 0.6), np.array([[0.2 + 1j, 0.1], [0.1, 1j]]), 1e-12, "derived",
                     "N = F_AB"),
            Expected("metric", _pt(0.3, 0.6), 2 * np.eye(2), 1e-12, "derived", "G = 2 Im F_AB"),
            Expected("metric", _pt(0.3j, 0.6j), np.array([[2.4, 0.2], [0.2, 2.0]]), 1e-12, "derived",
                     "G = 2 Im F_AB"),
            Expected("K", _pt(0.3, 0.6), 2 * (0.09 + 0.36), 1e-12, "derived",
                     "K = i(X conj F_X - conj X F_X), real point"),
        ],
    ),
    _entry(
        """
[metadata]
name = "rigid-reparam"
flavor = "rigid"
provenance = "derived"
description = "rigid-quadratic in the non-special coordinate X1 = z^3"
[variables]
names = "z"
base_point = "1"
[rigid]
fields = "X1"
prepotential = "0.5*i*X1^2"
coords = "z^3"
[scan]
box = "0.5:1.5, -0.5:0.5"
""",
        "F = (i/2)(X1)^2 with X1 = z^3",
        [
            Expected("K", _pt(1), 2.0, 1e-12, "derived", "K = 2 |z|^6"),
            Expected("metric", _pt(1), np.array([[18.0]]), 1e-12, "derived", "G = 18 |z|^4"),
            Expected("metric", _pt(1j), np.array([[18.0]]), 1e-12, "derived", "G = 18 |z|^4"),
            Expected("kinetic", _pt(1), np.array([[1j]]), 1e-12, "trivial", "N does not depend on coordinates"),
        ],
    ),
]

_BY_NAME = {e.name: e for e in _ENTRIES}


def catalog_names() -> list:
    return [e.name for e in _ENTRIES]


def catalog_entries() -> tuple:
    return tuple(_ENTRIES)


def catalog_get(name: str) -> CatalogEntry:
    """Look up an entry; unknown names raise KeyError listing what exists."""
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; available: {', '.join(catalog_names())}") from None


def evaluate_quantity(section, flavor: str, quantity: str, z):
    """Compute one catalog quantity with the library."""
    from .local import local_kahler, local_kinetic, local_metric, prepotential_exists
    from .rigid import rigid_kahler, rigid_kinetic, rigid_metric
    if quantity == "section":
        return section.values(z)
    if flavor == "local":
        fns = {"K": local_kahler, "metric": local_metric,
               "kinetic": lambda s, p: np.asarray(local_kinetic(s, p).matrix),
               "exists": lambda s, p: prepotential_exists(s, p).exists}
    else:
        fns = {"K": rigid_kahler, "metric": rigid_metric,
               "kinetic": lambda s, p: np.asarray(rigid_kinetic(s, p).matrix)}
    if quantity not in fns:
        raise ValueError(f"quantity {quantity!r} is not defined for {flavor} models")
    return fns[quantity](section, z)


def check_entry(entry: CatalogEntry) -> list:
    """Evaluate every expected value of an entry."""
    section = entry.model.build_section()
    out = []
    for exp in entry.expected:
        actual = evaluate_quantity(section, entry.flavor, exp.quantity, exp.point)
        if exp.quantity == "exists":
            err = 0.0 if actual == exp.value else 1.0
            ok = actual == exp.value
        else:
            err = float(np.abs(np.asarray(actual) - np.asarray(exp.value)).max())
            ok = err < exp.tol
        out.append(CheckResult(exp, actual, err, bool(ok)))
    return out
