"""Rigid special Kahler geometry.

Two equivalent descriptions are supported.  A prepotential model carries a
holomorphic ``F(X)`` and special coordinates ``X^A(z)``; a section model
carries a holomorphic symplectic section ``V(z)`` subject to
``<d_a V, d_b V> = 0``.  The Kahler potential is ``K = i <V, conj V>`` and
the metric ``G_ab = d_a dbar_b K = i <d_a V, conj(d_b V)>``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateModelWarning, DimensionError, FrameDegeneracyError
from .holo import HoloExpr, compile_exprs, parse_expr, substitute
from .section import SymplecticSection, as_point
from .symplectic import KineticMatrix, SymplecticFrame, SymplecticMatrix

__all__ = [
    "RigidPrepotentialModel", "RigidSectionModel", "ChartTransition", "PairingResidual",
    "rigid_section", "rigid_kahler", "rigid_kahler_prepotential", "rigid_metric",
    "rigid_kinetic", "rigid_constraint", "apply_transition",
]

JACOBIAN_COND_LIMIT = 1e12


def _jacobian_check(jac, where):
    sv = np.linalg.svd(jac, compute_uv=False)
    cond = np.inf if sv[-1] == 0 else sv[0] / sv[-1]
    if cond > JACOBIAN_COND_LIMIT:
        raise FrameDegeneracyError(f"coordinate Jacobian e^A_a is singular at {where}", sv[-1], cond)


@dataclass(frozen=True, eq=False)
class RigidPrepotentialModel:
    """Prepotential ``F(X^1..X^n)`` with special coordinates ``X^A(z)``."""

    prepotential: HoloExpr
    coords: tuple
    base_point: tuple = None
    name: str = ""

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        n = len(self.prepotential.variables)
        if len(coords) != n:
            raise DimensionError(f"prepotential has {n} fields but {len(coords)} coordinate functions")
        if any(c.variables != coords[0].variables for c in coords):
            raise DimensionError("coordinate functions must share one variable list")
        if len(coords[0].variables) != n:
            raise DimensionError(f"need {n} coordinates z, got {len(coords[0].variables)}")
        if self.base_point is not None:
            bp = as_point(self.base_point, n)
            object.__setattr__(self, "base_point", bp)
            _jacobian_check(self.coordinate_jacobian(bp), bp)

    @classmethod
    def from_strings(cls, prepotential: str, fields: Sequence[str], coords: Sequence[str],
                     variables: Sequence[str], base_point=None, name=""):
        return cls(parse_expr(prepotential, fields), tuple(parse_expr(c, variables) for c in coords),
                   base_point, name)

    @property
    def n(self):
        return len(self.coords)

    @property
    def fields(self):
        return self.prepotential.variables

    @property
    def variables(self):
        return self.coords[0].variables

    def coordinate_jacobian(self, z) -> np.ndarray:
        """``e[A, a] = d X^A / d z^a``."""
        z = as_point(z, self.n)
        fn = compile_exprs([c.diff(a) for c in self.coords for a in range(self.n)])
        return fn(z).reshape(self.n, self.n)

    def gradient(self, x) -> np.ndarray:
        """F_A evaluated directly at special coordinates x."""
        return np.array([self.prepotential.diff(a)(x) for a in range(self.n)], dtype=complex)


class RigidSectionModel(SymplecticSection):
    """Holomorphic section V(z) of dimension 2n over n coordinates."""

    def __init__(self, components, frame=None, base_point=None, name=""):
        super().__init__(components, frame, base_point, name)
        if self.m != self.n:
            raise DimensionError(f"rigid section needs 2n = {2 * self.n} components, got {self.dim}")


@dataclass(frozen=True, eq=False)
class ChartTransition:
    """Inhomogeneous symplectic map ``V -> exp(i c) M V + b``."""

    c: float
    M: SymplecticMatrix
    b: np.ndarray = None

    def __post_init__(self):
        if not isinstance(self.M, SymplecticMatrix):
            object.__setattr__(self, "M", SymplecticMatrix(self.M))
        b = np.zeros(self.M.frame.dim, complex) if self.b is None else np.asarray(self.b, complex)
        if b.shape != (self.M.frame.dim,):
            raise DimensionError(f"shift must have length {self.M.frame.dim}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", float(self.c))


@dataclass(frozen=True)
class PairingResidual:
    """Antisymmetric pairing matrix and its largest entry."""

    matrix: np.ndarray
    residual: float


def rigid_section(model: RigidPrepotentialModel) -> RigidSectionModel:
    """``V = (X^A(z), F_A(X(z)))`` in the canonical frame.

    Warns with ``DegenerateModelWarning`` when the prepotential Hessian
    vanishes identically (the metric is then zero).
    """
    grads = [model.prepotential.diff(a) for a in range(model.n)]
    hess = [g.diff(b) for g in grads for b in range(model.n)]
    if all(h.is_zero for h in hess):
        warnings.warn(f"prepotential of {model.name or 'model'} has vanishing Hessian; metric is degenerate",
                      DegenerateModelWarning, stacklevel=2)
    lower = [substitute(g, model.coords) for g in grads]
    return RigidSectionModel(list(model.coords) + lower, base_point=model.base_point, name=model.name)


def rigid_kahler(section: RigidSectionModel, z, tol: float = 1e-12) -> float:
    """``K = i <V, conj V>``; the imaginary part must vanish (relative ``tol``)."""
    v = section.values(z)
    k = 1j * (v @ section.frame.omega @ v.conj())
    if abs(k.imag) > tol * max(1.0, abs(k.real)):
        raise ArithmeticError(f"Kahler potential has imaginary part {k.imag:.3e}")
    return float(k.real)


def rigid_kahler_prepotential(model: RigidPrepotentialModel, z) -> float:
    """Closed prepotential formula ``K = i (X^A conj(F_A) - conj(X^A) F_A)``."""
    z = as_point(z, model.n)
    x = np.array([c(z) for c in model.coords], dtype=complex)
    fa = model.gradient(x)
    return float((1j * (x @ fa.conj() - x.conj() @ fa)).real)


def rigid_metric(section: RigidSectionModel, z) -> np.ndarray:
    """Hermitian metric ``G_ab = i <d_a V, conj(d_b V)>``."""
    dv = section.jacobian(z)
    return 1j * (dv @ section.frame.omega @ dv.conj().T)


def _split(section, z):
    t = section.frame.to_canonical_matrix
    dv = section.jacobian(z) @ t.T
    n = section.n
    return dv[:, :n].T, dv[:, n:].T  # e[A, a], dF[A, a]


def rigid_kinetic(section: RigidSectionModel, z) -> KineticMatrix:
    """``N_AB = (d_a F_A) e^a_B`` with e the inverse coordinate Jacobian."""
    z = as_point(z, section.n)
    e, df = _split(section, z)
    _jacobian_check(e, z)
    # N e = dF  =>  e^T N^T = dF^T
    n = np.linalg.solve(e.T, df.T).T
    return KineticMatrix(n, z)


def rigid_constraint(section: RigidSectionModel, z) -> PairingResidual:
    """Pairing matrix ``<d_a V, d_b V>``; zero for a valid special Kahler section."""
    dv = section.jacobian(z)
    mat = dv @ section.frame.omega @ dv.T
    return PairingResidual(mat, float(np.abs(mat).max(initial=0.0)))


def apply_transition(section: RigidSectionModel, t: ChartTransition) -> RigidSectionModel:
    """Map the section by ``exp(i c) M V + b``."""
    if t.M.frame.dim != section.dim:
        raise DimensionError(f"transition acts on dimension {t.M.frame.dim}, section has {section.dim}")
    if t.M.frame != section.frame:
        raise DimensionError("transition and section use different symplectic forms")
    return section.transformed(np.exp(1j * t.c) * t.M.s, shift=t.b)
