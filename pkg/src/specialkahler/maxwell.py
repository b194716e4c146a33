"""Electromagnetic duality on pointwise field strengths.

Conventions: spacetime metric diag(+1, -1, -1, -1) and Levi-Civita symbol
with eps_{0123} = i.  With these choices the dual
``(*F)_{mu nu} = 1/2 eps_{mu nu rho sigma} F^{rho sigma}`` squares to the
identity, ``F+ = (F + *F)/2`` is self-dual and ``conj(F+) = F-`` for real F.
Field strengths carry no spacetime dependence here; only the algebraic
covariance of (F+, G+) under Sp(2m, R) is checked.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import DimensionError
from .symplectic import KineticMatrix, SymplecticMatrix, act_on_kinetic

__all__ = [
    "METRIC", "EPSILON_0123", "levi_civita", "FieldStrengthSet", "hodge_dual",
    "selfdual_split", "compute_G", "transform_pair", "random_field_strength",
]

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
EPSILON_0123 = 1j


def _perm_sign(p):
    p = list(p)
    sign = 1
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def levi_civita() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4), dtype=complex)
    for p in permutations(range(4)):
        eps[p] = _perm_sign(p) * EPSILON_0123
    return eps


_EPS = levi_civita()


@dataclass(frozen=True, eq=False)
class FieldStrengthSet:
    """m antisymmetric 4x4 field strengths F^I_{mu nu}, stacked as (m, 4, 4)."""

    tensors: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.tensors)
        if t.ndim == 2:
            t = t[None]
        if t.shape[1:] != (4, 4):
            raise DimensionError(f"expected (m, 4, 4) tensors, got {t.shape}")
        _check_antisymmetric(t)
        object.__setattr__(self, "tensors", t)

    @property
    def m(self):
        return self.tensors.shape[0]

    def selfdual(self):
        return selfdual_split(self.tensors)


def _check_antisymmetric(t, tol=1e-14):
    scale = max(1.0, float(np.abs(t).max(initial=0.0)))
    if np.abs(t + np.swapaxes(t, -1, -2)).max(initial=0.0) > tol * scale:
        raise ValueError("field strength is not antisymmetric")


def hodge_dual(f) -> np.ndarray:
    """``1/2 eps_{mu nu rho sigma} F^{rho sigma}`` on the last two axes."""
    f = np.asarray(f)
    raised = np.einsum("ra,sb,...ab->...rs", METRIC, METRIC, f)
    return 0.5 * np.einsum("mnrs,...rs->...mn", _EPS, raised)


def selfdual_split(f):
    """Return ``(F+, F-)`` with ``F+- = (F +- *F) / 2``.

    Accepts a single 4x4 tensor or a stack (..., 4, 4); input must be
    antisymmetric.
    """
    f = np.asarray(f)
    if f.shape[-2:] != (4, 4):
        raise DimensionError(f"expected 4x4 tensors, got {f.shape}")
    _check_antisymmetric(f)
    dual = hodge_dual(f)
    return 0.5 * (f + dual), 0.5 * (f - dual)


def compute_G(n, fplus) -> np.ndarray:
    """``G_{+I} = N_IJ F^{+J}`` componentwise; ``fplus`` has shape (m, 4, 4)."""
    nm = n.matrix if isinstance(n, KineticMatrix) else np.asarray(n)
    fplus = np.asarray(fplus)
    if fplus.ndim == 2:
        fplus = fplus[None]
    if nm.shape != (fplus.shape[0],) * 2:
        raise DimensionError(f"kinetic matrix {nm.shape} does not match {fplus.shape[0]} field strengths")
    return np.einsum("ij,jmn->imn", nm, fplus)


def transform_pair(s: SymplecticMatrix, fplus, gplus):
    """Apply ``S`` to the stacked symplectic vector (F+, G+) at every (mu, nu)."""
    if not isinstance(s, SymplecticMatrix):
        s = SymplecticMatrix(s)
    fplus = np.asarray(fplus)
    gplus = np.asarray(gplus)
    if fplus.shape != gplus.shape or fplus.shape[0] != s.frame.m:
        raise DimensionError("F+ and G+ must both have shape (m, 4, 4) with m matching S")
    a, b, c, d = s.blocks
    ft = np.einsum("ij,jmn->imn", a, fplus) + np.einsum("ij,jmn->imn", b, gplus)
    gt = np.einsum("ij,jmn->imn", c, fplus) + np.einsum("ij,jmn->imn", d, gplus)
    return ft, gt


def transformed_kinetic(s: SymplecticMatrix, n) -> KineticMatrix:
    """Kinetic matrix consistent with :func:`transform_pair` (delegates)."""
    return act_on_kinetic(s, n)


def random_field_strength(m: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(m, 4, 4))
    return a - np.swapaxes(a, -1, -2)
