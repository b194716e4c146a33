"""Local (supergravity) special Kahler geometry.

A section ``v(z) = (Z^I(z), F_I(z))`` of dimension 2(n+1) over n coordinates
defines ``e^{-K} = -i <v, conj v>``.  All point quantities are computed from
the exact first derivatives of v:

    Phi        = -i <v, conj v>
    d_a Phi    = -i <d_a v, conj v>
    d_a db Phi = -i <d_a v, conj(d_b v)>
    K_a        = -d_a Phi / Phi
    g_ab       = -(d_a db Phi) / Phi + d_a Phi conj(d_b Phi) / Phi^2

Covariant derivatives carry weight 1 on the holomorphic section and weight
1/2 on the gauge-fixed ``V = e^{K/2} v``:

    D_a v = d_a v + K_a v,      D_a V = d_a V + K_a V / 2 = e^{K/2} D_a v.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (DimensionError, DomainError, FrameDegeneracyError, HomogeneityError,
                     PrepotentialNotFoundError, SingularPointError)
from .holo import HoloExpr, constant, linear_combination, parse_expr, substitute, variable
from .section import SymplecticSection, as_point
from .symplectic import KineticMatrix, SymplecticFrame, SymplecticMatrix

__all__ = [
    "LocalPrepotentialModel", "LocalSectionModel", "GaugeFixedSection", "ConePoint",
    "HomogeneityReport", "ConstraintReport", "ExistenceVerdict", "PointGeometry",
    "check_homogeneity", "build_section", "local_kahler", "local_metric", "gauge_fix",
    "covariant_derivative", "constraint_check", "local_kinetic", "prepotential_exists",
    "reconstruct_prepotential", "apply_symplectic_local", "cone_metric", "kahler_shift",
    "point_geometry", "cone_coordinate_labels",
]

HOMOGENEITY_TOL = 1e-10
EXISTENCE_COND_LIMIT = 1e10
SINGULAR_COND_LIMIT = 1e12


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True, eq=False)
class LocalPrepotentialModel:
    """Degree-2 homogeneous ``F(X^0..X^n)`` with parametrization ``Z^I(z)``."""

    prepotential: HoloExpr
    coords: tuple
    base_point: tuple = None
    name: str = ""

    def __post_init__(self):
        coords = tuple(self.coords)
        object.__setattr__(self, "coords", coords)
        nf = len(self.prepotential.variables)
        if len(coords) != nf:
            raise DimensionError(f"prepotential has {nf} fields but {len(coords)} functions Z^I(z)")
        if any(c.variables != coords[0].variables for c in coords):
            raise DimensionError("functions Z^I(z) must share one variable list")
        if len(coords[0].variables) != nf - 1:
            raise DimensionError(f"need n = {nf - 1} coordinates, got {len(coords[0].variables)}")
        if self.base_point is not None:
            object.__setattr__(self, "base_point", as_point(self.base_point, nf - 1))

    @classmethod
    def from_strings(cls, prepotential: str, fields: Sequence[str], coords: Sequence[str],
                     variables: Sequence[str], base_point=None, name=""):
        return cls(parse_expr(prepotential, fields), tuple(parse_expr(c, variables) for c in coords),
                   base_point, name)

    @property
    def n(self):
        return len(self.coords) - 1

    @property
    def fields(self):
        return self.prepotential.variables

    @property
    def variables(self):
        return self.coords[0].variables


class LocalSectionModel(SymplecticSection):
    """Holomorphic section v(z) of dimension 2(n+1); requires e^{-K} > 0 at the base point."""

    def __init__(self, components, frame=None, base_point=None, name=""):
        super().__init__(components, frame, base_point, name)
        if self.m != self.n + 1:
            raise DimensionError(f"local section needs 2(n+1) = {2 * self.n + 2} components, got {self.dim}")
        if self.base_point is not None:
            point_geometry(self, self.base_point)


@dataclass(frozen=True, eq=False)
class GaugeFixedSection:
    V: np.ndarray
    K: float
    frame: SymplecticFrame

    @property
    def normalization(self) -> complex:
        """<V, conj V>, equal to i after gauge fixing."""
        return self.V @ self.frame.omega @ self.V.conj()


@dataclass(frozen=True)
class ConePoint:
    r: float
    theta: float
    z: tuple
    a_mode: str = "zero"

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"cone radius must be positive, got {self.r}")
        if self.a_mode not in ("zero", "composite"):
            raise ValueError(f"a_mode must be 'zero' or 'composite', got {self.a_mode!r}")
        object.__setattr__(self, "z", tuple(complex(c) for c in np.atleast_1d(self.z)))


@dataclass(frozen=True)
class HomogeneityReport:
    max_residual: float
    samples: int
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tol)

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class ConstraintReport:
    """Pairings <D_a v, D_b v> (n x n) and <D_a v, v> (n).

    Residuals are scaled by the norms of the paired vectors, so they are
    invariant under rescaling v.
    """

    pair_matrix: np.ndarray
    vector: np.ndarray
    pair_residual: float
    vector_residual: float

    def passed(self, tol: float = 1e-10) -> bool:
        return bool(self.pair_residual < tol and self.vector_residual < tol)


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool
    condition_number: float

    def __bool__(self):
        return self.exists


@dataclass(frozen=True, eq=False)
class PointGeometry:
    """Everything derived from v and d_a v at one point."""

    z: tuple
    v: np.ndarray
    dv: np.ndarray
    phi: float
    dphi: np.ndarray
    K: float
    dK: np.ndarray
    metric: np.ndarray

    @property
    def Dv(self) -> np.ndarray:
        """Rows D_a v = d_a v + K_a v."""
        return self.dv + self.dK[:, None] * self.v[None, :]

    @property
    def metric_positive(self) -> bool:
        return bool(np.linalg.eigvalsh(self.metric).min() > 0)


# ---------------------------------------------------------------------------
# homogeneity and construction


def check_homogeneity(F: HoloExpr, samples: int = 20, seed: int = 0,
                      tol: float = HOMOGENEITY_TOL) -> HomogeneityReport:
    """Euler test ``X^I F_I - 2F`` at random points; reports the max relative residual."""
    rng = np.random.default_rng(seed)
    nv = len(F.variables)
    grads = [F.diff(k) for k in range(nv)]
    worst = 0.0
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > 50 * samples:
            raise HomogeneityError("could not find nonsingular sample points for the prepotential")
        x = rng.normal(size=nv) + 1j * rng.normal(size=nv)
        try:
            f = F(x)
            g = np.array([d(x) for d in grads])
        except SingularPointError:
            continue
        scale = max(abs(f), float(np.linalg.norm(x) * np.linalg.norm(g)), 1e-300)
        worst = max(worst, abs(x @ g - 2 * f) / scale)
        done += 1
    return HomogeneityReport(worst, samples, tol)


def build_section(model: LocalPrepotentialModel, homogeneity_tol: float = HOMOGENEITY_TOL) -> LocalSectionModel:
    """``v = (Z^I(z), F_I(Z(z)))`` in the canonical frame."""
    report = check_homogeneity(model.prepotential, tol=homogeneity_tol)
    if not report.passed:
        raise HomogeneityError(f"prepotential is not homogeneous of degree 2 "
                               f"(relative Euler residual {report.max_residual:.3e})")
    grads = [model.prepotential.diff(k) for k in range(model.n + 1)]
    lower = [substitute(g, model.coords) for g in grads]
    return LocalSectionModel(list(model.coords) + lower, base_point=model.base_point, name=model.name)


# ---------------------------------------------------------------------------
# point geometry


def point_geometry(section: SymplecticSection, z, imag_tol: float = 1e-10) -> PointGeometry:
    """Evaluate v, its derivatives, K, dK and the metric at z.

    Raises ``DomainError`` when ``-i <v, conj v>`` is not positive.
    """
    z = as_point(z, section.n)
    om = section.frame.omega
    v = section.values(z)
    dv = section.jacobian(z)
    vb = v.conj()
    phi = -1j * (v @ om @ vb)
    scale = float(np.abs(v) @ np.abs(om) @ np.abs(v))
    if abs(phi.imag) > imag_tol * max(scale, 1e-300):
        raise DomainError(f"-i<v, conj v> is not real at {z}: {phi}")
    phi = float(phi.real)
    if not phi > 1e-14 * scale:
        raise DomainError(f"point {z} is outside the positivity domain: e^(-K) = {phi:.6g} <= 0")
    dphi = -1j * (dv @ om @ vb)
    ddphi = -1j * (dv @ om @ dv.conj().T)
    metric = -ddphi / phi + np.outer(dphi, dphi.conj()) / phi ** 2
    return PointGeometry(z, v, dv, phi, dphi, -float(np.log(phi)), -dphi / phi, metric)


def local_kahler(section: LocalSectionModel, z) -> float:
    """``K = -log(-i <v, conj v>)``."""
    return point_geometry(section, z).K


def local_metric(section: LocalSectionModel, z) -> np.ndarray:
    """Hermitian ``g_ab = d_a dbar_b K``."""
    return point_geometry(section, z).metric


def kahler_shift(factor, z) -> float:
    """Change of K under v -> factor(z) v, i.e. ``-log|factor|^2``."""
    h = factor(as_point(z, len(factor.variables))) if isinstance(factor, HoloExpr) else complex(factor)
    return -2.0 * float(np.log(abs(h)))


def gauge_fix(section: LocalSectionModel, z) -> GaugeFixedSection:
    """``V = e^{K/2} v`` so that ``<V, conj V> = i``."""
    geo = point_geometry(section, z)
    return GaugeFixedSection(np.exp(geo.K / 2) * geo.v, geo.K, section.frame)


def covariant_derivative(section: LocalSectionModel, z, which: int, target: str = "v",
                         barred: bool = False) -> np.ndarray:
    """Kahler-covariant derivative along ``z^which``.

    ``target='v'`` gives ``d_a v + K_a v``; ``target='V'`` gives
    ``d_a V + K_a V / 2`` on the gauge-fixed section.  ``barred=True``
    returns the complex conjugate, i.e. ``D_abar conj(v)`` (or of V).
    """
    geo = point_geometry(section, z)
    if not 0 <= which < section.n:
        raise IndexError(f"coordinate index {which} out of range")
    ka = geo.dK[which]
    if target == "v":
        out = geo.dv[which] + ka * geo.v
    elif target == "V":
        w = np.exp(geo.K / 2)
        big_v = w * geo.v
        d_big_v = w * (geo.dv[which] + 0.5 * ka * geo.v)
        out = d_big_v + 0.5 * ka * big_v
    else:
        raise ValueError(f"target must be 'v' or 'V', got {target!r}")
    return out.conj() if barred else out


def _scaled(pairing, a, b):
    norms = np.outer(np.linalg.norm(a, axis=-1), np.linalg.norm(b, axis=-1))
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(norms > 0, np.abs(pairing) / np.where(norms > 0, norms, 1), 0.0)
    return float(rel.max(initial=0.0))


def constraint_check(section: LocalSectionModel, z) -> ConstraintReport:
    """Pairings <D_a v, D_b v> and <D_a v, v> with norm-scaled residuals."""
    geo = point_geometry(section, z)
    om = section.frame.omega
    dv = geo.Dv
    pair = dv @ om @ dv.T
    vec = dv @ om @ geo.v
    return ConstraintReport(pair, vec, _scaled(pair, dv, dv), _scaled(vec[:, None], dv, geo.v[None, :]))


def _canonical_split(section, geo):
    t = section.frame.to_canonical_matrix
    v = t @ geo.v
    dv = geo.dv @ t.T
    m = section.m
    return v[:m], v[m:], dv[:, :m], dv[:, m:]


def local_kinetic(section: LocalSectionModel, z) -> KineticMatrix:
    """``N = (F_I | D_abar conj F_I) (X^J | D_abar conj X^J)^-1``.

    Columns of both matrices are built from the holomorphic section with
    weight-1 covariant derivatives; this differs from the gauge-fixed
    expression by a common factor per column, which cancels.
    """
    geo = point_geometry(section, z)
    x, f, dx, df = _canonical_split(section, geo)
    kbar = geo.dK.conj()
    xmat = np.column_stack([x] + [dx[a].conj() + kbar[a] * x.conj() for a in range(section.n)])
    fmat = np.column_stack([f] + [df[a].conj() + kbar[a] * f.conj() for a in range(section.n)])
    sv = np.linalg.svd(xmat, compute_uv=False)
    cond = np.inf if sv[-1] == 0 else sv[0] / sv[-1]
    if cond > SINGULAR_COND_LIMIT:
        verdict = "positive" if geo.metric_positive else "not positive definite"
        raise FrameDegeneracyError(f"(X | D conj X) is singular at {geo.z}; metric there is {verdict}",
                                   sv[-1], cond)
    n = np.linalg.solve(xmat.T, fmat.T).T
    return KineticMatrix(n, geo.z)


def prepotential_exists(section: LocalSectionModel, z,
                        cond_limit: float = EXISTENCE_COND_LIMIT) -> ExistenceVerdict:
    """Invertibility of ``(X^I | D_a X^I)`` decides whether this frame admits F(X)."""
    geo = point_geometry(section, z)
    x, _, dx, _ = _canonical_split(section, geo)
    mat = np.column_stack([x] + [dx[a] + geo.dK[a] * x for a in range(section.n)])
    sv = np.linalg.svd(mat, compute_uv=False)
    cond = np.inf if sv[-1] == 0 else float(sv[0] / sv[-1])
    return ExistenceVerdict(bool(cond < cond_limit), cond)


# ---------------------------------------------------------------------------
# prepotential reconstruction


def _affine_upper(upper, samples, tol=1e-12):
    """Return P with Z(z) = P @ (1, z) if the upper components are affine, else None."""
    n = len(upper[0].variables)
    second = [c.diff(a).diff(b) for c in upper for a in range(n) for b in range(a, n)]
    for d in second:
        if d.is_zero:
            continue
        if not d.is_constant and all(abs(d(s)) <= tol for s in samples):
            continue
        return None
    s0 = samples[0]
    cols = np.array([[c.diff(a)(s0) for a in range(n)] for c in upper], dtype=complex)
    z0 = np.array([c(s0) for c in upper], dtype=complex)
    a0 = z0 - cols @ np.array(s0)
    p = np.column_stack([a0, cols])
    for s in samples[1:]:
        zs = np.array([c(s) for c in upper], dtype=complex)
        if np.abs(zs - p @ np.concatenate([[1.0], s])).max() > 1e-9 * max(1.0, np.abs(zs).max()):
            return None
    return p


def reconstruct_prepotential(section: LocalSectionModel, samples=None,
                             field_names: Sequence[str] | None = None,
                             tol: float = 1e-9) -> HoloExpr:
    """Recover ``F(Z)`` from a section whose frame admits a prepotential.

    Uses degree-2 homogeneity: along the section ``F = Z^I F_I / 2``.  The
    upper components must be affine in z, ``Z = P (1, z)``; then
    ``Y = P^-1 Z`` gives ``z^a = Y^a / Y^0`` and ``F(Z) = (Y^0)^2 h(Y / Y^0)``
    with ``h(z) = Z^I(z) F_I(z) / 2``.  The gradient of the result is checked
    against the lower components at every sample.
    """
    n = section.n
    if samples is None:
        if section.base_point is None:
            raise ValueError("need sample points or a section base point")
        samples = [section.base_point]
    samples = [as_point(s, n) for s in samples]
    for s in samples:
        verdict = prepotential_exists(section, s)
        if not verdict:
            raise PrepotentialNotFoundError(
                f"no prepotential in this frame: (X | D X) has condition number "
                f"{verdict.condition_number:.3e} at {s}")
    comps = section.canonical_components
    upper, lower = comps[:n + 1], comps[n + 1:]
    p = _affine_upper(upper, samples)
    if p is None:
        raise PrepotentialNotFoundError("upper components are not affine in z; "
                                        "reparametrize to affine coordinates before reconstruction")
    names = tuple(field_names or [f"Z{k}" for k in range(n + 1)])
    zs = [variable(k, names) for k in range(n + 1)]
    pinv = np.linalg.inv(p)
    ys = [linear_combination(row, zs) for row in pinv]
    h = sum((u * l for u, l in zip(upper, lower)), constant(0, section.variables)) * 0.5
    ratios = [ys[a + 1] / ys[0] for a in range(n)]
    F = substitute(h, ratios) * ys[0] ** 2
    for s in samples:
        zval = np.array([c(s) for c in upper], dtype=complex)
        grad = np.array([F.diff(k)(zval) for k in range(n + 1)], dtype=complex)
        want = np.array([c(s) for c in lower], dtype=complex)
        err = np.abs(grad - want).max()
        if err > tol * max(1.0, np.abs(want).max()):
            raise PrepotentialNotFoundError(
                f"reconstructed F does not reproduce the lower components at {s} (error {err:.3e}); "
                "the section probably violates <D_a v, v> = 0")
    return F


# ---------------------------------------------------------------------------
# frame changes and the cone


def apply_symplectic_local(section: LocalSectionModel, s, factor=None) -> LocalSectionModel:
    """New section ``factor(z) * S v(z)``.

    ``factor`` is the Kahler multiplier ``e^{f(z)}`` itself (a nonvanishing
    HoloExpr over the section's coordinates, or a number); K shifts by
    ``-log|factor|^2`` and the metric is unchanged.
    """
    if not isinstance(s, SymplecticMatrix):
        s = SymplecticMatrix(s, section.frame)
    if s.frame.dim != section.dim:
        raise DimensionError(f"matrix acts on dimension {s.frame.dim}, section has {section.dim}")
    if s.frame != section.frame:
        raise DimensionError("matrix and section use different symplectic forms")
    if factor is not None and not isinstance(factor, HoloExpr):
        factor = constant(factor, section.variables)
    base = section.base_point
    return section.transformed(s.s, factor=factor, base_point=base, name=section.name)


def cone_coordinate_labels(n: int):
    return ["r", "theta"] + [f"Re z{a + 1}" for a in range(n)] + [f"Im z{a + 1}" for a in range(n)]


def cone_metric(section: LocalSectionModel, p: ConePoint) -> np.ndarray:
    """Real metric of the cone in coordinates (r, theta, Re z^a, Im z^a).

    ``ds^2 = dr^2 + r^2/18 [A + dtheta + i(K_a dz^a - K_abar dzbar^a)]^2
    + r^2 g_ab dz^a dzbar^b``, with the Hermitian term read as the real
    quadratic form ``Re(g_ab dz^a dzbar^b)`` (so g |dz|^2 for n = 1).
    ``a_mode='zero'`` sets A = 0; ``'composite'`` sets A to cancel the bracket.
    """
    geo = point_geometry(section, p.z)
    n = section.n
    g = geo.metric
    pr, qi = g.real, g.imag
    kahler = np.block([[pr, qi], [qi.T, pr]])
    out = np.zeros((2 * n + 2, 2 * n + 2))
    out[0, 0] = 1.0
    out[2:, 2:] = p.r ** 2 * kahler
    if p.a_mode == "zero":
        # i(K_a dz - c.c.) = -2 Im(K_a) dx^a - 2 Re(K_a) dy^a
        bracket = np.concatenate([[1.0], -2 * geo.dK.imag, -2 * geo.dK.real])
        out[1:, 1:] += p.r ** 2 / 18.0 * np.outer(bracket, bracket)
    return out
