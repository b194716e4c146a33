"""Real symplectic linear algebra on 2m-dimensional spaces.

The canonical form is ``Omega = [[0, 1], [-1, 0]]`` (m x m blocks).  A frame
may carry any nondegenerate real antisymmetric form; :func:`canonicalize`
produces a change of basis ``T`` with ``T.T @ Omega_can @ T == omega``, so
that a vector ``v`` in the frame corresponds to ``T @ v`` in canonical
coordinates and ``inner(v, w, frame) == inner(T @ v, T @ w)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import expm

from .errors import (DegenerateFrameError, DimensionError, FrameDegeneracyError,
                     NotSymplecticError)

__all__ = [
    "canonical_omega", "SymplecticFrame", "SymplecticMatrix", "KineticMatrix",
    "SymplecticCheck", "inner", "is_symplectic", "act_on_kinetic", "canonicalize",
    "random_symplectic", "random_kinetic",
]


def canonical_omega(m: int) -> np.ndarray:
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return np.block([[zero, eye], [-eye, zero]])


def _readonly(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SymplecticFrame:
    """Dimension 2m and the antisymmetric form used for every pairing.

    ``residual_tol`` governs the construction-time check of symplectic
    matrices, ``op_tol`` the symmetry checks performed by operations.
    """

    omega: np.ndarray
    residual_tol: float = 1e-10
    op_tol: float = 1e-9

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        if omega.ndim != 2 or omega.shape[0] != omega.shape[1] or omega.shape[0] % 2:
            raise DimensionError(f"omega must be an even-dimensional square matrix, got {omega.shape}")
        scale = max(np.abs(omega).max(), 1e-300)
        if np.abs(omega + omega.T).max() > 1e-12 * max(scale, 1.0):
            raise DegenerateFrameError("omega is not antisymmetric")
        if abs(np.linalg.det(omega / scale)) <= 1e-12:
            raise DegenerateFrameError("omega is degenerate")
        object.__setattr__(self, "omega", _readonly(omega))

    @classmethod
    def canonical(cls, m: int, **tols) -> "SymplecticFrame":
        return cls(canonical_omega(m), **tols)

    @property
    def dim(self) -> int:
        return self.omega.shape[0]

    @property
    def m(self) -> int:
        return self.omega.shape[0] // 2

    @cached_property
    def is_canonical(self) -> bool:
        return bool(np.array_equal(self.omega, canonical_omega(self.m)))

    @cached_property
    def to_canonical_matrix(self) -> np.ndarray:
        """T with T.T @ Omega_can @ T = omega (identity for canonical frames)."""
        if self.is_canonical:
            return _readonly(np.eye(self.dim))
        return _readonly(_darboux_basis_inverse(self.omega))

    def to_canonical(self, vec):
        """Map vector components (first axis of length 2m) to canonical coordinates."""
        if self.is_canonical:
            return np.asarray(vec)
        return np.tensordot(self.to_canonical_matrix, np.asarray(vec), axes=1)

    def __eq__(self, other):
        return isinstance(other, SymplecticFrame) and np.array_equal(self.omega, other.omega)

    def __hash__(self):
        return hash(self.omega.tobytes())


def _frame_for(dim, frame):
    if frame is None:
        if dim % 2:
            raise DimensionError(f"symplectic vectors must have even length, got {dim}")
        return SymplecticFrame.canonical(dim // 2)
    if frame.dim != dim:
        raise DimensionError(f"vector length {dim} does not match frame dimension {frame.dim}")
    return frame


def inner(v, w, frame: SymplecticFrame | None = None) -> complex:
    """Symplectic pairing ``v^T omega w``."""
    v = np.asarray(v)
    w = np.asarray(w)
    if v.shape[0] != w.shape[0]:
        raise DimensionError(f"vector lengths differ: {v.shape[0]} vs {w.shape[0]}")
    frame = _frame_for(v.shape[0], frame)
    return v @ frame.omega @ w


@dataclass(frozen=True)
class SymplecticCheck:
    ok: bool
    residual: float

    def __bool__(self):
        return self.ok


def is_symplectic(s, frame: SymplecticFrame | None = None, tol: float = 1e-10) -> SymplecticCheck:
    """Test ``max|S^T omega S - omega| < tol``; the residual is always reported."""
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {s.shape}")
    frame = _frame_for(s.shape[0], frame)
    residual = float(np.abs(s.T @ frame.omega @ s - frame.omega).max())
    return SymplecticCheck(residual < tol, residual)


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """Element of Sp(2m, R) relative to a frame, checked at construction."""

    s: np.ndarray
    frame: SymplecticFrame = None

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        frame = _frame_for(s.shape[0], self.frame) if s.ndim == 2 else None
        if frame is None or s.shape != (frame.dim, frame.dim):
            raise DimensionError(f"expected a square matrix, got shape {s.shape}")
        check = is_symplectic(s, frame, frame.residual_tol)
        if not check:
            raise NotSymplecticError(check.residual, frame.residual_tol)
        object.__setattr__(self, "s", _readonly(s))
        object.__setattr__(self, "frame", frame)

    @cached_property
    def canonical(self) -> np.ndarray:
        """The matrix in canonical coordinates, T s T^-1."""
        if self.frame.is_canonical:
            return self.s
        t = self.frame.to_canonical_matrix
        return _readonly(t @ self.s @ np.linalg.inv(t))

    @property
    def blocks(self):
        """(A, B, C, D) blocks in canonical coordinates."""
        m = self.frame.m
        c = self.canonical
        return c[:m, :m], c[:m, m:], c[m:, :m], c[m:, m:]

    def inverse(self) -> "SymplecticMatrix":
        # S^-1 = omega^-1 S^T omega
        om = self.frame.omega
        return SymplecticMatrix(np.linalg.solve(om, self.s.T @ om), self.frame)

    def __matmul__(self, other):
        if isinstance(other, SymplecticMatrix):
            if other.frame != self.frame:
                raise DimensionError("cannot compose matrices from different frames")
            return SymplecticMatrix(self.s @ other.s, self.frame)
        return np.tensordot(self.s, np.asarray(other), axes=1)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.s, dtype=dtype)


@dataclass(frozen=True, eq=False)
class KineticMatrix:
    """Complex symmetric m x m vector kinetic matrix at an evaluation point."""

    matrix: np.ndarray
    point: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", _readonly(self.matrix, complex))
        if self.point is not None:
            object.__setattr__(self, "point", tuple(np.atleast_1d(self.point)))

    @property
    def m(self):
        return self.matrix.shape[0]

    @property
    def symmetry_residual(self) -> float:
        return float(np.abs(self.matrix - self.matrix.T).max())

    @property
    def im_eigenvalues(self) -> np.ndarray:
        im = self.matrix.imag
        return np.linalg.eigvalsh((im + im.T) / 2)

    @property
    def im_negative_definite(self) -> bool:
        return bool(self.im_eigenvalues.max() < 0)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)


def _matrix_of(n):
    return n.matrix if isinstance(n, KineticMatrix) else np.asarray(n, dtype=complex)


def act_on_kinetic(s: SymplecticMatrix, n, cond_limit: float = 1e12) -> KineticMatrix:
    """Fractional-linear duality action ``(C + D N)(A + B N)^-1``."""
    if not isinstance(s, SymplecticMatrix):
        s = SymplecticMatrix(s)
    nm = _matrix_of(n)
    a, b, c, d = s.blocks
    if nm.shape != a.shape:
        raise DimensionError(f"kinetic matrix shape {nm.shape} does not match blocks {a.shape}")
    den = a + b @ nm
    sv = np.linalg.svd(den, compute_uv=False)
    if sv[-1] == 0 or sv[0] / sv[-1] > cond_limit:
        raise FrameDegeneracyError("A + B N is singular in this frame", sv[-1],
                                   np.inf if sv[-1] == 0 else sv[0] / sv[-1])
    # X den = num  <=>  den^T X^T = num^T
    num = c + d @ nm
    out = np.linalg.solve(den.T, num.T).T
    point = n.point if isinstance(n, KineticMatrix) else None
    return KineticMatrix(out, point)


def _darboux_basis_inverse(omega):
    """Symplectic Gram-Schmidt with largest-pivot pairing.

    Builds columns e_1..e_m, f_1..f_m with omega(e_i, f_j) = delta_ij and all
    other pairings zero; returns the inverse of that basis matrix.
    """
    dim = omega.shape[0]
    m = dim // 2
    vecs = [np.eye(dim)[:, k] for k in range(dim)]
    es, fs = [], []
    while vecs:
        gram = np.array([[u @ omega @ w for w in vecs] for u in vecs])
        upper = np.triu(np.abs(gram), 1)
        i, j = np.unravel_index(np.argmax(upper), upper.shape)
        pivot = gram[i, j]
        if abs(pivot) <= 1e-14 * max(1.0, np.abs(omega).max()):
            raise DegenerateFrameError("omega is degenerate")
        scale = np.sqrt(abs(pivot))
        e = vecs[i] / scale
        f = np.sign(pivot) * vecs[j] / scale
        rest = []
        for k, u in enumerate(vecs):
            if k in (i, j):
                continue
            rest.append(u - (u @ omega @ f) * e + (u @ omega @ e) * f)
        vecs = rest
        es.append(e)
        fs.append(f)
    basis = np.column_stack(es + fs)
    assert basis.shape == (dim, 2 * m)
    return np.linalg.inv(basis)


def canonicalize(frame: SymplecticFrame):
    """Return ``(T, canonical_frame)`` with ``T.T @ Omega_can @ T == frame.omega``."""
    t = np.array(frame.to_canonical_matrix)
    return t, SymplecticFrame.canonical(frame.m, residual_tol=frame.residual_tol, op_tol=frame.op_tol)


def random_symplectic(m: int, rng: np.random.Generator, scale: float = 0.5,
                      frame: SymplecticFrame | None = None) -> SymplecticMatrix:
    """Sample ``expm(omega^-1 H)`` with H random symmetric (a test utility).

    ``X = omega^-1 H`` satisfies ``X^T omega + omega X = 0``, so its exponential
    is symplectic up to the accuracy of ``expm``.
    """
    frame = frame or SymplecticFrame.canonical(m)
    h = rng.normal(scale=scale, size=(2 * m, 2 * m))
    h = (h + h.T) / 2
    return SymplecticMatrix(expm(np.linalg.solve(frame.omega, h)), frame)


def random_kinetic(m: int, rng: np.random.Generator) -> KineticMatrix:
    """Random complex symmetric matrix with negative definite imaginary part."""
    re = rng.normal(size=(m, m))
    g = rng.normal(size=(m, m))
    im = -(g @ g.T + 0.5 * np.eye(m))
    return KineticMatrix((re + re.T) / 2 + 1j * im)
