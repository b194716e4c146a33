"""Holomorphic symplectic sections: 2m expressions in n coordinates plus a frame."""
from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionError
from .holo import HoloExpr, compile_exprs, constant, linear_combination, parse_expr
from .symplectic import SymplecticFrame

__all__ = ["SymplecticSection", "as_point"]


def as_point(z, n: int) -> tuple:
    """Normalize a coordinate point to a tuple of n complex numbers."""
    if np.ndim(z) == 0:
        z = (z,)
    z = tuple(complex(c) for c in z)
    if len(z) != n:
        raise DimensionError(f"point has {len(z)} coordinates, model has {n}")
    return z


class SymplecticSection:
    """Section ``v(z)`` valued in a 2m-dimensional symplectic space.

    Parameters
    ----------
    components : sequence of HoloExpr
        The 2m holomorphic components, all over the same coordinate list.
    frame : SymplecticFrame, optional
        Defaults to the canonical frame.
    base_point : sequence of complex, optional
        Point at which the model's invariants are certified.
    name : str
    """

    def __init__(self, components: Sequence[HoloExpr], frame: SymplecticFrame | None = None,
                 base_point=None, name: str = ""):
        components = tuple(components)
        if not components or len(components) % 2:
            raise DimensionError(f"a section needs an even number of components, got {len(components)}")
        variables = components[0].variables
        if any(c.variables != variables for c in components):
            raise DimensionError("all section components must share one coordinate list")
        frame = frame or SymplecticFrame.canonical(len(components) // 2)
        if frame.dim != len(components):
            raise DimensionError(f"frame dimension {frame.dim} != {len(components)} components")
        self._components = components
        self._frame = frame
        self._variables = variables
        self._name = name
        self._base_point = None if base_point is None else as_point(base_point, len(variables))

    @classmethod
    def from_strings(cls, components: Sequence[str], variables: Sequence[str], **kw):
        return cls([parse_expr(c, variables) for c in components], **kw)

    # attributes are read-only
    components = property(lambda self: self._components)
    frame = property(lambda self: self._frame)
    variables = property(lambda self: self._variables)
    base_point = property(lambda self: self._base_point)
    name = property(lambda self: self._name)

    @property
    def n(self) -> int:
        return len(self._variables)

    @property
    def dim(self) -> int:
        return len(self._components)

    @property
    def m(self) -> int:
        return self.dim // 2

    def __repr__(self):
        body = ", ".join(str(c) for c in self._components)
        return f"{type(self).__name__}({self._name or 'unnamed'}: ({body}) in {self._variables})"

    @cached_property
    def derivatives(self) -> tuple:
        """``derivatives[a][k]`` is the expression for d v_k / d z^a."""
        return tuple(tuple(c.diff(a) for c in self._components) for a in range(self.n))

    @cached_property
    def _eval_v(self):
        return compile_exprs(self._components)

    @cached_property
    def _eval_dv(self):
        return compile_exprs([d for row in self.derivatives for d in row])

    def values(self, z) -> np.ndarray:
        return self._eval_v(as_point(z, self.n))

    def jacobian(self, z) -> np.ndarray:
        """Rows d_a v, shape (n, 2m)."""
        return self._eval_dv(as_point(z, self.n)).reshape(self.n, self.dim)

    @cached_property
    def canonical_components(self) -> tuple:
        """Components expressed in canonical coordinates (T v)."""
        if self._frame.is_canonical:
            return self._components
        t = self._frame.to_canonical_matrix
        return tuple(linear_combination(row, self._components) for row in t)

    def transformed(self, matrix, factor=None, shift=None, **kw):
        """New section ``factor * (matrix @ v) + shift`` in the same frame."""
        matrix = np.asarray(matrix)
        comps = []
        for k, row in enumerate(matrix):
            c = linear_combination(row, self._components)
            if factor is not None:
                c = c * factor
            if shift is not None and shift[k] != 0:
                c = c + complex(shift[k])
            comps.append(c)
        kw.setdefault("base_point", self._base_point)
        kw.setdefault("frame", self._frame)
        return type(self)(comps, **kw)

    def zero(self) -> HoloExpr:
        return constant(0, self._variables)
