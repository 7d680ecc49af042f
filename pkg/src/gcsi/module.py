"""Hilbert C*-module ``C^{n x k}`` over ``M_k(C)`` with ``<x, y> = x^H y``.

``k = 1`` is ordinary ``C^n``. For ``k >= 2`` the inner product is a ``k x k``
matrix and ``||<x, y>||`` is its operator norm, so the module Cauchy-Schwarz
inequality is a genuinely matrix-valued statement.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DomainError,
    adjoint,
    as_matrix,
    matrix_from_json,
    matrix_to_json,
    op_norm,
)


@dataclass(frozen=True)
class ModuleSpace:
    n: int
    k: int = 1

    def __post_init__(self):
        if int(self.n) < 1 or int(self.k) < 1:
            raise DomainError(f"module dimensions must be positive, got n={self.n}, k={self.k}")

    def zeros(self):
        return ModuleElement(self, np.zeros((self.n, self.k), dtype=complex))

    def basis_element(self, i, j=0):
        value = np.zeros((self.n, self.k), dtype=complex)
        value[i, j] = 1.0
        return ModuleElement(self, value)


@dataclass(frozen=True, eq=False)
class ModuleElement:
    space: ModuleSpace
    value: np.ndarray

    def __post_init__(self):
        value = as_matrix(self.value, name="module element")
        if value.shape != (self.space.n, self.space.k):
            raise DomainError(
                f"element of shape {value.shape} does not live in C^({self.space.n}x{self.space.k})"
            )
        value.setflags(write=False)
        object.__setattr__(self, "value", value)

    @classmethod
    def from_array(cls, value):
        """Wrap an ``n x k`` array (a 1-D array is read as a column, ``k = 1``)."""
        arr = np.asarray(value, dtype=complex)
        if arr.ndim == 1:
            arr = arr[:, None]
        return cls(ModuleSpace(*arr.shape), arr)

    def __mul__(self, scalar):
        return ModuleElement(self.space, self.value * scalar)

    __rmul__ = __mul__

    def __add__(self, other):
        _same_space(self, other)
        return ModuleElement(self.space, self.value + other.value)

    def right_mul(self, a):
        """Module action ``x . a`` for a ``k x k`` coefficient ``a``."""
        a = as_matrix(a, square=True, name="coefficient")
        if a.shape[0] != self.space.k:
            raise DomainError(f"coefficient must be {self.space.k}x{self.space.k}")
        return ModuleElement(self.space, self.value @ a)

    def to_json(self):
        out = matrix_to_json(self.value)
        out["k"] = self.space.k
        return out

    @classmethod
    def from_json(cls, obj):
        value = matrix_from_json(obj)
        k = int(obj.get("k", value.shape[1]))
        if k != value.shape[1]:
            raise DomainError(f"field k={k} disagrees with {value.shape[1]} columns")
        return cls(ModuleSpace(value.shape[0], k), value)


def _same_space(x, y):
    if x.space != y.space:
        raise DomainError(f"elements live in different spaces: {x.space} vs {y.space}")


def inner(x, y):
    """Algebra-valued inner product ``<x, y> = x^H y`` (``k x k``)."""
    _same_space(x, y)
    return adjoint(x.value) @ y.value


def elem_norm(x):
    """Module norm ``||<x, x>||^{1/2}``, the largest singular value of ``x``."""
    return op_norm(x.value)


def normalize(x):
    """Scale ``x`` to unit module norm; the zero element is returned unchanged."""
    nrm = elem_norm(x)
    if nrm == 0.0:
        return x
    return x * (1.0 / nrm)


def apply_op(a, x):
    a = as_matrix(a, square=True, name="operator")
    if a.shape[0] != x.space.n:
        raise DomainError(f"operator of size {a.shape[0]} cannot act on C^({x.space.n}x{x.space.k})")
    return ModuleElement(x.space, a @ x.value)


def cs_margin(x, y):
    """``||x|| ||y|| - ||<x, y>||``; nonnegative by the module Cauchy-Schwarz inequality."""
    return elem_norm(x) * elem_norm(y) - op_norm(inner(x, y))


def random_element(space, seed):
    """Standard complex normal entries from a PCG64 generator seeded by ``seed``.

    Each entry has ``E|z|^2 = 1``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    shape = (space.n, space.k)
    value = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return ModuleElement(space, value)


def cs_holds(x, y, tol=DEFAULT_TOL):
    return cs_margin(x, y) >= -tol.ineq_tol * max(1.0, elem_norm(x) * elem_norm(y))
