"""Operator-class predicates with numeric defects and witnesses.

Definitions follow the source conventions verbatim:

* normal: ``A A* = A* A``
* cohyponormal: ``|A|^2 <= |A*|^2``, i.e. ``A* A <= A A*``. This is the
  reverse of the more common usage of the word; it is kept as printed.
* semi-hyponormal: ``|A*| <= |A|``
* paranormal: ``||Ax||^2 <= ||A^2 x|| ||x||`` for every ``x``

Defects are relative so verdicts do not depend on the scale of ``A``.
Paranormality is universally quantified over the unit sphere and is decided
by a seeded multistart search: a witness proves failure, while ``holds``
only means no violation was found within the budget.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    abs_op,
    adjoint,
    as_matrix,
    herm_eig,
    loewner_leq,
    matrix_to_json,
    op_norm,
    rank_nullspace,
    svd,
)
from .search import SearchConfig, basis_points, block_norms, multistart


@dataclass(frozen=True)
class ClassVerdict:
    holds: bool
    defect: float
    witness: Optional[np.ndarray] = None

    def to_json(self):
        return {
            "holds": bool(self.holds),
            "defect": float(self.defect),
            "witness": None if self.witness is None else matrix_to_json(_as_column(self.witness)),
        }


def _as_column(v):
    v = np.asarray(v, dtype=complex)
    return v[:, None] if v.ndim == 1 else v


def _verdict(defect, witness, tol):
    defect = max(0.0, float(defect))
    holds = defect <= tol.ineq_tol
    return ClassVerdict(holds=holds, defect=defect, witness=None if holds else witness)


def is_normal(a, tol=DEFAULT_TOL):
    """Defect ``||AA* - A*A|| / max(1, ||A||^2)``; witness is the commutator's top eigenvector."""
    a = as_matrix(a, square=True)
    comm = a @ adjoint(a) - adjoint(a) @ a
    eig = herm_eig(comm, tol)
    top = int(np.argmax(np.abs(eig.values)))
    scale = max(1.0, op_norm(a, tol) ** 2)
    defect = abs(eig.values[top]) / scale
    return _verdict(defect, eig.vectors[:, top].copy(), tol)


def _order_verdict(lower, upper, scale, tol):
    _, witness, min_eig = loewner_leq(lower, upper, tol)
    if witness is None:
        eig = herm_eig(upper - lower, tol)
        witness = eig.vectors[:, -1].copy()
    return _verdict(-min_eig / scale, witness, tol)


def is_cohyponormal(a, tol=DEFAULT_TOL):
    """``|A|^2 <= |A*|^2``; defect is ``max(0, -lambda_min(AA* - A*A)) / max(1, ||A||^2)``."""
    a = as_matrix(a, square=True)
    scale = max(1.0, op_norm(a, tol) ** 2)
    return _order_verdict(adjoint(a) @ a, a @ adjoint(a), scale, tol)


def is_semi_hyponormal(a, tol=DEFAULT_TOL):
    """``|A*| <= |A|``; defect is ``max(0, -lambda_min(|A| - |A*|)) / max(1, ||A||)``."""
    a = as_matrix(a, square=True)
    scale = max(1.0, op_norm(a, tol))
    return _order_verdict(abs_op(adjoint(a), tol), abs_op(a, tol), scale, tol)


def paranormal_value(a, x):
    """``(||Ax||^2 - ||A^2 x|| ||x||) / ||x||^2`` for a stack of ``n x k`` blocks."""
    x = np.asarray(x, dtype=complex)
    ax = a @ x
    a2x = a @ ax
    nx = block_norms(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (block_norms(ax) ** 2 - block_norms(a2x) * nx) / nx**2
    return np.where(nx > 0, out, -np.inf)


def paranormal_defect(a, config=None, k=1, tol=DEFAULT_TOL):
    """Estimated ``sup_{||x||=1} ||Ax||^2 - ||A^2 x||``, relative to ``max(1, ||A||^2)``.

    Starting points besides the random restarts: standard basis elements and
    the singular vectors of ``A``. The reported defect is the exact value at
    the returned witness.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    config = (config or SearchConfig()).for_space(n, k)
    scale = max(1.0, op_norm(a, tol) ** 2)

    s = svd(a, tol)
    vecs = np.concatenate([s.right.T, s.left.T])
    structured = np.zeros((len(vecs), n, k), dtype=complex)
    structured[:, :, 0] = vecs
    candidates = np.concatenate([basis_points(n, k), structured])[:, None]

    def objective(points):
        return paranormal_value(a, points[:, 0]) / scale

    ranked = multistart(objective, (n, k), 1, config, candidates)
    value, _, point = ranked[0]
    x = point[0]
    x = x / block_norms(x)
    exact = float(paranormal_value(a, x[None])[0]) / scale
    return _verdict(exact, x, tol)


def kernel_equality(a, tol=DEFAULT_TOL):
    """``N(A) = N(A^2)``, decided as ``rank(A) == rank(A^2)``."""
    a = as_matrix(a, square=True)
    return rank_nullspace(a, tol)[0] == rank_nullspace(a @ a, tol)[0]


def kernel_containment(a, tol=DEFAULT_TOL):
    """``N(A) ⊆ N(A*)``, decided as ``||A* N|| <= ineq_tol * max(1, ||A||)``."""
    a = as_matrix(a, square=True)
    r, null = rank_nullspace(a, tol)
    if null.shape[1] == 0:
        return True
    scale = max(1.0, op_norm(a, tol))
    return op_norm(adjoint(a) @ null, tol) <= tol.ineq_tol * scale
