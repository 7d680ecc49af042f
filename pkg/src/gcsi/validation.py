"""Input validation helpers for the estimator API."""
from __future__ import annotations

import numpy as np

from .linalg import DomainError, as_matrix


def check_operator(a, name="A"):
    """Return ``a`` as a finite square complex matrix or raise :class:`DomainError`."""
    return as_matrix(a, square=True, name=name)


def check_operator_stack(ops, n=None):
    """Validate a collection of square operators of a common size.

    Accepts a 3-D array ``(m, n, n)``, a single ``n x n`` matrix, or a list of
    matrices. Returns a 3-D complex array.
    """
    if isinstance(ops, np.ndarray) and ops.ndim == 2:
        ops = [ops]
    mats = [check_operator(a, name=f"operator {i}") for i, a in enumerate(ops)]
    if not mats:
        raise DomainError("empty operator collection")
    sizes = {m.shape[0] for m in mats}
    if len(sizes) != 1:
        raise DomainError(f"operators have different sizes {sorted(sizes)}")
    if n is not None and mats[0].shape[0] != n:
        raise DomainError(f"expected operators of size {n}, got {mats[0].shape[0]}")
    return np.stack(mats)


def check_exponent(lam):
    lam = float(lam)
    if not 0 < lam < 1:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    return lam
