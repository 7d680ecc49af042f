"""
Dense complex linear algebra
~~~~~~~~~~~~~~~~~~~~~~~~~~~~
Hermitian eigendecomposition by cyclic Jacobi rotations, and everything the
rest of the package builds on top of it: SVD, the modulus ``|A|``, PSD
fractional powers, operator norm, Löwner-order comparison, rank/nullspace
and the polar decomposition ``A = U|A|`` with ``U`` a partial isometry.

Matrices are plain ``numpy`` complex arrays; :func:`as_matrix` is the single
entry point that validates them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class DomainError(ValueError):
    """Input outside the domain of an operation (shape, symmetry, sign)."""


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every operation.

    Parameters
    ----------
    eig_tol : float
        Jacobi stops once the off-diagonal Frobenius mass is below
        ``eig_tol * ||H||_F``.
    psd_tol : float
        Slack for Löwner-order and PSD checks, relative to ``max(1, ||.||)``.
    rank_tol : float
        Singular values at or below ``rank_tol * sigma_max`` count as zero.
    ineq_tol : float
        Slack for inequality verdicts.
    """

    eig_tol: float = 1e-12
    psd_tol: float = 1e-9
    rank_tol: float = 1e-9
    ineq_tol: float = 1e-8

    def __post_init__(self):
        for name in ("eig_tol", "psd_tol", "rank_tol", "ineq_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be strictly positive, got {value}")
        if self.rank_tol >= 1:
            raise DomainError("rank_tol must be < 1")

    def to_dict(self):
        return {
            "eig_tol": self.eig_tol,
            "psd_tol": self.psd_tol,
            "rank_tol": self.rank_tol,
            "ineq_tol": self.ineq_tol,
        }


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class HermEigen:
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class Svd:
    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class PolarDecomposition:
    isometry: np.ndarray
    modulus: np.ndarray
    support_rank: int
    svd: Optional[Svd] = field(default=None, repr=False, compare=False)


def as_matrix(a, square=False, name="matrix"):
    """Validate ``a`` and return it as a 2-D complex array (a copy)."""
    arr = np.array(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DomainError(f"{name} must be a non-empty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite entries")
    if square and arr.shape[0] != arr.shape[1]:
        raise DomainError(f"{name} must be square, got shape {arr.shape}")
    return arr


def adjoint(a):
    return np.conj(np.transpose(a))


def _check_hermitian(h, tol):
    h = as_matrix(h, square=True, name="Hermitian input")
    scale = max(1.0, float(np.linalg.norm(h)))
    if np.linalg.norm(h - adjoint(h)) > 10 * tol.psd_tol * scale:
        raise DomainError("input is not Hermitian")
    return (h + adjoint(h)) / 2


def herm_eig(h, tol=DEFAULT_TOL, max_sweeps=100):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of ``h[p, q]`` with a diagonal
    unitary, then applies the real symmetric Jacobi rotation that zeroes the
    (now real) off-diagonal pair.

    Returns
    -------
    HermEigen
        Eigenvalues sorted descending; eigenvectors as columns.
    """
    h = _check_hermitian(h, tol)
    n = h.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol.eig_tol * float(np.linalg.norm(h))

    for _ in range(max_sweeps):
        off = float(np.linalg.norm(h - np.diag(np.diag(h))))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                hpq = h[p, q]
                mag = abs(hpq)
                if mag <= 1e-300:
                    continue
                phase = hpq / mag
                theta = (h[q, q].real - h[p, p].real) / (2.0 * mag)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                gqp = -s * np.conj(phase)
                gqq = c * np.conj(phase)

                col_p = h[:, p].copy()
                col_q = h[:, q].copy()
                h[:, p] = c * col_p + gqp * col_q
                h[:, q] = s * col_p + gqq * col_q
                row_p = h[p, :].copy()
                row_q = h[q, :].copy()
                h[p, :] = c * row_p + np.conj(gqp) * row_q
                h[q, :] = s * row_p + np.conj(gqq) * row_q
                h[p, q] = h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + gqp * vq
                v[:, q] = s * vp + gqq * vq

    values = np.real(np.diag(h)).copy()
    order = np.argsort(-values, kind="stable")
    return HermEigen(values=values[order], vectors=v[:, order])


def _orthonormal_complement(basis, m, count):
    """Extend the orthonormal columns of ``basis`` (m x r) by ``count`` columns."""
    cols = [basis[:, j] for j in range(basis.shape[1])]
    extra = []
    for e in np.eye(m, dtype=complex):
        w = e.copy()
        for _ in range(2):
            for u in cols + extra:
                w -= np.vdot(u, w) * u
        nw = np.linalg.norm(w)
        if nw > 1e-6:
            extra.append(w / nw)
        if len(extra) == count:
            break
    return np.column_stack(extra) if extra else np.zeros((m, 0), dtype=complex)


def svd(a, tol=DEFAULT_TOL):
    """Thin SVD ``a = left @ diag(sigma) @ right^H`` via Jacobi on ``a^H a``.

    Singular values are recomputed as ``||a v_i||`` rather than as square roots
    of eigenvalues, which keeps small singular values accurate to ``eps*||a||``.
    Left vectors are Gram-Schmidt re-orthonormalized in descending order; those
    whose singular value is at the rank cutoff are replaced by a completion.
    """
    a = as_matrix(a)
    m, n = a.shape
    p = min(m, n)
    eig = herm_eig(adjoint(a) @ a, tol)
    right = eig.vectors
    av = a @ right
    sigma = np.linalg.norm(av, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, right, av = sigma[order][:p], right[:, order][:, :p], av[:, order][:, :p]

    smax = sigma[0] if p else 0.0
    cutoff = tol.rank_tol * smax
    left = np.zeros((m, p), dtype=complex)
    kept = []
    for j in range(p):
        if sigma[j] > cutoff and sigma[j] > 0:
            w = av[:, j] / sigma[j]
            for _ in range(2):
                for i in kept:
                    w = w - np.vdot(left[:, i], w) * left[:, i]
            left[:, j] = w / np.linalg.norm(w)
            kept.append(j)
    missing = [j for j in range(p) if j not in kept]
    if missing:
        fill = _orthonormal_complement(left[:, kept], m, len(missing))
        for col, j in enumerate(missing):
            left[:, j] = fill[:, col]
    return Svd(left=left, singular_values=sigma, right=right)


def op_norm(a, tol=DEFAULT_TOL):
    """Operator (spectral) norm: the largest singular value."""
    a = as_matrix(a)
    if not np.any(a):
        return 0.0
    return float(svd(a, tol).singular_values[0])


def _psd_function(eig, fn, tol, name="matrix"):
    values = eig.values
    scale = max(1.0, float(np.max(np.abs(values))) if values.size else 1.0)
    if values.size and values.min() < -tol.psd_tol * scale:
        raise DomainError(f"{name} has a negative eigenvalue {values.min():.3e}")
    cutoff = tol.rank_tol * (values.max() if values.size else 0.0)
    mapped = np.where(values > cutoff, fn(np.clip(values, 0.0, None)), 0.0)
    vec = eig.vectors
    return (vec * mapped) @ adjoint(vec)


def frac_power(p, t, tol=DEFAULT_TOL):
    """``P^t`` for PSD ``P`` and ``t > 0``.

    Eigenvalues at or below the relative rank cutoff map to exactly zero, so
    ``rank(P^t) == rank(P)`` holds by construction.
    """
    if not t > 0:
        raise DomainError(f"exponent must be positive, got {t}")
    return _psd_function(herm_eig(p, tol), lambda v: v**t, tol, name="P")


def _modulus_from_svd(s, t=1.0, rank_tol=DEFAULT_TOL.rank_tol):
    sigma = s.singular_values
    cutoff = rank_tol * (sigma[0] if sigma.size else 0.0)
    powered = np.where(sigma > cutoff, np.clip(sigma, 0, None) ** t, 0.0)
    return (s.right * powered) @ adjoint(s.right)


def abs_power(a, t=1.0, tol=DEFAULT_TOL):
    """``|A|^t = (A^H A)^{t/2}`` built from the singular vectors of ``A``."""
    a = as_matrix(a, square=True)
    if not t > 0:
        raise DomainError(f"exponent must be positive, got {t}")
    if not np.any(a):
        return np.zeros_like(a)
    return _modulus_from_svd(svd(a, tol), t, tol.rank_tol)


def abs_op(a, tol=DEFAULT_TOL):
    """The modulus ``|A| = (A^H A)^{1/2}``."""
    return abs_power(a, 1.0, tol)


def loewner_leq(p, q, tol=DEFAULT_TOL):
    """Decide ``P <= Q`` in the Löwner order.

    Returns
    -------
    holds : bool
    witness : ndarray or None
        Unit eigenvector of ``Q - P`` for its smallest eigenvalue when the
        comparison fails.
    min_eig : float
        Smallest eigenvalue of ``Q - P``.
    """
    p = as_matrix(p, square=True, name="P")
    q = as_matrix(q, square=True, name="Q")
    if p.shape != q.shape:
        raise DomainError(f"shape mismatch {p.shape} vs {q.shape}")
    diff = q - p
    eig = herm_eig(diff, tol)
    min_eig = float(eig.values[-1])
    scale = max(1.0, float(np.max(np.abs(eig.values))))
    holds = min_eig >= -tol.psd_tol * scale
    witness = None if holds else eig.vectors[:, -1].copy()
    return holds, witness, min_eig


def rank_nullspace(a, tol=DEFAULT_TOL):
    """Numerical rank and an orthonormal basis (columns) of the kernel."""
    a = as_matrix(a)
    n = a.shape[1]
    if not np.any(a):
        return 0, np.eye(n, dtype=complex)
    eig = herm_eig(adjoint(a) @ a, tol)
    sigma = np.linalg.norm(a @ eig.vectors, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, vecs = sigma[order], eig.vectors[:, order]
    rank = int(np.sum(sigma > tol.rank_tol * sigma[0]))
    return rank, vecs[:, rank:].copy()


def rank(a, tol=DEFAULT_TOL):
    return rank_nullspace(a, tol)[0]


def polar_decompose(a, tol=DEFAULT_TOL):
    """Polar decomposition ``A = U|A|``.

    ``U`` is assembled only from singular pairs above the rank cutoff, so it
    is a partial isometry with ``N(U) = N(A)`` rather than a unitary
    extension.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    if not np.any(a):
        z = np.zeros((n, n), dtype=complex)
        return PolarDecomposition(isometry=z, modulus=z.copy(), support_rank=0)
    s = svd(a, tol)
    sigma = s.singular_values
    support = sigma > tol.rank_tol * sigma[0]
    r = int(np.sum(support))
    u = s.left[:, support] @ adjoint(s.right[:, support])
    return PolarDecomposition(
        isometry=u,
        modulus=_modulus_from_svd(s, 1.0, tol.rank_tol),
        support_rank=r,
        svd=s,
    )


def matrix_to_json(a):
    """ComplexMatrix interchange object ``{"rows", "cols", "entries"}``."""
    a = as_matrix(a)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "entries": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def matrix_from_json(obj):
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix object: {exc}") from None
    if rows < 1 or cols < 1:
        raise DomainError("rows and cols must be positive")
    if len(entries) != rows * cols:
        raise DomainError(f"expected {rows * cols} entries, got {len(entries)}")
    try:
        flat = [complex(float(re), float(im)) for re, im in entries]
    except (TypeError, ValueError):
        raise DomainError("each entry must be a [re, im] pair") from None
    return as_matrix(np.array(flat).reshape(rows, cols))
