"""
GCSI statistics and searches
~~~~~~~~~~~~~~~~~~~~~~~~~~~~
For an operator ``A`` and module elements ``x, y`` write

    r0 = ||<Ax, y>||,   r1 = ||Ax|| ||y||,   r2 = ||Ay|| ||x||.

``A`` satisfies the generalized Cauchy-Schwarz inequality with exponent
``lam`` when ``r0 <= r1**lam * r2**(1 - lam)`` for every pair. Since
``r0 <= r1`` always, the feasible exponents of one pair form the interval
``[lambda_min, 1)``, where

* ``lambda_min = 0`` if ``r2 >= r0``;
* ``lambda_min = log(r0/r2) / log(r1/r2)`` if ``0 < r2 < r0 < r1``;
* the pair is infeasible for every ``lam < 1`` (reported as 1) if
  ``r2 < r0 = r1`` or ``r2 = 0 < r0``.

Feasible exponents of ``A`` therefore form an up-set and membership is
governed by the single number ``lambda_star = sup lambda_min``. The sup is
estimated by multistart search plus structured candidates that can produce
exact infeasibility certificates (kernel pairs, paranormality pairs
``(x, Ax)``, standard basis pairs).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .classes import paranormal_defect, is_semi_hyponormal
from .linalg import (
    DEFAULT_TOL,
    DomainError,
    Tolerances,
    abs_power,
    adjoint,
    as_matrix,
    matrix_to_json,
    op_norm,
    polar_decompose,
    rank_nullspace,
    svd,
)
from .search import SearchConfig, basis_points, block_norms, multistart, sphere_normalize

MEMBER = "member"
NON_MEMBER = "non_member"
UNDECIDED = "undecided"

# r0 below this multiple of r1 is rounding noise of the inner product.
_R0_NOISE = 1e-12


@dataclass(frozen=True)
class PairStatistics:
    r0: float
    r1: float
    r2: float
    lambda_min: float
    infeasible: bool

    def to_json(self):
        return {
            "r0": float(self.r0),
            "r1": float(self.r1),
            "r2": float(self.r2),
            "lambda_min": float(self.lambda_min),
            "infeasible": bool(self.infeasible),
        }


@dataclass(frozen=True)
class Certificate:
    x: np.ndarray
    y: np.ndarray
    stats: PairStatistics

    def to_json(self):
        return {"x": matrix_to_json(self.x), "y": matrix_to_json(self.y), "stats": self.stats.to_json()}


@dataclass(frozen=True)
class GcsiVerdict:
    lambda_star: float
    membership: str
    certificates: List[Certificate]
    search_budget: SearchConfig
    tol: Tolerances = field(default=DEFAULT_TOL)
    k: int = 1

    def to_json(self):
        return {
            "lambda_star": float(self.lambda_star),
            "membership": self.membership,
            "k": self.k,
            "certificates": [c.to_json() for c in self.certificates],
            "search_budget": self.search_budget.to_dict(),
            "tolerances": self.tol.to_dict(),
        }


def _blocks(x, n=None):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or (n is not None and x.shape[0] != n):
        raise DomainError(f"module element of shape {x.shape} does not match operator size {n}")
    return x


def lambda_min_from_ratios(r0, r1, r2):
    """Closed-form minimal exponent for given ``(r0, r1, r2)`` (exact case analysis)."""
    r0, r1, r2 = (np.asarray(v, dtype=float) for v in (r0, r1, r2))
    r0 = np.minimum(r0, r1)
    zero = (r0 <= 0) | (r2 >= r0)
    infeasible = ~zero & ((r2 <= 0) | (r0 >= r1))
    # differences of logs: r0 / r2 overflows for subnormal r2
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        formula = (np.log(r0) - np.log(r2)) / (np.log(r1) - np.log(r2))
    lam = np.where(zero, 0.0, np.where(infeasible, 1.0, np.clip(formula, 0.0, 1.0)))
    return lam, infeasible


def _ratios(a, x, y):
    """r0, r1, r2 and the scale ``||A|| ||x|| ||y||`` for stacks ``(B, n, k)``."""
    ax = a @ x
    ay = a @ y
    nx, ny = block_norms(x), block_norms(y)
    inner = np.conj(np.swapaxes(ax, -1, -2)) @ y
    r0 = block_norms(inner)
    r1 = block_norms(ax) * ny
    r2 = block_norms(ay) * nx
    return r0, r1, r2, nx * ny


def _stats_batch(a, x, y, a_norm, tol):
    """Pair statistics with the numerical-zero conventions used by every search.

    * ``r0`` carries rounding error of order ``eps * r1``, so ``r0 <= 1e-12 * r1``
      counts as zero and ``r0 <= r2 + 1e-12 * r1`` as ``r0 <= r2``.
    * ``r2 <= rank_tol * ||A|| ||x|| ||y||`` means ``y`` lies in the numerical
      kernel of ``A``; if ``r0`` is clearly positive the pair is infeasible.
    """
    r0, r1, r2, s = _ratios(a, x, y)
    r0 = np.minimum(r0, r1)
    scale = a_norm * s
    noise = r0 <= _R0_NOISE * r1
    r2_zero = (r2 <= tol.rank_tol * scale) & (r0 > np.sqrt(tol.rank_tol) * scale)
    lam, infeasible = lambda_min_from_ratios(r0, r1, np.where(r2_zero, 0.0, r2))
    trivial = noise | (~r2_zero & (r0 <= r2 + _R0_NOISE * r1))
    lam = np.where(trivial, 0.0, lam)
    infeasible = infeasible & ~trivial
    return r0, r1, r2, lam, infeasible, r2_zero, noise


def pair_stats(a, x, y, tol=DEFAULT_TOL):
    """GCSI statistics of one pair ``(x, y)``."""
    a = as_matrix(a, square=True)
    n = a.shape[0]
    x, y = _blocks(x, n), _blocks(y, n)
    if x.shape != y.shape:
        raise DomainError(f"x and y have different shapes {x.shape} vs {y.shape}")
    r0, r1, r2, lam, infeasible, _, _ = _stats_batch(a, x[None], y[None], op_norm(a, tol), tol)
    return PairStatistics(float(r0[0]), float(r1[0]), float(r2[0]), float(lam[0]), bool(infeasible[0]))


def _log_margin(a, x, y, lam, a_norm, tol):
    """``lam log r1 + (1 - lam) log r2 - log r0`` with the same zero conventions."""
    r0, r1, r2, _, _, r2_zero, noise = _stats_batch(a, x, y, a_norm, tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        margin = lam * np.log(r1) + (1 - lam) * np.log(np.where(r2_zero, 0.0, r2)) - np.log(r0)
    margin = np.where(noise | (r0 <= 0), np.inf, margin)
    return np.where(np.isnan(margin), np.inf, margin)


def _pair_candidates(a, k, tol, extra_x=()):
    """Deterministic starting pairs that can realize exact certificates."""
    n = a.shape[0]
    basis = basis_points(n, k)
    pairs = [np.stack([basis[i], basis[j]]) for i in range(n) for j in range(n)]

    def embed(v):
        out = np.zeros((n, k), dtype=complex)
        out[:, 0] = v
        return out

    _, null = rank_nullspace(a, tol)
    ad = adjoint(a)
    for j in range(null.shape[1]):
        y = null[:, j]
        w = ad @ y
        if np.linalg.norm(w) > 0:
            pairs.append(np.stack([embed(w / np.linalg.norm(w)), embed(y)]))
    for x in extra_x:
        x = _blocks(x, n)
        if x.shape[1] != k:
            x = embed(x[:, 0])
        ax = a @ x
        if np.any(ax):
            pairs.append(np.stack([x / block_norms(x), ax / block_norms(ax)]))
    return np.stack(pairs)


def check_fixed_lambda(a, lam, config=None, k=1, tol=DEFAULT_TOL):
    """Search for a violation of the inequality at a fixed exponent.

    Returns
    -------
    worst_margin : float
        Estimated ``inf`` over pairs of ``log RHS - log LHS``; negative means
        the returned pair is a violation (``-inf`` when ``r2`` vanishes).
    witness : tuple of ndarray
        ``(x, y)`` attaining ``worst_margin``.
    """
    if not 0 < lam < 1:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    a = as_matrix(a, square=True)
    n = a.shape[0]
    config = (config or SearchConfig()).for_space(n, k)
    a_norm = op_norm(a, tol)

    def objective(points):
        return -_log_margin(a, points[:, 0], points[:, 1], lam, a_norm, tol)

    candidates = _pair_candidates(a, k, tol)
    ranked = multistart(objective, (n, k), 2, config, candidates)
    value, _, point = ranked[0]
    x, y = point[0], point[1]
    margin = float(_log_margin(a, x[None], y[None], lam, a_norm, tol)[0])
    return margin, (x, y)


def gcsi_index(a, config=None, k=1, tol=DEFAULT_TOL, n_certificates=3):
    """Estimate ``lambda_star(A)`` and decide membership as a tri-state.

    ``non_member`` is only reported with a certificate whose re-evaluated
    ``lambda_min >= 1 - ineq_tol``; ``member`` requires
    ``lambda_star <= config.member_threshold``; anything else is
    ``undecided``.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    config = config or SearchConfig()
    budget = config.for_space(n, k)
    a_norm = op_norm(a, tol)

    para = paranormal_defect(a, config, k=k, tol=tol)
    s = svd(a, tol)
    extra = [s.right[:, j] for j in range(n)] + [np.eye(n)[:, j] for j in range(n)]
    if para.witness is not None:
        extra.insert(0, para.witness)

    def objective(points):
        return _stats_batch(a, points[:, 0], points[:, 1], a_norm, tol)[3]

    candidates = _pair_candidates(a, k, tol, extra_x=extra)
    ranked = multistart(objective, (n, k), 2, budget, candidates)

    certificates = []
    for _, _, point in ranked:
        x = point[0] / block_norms(point[0])
        y = point[1] / block_norms(point[1])
        stats = pair_stats(a, x, y, tol)
        if any(np.allclose(c.x, x) and np.allclose(c.y, y) for c in certificates):
            continue
        certificates.append(Certificate(x=x, y=y, stats=stats))
        if len(certificates) == n_certificates:
            break
    certificates.sort(key=lambda c: -c.stats.lambda_min)
    lambda_star = certificates[0].stats.lambda_min

    if lambda_star >= 1 - tol.ineq_tol:
        membership = NON_MEMBER
    elif lambda_star <= config.member_threshold:
        membership = MEMBER
    else:
        membership = UNDECIDED
    return GcsiVerdict(lambda_star, membership, certificates, config, tol, k)


def brute_force_index_2d(a, grid=720):
    """Dense-grid oracle for ``lambda_star`` of a real ``2 x 2`` operator.

    Unit ``x, y`` are parametrized by angles in ``[0, pi)`` (signs do not
    matter). Independent of :func:`pair_stats`; meant for tests only.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (2, 2):
        raise DomainError("brute force oracle needs a real 2x2 operator")
    theta = np.pi * np.arange(grid) / grid
    u = np.stack([np.cos(theta), np.sin(theta)])  # columns are unit vectors
    au = a @ u
    nau = np.hypot(au[0], au[1])
    r0 = np.abs(au.T @ u)  # r0[i, j] = |<A u_i, u_j>|
    r1 = np.broadcast_to(nau[:, None], r0.shape)
    r2 = np.broadcast_to(nau[None, :], r0.shape)
    r0 = np.minimum(r0, r1)
    trivial = (r0 <= _R0_NOISE * r1) | (r2 >= r0)
    stuck = ~trivial & ((r2 == 0) | (r0 >= r1))
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.log(r0 / r2) / np.log(r1 / r2)
    lam = np.where(trivial, 0.0, np.where(stuck, 1.0, lam))
    return float(np.max(lam))


def _equality_gap(a, x, y, lam, a_norm, tol):
    r0, r1, r2, _, _, _, _ = _stats_batch(a, x, y, a_norm, tol)
    floor = tol.rank_tol * a_norm * block_norms(x) * block_norms(y)
    ok = (r0 > floor) & (r1 > floor) & (r2 > floor)
    with np.errstate(divide="ignore", invalid="ignore"):
        l0, l1, l2 = np.log(r0), np.log(r1), np.log(r2)
        if lam is None:
            lo, hi = np.minimum(l1, l2), np.maximum(l1, l2)
            gap = np.maximum(0.0, np.maximum(l0 - hi, lo - l0))
        else:
            gap = np.abs(l0 - lam * l1 - (1 - lam) * l2)
    return np.where(ok, gap, -np.inf)


def equality_gap(a, x, y, lam=None, tol=DEFAULT_TOL):
    """``|log r0 - lam log r1 - (1 - lam) log r2|`` for one pair.

    With ``lam=None`` the exponent may depend on the pair and the gap is the
    distance of ``log r0`` from ``[min(log r1, log r2), max(log r1, log r2)]``.
    Returns ``-inf`` when one of the three quantities vanishes.
    """
    a = as_matrix(a, square=True)
    x, y = _blocks(x, a.shape[0]), _blocks(y, a.shape[0])
    return float(_equality_gap(a, x[None], y[None], lam, op_norm(a, tol), tol)[0])


def equality_defect(a, x, lam=None, config=None, tol=DEFAULT_TOL):
    """Estimated ``sup_y`` of :func:`equality_gap` over pairs with ``r0, r1, r2 > 0``.

    A value near zero means ``x`` is an approximate equality vector. ``lam``
    may be a fixed exponent in (0, 1) or ``None`` for a per-``y`` exponent.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    x = _blocks(x, n)
    k = x.shape[1]
    if lam is not None and not 0 < lam < 1:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    a_norm = op_norm(a, tol)
    if block_norms(a @ x) <= tol.rank_tol * a_norm * block_norms(x):
        raise DomainError("equality defect needs Ax != 0")
    config = (config or SearchConfig()).for_space(n, k)
    x = x / block_norms(x)
    ax = a @ x
    candidates = np.concatenate(
        [basis_points(n, k), (ax / block_norms(ax))[None], x[None]]
    )[:, None]

    def objective(points):
        xs = np.broadcast_to(x, points[:, 0].shape)
        return _equality_gap(a, xs, points[:, 0], lam, a_norm, tol)

    ranked = multistart(objective, (n, k), 1, config, candidates)
    return max(0.0, ranked[0][0])


def _sqrt_margin(a, root, x, y):
    nx, ny = block_norms(x), block_norms(y)
    inner = np.conj(np.swapaxes(a @ x, -1, -2)) @ y
    with np.errstate(divide="ignore", invalid="ignore"):
        m = (block_norms(root @ x) * block_norms(root @ y) - block_norms(inner)) / (nx * ny)
    return np.where((nx > 0) & (ny > 0), m, np.inf)


def sqrt_form_margin(a, config=None, k=1, tol=DEFAULT_TOL):
    """Estimated ``inf`` over unit pairs of ``|| |A|^{1/2} x || || |A|^{1/2} y || - ||<Ax, y>||``.

    Besides random restarts the pair ``(U* z, z)`` is tried, with ``U`` the
    polar isometry and ``z`` the semi-hyponormality witness; it attains about
    ``-defect / 2`` whenever ``|A*| <= |A|`` fails.
    """
    a = as_matrix(a, square=True)
    n = a.shape[0]
    config = (config or SearchConfig()).for_space(n, k)
    root = abs_power(a, 0.5, tol)

    def embed(v):
        out = np.zeros((n, k), dtype=complex)
        out[:, 0] = v
        return out

    basis = basis_points(n, k)
    pairs = [np.stack([basis[i], basis[j]]) for i in range(n) for j in range(n)]
    semi = is_semi_hyponormal(a, tol)
    if semi.witness is not None:
        u = polar_decompose(a, tol).isometry
        z = semi.witness
        uz = adjoint(u) @ z
        if np.linalg.norm(uz) > 0:
            pairs.append(np.stack([embed(uz / np.linalg.norm(uz)), embed(z)]))

    def objective(points):
        return -_sqrt_margin(a, root, points[:, 0], points[:, 1])

    ranked = multistart(objective, (n, k), 2, config, np.stack(pairs))
    _, _, point = ranked[0]
    x = point[0] / block_norms(point[0])
    y = point[1] / block_norms(point[1])
    margin = float(_sqrt_margin(a, root, x[None], y[None])[0])
    return margin, (x, y)


def random_unit_pairs(rng, n, k, count):
    """Helper for tests and ensembles: ``count`` random unit pairs ``(2, n, k)``."""
    g = rng.standard_normal((count, 2, n, k)) + 1j * rng.standard_normal((count, 2, n, k))
    return sphere_normalize(g)
