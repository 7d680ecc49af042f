"""Seeded multistart search on products of unit spheres in ``C^{n x k}``.

Each restart draws its own generator from ``seed ^ restart_index``, samples
Gaussian points, keeps the best, and refines it derivative-free: random
tangent perturbations re-normalized onto the sphere, accepted only on
improvement, with a per-restart step that shrinks after failed iterations.
All restarts advance together in one vectorized batch; because every random
draw comes from the restart's own stream the result does not depend on
evaluation order.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .linalg import DomainError


@dataclass(frozen=True)
class SearchConfig:
    """Budget and seed of a randomized search.

    ``samples_per_restart`` is the budget for ``n * k <= 24``; larger spaces
    scale it linearly (see :meth:`for_space`).
    """

    seed: int = 0
    restarts: int = 32
    samples_per_restart: int = 512
    refine_iters: int = 60
    step_decay: float = 0.7
    member_threshold: float = 0.95
    proposals: int = 4
    initial_step: float = 0.5

    def __post_init__(self):
        for name in ("restarts", "samples_per_restart", "refine_iters", "proposals"):
            if int(getattr(self, name)) < 1:
                raise DomainError(f"{name} must be positive")
        if not 0 < self.step_decay < 1:
            raise DomainError("step_decay must lie in (0, 1)")
        if not 0 < self.member_threshold < 1:
            raise DomainError("member_threshold must lie in (0, 1)")
        if self.seed < 0:
            raise DomainError("seed must be non-negative")

    def for_space(self, n, k=1):
        factor = max(1, math.ceil(n * k / 24))
        return replace(self, samples_per_restart=self.samples_per_restart * factor)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown SearchConfig keys: {sorted(unknown)}")
        return cls(**data)


def sphere_normalize(points):
    """Scale each block ``points[..., b, :, :]`` to unit Frobenius norm."""
    nrm = np.sqrt(np.sum(np.abs(points) ** 2, axis=(-2, -1), keepdims=True))
    return points / np.where(nrm == 0, 1.0, nrm)


def _gaussian(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _tangent(points, directions):
    along = np.sum(np.real(np.conj(points) * directions), axis=(-2, -1), keepdims=True)
    d = directions - along * points
    return sphere_normalize(d)


def _safe(values):
    values = np.asarray(values, dtype=float)
    return np.where(np.isnan(values), -np.inf, values)


def multistart(objective, block_shape, n_blocks, config, candidates=None):
    """Maximize ``objective`` over ``n_blocks`` independent unit spheres.

    Parameters
    ----------
    objective : callable
        Maps a stack of shape ``(B, n_blocks, n, k)`` to ``B`` real values.
    block_shape : tuple
        ``(n, k)``.
    config : SearchConfig
    candidates : ndarray, optional
        Extra deterministic starting points ``(C, n_blocks, n, k)``. They are
        evaluated as given (not normalized, not refined) and win ties against
        random restarts.

    Returns
    -------
    list of (value, label, point)
        Every candidate and every restart's refined optimum, best first.
        ``label`` is ``("candidate", i)`` or ``("restart", r)``.
    """
    n, k = block_shape
    shape = (n_blocks, n, k)
    R, S, P, T = config.restarts, config.samples_per_restart, config.proposals, config.refine_iters
    rngs = [np.random.default_rng(config.seed ^ r) for r in range(R)]

    samples = np.stack([sphere_normalize(_gaussian(rng, (S,) + shape)) for rng in rngs])
    perturb = np.stack([_gaussian(rng, (T, P) + shape) for rng in rngs])

    values = _safe(objective(samples.reshape((R * S,) + shape))).reshape(R, S)
    pick = np.argmax(values, axis=1)
    best = samples[np.arange(R), pick]
    best_val = values[np.arange(R), pick]

    # success-based step control: a restart shrinks its step only after an
    # iteration without improvement
    step = np.full(R, config.initial_step)
    pad = (slice(None),) + (None,) * (len(shape) + 1)
    for it in range(T):
        trial = sphere_normalize(best[:, None] + step[pad] * _tangent(best[:, None], perturb[:, it]))
        tv = _safe(objective(trial.reshape((R * P,) + shape))).reshape(R, P)
        j = np.argmax(tv, axis=1)
        cand_val = tv[np.arange(R), j]
        better = cand_val > best_val
        best[better] = trial[np.arange(R), j][better]
        best_val[better] = cand_val[better]
        step[~better] *= config.step_decay

    ranked = []
    if candidates is not None and len(candidates):
        candidates = np.asarray(candidates, dtype=complex).reshape((-1,) + shape)
        cv = _safe(objective(candidates))
        ranked.extend((float(cv[i]), 0, i, ("candidate", i), candidates[i]) for i in range(len(cv)))
    ranked.extend((float(best_val[r]), 1, r, ("restart", r), best[r]) for r in range(R))
    ranked.sort(key=lambda t: (-t[0], t[1], t[2]))
    return [(v, label, point) for v, _, _, label, point in ranked]


def block_norms(x):
    """Module norms (largest singular values) of a stack of ``n x k`` blocks.

    Computed from the ``k x k`` Gram matrix: closed form for ``k = 2``,
    ``eigvalsh`` otherwise.
    """
    if x.shape[-1] == 1:
        return np.sqrt(np.sum(np.abs(x) ** 2, axis=(-2, -1)))
    gram = np.conj(np.swapaxes(x, -1, -2)) @ x
    if x.shape[-1] == 2:
        a = gram[..., 0, 0].real
        d = gram[..., 1, 1].real
        top = 0.5 * (a + d) + np.hypot(0.5 * (a - d), np.abs(gram[..., 0, 1]))
    else:
        top = np.linalg.eigvalsh(gram)[..., -1]
    return np.sqrt(np.clip(top, 0.0, None))


def basis_points(n, k):
    """Standard basis elements ``e_i`` placed in the first column of ``C^{n x k}``."""
    pts = np.zeros((n, n, k), dtype=complex)
    pts[np.arange(n), np.arange(n), 0] = 1.0
    return pts
