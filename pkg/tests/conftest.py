import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gcsi.search import SearchConfig

settings.register_profile(
    "gcsi", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("gcsi")


@pytest.fixture
def fast():
    """A small search budget for unit tests."""
    return SearchConfig(seed=3, restarts=8, samples_per_restart=128, refine_iters=20)


def cgauss(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    q, r = np.linalg.qr(cgauss(rng, (n, n)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_normal(rng, n):
    v = random_unitary(rng, n)
    return (v * cgauss(rng, n)) @ v.conj().T


REMARK = np.array([[1, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
