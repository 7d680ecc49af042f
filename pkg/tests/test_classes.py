import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import REMARK, cgauss, random_normal
from gcsi.classes import (
    is_cohyponormal,
    is_normal,
    is_semi_hyponormal,
    kernel_containment,
    kernel_equality,
    paranormal_defect,
    paranormal_value,
)
from gcsi.classify import classify
from gcsi.harness import jordan_block

seeds = st.integers(0, 10**6)


@given(seeds, st.integers(1, 6))
def test_normal_operators_are_in_every_class(seed, n):
    a = random_normal(np.random.default_rng(seed), n)
    assert is_normal(a).holds
    assert is_cohyponormal(a).holds
    assert is_semi_hyponormal(a).holds
    assert kernel_equality(a) and kernel_containment(a)


@given(seeds, st.integers(2, 6))
def test_generic_operators_are_not_normal(seed, n):
    a = cgauss(np.random.default_rng(seed), (n, n))
    v = is_normal(a)
    assert not v.holds and v.witness is not None
    # oracle: direct commutator norm
    comm = a @ a.conj().T - a.conj().T @ a
    assert v.defect == pytest.approx(np.linalg.norm(comm, 2) / max(1, np.linalg.norm(a, 2) ** 2), rel=1e-9)
    assert not is_semi_hyponormal(a).holds


@given(seeds, st.integers(2, 5))
def test_cohyponormal_defect_and_trace_collapse(seed, n):
    # A*A <= AA* with tr(AA* - A*A) = 0 forces equality, so only normal
    # operators qualify in finite dimension
    a = cgauss(np.random.default_rng(seed), (n, n))
    v = is_cohyponormal(a)
    low = np.linalg.eigvalsh(a @ a.conj().T - a.conj().T @ a)[0]
    assert low < 0 and not v.holds
    assert v.defect == pytest.approx(-low / max(1, np.linalg.norm(a, 2) ** 2), rel=1e-8)
    s = jordan_block(n)
    assert not is_cohyponormal(s).holds and not is_cohyponormal(s.T).holds


def test_semi_hyponormal_witness_violates_order():
    a = cgauss(np.random.default_rng(3), (4, 4))
    v = is_semi_hyponormal(a)
    w = v.witness
    from gcsi.linalg import abs_op
    gap = np.real(w.conj() @ (abs_op(a) - abs_op(a.conj().T)) @ w)
    assert gap < 0 and -gap / max(1, np.linalg.norm(a, 2)) == pytest.approx(v.defect, rel=1e-8)


def test_paranormal_remark_and_jordan(fast):
    v = paranormal_defect(REMARK, fast)
    assert v.defect == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(np.abs(v.witness[:, 0]), [0, 0, 1])
    j = paranormal_defect(jordan_block(4), fast)
    assert j.defect == pytest.approx(1.0, abs=1e-10) and not j.holds


@given(seeds, st.integers(1, 5))
def test_paranormal_value_is_nonpositive_for_normal(seed, n):
    rng = np.random.default_rng(seed)
    a = random_normal(rng, n)
    x = cgauss(rng, (50, n, 1))
    assert np.all(paranormal_value(a, x) <= 1e-10 * max(1, np.linalg.norm(a, 2) ** 2))


def test_paranormal_defect_is_exact_at_witness(fast):
    a = cgauss(np.random.default_rng(8), (3, 3))
    v = paranormal_defect(a, fast)
    x = v.witness[:, 0]
    direct = (np.linalg.norm(a @ x) ** 2 - np.linalg.norm(a @ a @ x)) / max(1, np.linalg.norm(a, 2) ** 2)
    assert v.defect == pytest.approx(max(0.0, direct), abs=1e-12)


def test_kernel_relations():
    assert not kernel_equality(REMARK)
    assert not kernel_containment(REMARK)
    p = np.diag([1.0, 0.0, 2.0])
    assert kernel_equality(p) and kernel_containment(p)
    assert kernel_equality(np.eye(3)) and kernel_containment(np.eye(3))


def test_classify_remark(fast):
    r = classify(REMARK, fast)
    assert (r.rank, r.rank_square) == (2, 1)
    assert not any(getattr(r, c).holds for c in ("normal", "cohyponormal", "semi_hyponormal", "paranormal"))
    assert r.gcsi.membership == "non_member"
    assert r.lattice_violations() == []
    assert r.to_json()["kernel_eq"] is False
