import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cgauss
from gcsi.linalg import DomainError
from gcsi.module import (
    ModuleElement,
    ModuleSpace,
    apply_op,
    cs_holds,
    cs_margin,
    elem_norm,
    inner,
    normalize,
    random_element,
)

dims = st.tuples(st.integers(1, 6), st.integers(1, 3))


def test_inner_is_x_adjoint_y():
    rng = np.random.default_rng(0)
    space = ModuleSpace(4, 2)
    x = ModuleElement(space, cgauss(rng, (4, 2)))
    y = ModuleElement(space, cgauss(rng, (4, 2)))
    np.testing.assert_allclose(inner(x, y), x.value.conj().T @ y.value)
    np.testing.assert_allclose(inner(x, y), inner(y, x).conj().T)


def test_inner_module_linearity():
    rng = np.random.default_rng(1)
    space = ModuleSpace(3, 2)
    x = ModuleElement(space, cgauss(rng, (3, 2)))
    y = ModuleElement(space, cgauss(rng, (3, 2)))
    c = cgauss(rng, (2, 2))
    np.testing.assert_allclose(inner(x, y.right_mul(c)), inner(x, y) @ c, atol=1e-12)
    np.testing.assert_allclose(inner(x.right_mul(c), y), c.conj().T @ inner(x, y), atol=1e-12)


@given(st.integers(0, 10**6), dims)
def test_cauchy_schwarz_and_norm(seed, shape):
    n, k = shape
    space = ModuleSpace(n, k)
    x, y = random_element(space, seed), random_element(space, seed + 1)
    assert cs_margin(x, y) >= -1e-10
    assert cs_holds(x, y)
    # module norm is the largest singular value; sqrt of ||<x,x>||
    assert elem_norm(x) == pytest.approx(np.linalg.norm(x.value, 2), rel=1e-10)
    assert elem_norm(x) ** 2 == pytest.approx(np.linalg.norm(inner(x, x), 2), rel=1e-10)
    assert elem_norm(normalize(x)) == pytest.approx(1.0)


def test_cs_equality_for_parallel_elements():
    space = ModuleSpace(3, 1)
    x = random_element(space, 4)
    assert abs(cs_margin(x, x * (2 - 1j))) < 1e-12


def test_normalize_zero_and_elements_are_read_only():
    z = ModuleSpace(2, 2).zeros()
    assert normalize(z) is z
    with pytest.raises(ValueError):
        z.value[0, 0] = 1.0


def test_space_checks():
    with pytest.raises(DomainError):
        ModuleSpace(0)
    with pytest.raises(DomainError):
        ModuleElement(ModuleSpace(2, 1), np.zeros((3, 1)))
    with pytest.raises(DomainError):
        inner(ModuleSpace(2).zeros(), ModuleSpace(3).zeros())
    with pytest.raises(DomainError):
        apply_op(np.eye(3), ModuleSpace(2).zeros())


def test_apply_op_and_basis():
    a = np.arange(9.0).reshape(3, 3)
    e = ModuleSpace(3, 2).basis_element(1, 1)
    np.testing.assert_allclose(apply_op(a, e).value[:, 1], a[:, 1])


def test_json_round_trip():
    x = random_element(ModuleSpace(3, 2), 11)
    back = ModuleElement.from_json(x.to_json())
    np.testing.assert_array_equal(back.value, x.value)
    bad = x.to_json()
    bad["k"] = 3
    with pytest.raises(DomainError):
        ModuleElement.from_json(bad)


def test_random_element_seeded_and_unit_variance():
    space = ModuleSpace(20000, 1)
    a, b = random_element(space, 7), random_element(space, 7)
    np.testing.assert_array_equal(a.value, b.value)
    assert np.mean(np.abs(a.value) ** 2) == pytest.approx(1.0, abs=0.03)
