import json

import numpy as np
import pytest

from conftest import REMARK
from gcsi.harness import (
    KINDS,
    REMARK_2_2_5,
    VERIFIERS,
    EnsembleSpec,
    cyclic_weighted_shift,
    default_weights,
    generate,
    jordan_block,
    lemma_2_4_residuals,
    repro,
    truncated_unilateral_shift,
    verify,
)
from gcsi.linalg import DomainError, matrix_to_json


def test_remark_matrix_constant():
    np.testing.assert_array_equal(REMARK_2_2_5, REMARK)


def test_cyclic_weighted_shift_default_profile():
    a = cyclic_weighted_shift(default_weights(6))
    w = default_weights(6)
    assert list(w) == [1, 1, 0.5, 1, 1, 1]
    for i in range(6):
        assert a[(i + 1) % 6, i] == w[i]
    assert np.count_nonzero(a) == 6
    # invertible, so no spurious kernel
    assert abs(np.linalg.det(a)) == pytest.approx(0.5)


def test_shifts_and_jordan():
    s = truncated_unilateral_shift(4)
    np.testing.assert_array_equal(s @ np.eye(4)[:, 0], np.eye(4)[:, 1])
    assert not np.any(np.linalg.matrix_power(s, 4))
    assert not np.any(np.linalg.matrix_power(jordan_block(4), 4))


@pytest.mark.parametrize("kind", ["generic", "normal", "hermitian", "unitary", "nilpotent_jordan", "mixed"])
def test_generate_deterministic_and_typed(kind):
    spec = EnsembleSpec(kind, n=4, count=6, seed=2)
    ops, again = generate(spec), generate(spec)
    assert len(ops) == 6
    for a, b in zip(ops, again):
        np.testing.assert_array_equal(a, b)
    if kind == "normal":
        for a in ops:
            np.testing.assert_allclose(a @ a.conj().T, a.conj().T @ a, atol=1e-10)
    if kind == "hermitian":
        for a in ops:
            np.testing.assert_allclose(a, a.conj().T)
    if kind == "unitary":
        for a in ops:
            np.testing.assert_allclose(a @ a.conj().T, np.eye(4), atol=1e-12)
    if kind == "nilpotent_jordan":
        for a in ops:
            assert np.linalg.norm(np.linalg.matrix_power(a, 4)) < 1e-10


def test_custom_json_ensemble(tmp_path):
    path = tmp_path / "ops.json"
    path.write_text(json.dumps([matrix_to_json(REMARK), matrix_to_json(np.eye(3))]))
    ops = generate(EnsembleSpec("custom_json", n=3, path=str(path)))
    assert len(ops) == 2
    single = tmp_path / "one.json"
    single.write_text(json.dumps(matrix_to_json(REMARK)))
    assert len(generate(EnsembleSpec("custom_json", n=3, path=str(single)))) == 1


def test_spec_validation():
    with pytest.raises(DomainError):
        EnsembleSpec("bogus")
    with pytest.raises(DomainError):
        EnsembleSpec("cyclic_weighted_shift", n=3, weights=[1, 2])
    with pytest.raises(DomainError):
        EnsembleSpec("custom_json")
    assert set(KINDS) >= {"generic", "normal", "custom_json", "remark_2_2_5"}


def test_lemma_2_4_residuals_on_singular():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 2)) @ rng.standard_normal((2, 4))
    for t in (0.5, 1.0, 2.0):
        assert max(lemma_2_4_residuals(a, t)) <= 1e-8


@pytest.mark.parametrize("theorem", sorted(VERIFIERS))
def test_every_verifier_runs_on_mixed(theorem, fast):
    spec = EnsembleSpec("mixed", n=3, count=5, seed=1)
    r = verify(theorem, spec, fast)
    assert r.status in ("pass", "vacuous"), r.violations
    assert r.instances_total == 5
    assert r.info["spec"]["kind"] == "mixed"
    json.dumps(r.to_json())


def test_generic_gcsi_theorems_are_vacuous(fast):
    r = verify("thm_2_5", EnsembleSpec("generic", n=3, count=10, seed=0), fast)
    assert r.status == "vacuous" and r.instances_tested == 0


def test_verifier_reports_contradictions(fast):
    # feed non-normal operators to a verifier whose hypothesis is bypassed
    r = verify("collapse", EnsembleSpec("generic", n=3), fast, operators=[REMARK])
    assert r.status == "pass"  # REMARK is neither normal nor semi-hyponormal
    bad = verify("lemma_2_4", EnsembleSpec("generic", n=3), fast, operators=[REMARK])
    assert bad.status == "pass"


def test_unknown_ids():
    with pytest.raises(DomainError):
        verify("nope", EnsembleSpec())
    with pytest.raises(DomainError):
        repro("nope")


def test_repro_examples(fast):
    r = repro("remark_2_2_5", fast)
    assert r.status == "pass" and all(r.info["checks"].values())
    e = repro("remark_2_7", fast)
    assert e.status == "exploratory" and e.info["rank"] == e.info["rank_square"] == 12
    s = repro("example_shift_equality", fast)
    assert s.status == "pass" and s.info["min_defect"] > 0.1
