import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from evdmm import (
    BlockIndependent,
    Comonotone,
    Independence,
    InputError,
    Logistic,
    M4,
    Partition,
    eval_tail,
    extremal_coefficient,
    load_m4_csv,
    make_block_independent,
    model_from_dict,
)
from evdmm.tail_models import random_m4

SQRT2 = math.sqrt(2.0)


def make_models(d, seed=0):
    rng = np.random.default_rng(seed)
    part = Partition([list(range(0, d, 2)), list(range(1, d, 2))], d) if d > 1 else Partition([[0]])
    return [
        Logistic(0.05, d),
        Logistic(0.5, d),
        Logistic(1.0, d),
        Independence(d),
        Comonotone(d),
        random_m4(rng, d, 4),
        random_m4(rng, d, 3, sparsity=0.5),
        make_block_independent(Logistic(0.4, d), part),
    ]


class TestEvaluation:
    def test_logistic_theta_one_is_sum(self):
        assert eval_tail(Logistic(1.0, 3), [1, 1, 1]) == pytest.approx(3.0, abs=1e-15)

    def test_comonotone_is_max(self):
        assert eval_tail(Comonotone(3), [0.2, 0.5, 0.3]) == 0.5

    def test_logistic_symmetric_point(self):
        assert eval_tail(Logistic(0.5, 2), [1, 1]) == pytest.approx(1.4142136, abs=1e-7)

    def test_m4_single_signature_is_max(self):
        assert eval_tail(M4([[1.0, 1.0]]), [2, 3]) == 3.0

    def test_origin(self):
        for model in make_models(3):
            assert eval_tail(model, np.zeros(3)) == 0.0

    def test_tiny_theta_does_not_overflow(self):
        value = eval_tail(Logistic(1e-3, 3), [1e-3, 2.0, 1.999])
        assert math.isfinite(value)
        assert 2.0 <= value <= 2.0 * 1.001

    @pytest.mark.parametrize("x", [[1.0, 2.0], [1.0, -1.0, 2.0], [1.0, np.inf, 2.0], [[1, 2, 3]]])
    def test_bad_points(self, x):
        with pytest.raises(InputError):
            eval_tail(Logistic(0.5, 3), x)

    def test_callable(self):
        assert Independence(2)([1.5, 2.5]) == 4.0


class TestParameters:
    @pytest.mark.parametrize("theta", [0.0, -0.1, 1.01, float("nan")])
    def test_logistic_theta_domain(self, theta):
        with pytest.raises(InputError):
            Logistic(theta, 2)

    def test_dimension(self):
        with pytest.raises(InputError):
            Independence(0)

    def test_m4_normalization(self):
        with pytest.raises(InputError):
            M4([[0.5, 1.0], [0.4, 0.0]])
        with pytest.raises(InputError):
            M4([[1.5, 1.0], [-0.5, 0.0]])
        M4([[0.5, 1.0], [0.5 + 1e-12, 0.0]])

    def test_m4_immutable(self):
        model = M4([[0.5, 1.0], [0.5, 0.0]])
        with pytest.raises(ValueError):
            model.alpha[0, 0] = 0.0


class TestExtremalCoefficient:
    def test_logistic(self):
        assert extremal_coefficient(Logistic(0.5, 5), [0, 1, 2, 3]) == pytest.approx(2.0, abs=1e-15)

    def test_bounds_families(self):
        assert extremal_coefficient(Independence(4), [0, 2, 3]) == 3.0
        assert extremal_coefficient(Comonotone(4), [0, 2, 3]) == 1.0

    def test_empty_subset(self):
        with pytest.raises(InputError):
            extremal_coefficient(Independence(2), [])

    @pytest.mark.parametrize("d", [1, 3, 5])
    def test_singletons_are_one(self, d):
        for model in make_models(d):
            for i in range(d):
                assert extremal_coefficient(model, [i]) == pytest.approx(1.0, abs=1e-12)


class TestBlockIndependent:
    def test_comonotone_blocks(self):
        model = make_block_independent(Comonotone(4), Partition([[0, 1], [2, 3]]))
        assert eval_tail(model, [1, 1, 1, 1]) == 2.0

    def test_logistic_blocks(self):
        model = make_block_independent(Logistic(0.5, 3), Partition([[0, 1], [2]]))
        assert extremal_coefficient(model, [0, 1, 2]) == pytest.approx(SQRT2 + 1, abs=1e-12)
        assert extremal_coefficient(model, [0, 1]) == pytest.approx(SQRT2, abs=1e-12)

    def test_independence_unchanged(self, rng):
        base = Independence(5)
        model = make_block_independent(base, Partition([[0, 3], [1], [2, 4]]))
        for _ in range(20):
            x = rng.uniform(0, 3, 5)
            assert eval_tail(model, x) == pytest.approx(eval_tail(base, x), rel=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            BlockIndependent(Independence(3), Partition.singletons(2))


class TestSerialization:
    @pytest.mark.parametrize("d", [2, 4])
    def test_round_trip(self, d, rng):
        for model in make_models(d):
            desc = json.loads(json.dumps(model.to_dict()))
            assert set(desc) == {"family", "dimension", "parameters"}
            again = model_from_dict(desc)
            x = rng.uniform(0, 2, d)
            assert eval_tail(again, x) == eval_tail(model, x)

    def test_unknown_family(self):
        with pytest.raises(InputError):
            model_from_dict({"family": "husler_reiss", "dimension": 2, "parameters": {}})

    def test_m4_csv(self, tmp_path):
        path = tmp_path / "alpha.csv"
        path.write_text(
            "signature_id,component_index,alpha\n"
            "a,1,0.25\na,2,1.0\nb,1,0.75\n"
        )
        model = load_m4_csv(path)
        assert model.signatures == ("a", "b")
        np.testing.assert_array_equal(model.alpha, [[0.25, 1.0], [0.75, 0.0]])
        # l(x) = max(.25 x1, x2) + .75 x1
        assert eval_tail(model, [2.0, 1.0]) == pytest.approx(1.0 + 1.5)

    def test_m4_csv_errors(self, tmp_path):
        path = tmp_path / "alpha.csv"
        path.write_text("sig,comp,a\n")
        with pytest.raises(InputError):
            load_m4_csv(path)
        with pytest.raises(InputError):
            load_m4_csv(tmp_path / "missing.csv")
        path.write_text("signature_id,component_index,alpha\na,1,0.5\n")
        with pytest.raises(InputError):
            load_m4_csv(path)


# ---------------------------------------------------------------- properties

model_cases = st.sampled_from(range(8))
dims = st.integers(min_value=1, max_value=6)


@settings(max_examples=200, deadline=None)
@given(d=dims, which=model_cases, seed=st.integers(0, 2**32 - 1),
       c=st.floats(min_value=1e-3, max_value=100.0))
def test_homogeneity(d, which, seed, c):
    model = make_models(d, seed=seed % 7)[which]
    x = np.random.default_rng(seed).uniform(0, 10, d)
    x[x == 0] = 1.0
    lx = eval_tail(model, x)
    assert abs(eval_tail(model, c * x) - c * lx) <= 1e-10 * c * lx


@settings(max_examples=200, deadline=None)
@given(d=dims, which=model_cases, seed=st.integers(0, 2**32 - 1))
def test_bounds(d, which, seed):
    model = make_models(d, seed=seed % 7)[which]
    x = np.random.default_rng(seed).uniform(0, 10, d)
    lx = eval_tail(model, x)
    tol = 1e-12 * max(x.sum(), 1.0)
    assert x.max() - tol <= lx <= x.sum() + tol


@settings(max_examples=200, deadline=None)
@given(d=dims, which=model_cases, seed=st.integers(0, 2**32 - 1))
def test_monotone(d, which, seed):
    model = make_models(d, seed=seed % 7)[which]
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 5, d)
    y = x.copy()
    y[rng.integers(d)] += rng.uniform(0, 2)
    assert eval_tail(model, y) >= eval_tail(model, x) - 1e-12 * eval_tail(model, y)


@settings(max_examples=100, deadline=None)
@given(d=dims, seed=st.integers(0, 2**32 - 1))
def test_logistic_one_matches_independence(d, seed):
    x = np.random.default_rng(seed).uniform(0, 10, d)
    assert abs(eval_tail(Logistic(1.0, d), x) - eval_tail(Independence(d), x)) <= 1e-12 * max(1, x.sum())
