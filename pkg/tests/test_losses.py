import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapesig import (FocalParams, LossWeights, ValidationError, focal_loss,
                      localization_loss, shape_loss, smooth_l1, total_loss)


class TestFocal:
    def test_perfect_prediction_zero_loss(self):
        loss, _ = focal_loss(1.0)
        assert loss == 0.0

    def test_reference_value_at_half(self):
        loss, _ = focal_loss(0.5)
        assert loss == pytest.approx(0.25 * 0.25 * math.log(2), abs=1e-12)
        assert loss == pytest.approx(0.0433217, abs=1e-6)

    def test_degenerates_to_cross_entropy(self):
        loss, grad = focal_loss(0.1, FocalParams(alpha_t=1.0, gamma=0.0))
        assert loss == pytest.approx(2.302585, abs=1e-6)
        assert grad == pytest.approx(-10.0, abs=1e-9)

    def test_domain_error_and_clamp(self):
        with pytest.raises(ValidationError):
            focal_loss(0.0)
        with pytest.raises(ValidationError):
            focal_loss(-0.2)
        loss, _ = focal_loss(0.0, clamp=True)
        assert math.isfinite(loss)

    def test_monotone_decreasing_in_p(self):
        for params in (FocalParams(), FocalParams(0.5, 1.0), FocalParams(1.0, 0.0),
                       FocalParams(0.25, 4.0)):
            ps = np.linspace(1e-4, 1.0, 300)
            losses = np.array([focal_loss(p, params)[0] for p in ps])
            assert (np.diff(losses) <= 1e-12).all()

    def test_gradient_matches_finite_differences(self, rng):
        h = 1e-5
        for _ in range(100):
            p = float(rng.uniform(0.02, 0.98))
            params = FocalParams(float(rng.uniform(0.05, 1.0)),
                                 float(rng.choice([0.0, 1.0, 2.0, 3.0])))
            _, grad = focal_loss(p, params)
            fd = (focal_loss(p + h, params)[0] - focal_loss(p - h, params)[0]) / (2 * h)
            assert grad == pytest.approx(fd, rel=1e-4, abs=1e-8)

    def test_param_validation(self):
        with pytest.raises(ValidationError):
            FocalParams(alpha_t=0.0)
        with pytest.raises(ValidationError):
            FocalParams(gamma=-1.0)


class TestSmoothL1:
    def test_zero(self):
        assert smooth_l1(0.0) == (0.0, 0.0)

    def test_quadratic_branch(self):
        loss, grad = smooth_l1(0.5)
        assert loss == 0.125
        assert grad == 0.5

    def test_linear_branch(self):
        loss, grad = smooth_l1(2.0)
        assert loss == 1.5
        assert grad == 1.0
        loss_n, grad_n = smooth_l1(-2.0)
        assert loss_n == 1.5
        assert grad_n == -1.0

    def test_continuity_at_transition(self):
        eps = 1e-13
        below, g_below = smooth_l1(1.0 - eps)
        above, g_above = smooth_l1(1.0 + eps)
        assert abs(below - above) < 1e-12
        assert abs(g_below - g_above) < 1e-12
        assert smooth_l1(1.0) == (0.5, 1.0)

    @given(st.floats(-50, 50, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_gradient_matches_finite_differences(self, x):
        h = 1e-5
        if abs(abs(x) - 1.0) < 10 * h:  # kink region has one-sided behavior
            return
        _, grad = smooth_l1(x)
        fd = (smooth_l1(x + h)[0] - smooth_l1(x - h)[0]) / (2 * h)
        assert grad == pytest.approx(fd, rel=1e-4, abs=1e-7)


class TestCompositeLosses:
    def test_localization_zero(self):
        assert localization_loss(np.zeros(7)) == 0.0

    def test_localization_single_component(self):
        assert localization_loss([0.5, 0, 0, 0, 0, 0, 0]) == 0.125

    def test_localization_two_large(self):
        assert localization_loss([2, 2, 0, 0, 0, 0, 0]) == 3.0

    def test_localization_arity(self):
        with pytest.raises(ValidationError):
            localization_loss([1, 2, 3])

    def test_shape_loss_zero_on_match(self, rng):
        v = rng.normal(0, 1, 9)
        assert shape_loss(v, v) == 0.0

    def test_shape_loss_boundary_component(self):
        pred = np.zeros(9)
        pred[0] = 1.0
        assert shape_loss(pred, np.zeros(9)) == 0.5

    def test_shape_loss_component_sum(self):
        pred = np.full(9, 0.2)
        assert shape_loss(pred, np.zeros(9)) == pytest.approx(0.18, abs=1e-12)

    def test_shape_loss_mean_reduction(self):
        pred = np.full(9, 0.2)
        assert shape_loss(pred, np.zeros(9), reduction="mean") == pytest.approx(0.02)

    def test_shape_loss_length_mismatch(self):
        with pytest.raises(ValidationError):
            shape_loss(np.zeros(9), np.zeros(6))

    def test_total_default_weights(self):
        assert total_loss(1.0, 2.0, 4.0) == 5.0

    def test_total_zero(self):
        assert total_loss(0.0, 0.0, 0.0) == 0.0

    def test_total_projection(self):
        assert total_loss(3.0, 9.0, 7.0, LossWeights(0, 0, 1)) == 7.0

    def test_total_linear_in_each_component(self, rng):
        w = LossWeights(*rng.uniform(0.1, 2.0, 3))
        base = np.array([1.0, 2.0, 3.0])
        f0 = total_loss(*base, w)
        for i in range(3):
            for delta in (0.5, 2.0):
                bumped = base.copy()
                bumped[i] += delta
                f1 = total_loss(*bumped, w)
                coef = [w.beta1, w.beta2, w.beta3][i]
                assert f1 - f0 == pytest.approx(coef * delta, rel=1e-12)

    def test_total_validates_inputs(self):
        with pytest.raises(ValidationError):
            total_loss(-1.0, 0.0, 0.0)
        with pytest.raises(ValidationError):
            total_loss(math.nan, 0.0, 0.0)
