"""Reference loss arithmetic for training against shape signatures.

Scalar, framework-free implementations with analytic gradients so a trainer
can cross-check its own loss kernels. Batching and averaging are left to the
caller.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

P_CLAMP = 1e-7


@dataclass(frozen=True)
class FocalParams:
    alpha_t: float = 0.25
    gamma: float = 2.0

    def __post_init__(self):
        if not (0.0 < self.alpha_t <= 1.0):
            raise ValidationError(f"alpha_t must be in (0, 1], got {self.alpha_t}")
        if self.gamma < 0.0:
            raise ValidationError(f"gamma must be >= 0, got {self.gamma}")


@dataclass(frozen=True)
class LossWeights:
    beta1: float = 1.0
    beta2: float = 1.0
    beta3: float = 0.5

    def __post_init__(self):
        if min(self.beta1, self.beta2, self.beta3) < 0:
            raise ValidationError("loss weights must be nonnegative")


def focal_loss(p_t: float, params: FocalParams = FocalParams(),
               clamp: bool = False) -> tuple[float, float]:
    """-alpha_t (1 - p_t)^gamma ln(p_t) and its derivative in p_t.

    p_t must lie in (0, 1]; pass clamp=True to floor it at 1e-7 instead of
    raising on nonpositive input.
    """
    p = float(p_t)
    if clamp:
        p = max(p, P_CLAMP)
    if not (0.0 < p <= 1.0):
        raise ValidationError(f"p_t must be in (0, 1], got {p_t!r}")
    a, g = params.alpha_t, params.gamma
    one_m = 1.0 - p
    loss = -a * one_m ** g * math.log(p)
    if g == 0.0:
        grad = -a / p
    else:
        grad = a * g * one_m ** (g - 1.0) * math.log(p) - a * one_m ** g / p
    return loss, grad


def smooth_l1(x: float) -> tuple[float, float]:
    """Quadratic below unit residual, linear above; returns (loss, gradient)."""
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError("smooth_l1 input must be finite")
    ax = abs(x)
    if ax < 1.0:
        return 0.5 * x * x, x
    return ax - 0.5, math.copysign(1.0, x)


def localization_loss(residuals) -> float:
    """Sum of smooth L1 over the 7 box residuals (x, y, z, w, h, l, theta)."""
    res = np.asarray(residuals, dtype=np.float64).reshape(-1)
    if res.size != 7:
        raise ValidationError(f"expected 7 residuals, got {res.size}")
    if not np.isfinite(res).all():
        raise ValidationError("residuals must be finite")
    return float(sum(smooth_l1(v)[0] for v in res))


def shape_loss(pred, target, reduction: str = "sum") -> float:
    """Smooth L1 between predicted and target shape vectors.

    reduction "sum" (default) or "mean" over the components.
    """
    p = np.asarray(getattr(pred, "values", pred), dtype=np.float64).reshape(-1)
    t = np.asarray(getattr(target, "values", target), dtype=np.float64).reshape(-1)
    if p.size != t.size:
        raise ValidationError(f"shape vectors differ in length: {p.size} vs {t.size}")
    if reduction not in ("sum", "mean"):
        raise ValidationError(f"unknown reduction {reduction!r}")
    terms = [smooth_l1(v)[0] for v in p - t]
    total = float(sum(terms))
    return total / p.size if reduction == "mean" else total


def total_loss(cls_loss: float, loc_loss: float, shape_loss_value: float,
               weights: LossWeights = LossWeights()) -> float:
    """Weighted sum beta1*cls + beta2*loc + beta3*shape."""
    parts = (float(cls_loss), float(loc_loss), float(shape_loss_value))
    if any(not math.isfinite(v) or v < 0 for v in parts):
        raise ValidationError("loss components must be finite and nonnegative")
    return weights.beta1 * parts[0] + weights.beta2 * parts[1] + weights.beta3 * parts[2]
