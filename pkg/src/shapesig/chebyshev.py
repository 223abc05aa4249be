"""First-kind Chebyshev evaluation, discrete fitting, and truncation.

The fit uses the Chebyshev-Gauss quadrature rule: with values of f taken at
the nodes x_n = cos(pi (n + 1/2) / (N + 1)), the sums

    a_0 = 1/(N+1) * sum f(x_n) T_0(x_n)
    a_j = 2/(N+1) * sum f(x_n) T_j(x_n)

recover the coefficients exactly for any polynomial of degree <= N.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError

#: affine map used for angle-valued profiles: theta in [0, 2pi) -> x in [-1, 1]
ANGLE_DOMAIN = (0.0, 2.0 * math.pi)

_X_TOL = 1e-12  # slack outside [-1, 1] tolerated for rounding


def cheb_eval(n: int, x):
    """T_n(x) via the recurrence T_{n+1} = 2 x T_n - T_{n-1}; x scalar or array."""
    if n < 0:
        raise ValidationError(f"polynomial index must be >= 0, got {n}")
    x = np.asarray(x, dtype=np.float64)
    if (np.abs(x) > 1.0 + _X_TOL).any():
        raise ValidationError("argument outside [-1, 1]")
    t_prev = np.ones_like(x)
    if n == 0:
        return t_prev if t_prev.ndim else float(t_prev)
    t_cur = x.copy()
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, 2.0 * x * t_cur - t_prev
    return t_cur if t_cur.ndim else float(t_cur)


def cheb_nodes(degree: int) -> np.ndarray:
    """The N+1 Chebyshev-Gauss nodes, strictly decreasing in (-1, 1)."""
    if degree < 0:
        raise ValidationError(f"degree must be >= 0, got {degree}")
    n = np.arange(degree + 1)
    return np.cos(np.pi * (n + 0.5) / (degree + 1))


@lru_cache(maxsize=8)
def _design_matrix(degree: int) -> np.ndarray:
    """Rows T_j evaluated at the nodes, built by the recurrence."""
    x = cheb_nodes(degree)
    rows = np.empty((degree + 1, degree + 1))
    rows[0] = 1.0
    if degree >= 1:
        rows[1] = x
    for j in range(2, degree + 1):
        rows[j] = 2.0 * x * rows[j - 1] - rows[j - 2]
    return rows


@dataclass(frozen=True, eq=False)
class ChebyshevFit:
    """Coefficients a_0..a_N of a first-kind expansion over ``domain``."""

    coefficients: np.ndarray
    domain: tuple[float, float] = ANGLE_DOMAIN

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.float64).reshape(-1)
        if c.size == 0 or not np.isfinite(c).all():
            raise ValidationError("coefficients must be a nonempty finite sequence")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1


@dataclass(frozen=True)
class FitConfig:
    """Fit degree N (N+1 nodes) and the number of leading coefficients kept."""

    degree: int = 179
    top_k: int = 3

    def __post_init__(self):
        if not (self.degree >= self.top_k - 1 >= 0):
            raise ValidationError(
                f"need degree >= top_k - 1 >= 0, got degree={self.degree} top_k={self.top_k}"
            )


def cheb_fit(values, degree: int) -> ChebyshevFit:
    """Fit f from its values at cheb_nodes(degree), in node order."""
    vals = np.asarray(values, dtype=np.float64).reshape(-1)
    if vals.size != degree + 1:
        raise ValidationError(f"expected {degree + 1} node values, got {vals.size}")
    if not np.isfinite(vals).all():
        raise ValidationError("node values must be finite")
    # elementwise product + pairwise row sum instead of a BLAS matvec: BLAS
    # kernel dispatch varies with the set of loaded libraries, and signatures
    # must be bit-identical across environments
    sums = (_design_matrix(degree) * vals).sum(axis=1)
    coeffs = (2.0 / (degree + 1)) * sums
    coeffs[0] *= 0.5
    return ChebyshevFit(coeffs)


def cheb_reconstruct(fit: ChebyshevFit, x):
    """Evaluate sum a_n T_n(x) by Clenshaw recurrence; x scalar or array."""
    x = np.asarray(x, dtype=np.float64)
    if (np.abs(x) > 1.0 + _X_TOL).any():
        raise ValidationError("argument outside [-1, 1]")
    c = fit.coefficients
    b1 = np.zeros_like(x)
    b2 = np.zeros_like(x)
    for k in range(c.size - 1, 0, -1):
        b1, b2 = c[k] + 2.0 * x * b1 - b2, b1
    out = c[0] + x * b1 - b2
    return out if out.ndim else float(out)


def truncate(fit: ChebyshevFit, k: int) -> np.ndarray:
    """First k coefficients in index order (the compact shape vector)."""
    if k < 0 or k > fit.degree + 1:
        raise ValidationError(f"k must be in [0, {fit.degree + 1}], got {k}")
    return fit.coefficients[:k].copy()


def theta_to_x(theta, domain: tuple[float, float] = ANGLE_DOMAIN):
    lo, hi = domain
    return 2.0 * (np.asarray(theta, dtype=np.float64) - lo) / (hi - lo) - 1.0


def x_to_theta(x, domain: tuple[float, float] = ANGLE_DOMAIN):
    lo, hi = domain
    return lo + (hi - lo) * (np.asarray(x, dtype=np.float64) + 1.0) / 2.0


def node_angles(degree: int, domain: tuple[float, float] = ANGLE_DOMAIN) -> np.ndarray:
    """Angles whose mapped positions are the fit nodes (descending x order)."""
    return x_to_theta(cheb_nodes(degree), domain)
