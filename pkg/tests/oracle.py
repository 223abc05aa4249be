"""Independent reference implementations used to fix expected test values.

Deliberately different routes from the library: hulls come from qhull
(scipy), ray radii from half-plane clipping of the hull's H-representation,
and Chebyshev sums use the closed form T_j(x) = cos(j arccos x). Inputs are
plain arrays; nothing here imports the library's pipeline code.
"""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull as QhullHull

VIEW_AXES = {"bird": (0, 1), "side": (0, 2), "front": (1, 2)}


def canonical_points(points: np.ndarray, center, yaw: float) -> np.ndarray:
    c, s = np.cos(-yaw), np.sin(-yaw)
    d = np.asarray(points, float) - np.asarray(center, float)
    out = np.empty_like(d)
    out[:, 0] = c * d[:, 0] - s * d[:, 1]
    out[:, 1] = s * d[:, 0] + c * d[:, 1]
    out[:, 2] = d[:, 2]
    return out


def symmetrized(points: np.ndarray, mode: str = "planar") -> np.ndarray:
    if mode == "planar":
        mirror = points * np.array([-1.0, -1.0, 1.0])
    elif mode == "full3d":
        mirror = -points
    else:
        raise ValueError(mode)
    return np.vstack([points, mirror])


def hull_vertices_qhull(pts2: np.ndarray) -> np.ndarray:
    """Hull vertex set via qhull, counterclockwise."""
    h = QhullHull(pts2)
    return pts2[h.vertices]


def hull_vertices_bruteforce(pts2: np.ndarray) -> np.ndarray:
    """O(n^3) hull vertex set: (i, j) is a directed hull edge when every other
    point is strictly left of it or on the closed segment between them.

    The n^3 pair-times-point tests run as one broadcast so 500 sets stay fast.
    """
    pts = np.asarray(pts2, float)
    n = len(pts)
    eq = (pts[:, None, :] == pts[None, :, :]).all(-1)            # eq[a, b]
    edge = pts[None, :, :] - pts[:, None, :]                     # edge[i, j]
    rel = pts[None, :, :] - pts[:, None, :]                      # rel[i, k]
    cross = (edge[:, :, None, 0] * rel[:, None, :, 1]
             - edge[:, :, None, 1] * rel[:, None, :, 0])         # [i, j, k]
    dot = (edge[:, :, None, 0] * rel[:, None, :, 0]
           + edge[:, :, None, 1] * rel[:, None, :, 1])
    ee = (edge * edge).sum(-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = dot / ee[:, :, None]
    left = cross > 0
    on_segment = (cross == 0) & (t >= 0) & (t <= 1)
    # duplicates of the endpoints trivially satisfy the test but t can round
    # past 1, so exempt them explicitly
    dup = eq.T[:, None, :] | eq.T[None, :, :]                    # dup[i, j, k]
    ok = (left | on_segment | dup).all(axis=2)
    valid_edge = ok & ~eq                                        # skip i == j and twins
    on_hull = valid_edge.any(axis=1) | valid_edge.any(axis=0)
    return pts[on_hull]


def radius_halfplane(pts2_or_hull: np.ndarray, theta: float) -> float:
    """Farthest ray-boundary crossing using qhull's half-plane equations."""
    h = QhullHull(np.asarray(pts2_or_hull, float))
    A = h.equations[:, :2]
    b = h.equations[:, 2]  # A x + b <= 0 inside
    d = np.array([np.cos(theta), np.sin(theta)])
    ad = A @ d
    s_hi = np.inf
    s_lo = 0.0
    for i in range(len(ad)):
        if ad[i] > 0:
            s_hi = min(s_hi, -b[i] / ad[i])
        elif ad[i] < 0:
            s_lo = max(s_lo, -b[i] / ad[i])
        elif b[i] > 0:
            return 0.0  # ray parallel to a violated constraint: full miss
    if s_hi < max(s_lo, 0.0) or not np.isfinite(s_hi):
        return 0.0
    return float(s_hi)


def cheb_nodes(degree: int) -> np.ndarray:
    n = np.arange(degree + 1)
    return np.cos(np.pi * (n + 0.5) / (degree + 1))


def cheb_coefficients(values: np.ndarray) -> np.ndarray:
    """Quadrature sums with the closed-form T_j(x_n) = cos(j pi (n+1/2)/(N+1))."""
    values = np.asarray(values, float)
    N = len(values) - 1
    phi = np.pi * (np.arange(N + 1) + 0.5) / (N + 1)
    j = np.arange(N + 1)[:, None]
    T = np.cos(j * phi[None, :])
    alpha = (2.0 / (N + 1)) * (T @ values)
    alpha[0] *= 0.5
    return alpha


def signature_oracle(points: np.ndarray, center, yaw: float, degree: int = 179,
                     k: int = 3, mode: str = "planar", sort_radii: bool = True) -> np.ndarray:
    """Full-pipeline reference: canonicalize, symmetrize, per view hull +
    node-angle radii (sorted ascending) + quadrature fit, keep k per view."""
    sym = symmetrized(canonical_points(points, center, yaw), mode)
    thetas = np.pi * (cheb_nodes(degree) + 1.0)
    out = []
    for view in ("bird", "side", "front"):
        i, j = VIEW_AXES[view]
        pts2 = sym[:, (i, j)]
        hull = hull_vertices_qhull(pts2)
        radii = np.array([radius_halfplane(hull, th) for th in thetas])
        if sort_radii:
            radii = np.sort(radii)
        out.append(cheb_coefficients(radii)[:k])
    return np.concatenate(out)
