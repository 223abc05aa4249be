"""Tri-view projection, 2D convex hulls, and the angle-radius function.

The hull contract is output-defined: the minimal convex polygon containing
all points, vertices counterclockwise with no three consecutive collinear.
Degenerate inputs (all points collinear or coincident) are inflated by
EPS_DEGENERATE perpendicular to their axis so the polygon invariant holds.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import EmptyViewError, ValidationError
from .geometry import Frame, PointCloud3

EPS_DEGENERATE = 1e-3  # meters of half-thickness given to collinear hulls


class View(enum.Enum):
    """2D projection planes of the canonical frame."""

    BIRD = (0, 1)   # (x, y)
    SIDE = (0, 2)   # (x, z)
    FRONT = (1, 2)  # (y, z)

    @property
    def axes(self) -> tuple[int, int]:
        return self.value


def project(cloud: PointCloud3, view: View) -> np.ndarray:
    """Project a canonical cloud onto one view plane, (n, 2)."""
    if cloud.frame is not Frame.CANONICAL:
        raise ValidationError("project expects a canonical-frame cloud")
    i, j = view.axes
    return cloud.points[:, (i, j)].copy()


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon, vertices (m, 2) in counterclockwise order."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise ValidationError(f"polygon needs >=3 2D vertices, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise ValidationError("polygon vertices must be finite")
        a = np.roll(v, -1, axis=0) - v
        b = np.roll(a, -1, axis=0)
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        if not (cross > 0).all():
            raise ValidationError("vertices must make strict counterclockwise turns")
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return self.vertices.shape[0]


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Sampled angle-radius function of one view's hull, origin at (0, 0)."""

    angles: np.ndarray
    radii: np.ndarray
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        ang = np.asarray(self.angles, dtype=np.float64)
        rad = np.asarray(self.radii, dtype=np.float64)
        if ang.shape != rad.shape or ang.ndim != 1:
            raise ValidationError("angles and radii must be matching 1D sequences")
        if ang.size and not (np.diff(ang) > 0).all():
            raise ValidationError("angles must be strictly ascending")
        if (rad < 0).any():
            raise ValidationError("radii must be nonnegative")
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "radii", rad)


def _lex_extremes(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographically smallest and largest points, by value."""
    lo = pts[:, 0] == pts[:, 0].min()
    a = pts[lo][pts[lo][:, 1].argmin()]
    hi = pts[:, 0] == pts[:, 0].max()
    b = pts[hi][pts[hi][:, 1].argmax()]
    return a, b


def _side(pts: np.ndarray, p: np.ndarray, q: np.ndarray, out: list) -> None:
    """Append the hull vertices strictly left of p->q, in p-to-q order.

    Farthest-point selection breaks ties by the larger projection along the
    edge, a pure function of point values, so hulls are reproducible under
    permutations and interior deletions.
    """
    stack = [(pts, pts - p, p, q)]
    while stack:
        item = stack.pop()
        if len(item) == 2:  # deferred emit marker
            out.append(item[1])
            continue
        sub, rel, a, b = item
        if len(sub) == 0:
            continue
        e = b - a
        cross = e[0] * rel[:, 1] - e[1] * rel[:, 0]
        keep = cross > 0
        if not keep.any():
            continue
        sub = sub[keep]
        rel = rel[keep]
        cross = cross[keep]
        top = cross == cross.max()
        cand = rel[top]
        pick = (cand @ e).argmax()
        c_rel = cand[pick]
        c = sub[top][pick]
        cross1 = c_rel[0] * rel[:, 1] - c_rel[1] * rel[:, 0]
        left1 = cross1 > 0
        e2 = b - c
        rel2 = sub - c
        left2 = e2[0] * rel2[:, 1] - e2[1] * rel2[:, 0] > 0
        stack.append((sub[left2], rel2[left2], c, b))
        stack.append(("emit", c))
        stack.append((sub[left1], rel[left1], a, c))


def _strict_ccw(verts: list) -> list:
    """Drop vertices whose turn is not strictly counterclockwise.

    Quickhull's split tests and the polygon validator round differently, so a
    vertex sitting within one ulp of its neighbors' line can pass the former
    and fail the latter; removing it moves the boundary by a comparable ulp.
    Uses the validator's own edge-difference arithmetic.
    """
    changed = True
    while changed and len(verts) >= 3:
        changed = False
        kept = []
        m = len(verts)
        for i in range(m):
            prev, cur, fol = verts[i - 1], verts[i], verts[(i + 1) % m]
            e1x, e1y = cur[0] - prev[0], cur[1] - prev[1]
            e2x, e2y = fol[0] - cur[0], fol[1] - cur[1]
            if e1x * e2y - e1y * e2x > 0:
                kept.append(cur)
            else:
                changed = True
        verts = kept
    return verts


def convex_hull(points: np.ndarray) -> ConvexPolygon:
    """Minimal convex polygon around 2D points (exact quickhull).

    Collinear or coincident inputs are inflated into a thin rectangle of
    half-thickness EPS_DEGENERATE so downstream geometry stays total.
    Raises EmptyViewError for empty input.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.size == 0:
        raise EmptyViewError("cannot build a hull from zero points")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValidationError(f"expected (n, 2) points, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValidationError("hull input must be finite")

    a, b = _lex_extremes(pts)
    if (a == b).all():
        return _inflate_point((a[0], a[1]))

    verts: list = [a]
    _side(pts, a, b, verts)
    verts.append(b)
    _side(pts, b, a, verts)
    if len(verts) >= 3:
        verts = [verts[0]] + verts[:0:-1]  # assembled clockwise; flip, anchor first
        verts = _strict_ccw(verts)
    if len(verts) < 3:
        return _inflate_segment((a[0], a[1]), (b[0], b[1]))
    return ConvexPolygon(np.array(verts))


def _inflate_point(p: tuple[float, float]) -> ConvexPolygon:
    e = EPS_DEGENERATE
    x, y = p
    return ConvexPolygon(
        np.array([(x - e, y - e), (x + e, y - e), (x + e, y + e), (x - e, y + e)])
    )


def _inflate_segment(p0: tuple[float, float], p1: tuple[float, float]) -> ConvexPolygon:
    d = np.array(p1) - np.array(p0)
    d = d / np.linalg.norm(d)
    n = np.array([-d[1], d[0]]) * EPS_DEGENERATE
    a, b = np.array(p0), np.array(p1)
    return ConvexPolygon(np.array([a - n, b - n, b + n, a + n]))


def radii_at_angles(poly: ConvexPolygon, thetas: np.ndarray) -> np.ndarray:
    """Distance from the origin to the farthest boundary crossing per angle.

    Rays that miss the polygon entirely (origin outside the hull) give 0.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=np.float64))
    v = poly.vertices
    a = v
    e = np.roll(v, -1, axis=0) - v
    d = np.column_stack([np.cos(thetas), np.sin(thetas)])
    # Solve s*d = a + t*e per (angle, edge): s = cross(e, a)/det, t = cross(d, a)/det
    det = np.outer(d[:, 1], e[:, 0]) - np.outer(d[:, 0], e[:, 1])
    s_num = (e[:, 0] * a[:, 1] - e[:, 1] * a[:, 0])[None, :]
    t_num = np.outer(d[:, 0], a[:, 1]) - np.outer(d[:, 1], a[:, 0])
    with np.errstate(divide="ignore", invalid="ignore"):
        s = s_num / det
        t = t_num / det
    valid = (np.abs(det) > 0) & (t >= -1e-12) & (t <= 1 + 1e-12) & (s >= 0)
    s = np.where(valid, s, 0.0)
    return s.max(axis=1)


def radial_profile_at(poly: ConvexPolygon, theta: float) -> float:
    """Exact angle-radius value f(theta) for one angle."""
    return float(radii_at_angles(poly, np.array([float(theta)]))[0])


def radial_profile(poly: ConvexPolygon, n_angles: int = 360) -> RadialProfile:
    """Sample f(theta) on a uniform grid starting at +x (forward)."""
    if n_angles < 1:
        raise ValidationError("n_angles must be >= 1")
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    return RadialProfile(angles, radii_at_angles(poly, angles))
