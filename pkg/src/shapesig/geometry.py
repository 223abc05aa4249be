"""Canonical-frame transforms and symmetric completion of object point clouds.

Conventions: yaw is counterclockwise about +z viewed from above; after
canonicalization the box's forward direction lies on +x. Box size is
(w, l, h) with l along forward x, w along lateral y, h along vertical z.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import FrameError, ValidationError

TWO_PI = 2.0 * math.pi


class Frame(enum.Enum):
    SENSOR = "sensor"
    CANONICAL = "canonical"


class SymmetryMode(enum.Enum):
    """How partial scans are completed: mirror through the vertical axis
    (planar, keeps z) or through the box center point (full3d)."""

    PLANAR = "planar"
    FULL3D = "full3d"


def normalize_yaw(angle: float) -> float:
    """Wrap an angle into [-pi, pi)."""
    a = math.remainder(float(angle), TWO_PI)
    if a >= math.pi:  # remainder() may return exactly +pi
        a -= TWO_PI
    return a


@dataclass(frozen=True, eq=False)
class PointCloud3:
    """An object's points, (n, 3) float64 meters, tagged with their frame."""

    points: np.ndarray
    frame: Frame = Frame.SENSOR

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 3)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValidationError(f"points must be (n, 3), got {pts.shape}")
        if not np.isfinite(pts).all():
            bad = int(np.argwhere(~np.isfinite(pts).all(axis=1))[0, 0])
            raise ValidationError(f"non-finite coordinate at point {bad}")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class Box3D:
    """Oriented ground-truth box: center (3,), size (w, l, h) > 0, yaw in [-pi, pi)."""

    center: np.ndarray
    size: tuple[float, float, float]
    yaw: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).reshape(3)
        if not np.isfinite(center).all():
            raise ValidationError("box center must be finite")
        size = tuple(float(s) for s in self.size)
        if len(size) != 3 or any(not math.isfinite(s) or s <= 0 for s in size):
            raise ValidationError(f"box size must be three positive reals, got {self.size}")
        yaw = float(self.yaw)
        if not math.isfinite(yaw) or not (-math.pi <= yaw < math.pi):
            raise ValidationError(f"yaw must lie in [-pi, pi), got {yaw!r}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "yaw", yaw)

    @property
    def w(self) -> float:
        return self.size[0]

    @property
    def l(self) -> float:
        return self.size[1]

    @property
    def h(self) -> float:
        return self.size[2]


def yaw_rotation(yaw: float) -> np.ndarray:
    """3x3 rotation by ``yaw`` about +z (counterclockwise from above)."""
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def canonicalize(cloud: PointCloud3, box: Box3D) -> PointCloud3:
    """Move a sensor-frame cloud into the box's canonical frame.

    Each point becomes R(-yaw) @ (p - center), so the box center sits at the
    origin and its forward direction on +x. Point count is preserved.
    """
    if cloud.frame is not Frame.SENSOR:
        raise FrameError("canonicalize expects a sensor-frame cloud")
    shifted = cloud.points - box.center
    rot = yaw_rotation(-box.yaw)
    return PointCloud3(shifted @ rot.T, Frame.CANONICAL)


def centro_symmetrize(cloud: PointCloud3, mode: SymmetryMode = SymmetryMode.PLANAR) -> PointCloud3:
    """Complete a partial view by appending the mirror image of every point.

    planar maps (x, y, z) -> (-x, -y, z); full3d reflects through the origin.
    Output is input plus mirrored copies, duplicates kept.
    """
    if cloud.frame is not Frame.CANONICAL:
        raise FrameError("centro_symmetrize expects a canonical-frame cloud")
    if mode is SymmetryMode.PLANAR:
        mirrored = cloud.points * np.array([-1.0, -1.0, 1.0])
    elif mode is SymmetryMode.FULL3D:
        mirrored = -cloud.points
    else:
        raise ValidationError(f"unknown symmetry mode {mode!r}")
    return PointCloud3(np.concatenate([cloud.points, mirrored]), Frame.CANONICAL)


def clip_to_box(cloud: PointCloud3, box: Box3D, margin: float = 0.1) -> PointCloud3:
    """Drop canonical-frame points outside the box inflated by ``margin``.

    Annotations are normally trusted and clipping is opt-in.
    """
    if cloud.frame is not Frame.CANONICAL:
        raise FrameError("clip_to_box expects a canonical-frame cloud")
    half = np.array([box.l, box.w, box.h]) * (0.5 * (1.0 + margin))
    keep = (np.abs(cloud.points) <= half).all(axis=1)
    return PointCloud3(cloud.points[keep], Frame.CANONICAL)
