"""Synthetic object clouds for demos, calibration, and benchmarks.

Class-mean box dimensions (w, l, h meters) follow the usual public devkit
means for the four benchmark categories.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError
from .geometry import Box3D, Frame, PointCloud3, normalize_yaw, yaw_rotation

CLASS_DIMS: dict[str, tuple[float, float, float]] = {
    "car": (1.9, 4.6, 1.7),
    "bus": (2.9, 11.0, 3.5),
    "pedestrian": (0.7, 0.7, 1.7),
    "bicycle": (0.6, 1.7, 1.3),
}

#: faces a forward-left-above scan would cover; symmetry completes the rest
DEFAULT_FACES = ("+x", "+y", "+z")

_FACE_AXES = {"+x": (0, 1.0), "-x": (0, -1.0), "+y": (1, 1.0), "-y": (1, -1.0),
              "+z": (2, 1.0), "-z": (2, -1.0)}


def box_surface_cloud(size_wlh, n_points: int, rng: np.random.Generator,
                      faces=DEFAULT_FACES, noise_sigma: float = 0.0) -> np.ndarray:
    """Sample points on the faces of a centered, axis-aligned box.

    Returns (n_points, 3) canonical-frame points; faces are chosen with
    probability proportional to area. noise_sigma adds isotropic jitter.
    """
    w, l, h = (float(s) for s in size_wlh)
    half = np.array([l / 2.0, w / 2.0, h / 2.0])
    areas = []
    for name in faces:
        axis, _ = _FACE_AXES[name]
        other = [i for i in range(3) if i != axis]
        areas.append(4.0 * half[other[0]] * half[other[1]])
    areas = np.array(areas) / sum(areas)
    choice = rng.choice(len(faces), size=n_points, p=areas)
    pts = np.empty((n_points, 3))
    for fi, name in enumerate(faces):
        axis, sign = _FACE_AXES[name]
        mask = choice == fi
        m = int(mask.sum())
        if m == 0:
            continue
        other = [i for i in range(3) if i != axis]
        block = np.empty((m, 3))
        block[:, axis] = sign * half[axis]
        block[:, other[0]] = rng.uniform(-half[other[0]], half[other[0]], m)
        block[:, other[1]] = rng.uniform(-half[other[1]], half[other[1]], m)
        pts[mask] = block
    if noise_sigma > 0:
        pts = pts + rng.normal(0.0, noise_sigma, pts.shape)
    return pts


def posed_object(size_wlh, center, yaw: float, n_points: int, rng: np.random.Generator,
                 faces=DEFAULT_FACES, noise_sigma: float = 0.0) -> tuple[PointCloud3, Box3D]:
    """A box-surface cloud placed in the sensor frame with its annotation."""
    canon = box_surface_cloud(size_wlh, n_points, rng, faces, noise_sigma)
    center = np.asarray(center, dtype=np.float64)
    sensor = canon @ yaw_rotation(yaw).T + center
    return PointCloud3(sensor, Frame.SENSOR), Box3D(center, tuple(size_wlh), normalize_yaw(yaw))


def fleet_instance(label: str, rng: np.random.Generator, near: bool,
                   dropout: float = 0.2) -> tuple[PointCloud3, Box3D, float]:
    """One posed instance of a class with distance-dependent density.

    Near instances sit at 5-35 m, far ones at 45-70 m; point count falls off
    with range and ``dropout`` removes a further random fraction.
    """
    if label not in CLASS_DIMS:
        raise ValidationError(f"unknown class {label!r}")
    dist = rng.uniform(5.0, 35.0) if near else rng.uniform(45.0, 70.0)
    azim = rng.uniform(0.0, 2.0 * math.pi)
    center = np.array([dist * math.cos(azim), dist * math.sin(azim), rng.uniform(-0.5, 0.5)])
    yaw = normalize_yaw(rng.uniform(-math.pi, math.pi))
    n = int(np.clip(3000.0 / (1.0 + dist / 10.0), 80, 1200))
    cloud, box = posed_object(CLASS_DIMS[label], center, yaw, n, rng)
    if dropout > 0:
        keep = rng.random(len(cloud)) >= dropout
        cloud = PointCloud3(cloud.points[keep], Frame.SENSOR)
    return cloud, box, dist


def make_fleet(seed: int = 0, per_class: int = 50, dropout: float = 0.2, classes=None):
    """The four-class benchmark fleet: half near, half far per class.

    Returns (dataset, distances) with dataset entries (cloud, box, label).
    """
    rng = np.random.default_rng(seed)
    labels = list(classes) if classes is not None else list(CLASS_DIMS)
    dataset, distances = [], []
    for label in labels:
        for i in range(per_class):
            cloud, box, dist = fleet_instance(label, rng, near=(i < per_class // 2),
                                              dropout=dropout)
            dataset.append((cloud, box, label))
            distances.append(dist)
    return dataset, np.array(distances)
