import math

import numpy as np
import pytest

from shapesig import (Box3D, Frame, FrameError, PointCloud3, SymmetryMode,
                      ValidationError, canonicalize, centro_symmetrize, clip_to_box,
                      normalize_yaw, yaw_rotation)


def cloud(*pts, frame=Frame.SENSOR):
    return PointCloud3(np.array(pts, dtype=float), frame)


class TestCanonicalize:
    def test_rotates_forward_to_x(self):
        box = Box3D([10, 5, 1], (1.9, 4.6, 1.7), math.pi / 2)
        out = canonicalize(cloud((10, 6, 1)), box)
        np.testing.assert_allclose(out.points, [[1, 0, 0]], atol=1e-15)
        assert out.frame is Frame.CANONICAL

    def test_identity_box(self):
        box = Box3D([0, 0, 0], (1, 1, 1), 0.0)
        out = canonicalize(cloud((2, -1, 0.5)), box)
        np.testing.assert_array_equal(out.points, [[2, -1, 0.5]])

    def test_half_turn(self):
        box = Box3D([1, 1, 0], (1, 1, 1), -math.pi)  # pi wraps to -pi
        out = canonicalize(cloud((2, 1, 0)), box)
        np.testing.assert_allclose(out.points, [[-1, 0, 0]], atol=1e-15)

    def test_point_count_preserved(self, rng):
        pts = rng.normal(0, 3, (57, 3))
        box = Box3D([1, 2, 0], (2, 4, 2), 0.3)
        assert len(canonicalize(PointCloud3(pts), box)) == 57

    def test_rejects_nonfinite_cloud(self):
        with pytest.raises(ValidationError):
            PointCloud3(np.array([[1.0, np.nan, 0.0]]))

    def test_rejects_canonical_input(self):
        box = Box3D([0, 0, 0], (1, 1, 1), 0.0)
        with pytest.raises(FrameError):
            canonicalize(cloud((1, 1, 1), frame=Frame.CANONICAL), box)

    def test_is_rigid_motion(self, rng):
        pts = rng.normal(0, 2, (40, 3))
        box = Box3D([5, -3, 1], (2, 4, 2), 1.1)
        out = canonicalize(PointCloud3(pts), box).points
        d_in = np.linalg.norm(pts[:, None] - pts[None, :], axis=2)
        d_out = np.linalg.norm(out[:, None] - out[None, :], axis=2)
        np.testing.assert_allclose(d_out, d_in, atol=1e-9)

    def test_scene_transform_invariance(self, rng):
        pts = rng.normal(0, 2, (30, 3))
        box = Box3D([2, 1, 0], (2, 4, 2), 0.7)
        base = canonicalize(PointCloud3(pts), box).points
        for _ in range(5):
            shift = rng.normal(0, 10, 3)
            phi = rng.uniform(-math.pi, math.pi)
            rot = yaw_rotation(phi)
            moved_pts = pts @ rot.T + shift
            moved_box = Box3D(rot @ box.center + shift, box.size,
                              normalize_yaw(box.yaw + phi))
            moved = canonicalize(PointCloud3(moved_pts), moved_box).points
            np.testing.assert_allclose(moved, base, atol=1e-9)


class TestCentroSymmetrize:
    def test_planar_example(self):
        out = centro_symmetrize(cloud((1, 2, 0.5), frame=Frame.CANONICAL))
        np.testing.assert_array_equal(out.points, [[1, 2, 0.5], [-1, -2, 0.5]])

    def test_empty(self):
        out = centro_symmetrize(PointCloud3(np.empty((0, 3)), Frame.CANONICAL))
        assert len(out) == 0

    def test_full3d_example(self):
        out = centro_symmetrize(cloud((1, 0, 1), frame=Frame.CANONICAL),
                                SymmetryMode.FULL3D)
        np.testing.assert_array_equal(out.points, [[1, 0, 1], [-1, 0, -1]])

    def test_sensor_frame_rejected(self):
        with pytest.raises(FrameError):
            centro_symmetrize(cloud((1, 2, 3)))

    def test_doubles_count_keeps_duplicates(self, rng):
        pts = rng.normal(0, 1, (21, 3))
        out = centro_symmetrize(PointCloud3(pts, Frame.CANONICAL))
        assert len(out) == 42

    def test_idempotent_as_set(self, rng):
        pts = rng.normal(0, 1, (15, 3))
        once = centro_symmetrize(PointCloud3(pts, Frame.CANONICAL))
        twice = centro_symmetrize(once)
        assert len(twice) == 2 * len(once)
        set_once = {tuple(p) for p in once.points}
        set_twice = {tuple(p) for p in twice.points}
        assert set_twice == set_once

    def test_planar_centroid_cancels_exactly(self, rng):
        pts = rng.normal(3, 1, (33, 3))
        out = centro_symmetrize(PointCloud3(pts, Frame.CANONICAL))
        n = len(pts)
        paired = out.points[:n] + out.points[n:]  # each point with its mirror
        assert (paired[:, 0] == 0.0).all()
        assert (paired[:, 1] == 0.0).all()


class TestBoxAndYaw:
    def test_yaw_wraps(self):
        assert normalize_yaw(3.5) == pytest.approx(3.5 - 2 * math.pi)
        assert normalize_yaw(math.pi) == -math.pi
        assert normalize_yaw(-math.pi) == -math.pi
        assert normalize_yaw(0.3) == pytest.approx(0.3)

    def test_box_validation(self):
        with pytest.raises(ValidationError):
            Box3D([0, 0, 0], (0, 1, 1), 0.0)
        with pytest.raises(ValidationError):
            Box3D([0, 0, 0], (1, 1, 1), 4.0)  # out of [-pi, pi)
        with pytest.raises(ValidationError):
            Box3D([np.inf, 0, 0], (1, 1, 1), 0.0)

    def test_clip_to_box(self):
        box = Box3D([0, 0, 0], (2.0, 4.0, 2.0), 0.0)
        pts = cloud((2.19, 0, 0), (2.21, 0, 0), (0, 1.09, 0), (0, 1.11, 0),
                    frame=Frame.CANONICAL)
        kept = clip_to_box(pts, box, margin=0.1)
        np.testing.assert_array_equal(kept.points, [[2.19, 0, 0], [0, 1.09, 0]])
