import numpy as np

from shapesig import canonicalize
from shapesig.synthetic import CLASS_DIMS, box_surface_cloud, make_fleet, posed_object


def test_class_dims_table():
    assert CLASS_DIMS["car"] == (1.9, 4.6, 1.7)
    assert CLASS_DIMS["bus"] == (2.9, 11.0, 3.5)
    assert CLASS_DIMS["pedestrian"] == (0.7, 0.7, 1.7)
    assert CLASS_DIMS["bicycle"] == (0.6, 1.7, 1.3)


def test_surface_points_lie_on_faces(rng):
    pts = box_surface_cloud(CLASS_DIMS["car"], 500, rng)
    half = np.array([4.6 / 2, 1.9 / 2, 1.7 / 2])
    assert (np.abs(pts) <= half + 1e-12).all()
    on_face = (pts[:, 0] == half[0]) | (pts[:, 1] == half[1]) | (pts[:, 2] == half[2])
    assert on_face.all()


def test_posed_object_canonicalizes_back(rng):
    cloud, box = posed_object(CLASS_DIMS["bus"], (30, -7, 0.3), 1.2, 200, rng)
    canon = canonicalize(cloud, box)
    half = np.array([11.0 / 2, 2.9 / 2, 3.5 / 2])
    assert (np.abs(canon.points) <= half + 1e-9).all()


def test_fleet_composition_and_determinism():
    data1, dist1 = make_fleet(seed=3, per_class=6)
    data2, dist2 = make_fleet(seed=3, per_class=6)
    assert len(data1) == 24
    np.testing.assert_array_equal(dist1, dist2)
    for (c1, b1, l1), (c2, b2, l2) in zip(data1, data2):
        assert l1 == l2
        np.testing.assert_array_equal(c1.points, c2.points)
    labels = [l for _, _, l in data1]
    assert labels.count("car") == 6
    near = dist1 < 40.0
    assert near.sum() == 12  # half near, half far
