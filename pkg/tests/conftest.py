import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))  # make oracle/frozen importable

from shapesig import parse_annotations, parse_points

DATA_DIR = os.path.join(os.path.dirname(__file__), os.pardir, "data")


@pytest.fixture(scope="session")
def car_fixture():
    """The committed car demo object: (cloud, box, label)."""
    cloud = parse_points(os.path.join(DATA_DIR, "car_cloud.csv"))
    rec = parse_annotations(os.path.join(DATA_DIR, "car_ann.json"))[0]
    return cloud, rec.box, rec.label


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
