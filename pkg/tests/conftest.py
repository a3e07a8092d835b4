import pathlib

import numpy as np
import pytest

from pencillab import ToleranceConfig
from pencillab.io import load_structure_catalog

REPO = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture
def tol():
    return ToleranceConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture(scope="session")
def catalog():
    return load_structure_catalog(REPO / "fixtures" / "catalog.json")


@pytest.fixture
def fixtures_dir():
    return REPO / "fixtures"


def complex_matrix(rng, rows, cols, scale=1.0):
    return scale * (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols)))
