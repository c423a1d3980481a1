import numpy as np
import pytest

from horst.discretize import GridGeometry, StencilWeightTable
from horst.model import VtiModel


@pytest.fixture(scope="package")
def small_model() -> VtiModel:
    return VtiModel.homogeneous((10, 10, 10), 25.0, v0=2000.0, rho=1000.0)


@pytest.fixture(scope="package")
def vti_model() -> VtiModel:
    m = VtiModel.homogeneous((8, 8, 8), 25.0, v0=2000.0, rho=1800.0,
                             delta=0.05, epsilon=0.15, q=100.0)
    rng = np.random.default_rng(3)
    return m.with_v0(m.v0 * (1.0 + 0.05 * rng.random(m.dims)))


@pytest.fixture(scope="package")
def classical_table() -> StencilWeightTable:
    return StencilWeightTable.classical()


@pytest.fixture(scope="package")
def grid() -> GridGeometry:
    return GridGeometry(dims=(20, 20, 20), spacing=(10.0, 10.0, 10.0))


@pytest.fixture(scope="package")
def surface_grid() -> GridGeometry:
    return GridGeometry(dims=(20, 20, 20), spacing=(10.0, 10.0, 10.0),
                        free_surface=True)
