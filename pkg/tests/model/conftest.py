import numpy as np
import pytest

from horst.model import VtiModel


@pytest.fixture(scope="package")
def layered_model() -> VtiModel:
    dims = (6, 5, 8)
    z = 20.0 * np.arange(dims[2])
    v0 = np.broadcast_to(1800.0 + 0.8 * z, dims).copy()
    delta = np.full(dims, 0.05)
    epsilon = np.full(dims, 0.1)
    rho = np.full(dims, 2100.0)
    q = np.full(dims, 80.0)
    water_depth_index = np.full(dims[:2], 2)
    water_depth_index[0, 0] = 3
    return VtiModel(v0=v0, delta=delta, epsilon=epsilon, rho=rho, q=q,
                    spacing=(20.0, 20.0, 20.0), origin=(100.0, 50.0, 0.0),
                    water_depth_index=water_depth_index)


@pytest.fixture(scope="package")
def homogeneous_model() -> VtiModel:
    return VtiModel.homogeneous((9, 9, 9), 25.0, v0=2000.0, rho=1000.0)
