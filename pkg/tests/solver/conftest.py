import numpy as np
import pytest

from horst.discretize import (ImpedanceMatrix, PmlConfig, StencilWeightTable,
                              assemble_operator, build_rhs)
from horst.model import VtiModel
from horst.solver import Factorization, factorize

# 8 grid points per wavelength on 25 m cells
FREQUENCY = 10.0


def scaled_residual(A, x: np.ndarray, b: np.ndarray) -> float:
    matrix = getattr(A, 'matrix', A)
    residual = np.linalg.norm(matrix @ x - b)
    return float(residual / (np.linalg.norm(b)
                             + abs(matrix).max() * np.linalg.norm(x)))


@pytest.fixture(scope="package")
def helmholtz() -> ImpedanceMatrix:
    m = VtiModel.homogeneous((12, 12, 12), 25.0, v0=2000.0, rho=1000.0)
    return assemble_operator(m, 2.0 * np.pi * FREQUENCY,
                             weights=StencilWeightTable.classical(),
                             pml=PmlConfig(width=3), free_surface=False)


@pytest.fixture(scope="package")
def fr_factorization(helmholtz: ImpedanceMatrix) -> Factorization:
    return factorize(helmholtz, mode='FR', leaf_size=64, deterministic=True)


@pytest.fixture(scope="package")
def rhs(helmholtz: ImpedanceMatrix):
    rng = np.random.default_rng(7)
    positions = rng.uniform(30.0, 120.0, size=(20, 3))
    return build_rhs(positions, np.ones(20), helmholtz.grid)
