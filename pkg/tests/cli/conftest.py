import numpy as np
import pytest

from horst.model import VtiModel


@pytest.fixture(scope="package")
def ramp_model() -> VtiModel:
    """V0 = 1500 + 0.5 x + 0.25 z on a (4, 5, 6) grid of 25 m cells"""
    m = VtiModel.homogeneous((4, 5, 6), 25.0)
    x, _, z = np.meshgrid(*(m.coordinates(a) for a in range(3)),
                          indexing='ij')
    return m.with_v0(1500.0 + 0.5 * x + 0.25 * z)


@pytest.fixture
def config_args(tmp_path) -> list:
    return ['--set', f'paths.output_dir={tmp_path / "out"}']
