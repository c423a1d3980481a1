import numpy as np
import pytest

from horst.discretize import PmlConfig, StencilWeightTable
from horst.fwi import (Acquisition, FreqDataset, FrequencyData,
                       ModelingOptions, simulate)
from horst.model import VtiModel

FREQUENCIES = (4.0, 5.0)


@pytest.fixture(scope="package")
def modeling() -> ModelingOptions:
    return ModelingOptions(free_surface=False, pml=PmlConfig(width=3),
                           weights=StencilWeightTable.classical(),
                           leaf_size=64, deterministic=True)


@pytest.fixture(scope="package")
def start_model() -> VtiModel:
    return VtiModel.homogeneous((12, 12, 12), 25.0, v0=2000.0, rho=1000.0,
                                water_depth=1)


@pytest.fixture(scope="package")
def true_model(start_model: VtiModel) -> VtiModel:
    x, y, z = np.meshgrid(*(start_model.coordinates(a) for a in range(3)),
                          indexing='ij')
    r2 = (x - 137.5) ** 2 + (y - 137.5) ** 2 + (z - 125.0) ** 2
    anomaly = 200.0 * np.exp(-r2 / (2.0 * 40.0 ** 2))
    return start_model.with_v0(np.where(start_model.water_mask,
                                        start_model.v0,
                                        start_model.v0 + anomaly))


@pytest.fixture(scope="package")
def acquisition() -> Acquisition:
    sources = [(x, y, 62.5) for x in (87.5, 187.5) for y in (87.5, 187.5)]
    receivers = [(x, y, 187.5) for x in (87.5, 137.5, 187.5)
                 for y in (87.5, 137.5, 187.5)]
    return Acquisition(np.array(sources), np.array(receivers))


@pytest.fixture(scope="package")
def observed(true_model: VtiModel, acquisition: Acquisition,
             modeling: ModelingOptions) -> FreqDataset:
    dataset = FreqDataset(acquisition)
    for frequency in FREQUENCIES:
        simulation = simulate(true_model, frequency, acquisition, modeling)
        dataset.add(FrequencyData(frequency, simulation.d_unit))
    return dataset
