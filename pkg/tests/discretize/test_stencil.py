from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

from horst._src.discretize.stencil import expand_weights, octant_angles
from horst.discretize import (StencilWeights, StencilWeightTable,
                              dispersion_error, optimize_stencil_weights)

pytestmark = pytest.mark.smoke


def test_expanded_weights_sum_to_one():
    vector = expand_weights([0.4, 0.3, 0.5, 0.2, 0.1])
    assert vector.shape == (7,)
    assert vector[:3].sum() == pytest.approx(1.0)
    assert vector[3:].sum() == pytest.approx(1.0)


def test_octant_angles_cover_the_octant():
    angles = octant_angles()
    assert angles.shape == (64, 2)
    assert angles.min() == 0.0
    assert angles.max() == pytest.approx(np.pi / 2)


@pytest.mark.parametrize("G", [4.0, 6.0, 10.0])
def test_classical_axis_dispersion_matches_closed_form(G: float):
    error = dispersion_error(StencilWeights.classical(), G, (0.0, 0.0))
    expected = G * np.sin(np.pi / G) / np.pi - 1.0
    assert float(error) == pytest.approx(expected, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(G=floats(min_value=2.0, max_value=40.0))
def test_classical_stencil_is_slow(G: float):
    error = dispersion_error(StencilWeights.classical(), G, octant_angles())
    assert np.all(error <= 1e-12)


def test_dispersion_below_nyquist():
    with pytest.raises(ValueError):
        dispersion_error(StencilWeights.classical(), 1.5, (0.0, 0.0))


def test_optimized_weights_at_four_points_per_wavelength():
    table = optimize_stencil_weights([4.0])
    assert len(table) == 1
    assert table.max_error[0] <= 0.01
    error = dispersion_error(table.at(4.0), 4.0, octant_angles())
    assert np.max(np.abs(error)) == pytest.approx(table.max_error[0])
    assert table.weights[0, :3].sum() == pytest.approx(1.0)
    assert table.weights[0, 3:].sum() == pytest.approx(1.0)


def test_optimization_domain():
    with pytest.raises(ValueError):
        optimize_stencil_weights([3.0])
    with pytest.raises(ValueError):
        optimize_stencil_weights([4.0], angle_samples=octant_angles(4, 4))


def test_lookup_interpolates_and_clamps():
    weights = np.stack([expand_weights([1.0, 0.0, 1.0, 0.0, 0.0]),
                        expand_weights([0.0, 1.0, 0.0, 1.0, 0.0])])
    table = StencilWeightTable(G=np.array([4.0, 8.0]), weights=weights,
                               max_error=np.zeros(2))
    np.testing.assert_allclose(table.lookup(6.0), weights.mean(axis=0))
    np.testing.assert_allclose(table.lookup(2.0), weights[0])
    np.testing.assert_allclose(table.lookup(50.0), weights[1])
    assert table.lookup(np.ones((2, 3)) * 5.0).shape == (7, 2, 3)


def test_table_validation():
    with pytest.raises(ValueError):
        StencilWeightTable(G=np.array([4.0, 8.0]), weights=np.zeros((2, 5)),
                           max_error=np.zeros(2))
    with pytest.raises(ValueError):
        StencilWeightTable(G=np.array([8.0, 4.0]), weights=np.zeros((2, 7)),
                           max_error=np.zeros(2))


def test_csv_table(tmp_path: Path, classical_table: StencilWeightTable):
    path = classical_table.to_csv(tmp_path / 'weights')
    assert path.suffix == '.csv'
    loaded = StencilWeightTable.from_csv(path)
    np.testing.assert_allclose(loaded.G, classical_table.G)
    np.testing.assert_allclose(loaded.weights, classical_table.weights)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
