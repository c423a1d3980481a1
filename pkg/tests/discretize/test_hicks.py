import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

from horst.discretize import (GridGeometry, OutOfGridError, build_rhs,
                              coupling_matrix, hicks_coefficients,
                              sample_receivers)

pytestmark = pytest.mark.smoke


@settings(max_examples=40, deadline=None)
@given(x=floats(min_value=45.0, max_value=145.0),
       y=floats(min_value=45.0, max_value=145.0),
       z=floats(min_value=45.0, max_value=145.0))
def test_interior_coefficients_sum_to_one(grid: GridGeometry, x: float,
                                          y: float, z: float):
    stencil = hicks_coefficients((x, y, z), grid)
    assert float(np.sum(stencil.coefficients)) == pytest.approx(1.0,
                                                                abs=1e-12)


def test_point_on_a_node_is_a_delta(grid: GridGeometry):
    stencil = hicks_coefficients((50.0, 70.0, 90.0), grid)
    assert len(stencil) == 1
    assert stencil.indices[0] == grid.flat_index(5, 7, 9)
    assert stencil.coefficients[0] == 1.0


def test_stencil_width(grid: GridGeometry):
    stencil = hicks_coefficients((95.5, 95.5, 95.5), grid)
    assert len(stencil) == 8 ** 3


def test_edge_points_are_truncated(grid: GridGeometry):
    stencil = hicks_coefficients((0.5, 95.5, 95.5), grid)
    ix = stencil.indices // 400
    assert ix.min() == 0
    assert len(stencil) < 8 ** 3


def test_free_surface_mirror(grid: GridGeometry,
                             surface_grid: GridGeometry):
    position = (95.5, 95.5, 12.5)
    mirrored = hicks_coefficients(position, surface_grid)
    plain = hicks_coefficients(position, grid)
    assert np.all(mirrored.indices % 20 > 0)
    assert np.any(plain.indices % 20 == 0)
    assert not np.isclose(np.sum(mirrored.coefficients),
                          np.sum(plain.coefficients))


def test_free_surface_leaves_deep_points_alone(grid: GridGeometry,
                                               surface_grid: GridGeometry):
    position = (95.5, 95.5, 95.5)
    np.testing.assert_allclose(
        hicks_coefficients(position, surface_grid).coefficients,
        hicks_coefficients(position, grid).coefficients)


@pytest.mark.parametrize("position", [(-1.0, 50.0, 50.0),
                                      (50.0, 191.0, 50.0),
                                      (50.0, 50.0, 200.5)])
def test_out_of_grid(grid: GridGeometry, position):
    with pytest.raises(OutOfGridError):
        hicks_coefficients(position, grid)


def test_rhs_columns_follow_the_acquisition_order(grid: GridGeometry):
    positions = np.array([[50.0, 50.0, 50.0], [100.0, 100.0, 100.0]])
    F = build_rhs(positions, [2.0, 1j], grid)
    assert F.shape == (8000, 2)
    assert F[grid.flat_index(5, 5, 5), 0] == 2.0
    assert F[grid.flat_index(10, 10, 10), 1] == 1j


def test_rhs_signature_count(grid: GridGeometry):
    with pytest.raises(ValueError):
        build_rhs(np.zeros((2, 3)), [1.0], grid)


def test_source_on_the_free_surface(surface_grid: GridGeometry):
    with pytest.raises(ValueError):
        build_rhs(np.array([[50.0, 50.0, 0.0]]), [1.0], surface_grid)


def test_receivers_use_the_transposed_coupling(grid: GridGeometry):
    rng = np.random.default_rng(0)
    wavefield = rng.standard_normal(grid.n_dof) \
        + 1j * rng.standard_normal(grid.n_dof)
    positions = np.array([[73.1, 88.4, 101.9], [120.0, 40.2, 66.6]])
    samples = sample_receivers(wavefield.reshape(grid.dims), positions, grid)
    R = coupling_matrix(positions, grid)
    np.testing.assert_allclose(samples, R @ wavefield)
    F = build_rhs(positions, np.ones(2), grid)
    np.testing.assert_allclose(F.toarray().T, R.toarray())


def test_constant_field_is_reproduced(grid: GridGeometry):
    positions = np.array([[73.1, 88.4, 101.9]])
    samples = sample_receivers(np.full(grid.n_dof, 3.0), positions, grid)
    assert samples[0] == pytest.approx(3.0)


def test_wavefield_size_is_checked(grid: GridGeometry):
    with pytest.raises(ValueError):
        sample_receivers(np.zeros(10), np.zeros((1, 3)), grid)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
