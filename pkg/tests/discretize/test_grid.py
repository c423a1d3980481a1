import logging

import numpy as np
import pytest

from horst._src.discretize.grid import damping_profile, stretching
from horst.discretize import GridGeometry, PmlConfig

pytestmark = pytest.mark.smoke


def test_flat_index_runs_fastest_along_z(grid: GridGeometry):
    assert grid.n_dof == 8000
    assert grid.flat_index(0, 0, 1) == 1
    assert grid.flat_index(0, 1, 0) == 20
    assert grid.flat_index(1, 0, 0) == 400


def test_node_coordinates():
    grid = GridGeometry(dims=(2, 3, 4), spacing=(1.0, 2.0, 3.0),
                        origin=(10.0, 0.0, 0.0))
    coordinates = grid.node_coordinates()
    assert coordinates.shape == (24, 3)
    np.testing.assert_allclose(coordinates[grid.flat_index(1, 2, 3)],
                               (11.0, 4.0, 9.0))


def test_pml_widths_per_face():
    pml = PmlConfig(width=8, top=True)
    assert pml.widths(free_surface=True) == (8, 8, 8, 8, 0, 8)
    assert pml.widths(free_surface=False) == (8, 8, 8, 8, 8, 8)
    assert PmlConfig(width=8).widths(free_surface=False)[4] == 0


@pytest.mark.parametrize("width, reflection", [(-1, 1e-4), (8, 0.0),
                                               (8, 1.0)])
def test_pml_domain(width: int, reflection: float):
    with pytest.raises(ValueError):
        PmlConfig(width=width, reflection=reflection)


@pytest.mark.parametrize("width, warned", [(0, False), (3, True), (7, True),
                                           (8, False)])
def test_thin_pml_is_accepted_with_a_warning(caplog, width: int,
                                             warned: bool):
    with caplog.at_level(logging.WARNING, logger='horst'):
        pml = PmlConfig(width=width)
    assert pml.width == width
    assert ('below the recommended' in caplog.text) is warned


def test_damping_profile_vanishes_in_the_interior():
    gamma = damping_profile(40, 25.0, 8, 8, 2000.0, 1e-4)
    assert np.all(gamma[8:32] == 0.0)
    assert np.all(np.diff(gamma[:9]) < 0.0)
    assert np.all(np.diff(gamma[31:]) > 0.0)
    assert gamma[0] == pytest.approx(gamma[-1])


def test_damping_profile_reaches_its_maximum_at_the_edge():
    gamma = damping_profile(20, 25.0, 8, 0, 2000.0, 1e-4)
    expected = 4.0 * 2000.0 * np.log(1e4) / (2.0 * 8 * 25.0)
    assert gamma[0] == pytest.approx(expected)
    assert np.all(gamma[8:] == 0.0)


def test_stretching_is_one_outside_the_layer():
    s = stretching(30, 25.0, 8, 8, 2.0 * np.pi * 5.0, 2000.0, 1e-4)
    np.testing.assert_array_equal(s[8:22], 1.0)
    assert np.all(s[:8].imag > 0.0)


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
