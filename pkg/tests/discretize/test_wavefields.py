import numpy as np
import pytest

from horst.discretize import (ImpedanceMatrix, PmlConfig, StencilWeightTable,
                              assemble_operator, build_rhs,
                              optimize_stencil_weights)
from horst.model import VtiModel
from horst.solver import factorize, solve

pytestmark = pytest.mark.smoke

VELOCITY, DENSITY, SPACING = 2000.0, 1000.0, 25.0


@pytest.fixture(scope="module")
def table_g4() -> StencilWeightTable:
    return optimize_stencil_weights([4.0])


@pytest.fixture(scope="module")
def table_g8() -> StencilWeightTable:
    return optimize_stencil_weights([8.0])


def _point_source_field(A: ImpedanceMatrix, position) -> np.ndarray:
    F = build_rhs(np.atleast_2d(position), [1.0], A.grid)
    P, _ = solve(factorize(A, mode='FR', deterministic=True), F)
    return P[:, 0].reshape(A.dims)


def _distance(A: ImpedanceMatrix, position) -> np.ndarray:
    coordinates = A.grid.node_coordinates()
    return np.linalg.norm(coordinates - np.asarray(position),
                          axis=1).reshape(A.dims)


def _free_space_green(A: ImpedanceMatrix, position) -> np.ndarray:
    # unit nodal load of (1/rho)(laplacian + k^2), exp(-i omega t)
    r = np.maximum(_distance(A, position), 1e-12)
    k = A.omega / VELOCITY
    return -DENSITY * SPACING ** 3 * np.exp(1j * k * r) / (4.0 * np.pi * r)


def _relative_error(p: np.ndarray, reference: np.ndarray,
                    mask: np.ndarray) -> float:
    return float(np.linalg.norm(p[mask] - reference[mask])
                 / np.linalg.norm(reference[mask]))


def _interior(dims, width: int) -> np.ndarray:
    mask = np.zeros(dims, dtype=bool)
    mask[width:dims[0] - width, width:dims[1] - width,
         width:dims[2] - width] = True
    return mask


@pytest.mark.slow
def test_homogeneous_field_matches_the_green_function(
        table_g4: StencilWeightTable):
    n = 48
    m = VtiModel.homogeneous((n, n, n), SPACING, v0=VELOCITY, rho=DENSITY)
    # 4 grid points per wavelength
    A = assemble_operator(m, 2.0 * np.pi * 20.0, weights=table_g4,
                          pml=PmlConfig(width=8, top=True),
                          free_surface=False)
    source = (24 * SPACING,) * 3

    p = _point_source_field(A, source)

    r = _distance(A, source)
    mask = _interior(A.dims, 8) & (r >= 5 * SPACING) & (r <= 9 * SPACING)
    assert mask.sum() > 1000
    assert _relative_error(p, _free_space_green(A, source), mask) <= 0.05


@pytest.mark.slow
def test_absorbing_layers_suppress_boundary_reflections(
        table_g8: StencilWeightTable):
    n = 28
    m = VtiModel.homogeneous((n, n, n), SPACING, v0=VELOCITY, rho=DENSITY)
    source = (14 * SPACING,) * 3
    errors = {}
    for width in (0, 8):
        A = assemble_operator(m, 2.0 * np.pi * 10.0, weights=table_g8,
                              pml=PmlConfig(width=width, top=True),
                              free_surface=False)
        p = _point_source_field(A, source)
        mask = _interior(A.dims, 8) & (_distance(A, source) >= 3 * SPACING)
        errors[width] = _relative_error(p, _free_space_green(A, source),
                                        mask)

    assert errors[8] <= 0.05
    assert errors[8] < 0.2 * errors[0]


def test_free_surface_matches_the_image_source_field(
        classical_table: StencilWeightTable):
    omega = 2.0 * np.pi * 10.0
    depth = 2.5 * SPACING
    x, y = 187.5, 200.0

    surface = VtiModel.homogeneous((16, 16, 12), SPACING, v0=VELOCITY,
                                   rho=DENSITY)
    A_surface = assemble_operator(surface, omega, weights=classical_table,
                                  pml=PmlConfig(width=4), free_surface=True)
    p_surface = _point_source_field(A_surface, (x, y, depth))

    # same medium mirrored about node 11 with an opposite-sign image source
    mirrored = VtiModel.homogeneous((16, 16, 23), SPACING, v0=VELOCITY,
                                    rho=DENSITY)
    A_mirrored = assemble_operator(mirrored, omega, weights=classical_table,
                                   pml=PmlConfig(width=4, top=True),
                                   free_surface=False)
    plane = 11 * SPACING
    F = build_rhs(np.array([[x, y, plane + depth], [x, y, plane - depth]]),
                  [1.0, -1.0], A_mirrored.grid)
    P, _ = solve(factorize(A_mirrored, mode='FR', deterministic=True),
                 F @ np.ones(2))
    p_mirrored = P[:, 0].reshape(A_mirrored.dims)

    scale = np.abs(p_surface).max()
    assert np.abs(p_surface[:, :, 0]).max() <= 1e-12 * scale
    assert np.abs(p_mirrored[:, :, 11]).max() <= 1e-9 * scale
    np.testing.assert_allclose(p_surface[:, :, 1:], p_mirrored[:, :, 12:],
                               rtol=0.0, atol=1e-9 * scale)


@pytest.mark.slow
def test_complex_frequency_damps_with_distance(table_g8: StencilWeightTable):
    n, damping = 28, 4.0
    m = VtiModel.homogeneous((n, n, n), SPACING, v0=VELOCITY, rho=DENSITY)
    source = (8 * SPACING, 14 * SPACING, 14 * SPACING)
    fields = {}
    for gamma in (0.0, damping):
        A = assemble_operator(m, 2.0 * np.pi * 10.0 + 1j * gamma,
                              weights=table_g8,
                              pml=PmlConfig(width=6, top=True),
                              free_surface=False)
        fields[gamma] = _point_source_field(A, source)[10:21, 14, 14]

    ratio = np.abs(fields[damping]) / np.abs(fields[0.0])
    assert np.all(ratio < 1.0)
    assert np.all(np.diff(ratio) < 0.0)
    travelled = 10 * SPACING
    assert ratio[-1] / ratio[0] == pytest.approx(
        np.exp(-damping * travelled / VELOCITY), rel=0.1)


def _vti_wavenumber(omega: float, delta: float, epsilon: float,
                    theta: float, phi: float) -> np.ndarray:
    s2, c2 = np.sin(theta) ** 2, np.cos(theta) ** 2
    a = 2.0 * (epsilon - delta) * VELOCITY ** 4 * s2 * c2
    b = -omega ** 2 * VELOCITY ** 2 * ((1.0 + 2.0 * epsilon) * s2 + c2)
    c = omega ** 4
    # smaller root of a K^2 + b K + c, written without cancellation
    K = 2.0 * c / (-b + np.sqrt(b ** 2 - 4.0 * a * c))
    direction = np.array([np.sin(theta) * np.cos(phi),
                          np.sin(theta) * np.sin(phi), np.cos(theta)])
    return np.sqrt(K) * direction


def test_vti_plane_wave_residual_is_second_order(
        classical_table: StencilWeightTable):
    delta, epsilon, omega = 0.05, 0.15, 2.0 * np.pi * 10.0
    k = _vti_wavenumber(omega, delta, epsilon, np.radians(50.0),
                        np.radians(30.0))
    kappa = DENSITY * VELOCITY ** 2
    spacings, residuals = [], []
    for n in (9, 17, 33):
        h = 160.0 / (n - 1)
        m = VtiModel.homogeneous((n, n, n), h, v0=VELOCITY, rho=DENSITY,
                                 delta=delta, epsilon=epsilon)
        A = assemble_operator(m, omega, weights=classical_table,
                              pml=PmlConfig(width=0), free_surface=False)
        assert A.anelliptic
        p = np.exp(1j * A.grid.node_coordinates() @ k)
        residual = (A.matrix @ p).reshape(A.dims)[1:-1, 1:-1, 1:-1]
        spacings.append(h)
        residuals.append(np.sqrt(np.mean(np.abs(residual) ** 2))
                         / (omega ** 2 / kappa))

    assert residuals[0] > residuals[1] > residuals[2]
    slope = np.polyfit(np.log(spacings), np.log(residuals), 1)[0]
    assert 1.8 <= slope <= 2.3


def test_elliptic_media_keep_a_strict_27_point_pattern():
    weights = np.array([0.5, 0.3, 0.2, 0.4, 0.3, 0.2, 0.1])
    table = StencilWeightTable(G=np.array([3.8, 40.0]),
                               weights=np.stack([weights, weights]),
                               max_error=np.full(2, np.nan))
    m = VtiModel.homogeneous((7, 7, 7), SPACING, v0=VELOCITY, rho=DENSITY,
                             delta=0.1, epsilon=0.1)
    A = assemble_operator(m, 2.0 * np.pi * 4.0, weights=table,
                          pml=PmlConfig(width=2), free_surface=False)
    assert not A.anelliptic

    coo = A.matrix.tocoo()
    offsets = (np.column_stack(np.unravel_index(coo.col, A.dims))
               - np.column_stack(np.unravel_index(coo.row, A.dims)))
    assert np.abs(offsets).max() <= 1

    row_nnz = np.diff(A.matrix.tocsr().indptr).reshape(A.dims)
    assert np.all(row_nnz[1:-1, 1:-1, 1:-1] == 27)
    assert row_nnz.max() == 27


if __name__ == "__main__":  # pragma: no cover
    pytest.main()
