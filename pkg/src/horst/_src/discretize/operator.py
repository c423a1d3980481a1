"""
Impedance matrix of the visco-acoustic VTI Helmholtz equation

The operator acting on the horizontal pressure reads::

    A(w) = w^2 / k0 + (1 + 2 eps) (X + Y) + Z
           + (2 (eps - delta) / w^2) (X + Y) k0 Z

with X = dx(1/rho dx), Y and Z likewise, k0 = rho c^2 and c the complex
Kolsky-Futterman velocity. The elliptic part is discretized on the
27-point cube as a weighted mean of three second-order stencils with a
consistent mass; the anelliptic part composes centered 3-point second
differences. Absorbing layers use complex coordinate stretching written in
symmetric form, so the matrix is complex-symmetric whenever the model is.
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

# Third-party core
import numpy as np
import scipy.sparse as sp

# Local
from .._io import locked
from ..logger import logger
from ..model.physics import (DEFAULT_PPW_MIN, DEFAULT_REFERENCE_FREQUENCY,
                             kolsky_futterman_velocity)
from ..model.vti_model import InputDomainError, VtiModel
from .grid import GridGeometry, PmlConfig, stretching
from .stencil import StencilWeightTable, default_weight_table

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

AXIS_OFFSETS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
EDGE_OFFSETS = ((0, 1, 1), (0, 1, -1), (1, 0, 1), (1, 0, -1),
                (1, 1, 0), (1, -1, 0))
CORNER_OFFSETS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1))
HALF_OFFSETS = AXIS_OFFSETS + EDGE_OFFSETS + CORNER_OFFSETS

# neighbour count of each mass class (face, edge, corner)
NEIGHBOUR_COUNTS = (6, 12, 8)
MASS_CLASSES = (AXIS_OFFSETS, EDGE_OFFSETS, CORNER_OFFSETS)

# edge offsets lying in the plane normal to each axis
_ROTATION_PLANES = {0: ((0, 1, 1), (0, 1, -1)),
                    1: ((1, 0, 1), (1, 0, -1)),
                    2: ((1, 1, 0), (1, -1, 0))}
_AXIS_PAIRS = ((1, 2), (0, 2), (0, 1))


class PointsPerWavelengthError(ValueError):
    """Raised when the grid undersamples the local wavelength"""

    def __init__(self, message: str, minimum: float = float("nan"),
                 cell: Tuple[int, ...] = ()):
        super().__init__(message)
        self.minimum = minimum
        self.cell = cell

#                                                              Index helpers
# =============================================================================


def _pair_slices(dims, offset) -> Tuple[Tuple[slice, ...], Tuple[slice, ...]]:
    """Slices selecting nodes i and i + offset where both are in the grid"""
    source, target = [], []
    for n, k in zip(dims, offset):
        source.append(slice(max(0, -k), n - max(0, k)))
        target.append(slice(max(0, k), n - max(0, -k)))
    return tuple(source), tuple(target)


def neighbour_sum(values: np.ndarray, offsets) -> np.ndarray:
    """Sum of ``values`` over the in-grid neighbours i +/- d for every d in
    ``offsets``
    """
    total = np.zeros_like(values)
    for d in offsets:
        source, target = _pair_slices(values.shape, d)
        total[source] += values[target]
        total[target] += values[source]
    return total


class _TripletBuffer:
    """Coordinate-format accumulator that keeps explicit zeros"""

    def __init__(self, dims):
        self.dims = tuple(dims)
        self.index = np.arange(int(np.prod(dims))).reshape(dims)
        self.rows: List[np.ndarray] = []
        self.cols: List[np.ndarray] = []
        self.vals: List[np.ndarray] = []
        self.diagonal = np.zeros(dims, dtype=complex)

    def add_pair(self, offset, coefficient: np.ndarray):
        """Symmetric coupling of i and i + offset with the midpoint average
        of a per-node coefficient, subtracted from both diagonals
        """
        source, target = _pair_slices(self.dims, offset)
        value = 0.5 * (coefficient[source] + coefficient[target])
        i, j = self.index[source].ravel(), self.index[target].ravel()
        self.rows += [i, j]
        self.cols += [j, i]
        self.vals += [value.ravel(), value.ravel()]
        self.diagonal[source] -= value
        self.diagonal[target] -= value

        # nodes whose +/- neighbour falls outside the grid
        outside = np.ones(self.dims, dtype=bool)
        outside[source] = False
        self.diagonal[outside] -= coefficient[outside]
        outside = np.ones(self.dims, dtype=bool)
        outside[target] = False
        self.diagonal[outside] -= coefficient[outside]

    def add_mass_pair(self, offset, weight: np.ndarray):
        source, target = _pair_slices(self.dims, offset)
        value = 0.5 * (weight[source] + weight[target])
        i, j = self.index[source].ravel(), self.index[target].ravel()
        self.rows += [i, j]
        self.cols += [j, i]
        self.vals += [value.ravel(), value.ravel()]

    def add_matrix(self, matrix: sp.spmatrix):
        coo = matrix.tocoo()
        self.rows.append(coo.row)
        self.cols.append(coo.col)
        self.vals.append(coo.data.astype(complex))

    def to_csc(self) -> sp.csc_matrix:
        n = self.index.size
        diag = np.arange(n)
        rows = np.concatenate(self.rows + [diag])
        cols = np.concatenate(self.cols + [diag])
        vals = np.concatenate(self.vals + [self.diagonal.ravel()])
        matrix = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsc()
        matrix.sum_duplicates()
        matrix.sort_indices()
        return matrix


def _second_difference(coefficient: np.ndarray, axis: int,
                       h: float) -> sp.csr_matrix:
    """3-point d/dq (a d/dq) with midpoint-averaged a and zero exterior"""
    buffer = _TripletBuffer(coefficient.shape)
    buffer.add_pair(AXIS_OFFSETS[axis], coefficient / h ** 2)
    return buffer.to_csc().tocsr()

#                                                              Impedance matrix
# =============================================================================


@dataclass
class ImpedanceMatrix:
    """Assembled operator with the metadata needed by the solver and the
    gradient

    Parameters
    ----------
    matrix
        complex matrix in compressed-column layout
    grid
        node layout
    omega
        angular frequency, possibly complex, rad/s
    pml_widths
        absorbing cells per face (x-, x+, y-, y+, z-, z+)
    weight_field
        per-node stencil weights, shape (7, nx, ny, nz)
    reference_velocity
        wavespeed used to scale the absorbing profile, m/s
    """
    matrix: sp.csc_matrix
    grid: GridGeometry
    omega: complex
    pml_widths: Tuple[int, ...]
    weight_field: np.ndarray
    reference_velocity: float
    structurally_symmetric: bool = True
    _kappa: np.ndarray = field(default=None, repr=False)
    _mass: np.ndarray = field(default=None, repr=False)
    _anelliptic: Optional[Dict] = field(default=None, repr=False)

    @property
    def n_dof(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.grid.dims

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return self.grid.spacing

    @property
    def kappa(self) -> np.ndarray:
        """Complex bulk modulus rho c^2 per node"""
        return self._kappa

    @property
    def anelliptic(self) -> bool:
        return self._anelliptic is not None

    def __matmul__(self, other):
        return self.matrix @ other

    def pattern_is_symmetric(self) -> bool:
        pattern = self.matrix.copy()
        pattern.data = np.ones_like(pattern.data, dtype=np.int8)
        return (pattern != pattern.T).nnz == 0

    def kappa_sensitivity(self, lam: np.ndarray, p: np.ndarray
                          ) -> np.ndarray:
        """Derivative of lam^T A p with respect to the bulk modulus of every
        node, with the stencil weights and the absorbing profile held fixed

        Parameters
        ----------
        lam, p
            flat complex vectors of length n_dof

        Returns
        -------
        np.ndarray
            complex sensitivity, shape dims
        """
        dims = self.grid.dims
        lam = np.asarray(lam).reshape(dims)
        p = np.asarray(p).reshape(dims)
        omega2 = self.omega ** 2
        w = self.weight_field

        # d m / d kappa = -m / kappa
        total = w[3] * lam * p
        for t, offsets in enumerate(MASS_CLASSES):
            share = w[4 + t] / NEIGHBOUR_COUNTS[t]
            total = total + 0.5 * share * (
                lam * neighbour_sum(p, offsets)
                + p * neighbour_sum(lam, offsets))
        sensitivity = omega2 * total * (-self._mass / self._kappa)

        if self._anelliptic is not None:
            z_op = self._anelliptic['z']
            lam_flat, p_flat = lam.ravel(), p.ravel()
            z_lam, z_p = z_op @ lam_flat, z_op @ p_flat
            cross = np.zeros(lam_flat.shape, dtype=complex)
            for h_op in self._anelliptic['h']:
                cross += 0.5 * ((h_op @ lam_flat) * z_p
                                + z_lam * (h_op @ p_flat))
            sensitivity = sensitivity + cross.reshape(dims) \
                * self._anelliptic['anisotropy'] / omega2

        return sensitivity

    def export_triplets(self, path: Path | str) -> Path:
        """Write the non-zeros as ``row col re im`` lines, 0-based"""
        coo = self.matrix.tocoo()
        table = np.column_stack([coo.row, coo.col, coo.data.real,
                                 coo.data.imag])
        with locked(path) as target:
            np.savetxt(target, table, fmt=['%d', '%d', '%.17g', '%.17g'])
        logger.debug(f"Exported {coo.nnz} matrix entries to {path}")
        return Path(path)

#                                                                      Assembly
# =============================================================================


def _stiffness_coefficients(diffusivity: Tuple[np.ndarray, ...],
                            weights: np.ndarray, h: float
                            ) -> Dict[Tuple[int, int, int], np.ndarray]:
    """Per-node coefficient of each half-offset for the weighted mix of the
    Cartesian, rotated and body-diagonal Laplacians
    """
    w1, w2, w3 = weights[0], weights[1], weights[2]
    h2 = h ** 2
    coefficient = {d: np.zeros(diffusivity[0].shape, dtype=complex)
                   for d in HALF_OFFSETS}

    for a, d in enumerate(AXIS_OFFSETS):
        coefficient[d] += w1 * diffusivity[a] / h2

    # 45 degree rotations about each axis
    for a, (b, c) in enumerate(_AXIS_PAIRS):
        share = w2 / 3.0
        coefficient[AXIS_OFFSETS[a]] += share * diffusivity[a] / h2
        for d in _ROTATION_PLANES[a]:
            coefficient[d] += share * (diffusivity[b] + diffusivity[c]) \
                / (4.0 * h2)
        coefficient[AXIS_OFFSETS[b]] += share * (
            diffusivity[b] - diffusivity[c]) / (2.0 * h2)
        coefficient[AXIS_OFFSETS[c]] += share * (
            diffusivity[c] - diffusivity[b]) / (2.0 * h2)

    mean = sum(diffusivity) / 3.0
    for d in CORNER_OFFSETS:
        coefficient[d] += w3 * mean / (4.0 * h2)
    for a, d in enumerate(AXIS_OFFSETS):
        coefficient[d] += w3 * (diffusivity[a] - mean) / h2

    return coefficient


def local_points_per_wavelength(velocity: np.ndarray, omega: complex,
                                h: float) -> np.ndarray:
    frequency = abs(omega) / (2.0 * np.pi)
    return np.abs(velocity) / (frequency * h)


def assemble_operator(m: VtiModel, omega: complex,
                      weights: Optional[StencilWeightTable] = None,
                      pml: Optional[PmlConfig] = None,
                      free_surface: bool = True,
                      weight_field: Optional[np.ndarray] = None,
                      reference_velocity: Optional[float] = None,
                      ppw_min: float = DEFAULT_PPW_MIN,
                      f_ref: float = DEFAULT_REFERENCE_FREQUENCY
                      ) -> ImpedanceMatrix:
    """Assemble the impedance matrix at one angular frequency

    Parameters
    ----------
    m
        subsurface model on a cubic grid
    omega
        angular frequency in rad/s; a positive imaginary part damps the
        wavefield in time
    weights, optional
        stencil weight table, by default the optimized table
    pml, optional
        absorbing layer settings, by default 8 cells
    free_surface, optional
        Dirichlet plane on top of the grid, by default True
    weight_field, optional
        per-node weights (7, nx, ny, nz) overriding the table lookup
    reference_velocity, optional
        velocity scaling the absorbing profile, by default max(v0)
    ppw_min, optional
        smallest accepted number of grid points per wavelength
    f_ref, optional
        reference frequency of the attenuation model, by default 10 Hz

    Returns
    -------
    ImpedanceMatrix
        assembled operator

    Raises
    ------
    InputDomainError
        If the grid is not cubic or the model holds non-finite values
    PointsPerWavelengthError
        If the grid undersamples the shortest local wavelength
    """
    if not m.is_cubic:
        raise InputDomainError(
            f"The 27-point stencil needs cubic cells, got {m.spacing}")
    for name in ('v0', 'delta', 'epsilon', 'rho'):
        if not np.all(np.isfinite(getattr(m, name))):
            raise InputDomainError(f"Field '{name}' has non-finite values")

    pml = pml if pml is not None else PmlConfig()
    h = m.spacing[0]
    dims = m.dims
    grid = GridGeometry.from_model(m, free_surface=free_surface)
    frequency = abs(omega) / (2.0 * np.pi)

    velocity = kolsky_futterman_velocity(m.v0, m.q, frequency, f_ref)
    G = local_points_per_wavelength(velocity, omega, h)
    if G.min() < ppw_min - 1e-9:
        where = np.unravel_index(np.argmin(G), dims)
        raise PointsPerWavelengthError(
            f"Only {G.min():.2f} grid points per wavelength at node {where} "
            f"({frequency:.3f} Hz, h={h} m); at least {ppw_min} required",
            minimum=float(G.min()), cell=tuple(int(i) for i in where))

    if weight_field is None:
        table = weights if weights is not None else default_weight_table()
        weight_field = table.lookup(G)

    kappa = m.rho * velocity ** 2

    if reference_velocity is None:
        reference_velocity = float(np.max(m.v0))
    widths = pml.widths(free_surface)
    s = [stretching(dims[a], h, widths[2 * a], widths[2 * a + 1], omega,
                    reference_velocity, pml.reflection) for a in range(3)]
    sx, sy, sz = np.meshgrid(*s, indexing='ij', sparse=True)
    stretch = sx * sy * sz

    elliptic = 1.0 + 2.0 * m.epsilon
    diffusivity = (elliptic * sy * sz / (sx * m.rho),
                   elliptic * sx * sz / (sy * m.rho),
                   sx * sy / (sz * m.rho))
    diffusivity = tuple(np.broadcast_to(d, dims) for d in diffusivity)

    buffer = _TripletBuffer(dims)
    for d, coefficient in _stiffness_coefficients(
            diffusivity, weight_field, h).items():
        buffer.add_pair(d, coefficient)

    mass = stretch / kappa
    omega2 = omega ** 2
    buffer.diagonal += omega2 * weight_field[3] * mass
    for t, offsets in enumerate(MASS_CLASSES):
        share = omega2 * weight_field[4 + t] * mass / NEIGHBOUR_COUNTS[t]
        for d in offsets:
            buffer.add_mass_pair(d, share)

    anelliptic = None
    anisotropy = 2.0 * (m.epsilon - m.delta)
    if np.any(anisotropy != 0.0):
        horizontal = [
            _second_difference(np.broadcast_to(sy / (m.rho * sx), dims), 0, h),
            _second_difference(np.broadcast_to(sx / (m.rho * sy), dims), 1, h)]
        vertical = _second_difference(
            np.broadcast_to(1.0 / (m.rho * sz), dims), 2, h)
        scale = sp.diags((anisotropy * kappa / omega2).ravel())
        for h_op in horizontal:
            buffer.add_matrix(0.5 * (h_op @ scale @ vertical
                                     + vertical @ scale @ h_op))
        anelliptic = {'h': horizontal, 'z': vertical,
                      'anisotropy': anisotropy}

    matrix = buffer.to_csc()
    if free_surface:
        _apply_free_surface(matrix, dims)

    logger.debug(
        f"Assembled operator at {frequency:.3f} Hz: n={matrix.shape[0]}, "
        f"nnz={matrix.nnz}, G in [{G.min():.2f}, {G.max():.2f}]")

    return ImpedanceMatrix(
        matrix=matrix, grid=grid, omega=omega, pml_widths=widths,
        weight_field=weight_field, reference_velocity=reference_velocity,
        _kappa=kappa, _mass=mass, _anelliptic=anelliptic)


def _apply_free_surface(matrix: sp.csc_matrix, dims) -> None:
    """Zero the rows and columns of the top plane in place, keeping their
    pattern, and put a representative value on their diagonal
    """
    n = matrix.shape[0]
    top = np.zeros(n, dtype=bool)
    top[np.arange(n).reshape(dims)[:, :, 0].ravel()] = True

    scale = float(np.median(np.abs(matrix.diagonal())))
    columns = np.repeat(np.arange(n), np.diff(matrix.indptr))
    rows = matrix.indices
    matrix.data[top[rows] | top[columns]] = 0.0
    matrix.data[top[rows] & (rows == columns)] = scale
