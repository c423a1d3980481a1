"""
Kaiser-windowed sinc coupling of off-grid sources and receivers
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass
from typing import List, Sequence, Tuple

# Third-party core
import numpy as np
import scipy.sparse as sp

# Local
from .grid import GridGeometry

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

DEFAULT_RADIUS = 4
KAISER_B = 6.31
NODE_TOLERANCE = 1e-9


class OutOfGridError(ValueError):
    """Raised when a source or receiver lies outside the grid"""


@dataclass(frozen=True)
class CouplingStencil:
    """Grid nodes and real weights coupling one point to the grid"""
    indices: np.ndarray
    coefficients: np.ndarray
    radius: int = DEFAULT_RADIUS

    def __len__(self) -> int:
        return self.indices.size


def _axis_weights(u: float, n: int, radius: int, b: float,
                  mirror: bool) -> Tuple[np.ndarray, np.ndarray]:
    nearest = round(u)
    if abs(u - nearest) < NODE_TOLERANCE:
        nodes = np.array([int(nearest)])
        weights = np.array([1.0])
    else:
        nodes = np.arange(int(np.ceil(u - radius)),
                          int(np.floor(u + radius)) + 1)
        distance = nodes - u
        window = np.i0(b * np.sqrt(np.clip(1.0 - (distance / radius) ** 2,
                                           0.0, None))) / np.i0(b)
        weights = np.sinc(distance) * window
        weights /= weights.sum()

    if mirror:
        # Odd reflection about the Dirichlet plane at node 0
        weights = np.where(nodes < 0, -weights, weights)
        nodes = np.abs(nodes)
        weights = np.where(nodes == 0, 0.0, weights)

    inside = (nodes >= 0) & (nodes < n)
    nodes, weights = nodes[inside], weights[inside]
    unique, inverse = np.unique(nodes, return_inverse=True)
    summed = np.zeros(unique.size)
    np.add.at(summed, inverse, weights)
    keep = summed != 0.0
    return unique[keep], summed[keep]


def hicks_coefficients(position: Sequence[float], grid: GridGeometry,
                       radius: int = DEFAULT_RADIUS,
                       b: float = KAISER_B) -> CouplingStencil:
    """Tensor-product Kaiser-windowed sinc stencil of one point

    Each 1D factor is normalized to unit sum so that constant fields are
    reproduced away from the boundaries. Nodes beyond the lateral and
    bottom edges are dropped; with a free surface, nodes above the top plane
    are folded back with a sign change.

    Parameters
    ----------
    position
        (x, y, z) in m
    grid
        node layout
    radius, optional
        window half-width in cells, by default 4
    b, optional
        Kaiser shape parameter, by default 6.31

    Returns
    -------
    CouplingStencil
        flat node indices and coefficients

    Raises
    ------
    OutOfGridError
        If the point lies outside the grid volume
    """
    position = np.asarray(position, dtype=float)
    u = (position - np.asarray(grid.origin)) / np.asarray(grid.spacing)
    upper = np.asarray(grid.dims) - 1

    if np.any(u < -NODE_TOLERANCE) or np.any(u > upper + NODE_TOLERANCE):
        raise OutOfGridError(
            f"Point {tuple(position)} lies outside the grid "
            f"(origin {grid.origin}, extent "
            f"{tuple(upper * np.asarray(grid.spacing))})")

    axes = [_axis_weights(float(u[a]), grid.dims[a], radius, b,
                          mirror=(a == 2 and grid.free_surface))
            for a in range(3)]

    (ix, wx), (iy, wy), (iz, wz) = axes
    index = grid.flat_index(ix[:, None, None], iy[None, :, None],
                            iz[None, None, :]).ravel()
    coefficients = (wx[:, None, None] * wy[None, :, None]
                    * wz[None, None, :]).ravel()
    return CouplingStencil(indices=index.astype(np.int64),
                           coefficients=coefficients, radius=radius)


def coupling_matrix(positions: np.ndarray, grid: GridGeometry,
                    radius: int = DEFAULT_RADIUS) -> sp.csr_matrix:
    """Sparse matrix R (n_points x n_dof) whose rows are coupling stencils

    Parameters
    ----------
    positions
        shape (n_points, 3), m
    grid
        node layout
    radius, optional
        window half-width, by default 4

    Returns
    -------
    sp.csr_matrix
        real coupling matrix
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    stencils: List[CouplingStencil] = [
        hicks_coefficients(p, grid, radius) for p in positions]
    rows = np.repeat(np.arange(len(stencils)), [len(s) for s in stencils])
    cols = np.concatenate([s.indices for s in stencils]) if stencils \
        else np.zeros(0, dtype=np.int64)
    vals = np.concatenate([s.coefficients for s in stencils]) if stencils \
        else np.zeros(0)
    return sp.csr_matrix((vals, (rows, cols)),
                         shape=(len(stencils), grid.n_dof))


def build_rhs(positions: np.ndarray, signatures: Sequence[complex],
              grid: GridGeometry,
              radius: int = DEFAULT_RADIUS) -> sp.csc_matrix:
    """Sparse source matrix F, one column per source in acquisition order

    Parameters
    ----------
    positions
        source positions, shape (n_src, 3), m
    signatures
        complex source signature per source
    grid
        node layout
    radius, optional
        window half-width, by default 4

    Returns
    -------
    sp.csc_matrix
        complex matrix of shape (n_dof, n_src)

    Raises
    ------
    ValueError
        If a source couples to no unknown (e.g. it sits on the free surface)
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    signatures = np.asarray(signatures, dtype=complex).ravel()
    if signatures.size != positions.shape[0]:
        raise ValueError(
            f"Got {positions.shape[0]} sources but {signatures.size} "
            f"signatures")

    coupling = coupling_matrix(positions, grid, radius)
    empty = np.flatnonzero(np.diff(coupling.indptr) == 0)
    if empty.size:
        raise ValueError(
            f"Sources {empty.tolist()} do not couple to any unknown")

    return (coupling.T @ sp.diags(signatures)).tocsc().astype(complex)


def sample_receivers(wavefield: np.ndarray, positions: np.ndarray,
                     grid: GridGeometry,
                     radius: int = DEFAULT_RADIUS) -> np.ndarray:
    """Interpolate wavefields at receivers with the transpose of the source
    coupling

    Parameters
    ----------
    wavefield
        grid of shape dims, flat vector (n_dof,) or matrix (n_dof, k)
    positions
        receiver positions, shape (n_rec, 3), m
    grid
        node layout

    Returns
    -------
    np.ndarray
        shape (n_rec,) or (n_rec, k)
    """
    wavefield = np.asarray(wavefield)
    if wavefield.shape == tuple(grid.dims):
        wavefield = wavefield.ravel()
    if wavefield.shape[0] != grid.n_dof:
        raise ValueError(
            f"Wavefield has {wavefield.shape[0]} rows, grid has "
            f"{grid.n_dof} unknowns")
    return coupling_matrix(positions, grid, radius) @ wavefield
