"""
Gridded visco-acoustic VTI subsurface model
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

# Third-party core
import numpy as np
import xarray as xr

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

WATER_DENSITY = 1000.0
WATER_VELOCITY = 1500.0
FIELD_NAMES = ('v0', 'delta', 'epsilon', 'rho', 'q')


class InputDomainError(ValueError):
    """Raised when a model value lies outside the domain of a relation"""


@dataclass
class VtiModel:
    """Subsurface model on a regular grid with uniform spacing per axis.

    Arrays have shape (nx, ny, nz) in C order, so z runs fastest. Cells with
    ``iz < water_depth_index[ix, iy]`` belong to the water column.

    Parameters
    ----------
    v0
        vertical P-wavespeed, m/s
    delta
        Thomsen delta, dimensionless
    epsilon
        Thomsen epsilon, dimensionless
    rho
        density, kg/m3
    q
        quality factor, ``np.inf`` for lossless cells
    spacing
        grid interval per axis, m
    origin
        position of node (0, 0, 0), m
    water_depth_index
        per-column index of the first sub-seabed cell, shape (nx, ny)
    """
    v0: np.ndarray
    delta: np.ndarray
    epsilon: np.ndarray
    rho: np.ndarray
    q: np.ndarray
    spacing: Tuple[float, float, float]
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    water_depth_index: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.v0 = np.asarray(self.v0, dtype=float)
        shape = self.v0.shape

        if len(shape) != 3 or min(shape) < 1:
            raise InputDomainError(
                f"Model grids must be three-dimensional, got shape {shape}")

        for name in FIELD_NAMES[1:]:
            values = np.asarray(getattr(self, name), dtype=float)
            if values.shape != shape:
                raise InputDomainError(
                    f"Field '{name}' has shape {values.shape}, "
                    f"expected {shape}")
            setattr(self, name, values)

        self.spacing = tuple(float(h) for h in self.spacing)
        self.origin = tuple(float(o) for o in self.origin)

        if self.water_depth_index is None:
            self.water_depth_index = np.zeros(shape[:2], dtype=int)
        self.water_depth_index = np.asarray(
            self.water_depth_index, dtype=int)

        self._check()

    def _check(self):
        if len(self.spacing) != 3 or min(self.spacing) <= 0.0:
            raise InputDomainError(
                f"Grid spacing must be three positive values, "
                f"got {self.spacing}")

        if self.water_depth_index.shape != self.dims[:2]:
            raise InputDomainError(
                f"water_depth_index has shape {self.water_depth_index.shape},"
                f" expected {self.dims[:2]}")

        for name in ('v0', 'delta', 'epsilon', 'rho'):
            if not np.all(np.isfinite(getattr(self, name))):
                raise InputDomainError(f"Field '{name}' has non-finite values")

        if np.any(np.isnan(self.q)):
            raise InputDomainError("Field 'q' has NaN values")

        for name in ('v0', 'rho', 'q'):
            if np.any(getattr(self, name) <= 0.0):
                raise InputDomainError(
                    f"Field '{name}' must be strictly positive")

#                                                      Alternative constructors
# =============================================================================

    @classmethod
    def homogeneous(cls, dims: Tuple[int, int, int], spacing: float,
                    v0: float = 2000.0, delta: float = 0.0,
                    epsilon: float = 0.0, rho: float = 1000.0,
                    q: float = np.inf,
                    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0),
                    water_depth: int = 0) -> VtiModel:
        """Create a model with constant fields

        Parameters
        ----------
        dims
            number of nodes (nx, ny, nz)
        spacing
            grid interval in meters, identical on the three axes
        v0, delta, epsilon, rho, q, optional
            constant field values
        origin, optional
            position of the first node, by default (0, 0, 0)
        water_depth, optional
            number of water cells on top of every column, by default 0

        Returns
        -------
        VtiModel
            homogeneous model
        """
        dims = tuple(int(d) for d in dims)

        def full(value):
            return np.full(dims, float(value))

        return cls(v0=full(v0), delta=full(delta), epsilon=full(epsilon),
                   rho=full(rho), q=full(q), spacing=(spacing,) * 3,
                   origin=origin,
                   water_depth_index=np.full(dims[:2], int(water_depth)))

    @classmethod
    def from_file(cls, path: Path | str) -> VtiModel:
        """Read a model from the binary model format"""
        from ._io import read_model
        return read_model(path)

#                                                                    Properties
# =============================================================================

    @property
    def dims(self) -> Tuple[int, int, int]:
        return tuple(self.v0.shape)

    @property
    def n_cells(self) -> int:
        return int(self.v0.size)

    @property
    def extent(self) -> Tuple[float, float, float]:
        """Physical length of the grid along each axis, node to node"""
        return tuple((n - 1) * h for n, h in zip(self.dims, self.spacing))

    @property
    def water_mask(self) -> np.ndarray:
        """Boolean grid, True above the seabed"""
        iz = np.arange(self.dims[2])[None, None, :]
        return iz < self.water_depth_index[:, :, None]

    @property
    def is_cubic(self) -> bool:
        return bool(np.allclose(self.spacing, self.spacing[0], rtol=1e-12))

    def coordinates(self, axis: int) -> np.ndarray:
        """Node coordinates along one axis, m"""
        return self.origin[axis] + self.spacing[axis] * np.arange(
            self.dims[axis])

#                                                                Public Methods
# =============================================================================

    def with_v0(self, v0: np.ndarray) -> VtiModel:
        """Return a model with a new V0 grid; the passive fields are shared,
        not copied.
        """
        v0 = np.asarray(v0, dtype=float).reshape(self.dims)
        return VtiModel(v0=v0, delta=self.delta, epsilon=self.epsilon,
                        rho=self.rho, q=self.q, spacing=self.spacing,
                        origin=self.origin,
                        water_depth_index=self.water_depth_index)

    def copy(self) -> VtiModel:
        return VtiModel(v0=self.v0.copy(), delta=self.delta.copy(),
                        epsilon=self.epsilon.copy(), rho=self.rho.copy(),
                        q=self.q.copy(), spacing=self.spacing,
                        origin=self.origin,
                        water_depth_index=self.water_depth_index.copy())

    def contains(self, position) -> bool:
        """Whether a point (m) lies inside the grid volume"""
        position = np.asarray(position, dtype=float)
        lower = np.asarray(self.origin)
        upper = lower + np.asarray(self.extent)
        return bool(np.all(position >= lower) and np.all(position <= upper))

#                                                                        Export
# =============================================================================

    def to_xarray(self) -> xr.Dataset:
        """Model as an xarray Dataset with physical coordinates

        Returns
        -------
        xr.Dataset
            one data variable per field plus the water mask
        """
        coords = {name: self.coordinates(axis)
                  for axis, name in enumerate(('x', 'y', 'z'))}
        dims = ('x', 'y', 'z')
        data = {name: (dims, getattr(self, name)) for name in FIELD_NAMES}
        data['water'] = (dims, self.water_mask.astype(float))
        return xr.Dataset(data, coords=coords,
                          attrs={'spacing': list(self.spacing)})

    def store(self, path: Path | str) -> Path:
        """Write the model in the binary model format"""
        from ._io import write_model
        return write_model(self, path)
