"""
Trilinear resampling of models onto a grid matched to a frequency
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from typing import Tuple

# Third-party core
import numpy as np
from scipy.interpolate import RegularGridInterpolator

# Local
from ..logger import logger
from .vti_model import WATER_DENSITY, InputDomainError, VtiModel

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================


def resample_model(m: VtiModel,
                   h_new: float | Tuple[float, float, float]) -> VtiModel:
    """Interpolate every field of a model onto a grid with a new interval

    The new grid keeps the origin; the number of nodes per axis is chosen so
    that the physical extent is preserved to within one cell. Q is
    interpolated as 1/Q so lossless cells mix correctly, and the water
    column is rebuilt from the interpolated seabed depth.

    Parameters
    ----------
    m
        model to resample
    h_new
        new grid interval, m, scalar or one per axis

    Returns
    -------
    VtiModel
        resampled model

    Raises
    ------
    InputDomainError
        If the target grid has fewer than two nodes along an axis
    """
    h_new = np.broadcast_to(np.asarray(h_new, dtype=float), (3,))
    if np.any(h_new <= 0.0):
        raise InputDomainError(f"Grid interval must be positive, got {h_new}")

    if np.allclose(h_new, m.spacing, rtol=1e-12, atol=0.0):
        return m.copy()

    extent = np.asarray(m.extent)
    dims = tuple(int(n) for n in np.rint(extent / h_new) + 1)
    if min(dims) < 2:
        raise InputDomainError(
            f"Resampling to {tuple(h_new)} m gives the degenerate grid {dims}")

    old_axes = tuple(m.coordinates(axis) for axis in range(3))
    new_axes = tuple(
        np.clip(m.origin[axis] + h_new[axis] * np.arange(dims[axis]),
                old_axes[axis][0], old_axes[axis][-1])
        for axis in range(3))
    points = np.stack(np.meshgrid(*new_axes, indexing='ij'), axis=-1)

    def interpolate(values: np.ndarray) -> np.ndarray:
        return _interpolator(old_axes, values)(points)

    inverse_q = interpolate(1.0 / m.q)
    q = np.divide(1.0, inverse_q, out=np.full(dims, np.inf),
                  where=inverse_q > 0.0)

    water_depth_index = _resample_seabed(m, new_axes[:2], h_new[2], dims[2])

    resampled = VtiModel(
        v0=interpolate(m.v0), delta=interpolate(m.delta),
        epsilon=interpolate(m.epsilon), rho=interpolate(m.rho), q=q,
        spacing=tuple(h_new), origin=m.origin,
        water_depth_index=water_depth_index)

    water = resampled.water_mask
    resampled.rho[water] = WATER_DENSITY
    resampled.q[water] = np.inf

    logger.debug(f"Resampled model {m.dims} -> {dims} at {tuple(h_new)} m")
    return resampled


def _interpolator(axes, values: np.ndarray) -> RegularGridInterpolator:
    # Axes of length one cannot be interpolated along; duplicate the plane
    axes = list(axes)
    for axis, coordinates in enumerate(axes):
        if coordinates.size == 1:
            axes[axis] = np.array([coordinates[0], coordinates[0] + 1.0])
            values = np.concatenate([values, values], axis=axis)
    return RegularGridInterpolator(tuple(axes), values, method='linear')


def _resample_seabed(m: VtiModel, new_axes, hz_new: float,
                     nz_new: int) -> np.ndarray:
    seabed_depth = m.water_depth_index * m.spacing[2]
    points = np.stack(np.meshgrid(*new_axes, indexing='ij'), axis=-1)
    depth = _interpolator(
        tuple(m.coordinates(axis) for axis in range(2)),
        seabed_depth.astype(float))(points)
    index = np.ceil(depth / hz_new - 1e-9).astype(int)
    return np.clip(index, 0, nz_new)
