"""
Physics relations deriving passive fields and grid sampling from V0
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import math
from typing import Optional

# Third-party core
import numpy as np
from numpy.polynomial import polynomial as P

# Local
from ..logger import logger
from .vti_model import WATER_DENSITY, InputDomainError

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

# Brocher density polynomial, rho in g/cc for Vp in km/s (increasing order)
BROCHER_COEFFICIENTS = (0.0, 1.6612, -0.4721, 0.0671, -0.0043, 0.000106)
BROCHER_MAX_VELOCITY = 8500.0

DEFAULT_REFERENCE_FREQUENCY = 10.0
DEFAULT_PPW_MIN = 3.8

# Grid intervals observed in production frequency ladders, m
GRID_CATALOG = (25.0, 28.0, 30.0, 32.5, 37.5, 45.0, 50.0, 56.0, 75.0, 100.0,
                150.0)
# Nominal interval may be exceeded by this fraction when a catalog value is
# the closer fit (the 13 Hz / 30 m row runs at 3.85 points per wavelength)
CATALOG_TOLERANCE = 0.05


def brocher_density(v0: np.ndarray,
                    water_depth_index: Optional[np.ndarray] = None
                    ) -> np.ndarray:
    """Density from vertical wavespeed with Brocher's polynomial

    Parameters
    ----------
    v0
        wavespeed in m/s, any shape; 3D grids (nx, ny, nz) when
        ``water_depth_index`` is given
    water_depth_index, optional
        per-column index of the first sub-seabed cell; cells above it are
        set to the density of sea water

    Returns
    -------
    np.ndarray
        density in kg/m3

    Raises
    ------
    InputDomainError
        If a wavespeed is negative
    """
    v0 = np.asarray(v0, dtype=float)
    if np.any(v0 < 0.0):
        raise InputDomainError(
            f"Brocher density needs non-negative wavespeeds, "
            f"got minimum {v0.min()} m/s")

    if np.any(v0 > BROCHER_MAX_VELOCITY):
        logger.warning(
            f"Wavespeeds above {BROCHER_MAX_VELOCITY} m/s are outside the "
            "calibrated range of the density polynomial")

    rho = 1000.0 * P.polyval(v0 / 1000.0, BROCHER_COEFFICIENTS)

    if water_depth_index is not None:
        iz = np.arange(v0.shape[2])[None, None, :]
        water = iz < np.asarray(water_depth_index)[:, :, None]
        rho = np.where(water, WATER_DENSITY, rho)

    return rho


def kolsky_futterman_velocity(v0, q, f: float,
                              f_ref: float = DEFAULT_REFERENCE_FREQUENCY):
    """Complex attenuated velocity of the Kolsky-Futterman model

    Time dependence is exp(-i omega t); the imaginary part of the slowness is
    positive so that plane waves lose amplitude along their path. The
    velocity itself therefore has a negative imaginary part: V0 = 1500 m/s,
    Q = 200 at f = f_ref gives 1499.99 - 3.75i m/s. Conjugate the result
    for the exp(+i omega t) convention.

    Parameters
    ----------
    v0
        wavespeed at the reference frequency, m/s
    q
        quality factor, ``np.inf`` for lossless media
    f
        frequency, Hz
    f_ref, optional
        reference frequency, by default 10 Hz

    Returns
    -------
    complex or np.ndarray
        complex velocity, m/s

    Raises
    ------
    ValueError
        If f, f_ref or q is not strictly positive
    """
    if f <= 0.0 or f_ref <= 0.0:
        raise ValueError(
            f"Frequencies must be positive, got f={f} and f_ref={f_ref}")

    q = np.asarray(q, dtype=float)
    if np.any(q <= 0.0):
        raise ValueError("Quality factor must be strictly positive")

    inverse_q = 1.0 / q
    dispersion = 1.0 + inverse_q * math.log(f / f_ref) / math.pi
    return np.asarray(v0, dtype=float) * dispersion / (1.0 + 0.5j * inverse_q)


def grid_interval_for_frequency(f: float, v_min: float, ppw: float = 4.0,
                                ppw_min: float = DEFAULT_PPW_MIN) -> float:
    """Grid interval matched to a frequency

    The nominal interval ``v_min / (ppw f)`` is rounded down onto the grid
    catalog, allowing a catalog value up to 5% coarser than nominal as long
    as the effective points per wavelength stay at or above ``ppw_min``.
    Outside the catalog range the interval is floored to two significant
    figures.

    Parameters
    ----------
    f
        frequency, Hz
    v_min
        minimum wavespeed, m/s
    ppw, optional
        target points per minimum wavelength, by default 4
    ppw_min, optional
        hard lower bound on points per wavelength, by default 3.8

    Returns
    -------
    float
        grid interval, m

    Raises
    ------
    ValueError
        If an argument lies outside its domain
    """
    if f <= 0.0 or v_min <= 0.0:
        raise ValueError(
            f"Need positive frequency and wavespeed, got f={f}, "
            f"v_min={v_min}")
    if ppw < 3.0:
        raise ValueError(f"Points per wavelength must be >= 3, got {ppw}")

    nominal = v_min / (ppw * f)
    cap = min(nominal * (1.0 + CATALOG_TOLERANCE), v_min / (ppw_min * f))

    if GRID_CATALOG[0] <= cap <= GRID_CATALOG[-1] * (1.0 + CATALOG_TOLERANCE):
        return max(h for h in GRID_CATALOG if h <= cap)

    return _floor_significant(cap, digits=2)


def _floor_significant(value: float, digits: int) -> float:
    exponent = math.floor(math.log10(value)) - (digits - 1)
    scale = 10.0 ** exponent
    count = math.floor(value / scale + 1e-9)
    if count * scale > value:
        count -= 1
    return count * scale
