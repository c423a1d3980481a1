"""
Wavelength-adaptive weights of the 27-point mixed-grid stencil

The stiffness operator is a weighted mean of three second-order Laplacians:
the Cartesian 7-point stencil (w1), the mean of the three stencils rotated by
45 degrees about one axis (w2) and the stencil built on the four body
diagonals (w3). The mass term is distributed over the center, face, edge and
corner nodes of the 3x3x3 cube. For each number of grid points per
wavelength G the weights minimize the worst phase-velocity error over
propagation angles.
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

# Third-party core
import numpy as np
import pandas as pd
from pathos.helpers import mp
from scipy.optimize import least_squares, minimize

# Local
from .._io import PandasStore
from ..logger import logger

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

WEIGHT_COLUMNS = ('w1', 'w2', 'w3', 'wm_center', 'wm_face', 'wm_edge',
                  'wm_corner')
G_MIN, G_MAX = 3.8, 40.0
DEFAULT_G_SAMPLES = (3.8, 4.0, 4.25, 4.5, 5.0, 5.5, 6.0, 7.0, 8.0, 10.0,
                     12.0, 15.0, 20.0, 25.0, 30.0, 40.0)
TARGET_ERROR_AT_G4 = 0.01

# Free parameters are (w1, w2, wm_center, wm_face, wm_edge)
_BOUNDS = (np.full(5, -0.5), np.full(5, 1.5))
_STARTING_POINTS = (
    (1.0, 0.0, 1.0, 0.0, 0.0),
    (0.184, 0.0003, 0.4966, 0.451, 0.0546),
    (1.0 / 3.0, 1.0 / 3.0, 0.5, 0.4, 0.08),
)

_AXIS_PAIRS = ((1, 2), (0, 2), (0, 1))
_BODY_DIAGONALS = np.array([[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]],
                           dtype=float)


def expand_weights(x: Sequence[float]) -> np.ndarray:
    """Full 7-vector of weights from the 5 free parameters; the stiffness
    and mass weights each sum to one by construction.
    """
    w1, w2, wm_c, wm_f, wm_e = x
    return np.array([w1, w2, 1.0 - w1 - w2, wm_c, wm_f, wm_e,
                     1.0 - wm_c - wm_f - wm_e])


def octant_angles(n_theta: int = 8, n_phi: int = 8) -> np.ndarray:
    """Propagation directions (theta from the z axis, phi in the xy plane)
    covering one octant of the sphere, both ends included.

    Returns
    -------
    np.ndarray
        shape (n_theta * n_phi, 2), radians
    """
    theta = np.linspace(0.0, np.pi / 2, n_theta)
    phi = np.linspace(0.0, np.pi / 2, n_phi)
    t, p = np.meshgrid(theta, phi, indexing='ij')
    return np.column_stack([t.ravel(), p.ravel()])


def _symbols(kh: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Stiffness symbols of the three stencils and mass symbols of the four
    node classes for normalized wavevectors kh of shape (..., 3)
    """
    cos_axis = np.cos(kh)
    s1 = np.sum(2.0 * (cos_axis - 1.0), axis=-1)

    s2 = np.zeros_like(s1)
    edges = np.zeros_like(s1)
    for a, (b, c) in enumerate(_AXIS_PAIRS):
        plus = np.cos(kh[..., b] + kh[..., c])
        minus = np.cos(kh[..., b] - kh[..., c])
        s2 += 2.0 * (cos_axis[..., a] - 1.0) + (plus - 1.0) + (minus - 1.0)
        edges += plus + minus
    s2 /= 3.0

    cos_diag = np.cos(kh @ _BODY_DIAGONALS.T)
    s3 = np.sum(2.0 * (cos_diag - 1.0), axis=-1) / 4.0

    stiffness = np.stack([s1, s2, s3], axis=-1)
    mass = np.stack([np.ones_like(s1), np.sum(cos_axis, axis=-1) / 3.0,
                     edges / 6.0, np.sum(cos_diag, axis=-1) / 4.0], axis=-1)
    return stiffness, mass


def dispersion_error(weights, G, angle) -> np.ndarray:
    """Relative phase-velocity error of the homogeneous isotropic discrete
    operator

    Parameters
    ----------
    weights
        7 weights (w1, w2, w3, wm_center, wm_face, wm_edge, wm_corner) or a
        :class:`StencilWeights`
    G
        grid points per wavelength, >= 2
    angle
        (theta, phi) in radians, or an array of shape (n, 2)

    Returns
    -------
    np.ndarray
        v_numerical / v_exact - 1, one value per angle (scalar for one angle)

    Raises
    ------
    ValueError
        If G is below the Nyquist limit
    """
    weights = np.asarray(getattr(weights, 'vector', weights), dtype=float)
    G = np.asarray(G, dtype=float)
    if np.any(G < 2.0):
        raise ValueError(f"G must be >= 2, got {G}")

    angle = np.asarray(angle, dtype=float)
    theta, phi = angle[..., 0], angle[..., 1]
    direction = np.stack([np.sin(theta) * np.cos(phi),
                          np.sin(theta) * np.sin(phi),
                          np.cos(theta)], axis=-1)
    k_norm = 2.0 * np.pi / G
    kh = k_norm[..., None] * direction

    stiffness, mass = _symbols(kh)
    s = stiffness @ weights[:3]
    m = mass @ weights[3:]
    ratio = np.clip(-s / m, 0.0, None)
    return np.sqrt(ratio) / k_norm - 1.0


@dataclass(frozen=True)
class StencilWeights:
    vector: np.ndarray

    @property
    def stiffness(self) -> np.ndarray:
        return self.vector[:3]

    @property
    def mass(self) -> np.ndarray:
        return self.vector[3:]

    @classmethod
    def classical(cls) -> StencilWeights:
        """Plain 7-point Laplacian with a lumped mass"""
        return cls(np.array([1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]))


@dataclass(frozen=True)
class StencilWeightTable:
    """Optimized weights sampled at several points-per-wavelength values.

    Parameters
    ----------
    G
        sampled points per wavelength, increasing
    weights
        shape (len(G), 7), columns as in ``WEIGHT_COLUMNS``
    max_error
        achieved minimax phase error per sample
    """
    G: np.ndarray
    weights: np.ndarray
    max_error: np.ndarray

    def __post_init__(self):
        G = np.asarray(self.G, dtype=float)
        weights = np.atleast_2d(np.asarray(self.weights, dtype=float))
        if weights.shape != (G.size, len(WEIGHT_COLUMNS)):
            raise ValueError(
                f"Weight table needs shape ({G.size}, 7), got "
                f"{weights.shape}")
        if np.any(np.diff(G) <= 0.0):
            raise ValueError("G samples must be strictly increasing")
        object.__setattr__(self, 'G', G)
        object.__setattr__(self, 'weights', weights)
        object.__setattr__(self, 'max_error',
                           np.asarray(self.max_error, dtype=float))

    def __len__(self) -> int:
        return self.G.size

#                                                      Alternative constructors
# =============================================================================

    @classmethod
    def classical(cls) -> StencilWeightTable:
        """Table holding the 7-point stencil at every G"""
        vector = StencilWeights.classical().vector
        return cls(G=np.array([G_MIN, G_MAX]),
                   weights=np.stack([vector, vector]),
                   max_error=np.full(2, np.nan))

    @classmethod
    def from_csv(cls, path: Path | str) -> StencilWeightTable:
        frame = PandasStore(None, path).load()
        max_error = frame['max_error'].to_numpy() if 'max_error' in frame \
            else np.full(len(frame), np.nan)
        return cls(G=frame['G'].to_numpy(),
                   weights=frame[list(WEIGHT_COLUMNS)].to_numpy(),
                   max_error=max_error)

#                                                                Public Methods
# =============================================================================

    def lookup(self, G) -> np.ndarray:
        """Piecewise-linear interpolation of the weights in G, clamped to
        the sampled range

        Parameters
        ----------
        G
            points per wavelength, any shape

        Returns
        -------
        np.ndarray
            weights with a leading axis of length 7
        """
        G = np.asarray(G, dtype=float)
        return np.stack([np.interp(G, self.G, self.weights[:, j])
                         for j in range(len(WEIGHT_COLUMNS))])

    def at(self, G: float) -> StencilWeights:
        return StencilWeights(self.lookup(G))

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.weights, columns=list(WEIGHT_COLUMNS))
        frame.insert(0, 'G', self.G)
        frame['max_error'] = self.max_error
        return frame

    def to_csv(self, path: Path | str) -> Path:
        return PandasStore(self.to_frame(), path).store()

#                                                                  Optimization
# =============================================================================


def _optimize_single(G: float, angles: np.ndarray
                     ) -> Tuple[np.ndarray, float, bool]:
    def residuals(x):
        return dispersion_error(expand_weights(x), G, angles)

    def worst(x):
        return float(np.max(np.abs(residuals(x))))

    best_x, best_value = None, np.inf
    for start in _STARTING_POINTS:
        fit = least_squares(residuals, np.asarray(start), bounds=_BOUNDS,
                            xtol=1e-12, ftol=1e-12)
        value = worst(fit.x)
        if value < best_value:
            best_x, best_value = fit.x, value

    refined = minimize(worst, best_x, method='Nelder-Mead',
                       bounds=list(zip(*_BOUNDS)),
                       options={'xatol': 1e-10, 'fatol': 1e-12,
                                'maxfev': 4000})
    if refined.fun < best_value:
        best_x, best_value = refined.x, float(refined.fun)

    return expand_weights(best_x), best_value, bool(refined.success)


def optimize_stencil_weights(G_samples: Sequence[float] = DEFAULT_G_SAMPLES,
                             angle_samples: Optional[np.ndarray] = None,
                             threads: int = 1) -> StencilWeightTable:
    """Minimax phase-velocity fit of the stencil weights per G sample

    Parameters
    ----------
    G_samples, optional
        points-per-wavelength samples within [3.8, 40]
    angle_samples, optional
        propagation directions (theta, phi), at least 32 covering the
        sphere octant; by default an 8 x 8 grid
    threads, optional
        worker processes used over the G samples, by default 1

    Returns
    -------
    StencilWeightTable
        weights and achieved errors

    Raises
    ------
    ValueError
        If the samples fall outside [3.8, 40] or too few angles are given
    """
    G_samples = np.sort(np.asarray(G_samples, dtype=float))
    if G_samples.size == 0 or G_samples[0] < G_MIN - 1e-12 \
            or G_samples[-1] > G_MAX + 1e-12:
        raise ValueError(
            f"G samples must lie in [{G_MIN}, {G_MAX}], got {G_samples}")

    angles = octant_angles() if angle_samples is None \
        else np.asarray(angle_samples, dtype=float)
    if angles.shape[0] < 32:
        raise ValueError(
            f"Need at least 32 propagation angles, got {angles.shape[0]}")

    arguments = [(float(G), angles) for G in G_samples]
    if threads > 1:
        with mp.Pool(threads) as pool:
            results: List = pool.starmap(_optimize_single, arguments)
    else:
        results = [_optimize_single(*args) for args in arguments]

    for G, (_, error, converged) in zip(G_samples, results):
        if not converged:
            logger.warning(
                f"Stencil weight fit did not converge at G={G}; keeping "
                f"the best weights found (max error {error:.3e})")
        else:
            logger.debug(f"Stencil weights at G={G}: max error {error:.3e}")

    return StencilWeightTable(
        G=G_samples, weights=np.stack([r[0] for r in results]),
        max_error=np.array([r[1] for r in results]))


@lru_cache(maxsize=1)
def default_weight_table() -> StencilWeightTable:
    """Optimized table over the default G samples, computed once per
    process
    """
    logger.info("Optimizing 27-point stencil weights")
    return optimize_stencil_weights(DEFAULT_G_SAMPLES)
