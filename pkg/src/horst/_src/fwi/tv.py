"""
Isotropic total-variation denoising of model grids
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from typing import Optional

# Third-party core
import numpy as np

# Local
from ..logger import logger
from ..model.vti_model import VtiModel

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

# Largest stable dual step for the 3D forward-difference gradient
DUAL_STEP = 1.0 / 12.0


def _gradient(u: np.ndarray) -> np.ndarray:
    g = np.zeros((u.ndim,) + u.shape, dtype=u.dtype)
    for axis in range(u.ndim):
        g[axis] = np.diff(u, axis=axis, append=np.take(u, [-1], axis=axis))
    return g


def _divergence(p: np.ndarray) -> np.ndarray:
    """Negative adjoint of ``_gradient``"""
    div = np.zeros(p.shape[1:], dtype=p.dtype)
    for axis in range(p.shape[0]):
        component = np.moveaxis(p[axis], axis, 0)
        d = np.empty_like(component)
        d[0] = component[0]
        d[1:-1] = component[1:-1] - component[:-2]
        d[-1] = -component[-2] if component.shape[0] > 1 else 0.0
        div += np.moveaxis(d, 0, axis)
    return div


def total_variation(u: np.ndarray) -> float:
    """Sum of the Euclidean norms of the forward-difference gradient"""
    g = _gradient(np.asarray(u, dtype=float))
    return float(np.sum(np.sqrt(np.sum(g ** 2, axis=0))))


def tv_objective(u: np.ndarray, f: np.ndarray, weight: float) -> float:
    return 0.5 * float(np.sum((u - f) ** 2)) + weight * total_variation(u)


def tv_denoise(values: np.ndarray, weight: float,
               max_iterations: int = 100,
               tolerance: float = 1e-6) -> np.ndarray:
    """Minimize 0.5 |u - values|^2 + weight TV(u) by dual projection

    Parameters
    ----------
    values
        grid to denoise, any dimension
    weight
        regularization weight, >= 0
    max_iterations, optional
        dual iterations, by default 100
    tolerance, optional
        relative duality gap to stop at, by default 1e-6

    Returns
    -------
    np.ndarray
        denoised grid
    """
    if weight < 0.0:
        raise ValueError(f"TV weight must be >= 0, got {weight}")
    f = np.asarray(values, dtype=float)
    if weight == 0.0 or f.size == 0:
        return f.copy()

    p = np.zeros((f.ndim,) + f.shape)
    u = f.copy()
    for iteration in range(max_iterations):
        g = _gradient(_divergence(p) - f / weight)
        norm = np.sqrt(np.sum(g ** 2, axis=0))
        p = (p + DUAL_STEP * g) / (1.0 + DUAL_STEP * norm)

        u = f - weight * _divergence(p)
        primal = tv_objective(u, f, weight)
        dual = 0.5 * float(np.sum(f ** 2) - np.sum(u ** 2))
        if primal - dual <= tolerance * max(abs(primal), 1e-300):
            break

    logger.debug(f"TV denoising stopped after {iteration + 1} iterations, "
                 f"gap {primal - dual:.3e}")
    return u


def denoise_model(m: VtiModel, weight: float,
                  max_iterations: int = 100,
                  tolerance: Optional[float] = 1e-6) -> VtiModel:
    """TV-denoised V0 below the seabed; the water column is left as is"""
    v0 = tv_denoise(m.v0, weight, max_iterations, tolerance)
    return m.with_v0(np.where(m.water_mask, m.v0, v0))
