"""
Grid geometry and perfectly matched layer profiles
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass
from typing import Tuple

# Third-party core
import numpy as np

# Local
from ..logger import logger

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

MIN_PML_WIDTH = 8
PROFILE_ORDER = 3


@dataclass(frozen=True)
class GridGeometry:
    """Node layout shared by the operator and the coupling stencils

    Parameters
    ----------
    dims
        number of nodes (nx, ny, nz)
    spacing
        grid interval per axis, m
    origin
        coordinates of node (0, 0, 0), m
    free_surface
        whether the z = origin plane is a Dirichlet pressure-release plane
    """
    dims: Tuple[int, int, int]
    spacing: Tuple[float, float, float]
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    free_surface: bool = False

    @classmethod
    def from_model(cls, m, free_surface: bool = False) -> GridGeometry:
        return cls(dims=tuple(m.dims), spacing=tuple(m.spacing),
                   origin=tuple(m.origin), free_surface=free_surface)

    @property
    def n_dof(self) -> int:
        return int(np.prod(self.dims))

    def flat_index(self, ix, iy, iz):
        """Unknown number of node (ix, iy, iz); z runs fastest"""
        ny, nz = self.dims[1], self.dims[2]
        return (np.asarray(ix) * ny + np.asarray(iy)) * nz + np.asarray(iz)

    def node_coordinates(self) -> np.ndarray:
        """Coordinates of every unknown, shape (n_dof, 3)"""
        axes = [self.origin[a] + self.spacing[a] * np.arange(self.dims[a])
                for a in range(3)]
        mesh = np.meshgrid(*axes, indexing='ij')
        return np.column_stack([c.ravel() for c in mesh])


@dataclass(frozen=True)
class PmlConfig:
    """Absorbing layer by complex coordinate stretching

    Parameters
    ----------
    width
        layer thickness in cells on each absorbing face, 0 disables it.
        Widths between 1 and 7 cells are accepted with a warning: they keep
        small grids usable at the price of stronger reflections
    reflection
        theoretical normal-incidence reflection coefficient
    top
        absorb on the top face as well (six faces); only meaningful without
        a free surface
    """
    width: int = MIN_PML_WIDTH
    reflection: float = 1e-4
    top: bool = False

    def __post_init__(self):
        if self.width < 0:
            raise ValueError(f"PML width must be >= 0, got {self.width}")
        if not 0.0 < self.reflection < 1.0:
            raise ValueError(
                f"PML reflection must lie in (0, 1), got {self.reflection}")
        if 0 < self.width < MIN_PML_WIDTH:
            logger.warning(
                f"PML width {self.width} is below the recommended "
                f"{MIN_PML_WIDTH} cells")

    def widths(self, free_surface: bool) -> Tuple[int, ...]:
        """Cells per face: (x-, x+, y-, y+, z-, z+)"""
        top = self.width if (self.top and not free_surface) else 0
        return (self.width,) * 4 + (top, self.width)


def damping_profile(n: int, h: float, low: int, high: int,
                    velocity: float, reflection: float) -> np.ndarray:
    """Cubic damping gamma(x) (1/s) along one axis

    Parameters
    ----------
    n
        number of nodes along the axis
    h
        grid interval, m
    low, high
        layer thickness in cells at the start and end of the axis
    velocity
        reference wavespeed used to scale the damping, m/s
    reflection
        theoretical reflection coefficient

    Returns
    -------
    np.ndarray
        damping per node, zero in the interior
    """
    gamma = np.zeros(n)
    index = np.arange(n, dtype=float)
    for width, depth in ((low, (low - index)),
                         (high, index - (n - 1 - high))):
        if width <= 0:
            continue
        thickness = width * h
        gamma_max = ((PROFILE_ORDER + 1) * velocity * np.log(1.0 / reflection)
                     / (2.0 * thickness))
        ratio = np.clip(depth / width, 0.0, None)
        gamma += gamma_max * ratio ** PROFILE_ORDER
    return gamma


def stretching(n: int, h: float, low: int, high: int, omega: complex,
               velocity: float, reflection: float) -> np.ndarray:
    """Complex stretching factors s = 1 + i gamma / omega along one axis"""
    gamma = damping_profile(n, h, low, high, velocity, reflection)
    return 1.0 + 1j * gamma / omega
