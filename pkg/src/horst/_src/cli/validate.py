"""
Fast analytic checks of an installation
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from typing import Callable, Dict, List, Tuple

# Third-party core
import numpy as np
import pandas as pd

# Local
from ..discretize.grid import GridGeometry, PmlConfig
from ..discretize.hicks import hicks_coefficients
from ..discretize.stencil import default_weight_table, dispersion_error, \
    octant_angles
from ..fwi.dataset import Acquisition, FrequencyData
from ..fwi.objective import ModelingOptions, Objective, simulate
from ..logger import logger
from ..model.physics import brocher_density, grid_interval_for_frequency, \
    kolsky_futterman_velocity
from ..solver.factorization import factorize
from ..solver.solve import solve
from .bench import helmholtz_problem
from .survey import base_model

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

# (f in Hz, h in m) of the field-scale frequency ladder
LADDER = ((2.5, 150.0), (3.5, 100.0), (5.0, 75.0), (6.7, 56.0), (7.6, 50.0),
          (8.5, 45.0), (8.5, 45.0), (10.1, 37.5), (11.6, 32.5), (13.0, 30.0))


def check_dispersion() -> Tuple[float, float]:
    table = default_weight_table()
    error = dispersion_error(table.at(4.0), 4.0, octant_angles())
    return float(np.max(np.abs(error))), 0.01


def check_hicks_constant() -> Tuple[float, float]:
    grid = GridGeometry(dims=(20, 20, 20), spacing=(10.0,) * 3)
    stencil = hicks_coefficients((97.3, 101.9, 88.4), grid)
    return abs(float(np.sum(stencil.coefficients)) - 1.0), 1e-12


def check_brocher() -> Tuple[float, float]:
    # 1.5 km/s maps to 1.6351 g/cm3
    rho = float(brocher_density(np.array([1500.0]))[0])
    return abs(rho - 1635.07) / 1635.07, 1e-3


def check_attenuation() -> Tuple[float, float]:
    q, f, v0 = 50.0, 5.0, 2000.0
    c = complex(kolsky_futterman_velocity(v0, q, f, f_ref=f))
    wavelength = c.real / f
    decay = np.exp(-2.0 * np.pi * f * (1.0 / c).imag * wavelength)
    return abs(decay - np.exp(-np.pi / q)) / np.exp(-np.pi / q), 0.01


def check_ladder() -> Tuple[float, float]:
    errors = [abs(grid_interval_for_frequency(f, 1500.0, 4.0) - h) / h
              for f, h in LADDER]
    return float(max(errors)), 0.07


def check_residual(n: int = 12) -> Tuple[float, float]:
    A, _ = helmholtz_problem(n)
    fact = factorize(A, mode='FR', deterministic=True)
    rng = np.random.default_rng(0)
    b = rng.standard_normal(A.n_dof) + 1j * rng.standard_normal(A.n_dof)
    x, _ = solve(fact, b)
    residual = np.linalg.norm(A.matrix @ x[:, 0] - b)
    scale = np.linalg.norm(b) + abs(A.matrix).max() * np.linalg.norm(x)
    return float(residual / scale), 1e-12


def check_gradient(n: int = 12, step: float = 1.0) -> Tuple[float, float]:
    true = base_model((n, n, n), 25.0, v0=2000.0, v0_gradient=0.0)
    rng = np.random.default_rng(1)
    v0 = true.v0 * (1.0 + 0.02 * rng.standard_normal(true.dims))
    start = true.with_v0(v0)
    extent = true.extent
    sources = np.array([[0.5 * extent[0], 0.5 * extent[1], 50.0]])
    receivers = np.array([[x, y, 25.0] for x in (75.0, 150.0, 200.0)
                          for y in (75.0, 150.0, 200.0)])
    acquisition = Acquisition(sources, receivers)
    options = ModelingOptions(pml=PmlConfig(width=3), deterministic=True)
    frequency = 4.0

    observed = simulate(true, frequency, acquisition, options).d_unit
    objective = Objective(start, FrequencyData(frequency, observed),
                          acquisition, options, estimate_signatures=False)
    x = start.v0.ravel()
    _, g = objective(x)

    cell = np.ravel_multi_index((n // 2, n // 2, n // 2), true.dims)
    e = np.zeros_like(x)
    e[cell] = step
    fd = (objective.fun(x + e) - objective.fun(x - e)) / (2.0 * step)
    return abs(fd - g[cell]) / max(abs(fd), 1e-300), 1e-4


CHECKS: Dict[str, Callable[[], Tuple[float, float]]] = {
    'dispersion_g4': check_dispersion,
    'hicks_constant': check_hicks_constant,
    'brocher_density': check_brocher,
    'attenuation_decay': check_attenuation,
    'frequency_ladder': check_ladder,
    'fr_residual': check_residual,
    'gradient_fd': check_gradient,
}


def run_validation() -> pd.DataFrame:
    """Run every check and tabulate value, threshold and verdict"""
    rows: List[Dict] = []
    for name, check in CHECKS.items():
        try:
            value, threshold = check()
            passed = bool(value <= threshold)
        except Exception as error:
            logger.error(f"Check {name} raised {error!r}")
            value, threshold, passed = np.nan, np.nan, False
        rows.append({'check': name, 'value': value, 'threshold': threshold,
                     'passed': passed})
        logger.info(f"{name}: {value:.3e} (<= {threshold:.1e}) "
                    f"{'ok' if passed else 'FAILED'}")
    return pd.DataFrame(rows)
