"""
Solver scaling benchmark on cubic Helmholtz problems
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

# Third-party core
import numpy as np
import pandas as pd

# Local
from .._io import append_csv
from ..discretize.grid import PmlConfig
from ..discretize.hicks import build_rhs
from ..discretize.operator import assemble_operator
from ..logger import logger
from ..model.vti_model import VtiModel
from ..solver.factorization import STATS_COLUMNS, factorize
from ..solver.solve import SolveOptions, solve

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

BENCH_VELOCITY = 2000.0
BENCH_SPACING = 25.0
BENCH_PPW = 4.0
BENCH_NRHS = 64


def helmholtz_problem(n: int, pml_width: int = 8,
                      ppw: float = BENCH_PPW,
                      velocity: float = BENCH_VELOCITY,
                      spacing: float = BENCH_SPACING):
    """Homogeneous n^3 operator sampled at ``ppw`` points per wavelength

    Returns
    -------
    Tuple[ImpedanceMatrix, float]
        operator and its frequency in Hz
    """
    m = VtiModel.homogeneous((n, n, n), spacing, v0=velocity)
    frequency = velocity / (ppw * spacing)
    A = assemble_operator(m, 2.0 * np.pi * frequency,
                          pml=PmlConfig(width=pml_width),
                          free_surface=False)
    return A, frequency


def clustered_sources(n: int, count: int = BENCH_NRHS,
                      spacing: float = BENCH_SPACING,
                      seed: int = 0) -> np.ndarray:
    """Positions drawn in the first octant of an n^3 grid"""
    rng = np.random.default_rng(seed)
    low = 0.125 * (n - 1) * spacing
    high = 0.5 * (n - 1) * spacing
    return rng.uniform(low, high, size=(count, 3))


def fit_exponent(n: Sequence[float], values: Sequence[float]) -> float:
    """Slope of log(values) against log(n)"""
    n, values = np.asarray(n, dtype=float), np.asarray(values, dtype=float)
    keep = np.isfinite(values) & (values > 0.0)
    if keep.sum() < 2:
        return np.nan
    return float(np.polyfit(np.log(n[keep]), np.log(values[keep]), 1)[0])


def bench_scaling(n_list: Iterable[int], mode_list: Iterable[str] = ('FR',),
                  eps_list: Iterable[float] = (1e-5,),
                  precision: str = 'double', threads: int = 1,
                  deterministic: bool = False, nrhs: int = BENCH_NRHS,
                  output: Optional[Path | str] = None
                  ) -> Tuple[pd.DataFrame, Dict[Tuple[str, float],
                                                Dict[str, float]]]:
    """Factorize and solve cubic Helmholtz problems of increasing size

    Parameters
    ----------
    n_list
        grid sizes per axis
    mode_list, optional
        factorization modes, by default FR only
    eps_list, optional
        low-rank thresholds, ignored by FR
    precision, optional
        working precision, by default double
    threads, deterministic, optional
        scheduling
    nrhs, optional
        clustered right-hand sides solved per problem, by default 64
    output, optional
        CSV that rows are appended to as they are produced

    Returns
    -------
    Tuple[pd.DataFrame, Dict]
        statistics rows and, per (mode, eps), the fitted exponents of
        'flops_facto' and 'mem_factors_bytes' against n
    """
    mode_list, eps_list = tuple(mode_list), tuple(eps_list)
    rows = []
    for n in n_list:
        A, frequency = helmholtz_problem(n)
        F = build_rhs(clustered_sources(n, nrhs), np.ones(nrhs), A.grid)
        for mode in mode_list:
            for eps in (eps_list if mode != 'FR' else (0.0,)):
                try:
                    fact = factorize(A, mode=mode, eps_blr=eps or 1e-5,
                                     precision=precision, threads=threads,
                                     deterministic=deterministic)
                    _, stats = solve(fact, F, SolveOptions(
                        threads=threads, deterministic=deterministic))
                    row = fact.stats.to_row(
                        freq_hz=frequency, h_m=A.spacing[0],
                        t_solve_s=stats.t_solve_s, nrhs=nrhs,
                        flops_solve=stats.flops_solve)
                except MemoryError:
                    logger.warning(f"Out of memory for n={n}, {mode}, "
                                   f"eps={eps}; skipping the row")
                    row = {key: np.nan for key in STATS_COLUMNS}
                    row.update(freq_hz=frequency, h_m=A.spacing[0],
                               ndof=A.n_dof, mode=mode, eps_blr=eps,
                               nrhs=nrhs)
                rows.append(row)
                if output is not None:
                    append_csv(pd.DataFrame([row],
                                            columns=list(STATS_COLUMNS)),
                               output)
                logger.info(f"Benchmarked n={n} {mode} eps={eps}")

    frame = pd.DataFrame(rows, columns=list(STATS_COLUMNS))
    exponents = {}
    for (mode, eps), group in frame.groupby(['mode', 'eps_blr'], sort=False):
        exponents[(mode, eps)] = {
            key: fit_exponent(np.cbrt(group['ndof']), group[key])
            for key in ('flops_facto', 'mem_factors_bytes')}
    return frame, exponents
