"""
Mono-frequency l-BFGS inversion of V0 and the frequency continuation driving
it
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from pathlib import Path
from time import perf_counter
from typing import Dict, List, Optional, Tuple

# Third-party core
import numpy as np
import pandas as pd

# Local
from .._io import append_csv
from ..logger import logger
from ..model._io import write_model
from ..model.frequency_plan import FrequencyPlan
from ..model.resample import resample_model
from ..model.vti_model import VtiModel
from ..solver.front import SingularFrontError
from .dataset import Acquisition, FreqDataset, FrequencyData
from .objective import ModelingOptions, Objective
from .optimizer import LBFGS, DescentDirectionError, wolfe_line_search

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

HISTORY_COLUMNS = ('cycle', 'stage', 'freq_hz', 'iter', 'J', 'grad_norm',
                   'step_len', 'n_facto', 'wall_s')

# Misfit below this fraction of the data energy counts as a perfect fit
NOISE_FLOOR = 1e-10


@dataclass(frozen=True)
class InversionOptions:
    """Knobs of the mono-frequency inversions

    Parameters
    ----------
    memory
        number of l-BFGS pairs
    max_iterations
        iteration cap per stage when the plan gives none
    tolerance
        stop when the relative misfit decrease of an iteration drops below
    v_min, v_max
        bounds on V0, m/s
    initial_step_fraction
        first step relative to the largest V0
    max_line_search
        objective evaluations per line search
    estimate_signatures
        alternate source-signature estimation with the model updates
    """
    memory: int = 5
    max_iterations: int = 15
    tolerance: float = 1e-3
    v_min: float = 1400.0
    v_max: float = 6000.0
    initial_step_fraction: float = 0.01
    max_line_search: int = 20
    estimate_signatures: bool = True

    def __post_init__(self):
        if self.memory < 1:
            raise ValueError(f"memory must be >= 1, got {self.memory}")
        if self.max_iterations < 0:
            raise ValueError(
                f"max_iterations must be >= 0, got {self.max_iterations}")
        if not 0.0 < self.v_min < self.v_max:
            raise ValueError(
                f"Need 0 < v_min < v_max, got {self.v_min}, {self.v_max}")


@dataclass
class InversionState:
    """Progress of a continuation

    Parameters
    ----------
    model
        current model
    optimizer
        l-BFGS memory of the running stage
    history
        one row per iteration, see HISTORY_COLUMNS
    stage, cycle
        position in the frequency plan
    """
    model: VtiModel
    optimizer: LBFGS = field(default_factory=LBFGS)
    history: List[Dict] = field(default_factory=list)
    stage: int = 0
    cycle: int = 0
    aborted: bool = False

    @property
    def misfits(self) -> List[float]:
        return [row['J'] for row in self.history]

    def history_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.history, columns=list(HISTORY_COLUMNS))

    def final_misfit(self, cycle: int, stage: int) -> float:
        rows = [row['J'] for row in self.history
                if row['cycle'] == cycle and row['stage'] == stage]
        return rows[-1] if rows else np.nan


class BoundProjection:
    """Clamp V0 to the velocity bounds and freeze the water column

    The objective seen by the optimizer is ``J(P(x))``. Its gradient is the
    model gradient with the entries of frozen cells zeroed, together with
    those of cells held at a bound that the gradient pushes outwards.

    Parameters
    ----------
    m
        stage model supplying the water column
    options
        inversion knobs supplying the bounds
    """

    def __init__(self, m: VtiModel, options: InversionOptions):
        self.v_min = options.v_min
        self.v_max = options.v_max
        self.water = m.water_mask.ravel()
        self.frozen = m.v0.ravel()[self.water].copy()

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.clip(x, self.v_min, self.v_max)
        x[self.water] = self.frozen
        return x

    def active(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Cells whose V0 cannot move along ``-g`` from ``x``"""
        lower = (x < self.v_min) | ((x <= self.v_min) & (g >= 0.0))
        upper = (x > self.v_max) | ((x >= self.v_max) & (g <= 0.0))
        return self.water | lower | upper

    def gradient(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        return np.where(self.active(x, g), 0.0, g)


def invert_frequency(frequency: float, dataset: FreqDataset,
                     state: InversionState,
                     options: Optional[InversionOptions] = None,
                     modeling: Optional[ModelingOptions] = None,
                     max_iterations: Optional[int] = None,
                     history_path: Optional[Path] = None) -> InversionState:
    """Mono-frequency inversion of V0 with l-BFGS and a Wolfe line search

    The model must already sit on the grid of the stage. Density, Q, delta,
    epsilon and the water column are never changed.

    Parameters
    ----------
    frequency
        Hz
    dataset
        observed gathers
    state
        continuation state, updated in place
    options, optional
        inversion knobs
    modeling, optional
        modelling settings
    max_iterations, optional
        iteration cap, by default ``options.max_iterations``
    history_path, optional
        CSV the iteration rows are appended to

    Returns
    -------
    InversionState
        the updated state
    """
    options = options if options is not None else InversionOptions()
    modeling = modeling if modeling is not None else ModelingOptions()
    max_iterations = options.max_iterations if max_iterations is None \
        else max_iterations
    data: FrequencyData = dataset.at(frequency)
    start = perf_counter()

    m = state.model
    project = BoundProjection(m, options)
    objective = Objective(m, data, dataset.acquisition, modeling,
                          options.estimate_signatures)

    def fun(x):
        return objective.fun(project(x))

    def grad(x):
        return project.gradient(x, objective.grad(project(x)))

    optimizer = LBFGS(options.memory, options.initial_step_fraction)
    state.optimizer = optimizer
    state.aborted = False

    def record(iteration: int, J: float, g: np.ndarray, step: float):
        row = {'cycle': state.cycle, 'stage': state.stage,
               'freq_hz': frequency, 'iter': iteration, 'J': J,
               'grad_norm': float(np.linalg.norm(g)), 'step_len': step,
               'n_facto': objective.n_facto,
               'wall_s': perf_counter() - start}
        state.history.append(row)
        if history_path is not None:
            append_csv(pd.DataFrame([row], columns=list(HISTORY_COLUMNS)),
                       history_path)

    x = project(m.v0.ravel().astype(float))
    try:
        f, g = objective(x)
        g = project.gradient(x, g)
    except SingularFrontError as error:
        logger.error(f"Stage at {frequency} Hz aborted: {error}")
        state.aborted = True
        return state

    record(0, f, g, 0.0)
    floor = NOISE_FLOOR * 0.5 * float(np.sum(np.abs(data.gather[data.mask])
                                             ** 2))

    for iteration in range(1, max_iterations + 1):
        if f <= floor:
            logger.info(f"{frequency} Hz: data fitted, stopping")
            break
        if not np.any(g):
            logger.info(f"{frequency} Hz: no feasible descent, stopping")
            break

        frozen = project.active(x, g)
        direction = np.where(frozen, 0.0, optimizer.direction(g, x))
        if not np.dot(direction, g) < 0.0:
            optimizer.reset()
            direction = np.where(frozen, 0.0, optimizer.direction(g, x))

        try:
            search = wolfe_line_search(fun, grad, x, direction, f0=f, g0=g,
                                       max_evaluations=options.max_line_search)
            x_new = project(search.x)
            f_new, g_new = objective(x_new)
            g_new = project.gradient(x_new, g_new)
        except DescentDirectionError as error:
            logger.warning(f"{frequency} Hz: {error}; stopping the stage")
            break
        except SingularFrontError as error:
            logger.error(f"Stage at {frequency} Hz aborted: {error}")
            state.aborted = True
            break

        if not f_new < f:
            logger.warning(
                f"{frequency} Hz, iteration {iteration}: step does not "
                f"decrease the misfit ({f_new:.6e} >= {f:.6e}); stopping")
            break

        optimizer.update(x_new - x, g_new - g)
        decrease = (f - f_new) / f
        x, f, g = x_new, f_new, g_new
        state.model = m.with_v0(x)
        record(iteration, f, g, search.step)
        logger.info(f"{frequency} Hz, iteration {iteration}: J={f:.6e} "
                    f"(-{100 * decrease:.2f}%)")

        if decrease < options.tolerance:
            break

    return state


def _check_plan(plan: FrequencyPlan, dataset: FreqDataset):
    missing = [f for f in plan.frequencies if not dataset.has(f)]
    if missing:
        # raised through the dataset so the error type is the dataset's own
        dataset.at(missing[0])


def _stage_model(current: VtiModel, base: VtiModel, spacing: float
                 ) -> VtiModel:
    """V0 of ``current`` on the grid of ``base``, passive fields from
    ``base``
    """
    if current.spacing == base.spacing and current.dims == base.dims:
        v0 = current.v0
    else:
        v0 = resample_model(current, spacing).v0
    if v0.shape != base.dims:
        raise ValueError(
            f"Resampled V0 has shape {v0.shape}, stage grid {base.dims}")
    return base.with_v0(np.where(base.water_mask, base.v0, v0))


def run_continuation(plan: FrequencyPlan, dataset: FreqDataset,
                     m0: VtiModel,
                     options: Optional[InversionOptions] = None,
                     modeling: Optional[ModelingOptions] = None,
                     output_dir: Optional[Path | str] = None
                     ) -> Tuple[VtiModel, pd.DataFrame]:
    """Invert the frequencies of a plan from low to high, cycle after cycle

    Parameters
    ----------
    plan
        frequency schedule
    dataset
        observed gathers, holding every plan frequency
    m0
        starting model; supplies the passive fields of every stage
    options, optional
        inversion knobs
    modeling, optional
        modelling settings
    output_dir, optional
        directory for per-stage models ``model_c{cycle}_s{stage}.fdm`` and
        ``history.csv``

    Returns
    -------
    Tuple[VtiModel, pd.DataFrame]
        final model and the iteration history

    Raises
    ------
    MissingFrequencyError
        If a plan frequency is absent from the dataset
    """
    _check_plan(plan, dataset)
    output_dir = Path(output_dir) if output_dir is not None else None
    history_path = output_dir / 'history.csv' if output_dir else None

    bases: Dict[float, VtiModel] = {}
    state = InversionState(model=m0)

    for stage in plan.stages():
        if stage.spacing not in bases:
            bases[stage.spacing] = resample_model(m0, stage.spacing)
        state.model = _stage_model(state.model, bases[stage.spacing],
                                   stage.spacing)
        state.cycle, state.stage = stage.cycle, stage.index

        logger.info(f"Cycle {stage.cycle}, stage {stage.index}: "
                    f"{stage.frequency} Hz on a {state.model.dims} grid "
                    f"(h={stage.spacing} m)")
        invert_frequency(stage.frequency, dataset, state, options, modeling,
                         max_iterations=stage.max_iterations,
                         history_path=history_path)

        if output_dir is not None:
            write_model(state.model, output_dir /
                        f"model_c{stage.cycle}_s{stage.index}.fdm")

    return state.model, state.history_frame()
