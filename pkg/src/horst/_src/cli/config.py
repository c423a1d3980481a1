"""
Run configuration: structured omegaconf tree, loading, overrides and range
validation
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

# Third-party core
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

# Local
from ..discretize.grid import PmlConfig
from ..fwi.inversion import InversionOptions
from ..fwi.objective import ModelingOptions
from ..model.frequency_plan import FrequencyPlan
from ..solver.factorization import EPS_RANGE, PRECISIONS
from ..solver.front import MODES
from ..solver.solve import SolveOptions

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

THREADS_VARIABLE = 'HORST_THREADS'


class ConfigError(ValueError):
    """Raised for an invalid configuration; the message names the key"""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class PathsConfig:
    model: Optional[str] = None
    dataset: Optional[str] = None
    acquisition: Optional[str] = None
    weights: Optional[str] = None
    output_dir: str = 'output'


@dataclass
class PlanConfig:
    frequencies: List[float] = field(default_factory=lambda: [1.7])
    use_band: bool = False
    f_start: float = 1.7
    f_split: float = 8.55
    f_end: float = 13.0
    n_low: int = 13
    n_high: int = 5
    v_min: float = 1500.0
    ppw: float = 4.0
    spacing: Optional[float] = None
    max_iterations: int = 15
    cycles: int = 1


@dataclass
class SolverConfig:
    mode: str = 'FR'
    eps_blr: float = 1e-5
    precision: str = 'double'
    block_size: int = 32
    prune: bool = True
    permute_columns: bool = True
    refinement_steps: int = 0
    leaf_size: int = 128
    cluster_size: int = 256
    deterministic: bool = False


@dataclass
class PhysicsConfig:
    free_surface: bool = True
    pml_width: int = 8
    pml_reflection: float = 1e-4
    pml_top: bool = False
    f_ref: float = 10.0
    ppw_min: float = 3.8
    damping: float = 0.0


@dataclass
class InversionConfig:
    memory: int = 5
    max_iterations: int = 15
    tolerance: float = 1e-3
    v_min: float = 1400.0
    v_max: float = 6000.0
    initial_step_fraction: float = 0.01
    max_line_search: int = 20
    estimate_signatures: bool = True
    tv_lambda: float = 0.0


@dataclass
class AnomalyConfig:
    position: List[float] = field(default_factory=lambda: [0.0, 0.0, 0.0])
    radius: float = 100.0
    amplitude: float = 0.05


@dataclass
class SurveyConfig:
    dims: List[int] = field(default_factory=lambda: [48, 48, 24])
    spacing: float = 25.0
    v0: float = 2000.0
    v0_gradient: float = 0.5
    delta: float = 0.0
    epsilon: float = 0.0
    q: float = 0.0
    water_depth: int = 0
    scale: float = 0.125
    obn_pitch: float = 375.0
    shot_inline: float = 18.75
    shot_crossline: float = 37.5
    obn_depth: Optional[float] = None
    shot_depth: Optional[float] = None
    margin: float = 0.0
    anomalies: List[AnomalyConfig] = field(default_factory=list)


@dataclass
class ExportConfig:
    field_name: str = 'v0'
    axis: str = 'z'
    index: int = 0
    overlay: Optional[str] = None


@dataclass
class RunConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    plan: PlanConfig = field(default_factory=PlanConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    inversion: InversionConfig = field(default_factory=InversionConfig)
    survey: SurveyConfig = field(default_factory=SurveyConfig)
    export: ExportConfig = field(default_factory=ExportConfig)
    threads: int = 1
    log_level: int = 20

#                                                                       Loading
# =============================================================================


def _key(error: OmegaConfBaseException) -> str:
    return getattr(error, 'full_key', None) or '<config>'


def load_config(path: Optional[Path | str] = None,
                overrides: Sequence[str] = ()) -> DictConfig:
    """Structured run configuration from a JSON file and dotlist overrides

    Parameters
    ----------
    path, optional
        JSON (or YAML) file; defaults only when omitted
    overrides, optional
        ``key=value`` strings, e.g. ``solver.mode=BLR``

    Returns
    -------
    DictConfig
        typed configuration backed by :class:`RunConfig`

    Raises
    ------
    ConfigError
        On an unknown key or a value of the wrong type
    """
    config = OmegaConf.structured(RunConfig)
    try:
        if path is not None:
            path = Path(path)
            if not path.exists():
                raise ConfigError('--config', f"file {path} does not exist")
            config = OmegaConf.merge(config, OmegaConf.load(path))
        for item in overrides:
            if '=' not in item:
                raise ConfigError(item, "override must read key=value")
        if overrides:
            config = OmegaConf.merge(config,
                                     OmegaConf.from_dotlist(list(overrides)))
    except OmegaConfBaseException as error:
        raise ConfigError(_key(error), str(error).splitlines()[0]) from error
    return config


def resolve_threads(cli_value: Optional[int], config: DictConfig) -> int:
    """Thread count from the command line, then HORST_THREADS, then the
    configuration, then 1
    """
    if cli_value is not None:
        threads, key = cli_value, '--threads'
    elif os.environ.get(THREADS_VARIABLE):
        try:
            threads = int(os.environ[THREADS_VARIABLE])
        except ValueError as error:
            raise ConfigError(THREADS_VARIABLE,
                              "must be an integer") from error
        key = THREADS_VARIABLE
    else:
        threads, key = config.threads or 1, 'threads'
    if threads < 1:
        raise ConfigError(key, f"must be >= 1, got {threads}")
    return int(threads)

#                                                                    Validation
# =============================================================================


def _check(condition: bool, key: str, message: str):
    if not condition:
        raise ConfigError(key, message)


def validate(config: DictConfig, required_paths: Sequence[str] = ()):
    """Range checks of every knob, and existence of the input paths a
    subcommand needs

    Raises
    ------
    ConfigError
        Naming the first offending key
    """
    for name in required_paths:
        value = config.paths.get(name)
        _check(value is not None, f'paths.{name}', "is required")
        _check(Path(value).exists(), f'paths.{name}',
               f"file {value} does not exist")

    plan = config.plan
    _check(len(plan.frequencies) > 0 or plan.use_band, 'plan.frequencies',
           "needs at least one frequency")
    _check(all(f > 0.0 for f in plan.frequencies), 'plan.frequencies',
           "frequencies must be > 0")
    _check(plan.v_min > 0.0, 'plan.v_min', "must be > 0")
    _check(plan.ppw >= 3.0, 'plan.ppw', "must be >= 3")
    _check(plan.spacing is None or plan.spacing > 0.0, 'plan.spacing',
           "must be > 0")
    _check(plan.max_iterations >= 0, 'plan.max_iterations', "must be >= 0")
    _check(plan.cycles >= 1, 'plan.cycles', "must be >= 1")

    solver = config.solver
    _check(solver.mode in MODES, 'solver.mode', f"must be one of {MODES}")
    _check(EPS_RANGE[0] <= solver.eps_blr <= EPS_RANGE[1], 'solver.eps_blr',
           f"must lie in {list(EPS_RANGE)}")
    _check(solver.precision in PRECISIONS, 'solver.precision',
           f"must be one of {PRECISIONS}")
    _check(solver.block_size >= 1, 'solver.block_size', "must be >= 1")
    _check(solver.refinement_steps in (0, 1), 'solver.refinement_steps',
           "must be 0 or 1")
    _check(solver.leaf_size >= 1, 'solver.leaf_size', "must be >= 1")
    _check(solver.cluster_size >= 1, 'solver.cluster_size', "must be >= 1")

    physics = config.physics
    _check(physics.pml_width >= 0, 'physics.pml_width', "must be >= 0")
    _check(0.0 < physics.pml_reflection < 1.0, 'physics.pml_reflection',
           "must lie in (0, 1)")
    _check(physics.f_ref > 0.0, 'physics.f_ref', "must be > 0")
    _check(physics.ppw_min >= 3.0, 'physics.ppw_min', "must be >= 3")
    _check(physics.damping >= 0.0, 'physics.damping', "must be >= 0")

    inversion = config.inversion
    _check(inversion.memory >= 1, 'inversion.memory', "must be >= 1")
    _check(inversion.max_iterations >= 0, 'inversion.max_iterations',
           "must be >= 0")
    _check(inversion.tolerance >= 0.0, 'inversion.tolerance', "must be >= 0")
    _check(inversion.v_min > 0.0, 'inversion.v_min', "must be > 0")
    _check(inversion.v_max > inversion.v_min, 'inversion.v_max',
           "must exceed inversion.v_min")
    _check(inversion.initial_step_fraction > 0.0,
           'inversion.initial_step_fraction', "must be > 0")
    _check(inversion.max_line_search >= 1, 'inversion.max_line_search',
           "must be >= 1")
    _check(inversion.tv_lambda >= 0.0, 'inversion.tv_lambda', "must be >= 0")

    survey = config.survey
    _check(len(survey.dims) == 3 and min(survey.dims) >= 2, 'survey.dims',
           "needs three sizes >= 2")
    _check(survey.spacing > 0.0, 'survey.spacing', "must be > 0")
    _check(survey.v0 > 0.0, 'survey.v0', "must be > 0")
    _check(0.0 < survey.scale <= 1.0, 'survey.scale', "must lie in (0, 1]")
    for key in ('obn_pitch', 'shot_inline', 'shot_crossline'):
        _check(survey[key] > 0.0, f'survey.{key}', "must be > 0")
    _check(survey.q >= 0.0, 'survey.q', "must be >= 0 (0 is lossless)")

    export = config.export
    _check(export.axis in ('x', 'y', 'z'), 'export.axis',
           "must be x, y or z")
    _check(export.overlay in (None, 'gradient_magnitude', 'derivative_sum'),
           'export.overlay',
           "must be gradient_magnitude, derivative_sum or null")

    _check(config.threads >= 1, 'threads', "must be >= 1")
    _check(config.log_level in (10, 20, 30, 40, 50), 'log_level',
           "must be a logging level (10, 20, 30, 40, 50)")

#                                                                   Conversions
# =============================================================================


def frequency_plan(config: DictConfig) -> FrequencyPlan:
    """Frequency schedule; a fixed ``plan.spacing`` replaces the ladder rule"""
    plan = config.plan
    if plan.spacing is not None and not plan.use_band:
        frequencies = sorted(plan.frequencies)
        return FrequencyPlan(frequencies, (plan.spacing,) * len(frequencies),
                             (plan.max_iterations,) * len(frequencies),
                             plan.cycles)
    if plan.use_band:
        built = FrequencyPlan.from_band(
            plan.f_start, plan.f_split, plan.f_end, plan.n_low, plan.n_high,
            v_min=plan.v_min, ppw=plan.ppw,
            max_iterations=plan.max_iterations, cycles=plan.cycles)
    else:
        built = FrequencyPlan.from_frequencies(
            sorted(plan.frequencies), v_min=plan.v_min, ppw=plan.ppw,
            max_iterations=plan.max_iterations, cycles=plan.cycles,
            ppw_min=config.physics.ppw_min)
    if plan.spacing is not None:
        built = FrequencyPlan(built.frequencies,
                              (plan.spacing,) * len(built),
                              built.max_iterations, built.cycles)
    return built


def modeling_options(config: DictConfig, threads: int = 1,
                     deterministic: bool = False,
                     weights=None) -> ModelingOptions:
    solver, physics = config.solver, config.physics
    deterministic = deterministic or solver.deterministic
    return ModelingOptions(
        free_surface=physics.free_surface,
        pml=PmlConfig(width=physics.pml_width,
                      reflection=physics.pml_reflection,
                      top=physics.pml_top),
        damping=physics.damping, mode=solver.mode, eps_blr=solver.eps_blr,
        precision=solver.precision,
        solve=SolveOptions(block_size=solver.block_size,
                           prune=solver.prune,
                           permute_columns=solver.permute_columns,
                           refinement_steps=solver.refinement_steps),
        threads=threads, deterministic=deterministic,
        leaf_size=solver.leaf_size, cluster_size=solver.cluster_size,
        ppw_min=physics.ppw_min, f_ref=physics.f_ref, weights=weights)


def inversion_options(config: DictConfig) -> InversionOptions:
    inversion = config.inversion
    return InversionOptions(
        memory=inversion.memory, max_iterations=inversion.max_iterations,
        tolerance=inversion.tolerance, v_min=inversion.v_min,
        v_max=inversion.v_max,
        initial_step_fraction=inversion.initial_step_fraction,
        max_line_search=inversion.max_line_search,
        estimate_signatures=inversion.estimate_signatures)
