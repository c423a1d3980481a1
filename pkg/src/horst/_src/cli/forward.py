"""
Forward modelling of monochromatic gathers
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Optional, Sequence

# Third-party core
import numpy as np

# Local
from ..discretize.stencil import StencilWeightTable
from ..fwi.dataset import (Acquisition, FreqDataset, FrequencyData,
                           read_dataset, write_dataset)
from ..fwi.objective import ModelingOptions, simulate
from ..logger import logger
from ..model.frequency_plan import FrequencyPlan
from ..model.resample import resample_model
from ..model.vti_model import VtiModel
from .config import frequency_plan, modeling_options

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================


def model_dataset(m: VtiModel, acquisition: Acquisition, plan: FrequencyPlan,
                  options: Optional[ModelingOptions] = None,
                  signatures: Optional[Sequence[complex]] = None
                  ) -> FreqDataset:
    """Gathers of a model at every frequency of a plan (first cycle only)

    Parameters
    ----------
    m
        subsurface model, resampled to each stage's grid interval
    acquisition
        sources and receivers
    plan
        frequencies and grid intervals
    options, optional
        modelling settings
    signatures, optional
        complex source signatures, unit by default

    Returns
    -------
    FreqDataset
        one gather per plan frequency
    """
    options = options if options is not None else ModelingOptions()
    signatures = np.ones(acquisition.n_src, dtype=complex) \
        if signatures is None else np.asarray(signatures, dtype=complex)

    dataset = FreqDataset(acquisition=acquisition)
    for frequency, spacing in zip(plan.frequencies, plan.spacings):
        stage_model = resample_model(m, spacing)
        simulation = simulate(stage_model, frequency, acquisition, options)
        gather = signatures[:, None] * simulation.d_unit
        dataset.add(FrequencyData(frequency, gather,
                                  signatures=signatures))
        stats = simulation.factorization.stats
        logger.info(
            f"Modelled {frequency} Hz on {stage_model.dims} nodes: "
            f"{acquisition.n_src} sources, factorization "
            f"{stats.t_facto_s:.2f} s, solve "
            f"{simulation.solve_stats.t_solve_s:.2f} s")
    return dataset


def forward_model(config, threads: int = 1, deterministic: bool = False,
                  weights: Optional[StencilWeightTable] = None
                  ) -> FreqDataset:
    """Model the gathers described by a run configuration and write them

    The model comes from ``paths.model`` and the acquisition from
    ``paths.acquisition``; the gathers go to ``paths.dataset``, or
    ``<output_dir>/data.fdg`` when unset. ``weights`` must be the table the
    inversion will use.

    Returns
    -------
    FreqDataset
        modelled gathers
    """
    m = VtiModel.from_file(config.paths.model)
    acquisition = Acquisition.from_csv(config.paths.acquisition)
    dataset = model_dataset(
        m, acquisition, frequency_plan(config),
        modeling_options(config, threads, deterministic, weights))

    target = config.paths.dataset or Path(config.paths.output_dir) / \
        'data.fdg'
    dataset.store(target)
    logger.info(f"Wrote {len(dataset)} gathers to {target}")
    return dataset


def dataset_roundtrip(dataset: FreqDataset,
                      path: Optional[Path | str] = None) -> FreqDataset:
    """Write a dataset to a gather file and read it back

    Parameters
    ----------
    dataset
        gathers to write
    path, optional
        gather file, a temporary file when omitted

    Returns
    -------
    FreqDataset
        the dataset as decoded from disk
    """
    if path is not None:
        return read_dataset(write_dataset(dataset, path))
    with TemporaryDirectory() as directory:
        return read_dataset(write_dataset(dataset,
                                          Path(directory) / 'data.fdg'))
