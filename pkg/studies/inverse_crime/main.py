"""
Main entrypoint of the inverse-crime experiment

A true model with Gaussian anomalies is built on a layer-cake background,
gathers are modelled on it and the background is inverted back towards it,
once per solver variant.

Functions
---------

main
    Main script to call
pre_processing
    Synthesize the survey and the observed gathers
process
    Invert the gathers with one solver variant
"""

#
#                                                                       Modules
# =============================================================================

# Standard
from pathlib import Path
from time import sleep

# Third-party
import hydra
import numpy as np
import pandas as pd
from omegaconf import DictConfig, OmegaConf

# Local
from horst import logger
from horst.cli import (RunConfig, SurveySpec, anomalies_from_config,
                       base_model, frequency_plan, inversion_options,
                       model_dataset, modeling_options, synthesize_survey,
                       validate)
from horst.fwi import FreqDataset, denoise_model, run_continuation
from horst.model import VtiModel, write_model

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

SHARED_DIR = 'survey'


def run_config(config: DictConfig, overrides: DictConfig = None
               ) -> DictConfig:
    """Typed run configuration of the experiment, with variant overrides"""
    merged = OmegaConf.merge(OmegaConf.structured(RunConfig), config.run)
    if overrides is not None:
        merged = OmegaConf.merge(merged, overrides)
    validate(merged)
    return merged


def add_noise(dataset: FreqDataset, level: float, seed: int) -> FreqDataset:
    if level <= 0.0:
        return dataset
    rng = np.random.default_rng(seed)
    for item in dataset:
        scale = level * np.sqrt(np.mean(np.abs(item.gather) ** 2))
        noise = rng.standard_normal(item.gather.shape) \
            + 1j * rng.standard_normal(item.gather.shape)
        item.gather = (item.gather + scale / np.sqrt(2.0) * noise).astype(
            np.complex64)
    return dataset

#                                                          Data-driven workflow
# =============================================================================


def pre_processing(config: DictConfig):
    run = run_config(config)
    survey = run.survey
    base = base_model(survey.dims, survey.spacing, v0=survey.v0,
                      v0_gradient=survey.v0_gradient, delta=survey.delta,
                      epsilon=survey.epsilon,
                      q=survey.q if survey.q > 0.0 else np.inf,
                      water_depth=survey.water_depth)
    spec = SurveySpec(scale=survey.scale, obn_pitch=survey.obn_pitch,
                      shot_inline=survey.shot_inline,
                      shot_crossline=survey.shot_crossline,
                      obn_depth=survey.obn_depth,
                      shot_depth=survey.shot_depth, margin=survey.margin,
                      anomalies=anomalies_from_config(survey.anomalies))
    true_model, start_model, acquisition = synthesize_survey(spec, base)

    dataset = model_dataset(true_model, acquisition, frequency_plan(run),
                            modeling_options(run, threads=run.threads))
    dataset = add_noise(dataset, config.data.noise, config.data.seed)

    shared = Path.cwd() / SHARED_DIR
    shared.mkdir(exist_ok=True)
    write_model(true_model, shared / 'model_true.fdm')
    write_model(start_model, shared / 'model_start.fdm')
    dataset.store(shared / 'data.fdg')
    logger.info(f"Stored the survey in {shared}")


def _wait_for(path: Path, max_tries: int = 500) -> Path:
    for _ in range(max_tries):
        if path.exists():
            return path
        sleep(10)
    raise FileNotFoundError(f"{path} did not appear after {max_tries} "
                            f"attempts")


def process(config: DictConfig, variant: DictConfig) -> pd.DataFrame:
    """Invert the shared gathers with one solver variant

    Parameters
    ----------
    config
        Hydra configuration file object
    variant
        name and configuration overrides of the variant

    Returns
    -------
    pd.DataFrame
        one row of model error and final misfit per stage
    """
    shared = Path.cwd() / SHARED_DIR
    dataset = FreqDataset.from_file(_wait_for(shared / 'data.fdg'))
    true_model = VtiModel.from_file(shared / 'model_true.fdm')
    start_model = VtiModel.from_file(shared / 'model_start.fdm')

    overrides = OmegaConf.create(
        {key: value for key, value in variant.items() if key != 'name'})
    run = run_config(config, overrides)
    output = Path.cwd() / variant.name
    output.mkdir(exist_ok=True)

    final, history = run_continuation(
        frequency_plan(run), dataset, start_model, inversion_options(run),
        modeling_options(run, threads=run.threads), output_dir=output)
    if run.inversion.tv_lambda > 0.0:
        final = denoise_model(final, run.inversion.tv_lambda)
    write_model(final, output / 'model_final.fdm')

    reference = np.linalg.norm(true_model.v0 - start_model.v0)
    rows = []
    for (cycle, stage), group in history.groupby(['cycle', 'stage']):
        rows.append({'variant': variant.name, 'cycle': cycle,
                     'stage': stage, 'freq_hz': group['freq_hz'].iloc[0],
                     'J_final': group['J'].iloc[-1],
                     'iterations': int(group['iter'].max())})
    metrics = pd.DataFrame(rows)
    metrics['model_error'] = np.linalg.norm(true_model.v0 - final.v0) \
        / reference
    metrics.to_csv(output / 'metrics.csv', index=False)
    logger.info(f"Variant {variant.name}: relative model error "
                f"{metrics['model_error'].iloc[-1]:.3f}")
    return metrics


@hydra.main(config_path=".", config_name="config")
def main(config):
    """Main script to call

    Parameters
    ----------
    config
        Configuration parameters defined in config.yaml
    """
    logger.setLevel(config.run.log_level)

    if config.hpc.jobid == 0:
        pre_processing(config)

    elif config.hpc.jobid == -1:  # Sequential
        pre_processing(config)
        pd.concat([process(config, variant) for variant in config.variants]
                  ).to_csv(Path.cwd() / 'metrics.csv', index=False)

    else:
        sleep(3*config.hpc.jobid)  # To asynchronize the jobs
        process(config, config.variants[config.hpc.jobid - 1])


if __name__ == "__main__":
    main()
