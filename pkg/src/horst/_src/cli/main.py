"""
Command-line entry point ``horst``
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Third-party core
import pandas as pd
from omegaconf import DictConfig

# Local
from ..discretize.stencil import StencilWeightTable, optimize_stencil_weights
from ..fwi.dataset import FreqDataset
from ..fwi.inversion import run_continuation
from ..fwi.tv import denoise_model
from ..logger import attach_file_handler, logger
from ..model._io import write_model
from ..model.vti_model import VtiModel
from .bench import bench_scaling
from .config import (ConfigError, frequency_plan, inversion_options,
                     load_config, modeling_options, resolve_threads,
                     validate)
from .forward import forward_model, model_dataset
from .slices import export_slices
from .survey import (SurveySpec, anomalies_from_config, base_model,
                     synthesize_survey)
from .validate import run_validation

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='horst',
        description='Frequency-domain full waveform inversion with a '
                    'multifrontal direct solver')
    commands = parser.add_subparsers(dest='command', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=Path, default=None,
                        help='JSON run configuration')
    common.add_argument('--set', dest='overrides', action='append',
                        default=[], metavar='KEY=VALUE',
                        help='override a configuration key')
    common.add_argument('--threads', type=int, default=None,
                        help='worker threads (falls back to HORST_THREADS)')
    common.add_argument('--deterministic', action='store_true',
                        help='serial schedules, bit-identical output')
    common.add_argument('--log-level', type=int, default=None,
                        help='logging level of the horst logger')

    commands.add_parser('weights', parents=[common],
                        help='optimize the stencil weight table')
    commands.add_parser('forward', parents=[common],
                        help='model gathers for a model and acquisition')
    commands.add_parser('invert', parents=[common],
                        help='frequency-continuation inversion of V0')

    bench = commands.add_parser('bench', parents=[common],
                                help='solver scaling benchmark')
    bench.add_argument('--n', type=int, nargs='+', default=[16, 24, 32],
                       help='grid sizes per axis')
    bench.add_argument('--modes', nargs='+', default=['FR', 'BLR', 'MP-BLR'])
    bench.add_argument('--eps', type=float, nargs='+', default=[1e-5])

    survey = commands.add_parser('survey', parents=[common],
                                 help='synthesize an inverse-crime survey')
    survey.add_argument('--no-data', action='store_true',
                        help='only write the models and the acquisition')

    commands.add_parser('slice', parents=[common],
                        help='export a model plane as image and CSV')
    commands.add_parser('validate', parents=[common],
                        help='run the analytic checks')
    return parser

#                                                                   Subcommands
# =============================================================================


def _weights_table(config: DictConfig) -> Optional[StencilWeightTable]:
    path = config.paths.weights
    if path is not None and Path(path).exists():
        return StencilWeightTable.from_csv(path)
    return None


def run_weights(config: DictConfig, output: Path, threads: int,
                deterministic: bool) -> int:
    table = optimize_stencil_weights(threads=1 if deterministic else threads)
    target = config.paths.weights or output / 'weights.csv'
    table.to_csv(target)
    logger.info(f"Wrote stencil weights to {target}")
    return EXIT_OK


def run_forward(config: DictConfig, output: Path, threads: int,
                deterministic: bool) -> int:
    validate(config, required_paths=('model', 'acquisition'))
    forward_model(config, threads, deterministic, _weights_table(config))
    return EXIT_OK


def run_invert(config: DictConfig, output: Path, threads: int,
               deterministic: bool) -> int:
    validate(config, required_paths=('model', 'dataset'))
    m0 = VtiModel.from_file(config.paths.model)
    dataset = FreqDataset.from_file(config.paths.dataset)
    modeling = modeling_options(config, threads, deterministic,
                                _weights_table(config))

    final, history = run_continuation(
        frequency_plan(config), dataset, m0, inversion_options(config),
        modeling, output_dir=output)

    if config.inversion.tv_lambda > 0.0:
        final = denoise_model(final, config.inversion.tv_lambda)
    write_model(final, output / 'model_final.fdm')
    logger.info(f"Inversion finished after {len(history)} history rows")
    return EXIT_OK


def run_bench(config: DictConfig, output: Path, threads: int,
              deterministic: bool, args: argparse.Namespace) -> int:
    frame, exponents = bench_scaling(
        args.n, args.modes, args.eps, precision=config.solver.precision,
        threads=threads, deterministic=deterministic,
        output=output / 'stats.csv')
    rows = [{'mode': mode, 'eps_blr': eps, **fits}
            for (mode, eps), fits in exponents.items()]
    pd.DataFrame(rows).to_csv(output / 'exponents.csv', index=False)
    print(frame.to_string(index=False))
    return EXIT_OK


def run_survey(config: DictConfig, output: Path, threads: int,
               deterministic: bool, args: argparse.Namespace) -> int:
    survey = config.survey
    base = base_model(survey.dims, survey.spacing, v0=survey.v0,
                      v0_gradient=survey.v0_gradient, delta=survey.delta,
                      epsilon=survey.epsilon,
                      q=survey.q if survey.q > 0.0 else float('inf'),
                      water_depth=survey.water_depth)
    spec = SurveySpec(scale=survey.scale, obn_pitch=survey.obn_pitch,
                      shot_inline=survey.shot_inline,
                      shot_crossline=survey.shot_crossline,
                      obn_depth=survey.obn_depth,
                      shot_depth=survey.shot_depth, margin=survey.margin,
                      anomalies=anomalies_from_config(survey.anomalies))
    true_model, start_model, acquisition = synthesize_survey(spec, base)

    write_model(true_model, output / 'model_true.fdm')
    write_model(start_model, output / 'model_start.fdm')
    acquisition.to_csv(output / 'acquisition.csv')

    if not args.no_data:
        dataset = model_dataset(
            true_model, acquisition, frequency_plan(config),
            modeling_options(config, threads, deterministic,
                             _weights_table(config)))
        dataset.store(output / 'data.fdg')
    return EXIT_OK


def run_slice(config: DictConfig, output: Path, threads: int,
              deterministic: bool) -> int:
    validate(config, required_paths=('model',))
    export = config.export
    export_slices(VtiModel.from_file(config.paths.model), output,
                  field_name=export.field_name, axis=export.axis,
                  index=export.index, overlay=export.overlay)
    return EXIT_OK


def run_validate(config: DictConfig, output: Path, threads: int,
                 deterministic: bool) -> int:
    report = run_validation()
    report.to_csv(output / 'validation.csv', index=False)
    print(report.to_string(index=False))
    return EXIT_OK if report['passed'].all() else EXIT_NUMERIC

#                                                                          Main
# =============================================================================


def main(argv: Optional[List[str]] = None) -> int:
    """Parse the command line, run one subcommand and return its exit code

    Exit codes: 0 success, 2 configuration error, 3 numeric failure,
    4 I/O or format error.
    """
    args = build_parser().parse_args(argv)
    handler = None
    try:
        config = load_config(args.config, args.overrides)
        validate(config)
        logger.setLevel(args.log_level if args.log_level is not None
                        else config.log_level)
        threads = resolve_threads(args.threads, config)
        deterministic = args.deterministic or config.solver.deterministic

        output = Path(config.paths.output_dir)
        output.mkdir(parents=True, exist_ok=True)
        handler = attach_file_handler(output / 'horst.log',
                                      level=logger.level)
        logger.info(f"horst {args.command} with {threads} threads "
                    f"(deterministic={deterministic})")

        if args.command in ('bench', 'survey'):
            runner = {'bench': run_bench, 'survey': run_survey}[args.command]
            return runner(config, output, threads, deterministic, args)
        runner = {'weights': run_weights, 'forward': run_forward,
                  'invert': run_invert, 'slice': run_slice,
                  'validate': run_validate}[args.command]
        return runner(config, output, threads, deterministic)

    except ConfigError as error:
        logger.error(f"Configuration error: {error}")
        return EXIT_CONFIG
    except ArithmeticError as error:
        logger.error(f"Numerical failure: {error}")
        return EXIT_NUMERIC
    except (IOError, OSError) as error:
        logger.error(f"I/O error: {error}")
        return EXIT_IO
    except (ValueError, KeyError) as error:
        logger.error(f"Invalid input: {error}")
        return EXIT_CONFIG
    finally:
        if handler is not None:
            logger.removeHandler(handler)
            handler.close()


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
