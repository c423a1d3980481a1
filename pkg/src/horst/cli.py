"""
Configuration, synthetic surveys, benchmarks and exports
"""
#                                                                       Modules
# =============================================================================

# Local
from ._src.cli.bench import bench_scaling
from ._src.cli.config import (ConfigError, RunConfig, frequency_plan,
                              inversion_options, load_config,
                              modeling_options, validate)
from ._src.cli.forward import dataset_roundtrip, forward_model, model_dataset
from ._src.cli.main import main
from ._src.cli.slices import export_slices
from ._src.cli.survey import (GaussianAnomaly, SurveySpec,
                              anomalies_from_config, base_model,
                              synthesize_survey)
from ._src.cli.validate import run_validation

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

__all__ = [
    'ConfigError',
    'GaussianAnomaly',
    'RunConfig',
    'SurveySpec',
    'anomalies_from_config',
    'base_model',
    'bench_scaling',
    'dataset_roundtrip',
    'export_slices',
    'forward_model',
    'frequency_plan',
    'inversion_options',
    'load_config',
    'main',
    'model_dataset',
    'modeling_options',
    'run_validation',
    'synthesize_survey',
    'validate',
]
