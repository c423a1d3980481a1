"""
Misfit, adjoint gradient, l-BFGS and frequency continuation
"""
#                                                                       Modules
# =============================================================================

# Local
from ._src.fwi.dataset import (Acquisition, FreqDataset, FrequencyData,
                               GatherFormatError, MissingFrequencyError,
                               read_dataset, write_dataset)
from ._src.fwi.inversion import (InversionOptions, InversionState,
                                 invert_frequency, run_continuation)
from ._src.fwi.objective import (ModelingOptions, Objective,
                                 estimate_signature, gradient, misfit,
                                 simulate)
from ._src.fwi.optimizer import (LBFGS, DescentDirectionError,
                                 wolfe_line_search)
from ._src.fwi.tv import denoise_model, total_variation, tv_denoise

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

__all__ = [
    'Acquisition',
    'DescentDirectionError',
    'FreqDataset',
    'FrequencyData',
    'GatherFormatError',
    'InversionOptions',
    'InversionState',
    'LBFGS',
    'MissingFrequencyError',
    'ModelingOptions',
    'Objective',
    'denoise_model',
    'estimate_signature',
    'gradient',
    'invert_frequency',
    'misfit',
    'read_dataset',
    'run_continuation',
    'simulate',
    'total_variation',
    'tv_denoise',
    'wolfe_line_search',
    'write_dataset',
]
