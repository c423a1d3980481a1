"""
Subsurface models, frequency plans and the model file format
"""
#                                                                       Modules
# =============================================================================

# Local
from ._src.model._io import (ModelFormatError, ModelStore, read_model,
                             write_model)
from ._src.model.frequency_plan import FrequencyPlan, Stage
from ._src.model.physics import (brocher_density,
                                 grid_interval_for_frequency,
                                 kolsky_futterman_velocity)
from ._src.model.resample import resample_model
from ._src.model.vti_model import InputDomainError, VtiModel

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

__all__ = [
    'FrequencyPlan',
    'InputDomainError',
    'ModelFormatError',
    'ModelStore',
    'Stage',
    'VtiModel',
    'brocher_density',
    'grid_interval_for_frequency',
    'kolsky_futterman_velocity',
    'read_model',
    'resample_model',
    'write_model',
]
