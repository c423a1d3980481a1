"""
Stencil weights, absorbing layers, point coupling and operator assembly
"""
#                                                                       Modules
# =============================================================================

# Local
from ._src.discretize.grid import GridGeometry, PmlConfig
from ._src.discretize.hicks import (OutOfGridError, build_rhs,
                                    coupling_matrix, hicks_coefficients,
                                    sample_receivers)
from ._src.discretize.operator import (ImpedanceMatrix,
                                       PointsPerWavelengthError,
                                       assemble_operator)
from ._src.discretize.stencil import (StencilWeights, StencilWeightTable,
                                      default_weight_table, dispersion_error,
                                      optimize_stencil_weights)

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

__all__ = [
    'GridGeometry',
    'ImpedanceMatrix',
    'OutOfGridError',
    'PmlConfig',
    'PointsPerWavelengthError',
    'StencilWeightTable',
    'StencilWeights',
    'assemble_operator',
    'build_rhs',
    'coupling_matrix',
    'default_weight_table',
    'dispersion_error',
    'hicks_coefficients',
    'optimize_stencil_weights',
    'sample_receivers',
]
