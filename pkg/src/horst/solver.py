"""
Multifrontal block low-rank LU factorization and multi-RHS solves
"""
#                                                                       Modules
# =============================================================================

# Local
from ._src.solver.factorization import (STATS_COLUMNS, Factorization,
                                        FactorizationStats, factorize)
from ._src.solver.front import SingularFrontError
from ._src.solver.lowrank import (LowRankBlock, MixedPrecisionBlock,
                                 compress_block, mp_partition)
from ._src.solver.ordering import EliminationTree, nested_dissection
from ._src.solver.solve import (SolveOptions, SolveStats,
                                permute_rhs_columns, solve)
from ._src.solver.symbolic import (SymbolicFactorization,
                                   UnsymmetricPatternError,
                                   symbolic_factorize)

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

__all__ = [
    'EliminationTree',
    'Factorization',
    'FactorizationStats',
    'LowRankBlock',
    'MixedPrecisionBlock',
    'STATS_COLUMNS',
    'SingularFrontError',
    'SolveOptions',
    'SolveStats',
    'SymbolicFactorization',
    'UnsymmetricPatternError',
    'compress_block',
    'factorize',
    'mp_partition',
    'nested_dissection',
    'permute_rhs_columns',
    'solve',
    'symbolic_factorize',
]
