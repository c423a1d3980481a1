"""
horst - Frequency-domain full waveform inversion of ocean-bottom-node data
with a block low-rank multifrontal direct solver

The package assembles 27-point finite-difference operators for the
visco-acoustic VTI wave equation, factorizes them once per frequency and
reuses the factors for thousands of sparse right-hand sides.
"""

#                                                                       Modules
# =============================================================================

from .__version__ import __version__
from ._src._io import StoreProtocol
from ._src.logger import DistributedFileHandler, logger

#                                                        Authorship and Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
#
# =============================================================================


# Log welcome message and the version of horst
logger.info(f"Imported horst (version: {__version__})")

__all__ = [
    'DistributedFileHandler',
    'StoreProtocol',
    'logger',
]
