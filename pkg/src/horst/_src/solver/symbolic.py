"""
Symbolic multifrontal analysis: front structure without numeric work
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass
from typing import List, Optional

# Third-party core
import numpy as np
import scipy.sparse as sp

# Local
from ..logger import logger
from .ordering import EliminationTree

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================


class UnsymmetricPatternError(ValueError):
    """Raised when pattern(A) differs from pattern(A^T)"""


@dataclass
class SymbolicFront:
    """Variables of one front

    Parameters
    ----------
    node
        elimination tree node id
    fully_summed
        unknowns eliminated in this front
    border
        unknowns of ancestor fronts coupled to this front, in elimination
        order
    """
    node: int
    fully_summed: np.ndarray
    border: np.ndarray

    @property
    def n_fully_summed(self) -> int:
        return self.fully_summed.size

    @property
    def n_border(self) -> int:
        return self.border.size

    @property
    def size(self) -> int:
        return self.n_fully_summed + self.n_border

    @property
    def factor_entries(self) -> int:
        """Dense entries of L and U produced by the front"""
        nfs, nb = self.n_fully_summed, self.n_border
        return nfs * nfs + 2 * nfs * nb


@dataclass
class SymbolicFactorization:
    tree: EliminationTree
    fronts: List[SymbolicFront]

    @property
    def predicted_factor_entries(self) -> int:
        return int(sum(f.factor_entries for f in self.fronts))

    @property
    def max_front_size(self) -> int:
        return max(f.size for f in self.fronts)

    def extend_add_map(self, child: int, front_variables: np.ndarray,
                       border: Optional[np.ndarray] = None) -> np.ndarray:
        """Positions of a child's border unknowns within a parent front

        Parameters
        ----------
        child
            child node id
        front_variables
            unknowns of the parent front in their storage order
        border, optional
            the child's border unknowns in contribution-block order, by
            default the symbolic order
        """
        border = self.fronts[child].border if border is None else border
        sorter = np.argsort(front_variables, kind='stable')
        found = np.searchsorted(front_variables, border, sorter=sorter)
        return sorter[found]


def symbolic_factorize(pattern: sp.spmatrix, tree: EliminationTree
                       ) -> SymbolicFactorization:
    """Front structure of every elimination tree node

    Parameters
    ----------
    pattern
        sparse matrix whose non-zero structure is used
    tree
        elimination tree covering all unknowns

    Returns
    -------
    SymbolicFactorization
        per-node fully-summed and border unknowns

    Raises
    ------
    UnsymmetricPatternError
        If the pattern is not structurally symmetric
    """
    structure = sp.csr_matrix(pattern, copy=True)
    if structure.shape != (tree.n_dof, tree.n_dof):
        raise ValueError(
            f"Matrix of shape {structure.shape} does not match a tree over "
            f"{tree.n_dof} unknowns")
    structure.data = np.ones_like(structure.data, dtype=np.int8)
    if (structure != structure.T).nnz:
        raise UnsymmetricPatternError(
            "The matrix pattern is not structurally symmetric")

    fronts: List[SymbolicFront] = []
    for node in tree.nodes:
        fs = node.variables
        neighbours = [structure.indices[structure.indptr[i]:
                                        structure.indptr[i + 1]] for i in fs]
        candidates = [np.concatenate(neighbours)] if neighbours else []
        candidates += [fronts[c].border for c in node.children]
        border = np.unique(np.concatenate(candidates)) if candidates \
            else np.zeros(0, dtype=np.int64)
        border = border[tree.rank[border] >= tree.stop[node.index]]
        border = border[np.argsort(tree.rank[border])]
        fronts.append(SymbolicFront(node.index, fs, border.astype(np.int64)))

    result = SymbolicFactorization(tree, fronts)
    logger.debug(
        f"Symbolic analysis: {len(fronts)} fronts, largest "
        f"{result.max_front_size}, predicted factor entries "
        f"{result.predicted_factor_entries}")
    return result
