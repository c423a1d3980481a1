"""
Forward and backward sweeps for many sparse right-hand sides
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from time import perf_counter
from typing import List, NamedTuple, Optional, Tuple

# Third-party core
import numpy as np
import scipy.sparse as sp
from pathos.pools import ThreadPool

# Local
from ..logger import logger
from .factorization import Factorization
from .front import backward_front, forward_front
from .ordering import EliminationTree

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================


@dataclass(frozen=True)
class SolveOptions:
    """Settings of the multi-RHS solve

    Parameters
    ----------
    block_size
        right-hand sides processed together
    prune
        restrict the forward sweep to the union of root paths of each
        block's non-zeros
    permute_columns
        reorder the right-hand sides by elimination tree position
    threads
        worker threads over right-hand-side blocks
    deterministic
        force serial processing of the blocks
    refinement_steps
        iterative refinement steps against the assembled matrix, 0 or 1
    """
    block_size: int = 32
    prune: bool = True
    permute_columns: bool = True
    threads: int = 1
    deterministic: bool = False
    refinement_steps: int = 0

    def __post_init__(self):
        if self.block_size < 1:
            raise ValueError(
                f"block_size must be >= 1, got {self.block_size}")
        if self.refinement_steps not in (0, 1):
            raise ValueError(
                f"refinement_steps must be 0 or 1, got "
                f"{self.refinement_steps}")


@dataclass
class SolveStats:
    nrhs: int = 0
    n_blocks: int = 0
    forward_visits: List[int] = field(default_factory=list)
    backward_visits: List[int] = field(default_factory=list)
    flops_solve: int = 0
    t_solve_s: float = 0.0

    @property
    def total_forward_visits(self) -> int:
        return int(sum(self.forward_visits))


class RhsPartition(NamedTuple):
    """Column order and block boundaries of a right-hand-side matrix"""
    order: np.ndarray
    blocks: List[Tuple[int, int]]
    lca: np.ndarray

#                                                            Column permutation
# =============================================================================


def _column_nodes(F: sp.csc_matrix, tree: EliminationTree) -> List[np.ndarray]:
    nodes = []
    for j in range(F.shape[1]):
        rows = F.indices[F.indptr[j]:F.indptr[j + 1]]
        if rows.size == 0:
            raise ValueError(f"Right-hand side column {j} is empty")
        nodes.append(tree.node_of[rows])
    return nodes


def least_common_ancestor(tree: EliminationTree, nodes: np.ndarray) -> int:
    """Lowest node whose subtree holds every node of ``nodes``"""
    low, high = int(np.min(nodes)), int(np.max(nodes))
    v = low
    while v < high:
        v = int(tree.parent[v])
    return v


def permute_rhs_columns(F, tree: EliminationTree,
                        block_size: int = 32) -> RhsPartition:
    """Sort right-hand sides by the postorder position of the least common
    ancestor of their non-zeros and cut them into blocks

    A block is ended early at a change of top-level subtree when one occurs
    in the second half of the block.

    Parameters
    ----------
    F
        sparse right-hand sides, one per column
    tree
        elimination tree of the factorization
    block_size, optional
        largest block, by default 32

    Returns
    -------
    RhsPartition
        permutation (positions into the original columns), blocks as
        (start, stop) into the permuted order, and each column's ancestor

    Raises
    ------
    ValueError
        If a column has no non-zero
    """
    F = sp.csc_matrix(F)
    F.eliminate_zeros()
    lca = np.array([least_common_ancestor(tree, nodes)
                    for nodes in _column_nodes(F, tree)], dtype=np.int64)
    order = np.argsort(lca, kind='stable')
    group = tree.top_level_subtree(lca[order])

    blocks: List[Tuple[int, int]] = []
    start, k = 0, order.size
    while start < k:
        stop = min(start + block_size, k)
        if stop < k:
            for cut in range(stop, start + block_size // 2, -1):
                if group[cut - 1] != group[cut]:
                    stop = cut
                    break
        blocks.append((start, stop))
        start = stop

    return RhsPartition(order, blocks, lca)


def _visited_nodes(tree: EliminationTree, rows: np.ndarray) -> np.ndarray:
    """Union of the root paths of the nodes owning ``rows``, in postorder"""
    marked = np.zeros(len(tree), dtype=bool)
    for v in np.unique(tree.node_of[rows]):
        while v >= 0 and not marked[v]:
            marked[v] = True
            v = tree.parent[v]
    return np.flatnonzero(marked)

#                                                                         Solve
# =============================================================================


def _solve_block(fact: Factorization, B: np.ndarray, prune: bool
                 ) -> Tuple[np.ndarray, int, int, int]:
    dtype = fact.dtype
    tree = fact.tree
    if prune:
        rows = np.flatnonzero(np.any(B != 0.0, axis=1))
        forward = _visited_nodes(tree, rows)
    else:
        forward = np.arange(len(tree))

    flops = 0
    for v in forward:
        flops += forward_front(fact.fronts[v], B, dtype)
    for v in reversed(tree.postorder):
        flops += backward_front(fact.fronts[v], B, dtype)
    return B, flops, forward.size, len(tree)


def solve(fact: Factorization, F, opts: Optional[SolveOptions] = None
          ) -> Tuple[np.ndarray, SolveStats]:
    """Solve A P = F for every column of F

    Parameters
    ----------
    fact
        multifrontal factorization of A
    F
        right-hand sides (n_dof x k), sparse or dense
    opts, optional
        solve settings, by default :class:`SolveOptions()`

    Returns
    -------
    Tuple[np.ndarray, SolveStats]
        dense solutions in the column order of F, and statistics

    Raises
    ------
    ValueError
        If F does not have n_dof rows or holds an empty column while
        columns are permuted
    """
    opts = opts if opts is not None else SolveOptions()
    start = perf_counter()

    dense_input = not sp.issparse(F)
    if dense_input:
        F = np.asarray(F)
        if F.ndim == 1:
            F = F[:, None]
    if F.shape[0] != fact.n_dof:
        raise ValueError(
            f"Right-hand sides have {F.shape[0]} rows, the factorization "
            f"has {fact.n_dof} unknowns")
    k = F.shape[1]
    F_csc = sp.csc_matrix(F)

    if opts.permute_columns and k > 0:
        partition = permute_rhs_columns(F_csc, fact.tree, opts.block_size)
        order, blocks = partition.order, partition.blocks
    else:
        order = np.arange(k)
        blocks = [(s, min(s + opts.block_size, k))
                  for s in range(0, k, opts.block_size)]

    def run(block: Tuple[int, int]):
        columns = order[block[0]:block[1]]
        B = F_csc[:, columns].toarray().astype(fact.dtype)
        return _solve_block(fact, B, opts.prune)

    if opts.threads > 1 and not opts.deterministic and len(blocks) > 1:
        pool = ThreadPool(nodes=opts.threads)
        try:
            results = pool.map(run, blocks)
        finally:
            pool.close()
            pool.join()
            pool.clear()
    else:
        results = [run(b) for b in blocks]

    P = np.zeros((fact.n_dof, k), dtype=fact.dtype)
    stats = SolveStats(nrhs=k, n_blocks=len(blocks))
    for (s, e), (B, flops, forward, backward) in zip(blocks, results):
        P[:, order[s:e]] = B
        stats.flops_solve += flops
        stats.forward_visits.append(forward)
        stats.backward_visits.append(backward)

    if opts.refinement_steps:
        residual = F_csc.toarray() - fact.matrix @ P
        correction, extra = solve(
            fact, residual, SolveOptions(
                block_size=opts.block_size, prune=False,
                permute_columns=False, threads=opts.threads,
                deterministic=opts.deterministic))
        P = P + correction
        stats.flops_solve += extra.flops_solve

    stats.t_solve_s = perf_counter() - start
    logger.debug(
        f"Solved {k} right-hand sides in {len(blocks)} blocks "
        f"({stats.t_solve_s:.2f} s, {stats.total_forward_visits} forward "
        f"front visits)")
    return P, stats
