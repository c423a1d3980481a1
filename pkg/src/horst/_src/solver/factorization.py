"""
Multifrontal LU factorization along a nested-dissection elimination tree
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import asdict, dataclass, field
from time import perf_counter
from typing import Dict, List, Optional, Tuple

# Third-party core
import numpy as np
import scipy.sparse as sp
from pathos.pools import ThreadPool

# Local
from ..logger import logger
from .front import (DEFAULT_CLUSTER_SIZE, MODES, FrontFactor,
                    SingularFrontError, factor_front, tile_layout,
                    working_format)
from .lowrank import WORKING_DTYPE
from .ordering import DEFAULT_LEAF_SIZE, EliminationTree, nested_dissection
from .symbolic import SymbolicFactorization, symbolic_factorize

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

EPS_RANGE = (1e-7, 1e-2)
PRECISIONS = ('double', 'single')

STATS_COLUMNS = ('freq_hz', 'h_m', 'ndof', 'mode', 'eps_blr',
                 'mem_factors_bytes', 'peak_mem_bytes', 't_analysis_s',
                 't_facto_s', 't_solve_s', 'nrhs', 'flops_facto',
                 'flops_solve', 'bytes_fp32', 'bytes_fp24', 'bytes_fp16',
                 'bytes_fp64')

__all__ = ['Factorization', 'FactorizationStats', 'SingularFrontError',
           'factorize', 'STATS_COLUMNS']


@dataclass
class FactorizationStats:
    """Exact tallies of one numeric factorization"""
    mode: str
    eps_blr: float
    precision: str
    n_dof: int
    n_fronts: int
    tree_depth: int
    mem_factors_bytes: int = 0
    peak_mem_bytes: int = 0
    flops_facto: int = 0
    factor_entries: int = 0
    predicted_factor_entries: int = 0
    lowrank_tiles: int = 0
    t_analysis_s: float = 0.0
    t_facto_s: float = 0.0
    bytes_per_format: Dict[str, int] = field(default_factory=dict)

    def to_row(self, freq_hz: float = np.nan, h_m: float = np.nan,
               t_solve_s: float = np.nan, nrhs: int = 0,
               flops_solve: int = 0) -> Dict[str, object]:
        """One row of the solver statistics table"""
        row = {
            'freq_hz': freq_hz, 'h_m': h_m, 'ndof': self.n_dof,
            'mode': self.mode,
            'eps_blr': self.eps_blr if self.mode != 'FR' else 0.0,
            'mem_factors_bytes': self.mem_factors_bytes,
            'peak_mem_bytes': self.peak_mem_bytes,
            't_analysis_s': self.t_analysis_s, 't_facto_s': self.t_facto_s,
            't_solve_s': t_solve_s, 'nrhs': nrhs,
            'flops_facto': self.flops_facto, 'flops_solve': flops_solve}
        for fmt in ('fp32', 'fp24', 'fp16', 'fp64'):
            row[f'bytes_{fmt}'] = int(self.bytes_per_format.get(fmt, 0))
        return {key: row[key] for key in STATS_COLUMNS}

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class Factorization:
    """Numeric factors of every front and the data needed to solve

    Parameters
    ----------
    tree
        elimination tree
    symbolic
        front structure
    fronts
        factors per node, indexed by node id
    mode
        'FR', 'BLR' or 'MP-BLR'
    precision
        working precision of the factors
    matrix
        the factorized matrix, kept for iterative refinement
    stats
        factorization statistics
    """
    tree: EliminationTree
    symbolic: SymbolicFactorization
    fronts: List[FrontFactor]
    mode: str
    precision: str
    matrix: sp.csc_matrix
    stats: FactorizationStats
    eps_blr: float = 0.0

    @property
    def n_dof(self) -> int:
        return self.tree.n_dof

    @property
    def dtype(self):
        return WORKING_DTYPE[self.precision]


def _check_options(mode: str, eps_blr: float, precision: str):
    if mode not in MODES:
        raise ValueError(f"Unknown factorization mode '{mode}', "
                         f"choose from {MODES}")
    if precision not in PRECISIONS:
        raise ValueError(f"Unknown precision '{precision}', "
                         f"choose from {PRECISIONS}")
    if mode != 'FR' and not EPS_RANGE[0] <= eps_blr <= EPS_RANGE[1]:
        raise ValueError(
            f"eps_blr={eps_blr} is outside {list(EPS_RANGE)}")


def _task_roots(tree: EliminationTree, threads: int) -> Tuple[List[int],
                                                              List[int]]:
    """Split the tree into independent subtrees and the nodes above them"""
    sizes = tree.subtree_dofs()
    frontier = [tree.root]
    top: List[int] = []
    while len(frontier) < 2 * threads:
        splittable = [v for v in frontier if tree[v].children]
        if not splittable:
            break
        v = max(splittable, key=lambda u: (sizes[u], u))
        frontier.remove(v)
        top.append(v)
        frontier += tree[v].children
    return sorted(frontier), sorted(top)


def _peak_memory(tree: EliminationTree, front_bytes: np.ndarray,
                 factor_bytes: np.ndarray, cb_bytes: np.ndarray) -> int:
    """Peak of factors + contribution stack + active front over a serial
    postorder traversal
    """
    stored, stack, peak = 0, 0, 0
    for v in tree.postorder:
        peak = max(peak, stored + stack + int(front_bytes[v]))
        stack -= int(sum(cb_bytes[c] for c in tree[v].children))
        stored += int(factor_bytes[v])
        stack += int(cb_bytes[v])
    return peak


def factorize(A, tree: Optional[EliminationTree] = None,
              mode: str = 'FR', eps_blr: float = 1e-5,
              precision: str = 'double', threads: int = 1,
              deterministic: bool = False,
              leaf_size: int = DEFAULT_LEAF_SIZE,
              cluster_size: int = DEFAULT_CLUSTER_SIZE,
              dims: Optional[Tuple[int, ...]] = None,
              symbolic: Optional[SymbolicFactorization] = None
              ) -> Factorization:
    """Multifrontal LU factorization

    Parameters
    ----------
    A
        :class:`ImpedanceMatrix` or square sparse matrix
    tree, optional
        elimination tree; built by nested dissection when omitted
    mode, optional
        'FR' (dense fronts), 'BLR' or 'MP-BLR', by default 'FR'
    eps_blr, optional
        low-rank threshold within [1e-7, 1e-2], by default 1e-5
    precision, optional
        'double' (complex128) or 'single' (complex64), by default 'double'
    threads, optional
        worker threads over independent subtrees, by default 1
    deterministic, optional
        force a serial postorder schedule, by default False
    leaf_size, optional
        nested-dissection leaf size, by default 128
    cluster_size, optional
        largest tile in block low-rank fronts, by default 256
    dims, optional
        grid dimensions of a plain sparse matrix, by default (n, 1, 1)
    symbolic, optional
        analysis of a previous factorization with the same pattern,
        reused as is

    Returns
    -------
    Factorization
        factors and statistics (``Factorization.stats``)

    Raises
    ------
    SingularFrontError
        If a front meets a zero pivot
    ValueError
        If the mode, precision or threshold is invalid
    """
    _check_options(mode, eps_blr, precision)
    matrix = getattr(A, 'matrix', A)
    matrix = sp.csc_matrix(matrix)
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError(f"Matrix must be square, got {matrix.shape}")

    if dims is None:
        grid = getattr(A, 'grid', None)
        dims = tuple(grid.dims) if grid is not None else \
            (tree.dims if tree is not None else (n, 1, 1))

    start = perf_counter()
    if symbolic is not None:
        tree = symbolic.tree
    else:
        if tree is None:
            _, tree = nested_dissection(dims, leaf_size=leaf_size)
        symbolic = symbolic_factorize(matrix, tree)
    t_analysis = perf_counter() - start

    dtype = WORKING_DTYPE[precision]
    rows = matrix.tocsr().astype(dtype)
    tiles = None if mode == 'FR' else cluster_size

    def factor_node(v: int, contributions: Dict[int, Tuple]):
        front = symbolic.fronts[v]
        layout = tile_layout(front.fully_summed, front.border,
                             tree.coordinates, tiles)
        variables = layout.variables
        nfs = layout.n_fully_summed
        dense = rows[variables][:, variables].toarray()
        dense[nfs:, nfs:] = 0.0
        for child in tree[v].children:
            child_border, block = contributions.pop(child)
            position = symbolic.extend_add_map(child, variables,
                                               child_border)
            dense[np.ix_(position, position)] += block
        factor, block, flops = factor_front(dense, layout, v, mode,
                                            eps_blr, precision)
        return factor, (variables[nfs:], block), flops

    def factor_subtree(root: int):
        contributions: Dict[int, Tuple] = {}
        factors, flops = {}, {}
        for v in range(tree.first_descendant[root], root + 1):
            factors[v], contributions[v], flops[v] = factor_node(
                v, contributions)
        return factors, contributions[root], flops

    start = perf_counter()
    factors: Dict[int, FrontFactor] = {}
    flops: Dict[int, int] = {}
    contributions: Dict[int, Tuple] = {}

    if deterministic or threads <= 1:
        subtrees, top = [tree.root], []
    else:
        subtrees, top = _task_roots(tree, threads)

    if len(subtrees) > 1:
        pool = ThreadPool(nodes=threads)
        try:
            results = pool.map(factor_subtree, subtrees)
        finally:
            pool.close()
            pool.join()
            pool.clear()
    else:
        results = [factor_subtree(v) for v in subtrees]

    for root, (f, cb, fl) in zip(subtrees, results):
        factors.update(f)
        flops.update(fl)
        contributions[root] = cb

    for v in top:
        factors[v], contributions[v], flops[v] = factor_node(v, contributions)

    t_facto = perf_counter() - start
    fronts = [factors[v] for v in tree.postorder]

    fmt = working_format(precision)
    itemsize = np.dtype(dtype).itemsize
    per_format: Dict[str, int] = {}
    factor_bytes = np.zeros(len(tree), dtype=np.int64)
    for factor in fronts:
        tally = factor.bytes_per_format(fmt)
        factor_bytes[factor.node] = sum(tally.values())
        for key, value in tally.items():
            per_format[key] = per_format.get(key, 0) + value

    front_size = np.array([f.size for f in symbolic.fronts], dtype=np.int64)
    border_size = np.array([f.n_border for f in symbolic.fronts],
                           dtype=np.int64)
    peak = _peak_memory(tree, front_size ** 2 * itemsize, factor_bytes,
                        border_size ** 2 * itemsize)

    stats = FactorizationStats(
        mode=mode, eps_blr=float(eps_blr), precision=precision, n_dof=n,
        n_fronts=len(tree), tree_depth=tree.depth(),
        mem_factors_bytes=int(factor_bytes.sum()), peak_mem_bytes=peak,
        flops_facto=int(sum(flops[v] for v in tree.postorder)),
        factor_entries=int(sum(f.entries() for f in fronts)),
        predicted_factor_entries=symbolic.predicted_factor_entries,
        lowrank_tiles=int(sum(f.n_lowrank() for f in fronts)),
        t_analysis_s=t_analysis, t_facto_s=t_facto,
        bytes_per_format=per_format)

    logger.info(
        f"Factorized n={n} ({mode}, {precision}) in {t_facto:.2f} s: "
        f"{stats.mem_factors_bytes / 2**20:.1f} MiB of factors, "
        f"{stats.flops_facto:.3e} flops")

    return Factorization(tree=tree, symbolic=symbolic, fronts=fronts,
                         mode=mode, precision=precision, matrix=matrix,
                         stats=stats, eps_blr=float(eps_blr))
