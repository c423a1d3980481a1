"""
Dense and block low-rank partial LU of one frontal matrix

A front is split into tiles: the fully-summed unknowns form the first
tiles, the border unknowns the last ones. Each step factors a diagonal tile
with partial pivoting restricted to that tile, solves the tiles below and to
the right of it, optionally compresses them, and updates the trailing tiles.
The trailing border-by-border tiles form the contribution block that is
extend-added into the parent front.
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

# Third-party core
import numpy as np
from scipy.linalg import lu_factor, solve_triangular

# Local
from .lowrank import (WORKING_FORMAT, LowRankBlock, MixedPrecisionBlock,
                      compress_block, mp_partition)

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

MODES = ('FR', 'BLR', 'MP-BLR')
ADMISSIBILITY = {'BLR': 1.0, 'MP-BLR': 0.5}
DEFAULT_CLUSTER_SIZE = 256

Tile = Union[np.ndarray, LowRankBlock, MixedPrecisionBlock]


class SingularFrontError(ArithmeticError):
    """Raised when a front meets a zero or non-finite pivot"""

#                                                                    Clustering
# =============================================================================


def cluster_variables(coordinates: np.ndarray, target: int
                      ) -> List[np.ndarray]:
    """Recursive geometric halving into clusters of at most ``target``
    points

    Parameters
    ----------
    coordinates
        grid indices of the points, shape (n, 3)
    target
        largest cluster size

    Returns
    -------
    List[np.ndarray]
        row indices into ``coordinates``, one array per cluster
    """
    def split(index: np.ndarray) -> List[np.ndarray]:
        if index.size <= target:
            return [index]
        points = coordinates[index]
        axis = int(np.argmax(points.max(axis=0) - points.min(axis=0)))
        order = index[np.argsort(points[:, axis], kind='stable')]
        half = order.size // 2
        return split(order[:half]) + split(order[half:])

    if coordinates.shape[0] == 0:
        return []
    return split(np.arange(coordinates.shape[0]))


def bounding_box(coordinates: np.ndarray) -> np.ndarray:
    return np.stack([coordinates.min(axis=0), coordinates.max(axis=0)])


def admissible(box_a: np.ndarray, box_b: np.ndarray, eta: float) -> bool:
    """Clusters are far enough apart for their coupling to be low-rank"""
    gap = np.maximum(0, np.maximum(box_b[0] - box_a[1], box_a[0] - box_b[1]))
    distance = float(np.linalg.norm(gap))
    diameter = min(float(np.max(box_a[1] - box_a[0])),
                   float(np.max(box_b[1] - box_b[0])))
    return distance > 0.0 and distance >= eta * diameter


@dataclass
class TileLayout:
    """Front unknowns in tile order

    Parameters
    ----------
    variables
        fully-summed unknowns followed by border unknowns
    tiles
        (start, stop) of every tile within ``variables``
    n_fully_summed_tiles
        number of leading tiles that are eliminated
    boxes
        bounding box of each tile in grid indices, shape (n_tiles, 2, 3)
    """
    variables: np.ndarray
    tiles: List[Tuple[int, int]]
    n_fully_summed_tiles: int
    boxes: np.ndarray

    @property
    def n_tiles(self) -> int:
        return len(self.tiles)

    @property
    def n_fully_summed(self) -> int:
        return self.tiles[self.n_fully_summed_tiles - 1][1] \
            if self.n_fully_summed_tiles else 0


def tile_layout(fully_summed: np.ndarray, border: np.ndarray,
                coordinates, cluster_size: Optional[int]) -> TileLayout:
    """Arrange a front into tiles; one tile per part when ``cluster_size``
    is None

    Parameters
    ----------
    fully_summed, border
        unknowns of the front
    coordinates
        callable mapping flat unknowns to grid indices (n, 3)
    cluster_size
        largest tile for block low-rank fronts
    """
    groups: List[np.ndarray] = []
    n_fs_tiles = 0
    for part, is_fs in ((fully_summed, True), (border, False)):
        if part.size == 0:
            continue
        if cluster_size is None:
            clusters = [np.arange(part.size)]
        else:
            clusters = cluster_variables(coordinates(part), cluster_size)
        groups += [part[c] for c in clusters]
        if is_fs:
            n_fs_tiles = len(clusters)

    sizes = np.array([g.size for g in groups], dtype=np.int64)
    stops = np.cumsum(sizes)
    tiles = [(int(b - s), int(b)) for s, b in zip(sizes, stops)]
    boxes = np.stack([bounding_box(coordinates(g)) for g in groups]) \
        if groups else np.zeros((0, 2, 3))
    variables = np.concatenate(groups) if groups \
        else np.zeros(0, dtype=np.int64)
    return TileLayout(variables, tiles, n_fs_tiles, boxes)

#                                                           Tile arithmetic
# =============================================================================


def _as_lowrank(tile: Tile, dtype) -> Union[np.ndarray, LowRankBlock]:
    if isinstance(tile, MixedPrecisionBlock):
        return tile.decode(dtype)
    return tile


def multiply(a, b) -> Tuple[np.ndarray, int]:
    """Dense product of two tiles (dense or low-rank) and its flop count"""
    if isinstance(a, LowRankBlock) and isinstance(b, LowRankBlock):
        core = a.Y.T @ b.X
        left = a.X @ core
        flops = 2 * a.rank * a.Y.shape[0] * b.rank \
            + 2 * a.X.shape[0] * a.rank * b.rank \
            + 2 * a.X.shape[0] * b.rank * b.Y.shape[0]
        return left @ b.Y.T, flops
    if isinstance(a, LowRankBlock):
        inner = a.Y.T @ b
        flops = 2 * a.rank * b.shape[0] * b.shape[1] \
            + 2 * a.X.shape[0] * a.rank * b.shape[1]
        return a.X @ inner, flops
    if isinstance(b, LowRankBlock):
        inner = a @ b.X
        flops = 2 * a.shape[0] * a.shape[1] * b.rank \
            + 2 * a.shape[0] * b.rank * b.Y.shape[0]
        return inner @ b.Y.T, flops
    return a @ b, 2 * a.shape[0] * a.shape[1] * b.shape[1]


def apply_tile(tile: Tile, x: np.ndarray, dtype) -> Tuple[np.ndarray, int]:
    """Tile times a block of vectors"""
    return multiply(_as_lowrank(tile, dtype), x)


def getrf_flops(k: int) -> int:
    j = np.arange(k)
    rest = k - j - 1
    return int(np.sum(rest + 2 * rest ** 2))


def _pivot_permutation(piv: np.ndarray) -> np.ndarray:
    perm = np.arange(piv.size)
    for i, p in enumerate(piv):
        perm[i], perm[p] = perm[p], perm[i]
    return perm


def tile_bytes(tile: Tile, fmt: str) -> Dict[str, int]:
    if isinstance(tile, MixedPrecisionBlock):
        return tile.bytes_per_format()
    nbytes = tile.nbytes
    return {fmt: int(nbytes)}

#                                                                 Front factors
# =============================================================================


@dataclass
class FrontFactor:
    """LU factors of one front

    Parameters
    ----------
    node
        elimination tree node
    layout
        tile arrangement of the front unknowns
    diagonal
        per fully-summed tile, the packed LU factors and row permutation
    lower
        L tiles keyed by (row tile, column tile)
    upper
        U tiles keyed by (row tile, column tile)
    """
    node: int
    layout: TileLayout
    diagonal: List[Tuple[np.ndarray, np.ndarray]] = field(
        default_factory=list)
    lower: Dict[Tuple[int, int], Tile] = field(default_factory=dict)
    upper: Dict[Tuple[int, int], Tile] = field(default_factory=dict)

    def entries(self) -> int:
        """Dense-equivalent entries of L and U"""
        total = sum(lu.size for lu, _ in self.diagonal)
        for tile in list(self.lower.values()) + list(self.upper.values()):
            shape = tile.shape
            total += shape[0] * shape[1]
        return int(total)

    def bytes_per_format(self, fmt: str) -> Dict[str, int]:
        tally: Dict[str, int] = {fmt: int(sum(lu.nbytes for lu, _
                                              in self.diagonal))}
        for tile in list(self.lower.values()) + list(self.upper.values()):
            for key, value in tile_bytes(tile, fmt).items():
                tally[key] = tally.get(key, 0) + value
        return tally

    @property
    def nbytes(self) -> int:
        return int(sum(self.bytes_per_format('fp64').values()))

    def n_lowrank(self) -> int:
        return sum(not isinstance(t, np.ndarray)
                   for t in list(self.lower.values())
                   + list(self.upper.values()))


def factor_front(front: np.ndarray, layout: TileLayout, node: int,
                 mode: str = 'FR', eps: float = 1e-5,
                 precision: str = 'double'
                 ) -> Tuple[FrontFactor, np.ndarray, int]:
    """Partial LU of an assembled front

    Parameters
    ----------
    front
        dense frontal matrix in ``layout`` order; overwritten
    layout
        tile arrangement
    node
        elimination tree node, used in error messages
    mode, optional
        'FR', 'BLR' or 'MP-BLR', by default 'FR'
    eps, optional
        low-rank truncation threshold, by default 1e-5
    precision, optional
        working precision, 'double' or 'single'

    Returns
    -------
    Tuple[FrontFactor, np.ndarray, int]
        factors, contribution block (border x border) and flop count

    Raises
    ------
    SingularFrontError
        If a diagonal tile has a zero or non-finite pivot
    """
    T = front
    dtype = T.dtype
    tiles = [slice(a, b) for a, b in layout.tiles]
    p, q = layout.n_fully_summed_tiles, layout.n_tiles
    compress = mode in ADMISSIBILITY
    eta = ADMISSIBILITY.get(mode, 0.0)
    factor = FrontFactor(node, layout)
    flops = 0

    for k in range(p):
        sk = tiles[k]
        block = T[sk, sk]
        if not np.all(np.isfinite(block)):
            raise SingularFrontError(
                f"Non-finite entries in front {node} (tile {k})")
        lu, piv = lu_factor(block, check_finite=False)
        pivots = np.abs(np.diag(lu))
        if np.any(pivots == 0.0):
            raise SingularFrontError(
                f"Zero pivot in front {node} (tile {k}, local row "
                f"{int(np.argmin(pivots))})")
        perm = _pivot_permutation(piv)
        factor.diagonal.append((lu, perm))
        size = lu.shape[0]
        flops += getrf_flops(size)

        usable: Dict[Tuple[str, int], object] = {}
        for i in range(k + 1, q):
            si = tiles[i]
            rows = si.stop - si.start

            lower = solve_triangular(lu, T[si, sk].T, trans='T',
                                     lower=False, check_finite=False).T
            upper = solve_triangular(lu, T[sk, si][perm], lower=True,
                                     unit_diagonal=True, check_finite=False)
            flops += rows * size ** 2 + rows * size * (size - 1)

            for key, dense in (('L', lower), ('U', upper)):
                stored: Tile = dense
                operand = dense
                if compress and admissible(layout.boxes[i], layout.boxes[k],
                                           eta):
                    lowrank = compress_block(dense, eps)
                    if lowrank is not None:
                        m, n = dense.shape
                        flops += 4 * m * n * min(m, n)
                        stored, operand = lowrank, lowrank
                        if mode == 'MP-BLR':
                            stored = mp_partition(lowrank.X, lowrank.Y, eps,
                                                  precision)
                            r = lowrank.rank
                            flops += 4 * (m + n) * r * r + r ** 3
                            operand = stored.decode(dtype)
                if key == 'L':
                    factor.lower[(i, k)] = stored
                else:
                    factor.upper[(k, i)] = stored
                usable[(key, i)] = operand

        for i in range(k + 1, q):
            for j in range(k + 1, q):
                update, cost = multiply(usable[('L', i)], usable[('U', j)])
                T[tiles[i], tiles[j]] -= update
                flops += cost

    nfs = layout.n_fully_summed
    contribution = T[nfs:, nfs:].copy()
    return factor, contribution, int(flops)

#                                                           Triangular sweeps
# =============================================================================


def forward_front(factor: FrontFactor, B: np.ndarray, dtype) -> int:
    """In-place forward elimination through one front; returns flops"""
    layout = factor.layout
    tiles = layout.tiles
    variables = layout.variables
    p, q = layout.n_fully_summed_tiles, layout.n_tiles
    nrhs = B.shape[1]
    flops = 0

    for k in range(p):
        rows_k = variables[tiles[k][0]:tiles[k][1]]
        lu, perm = factor.diagonal[k]
        y = solve_triangular(lu, B[rows_k][perm], lower=True,
                             unit_diagonal=True, check_finite=False)
        B[rows_k] = y
        flops += lu.shape[0] * (lu.shape[0] - 1) * nrhs
        for i in range(k + 1, q):
            rows_i = variables[tiles[i][0]:tiles[i][1]]
            update, cost = apply_tile(factor.lower[(i, k)], y, dtype)
            B[rows_i] -= update
            flops += cost
    return flops


def backward_front(factor: FrontFactor, B: np.ndarray, dtype) -> int:
    """In-place backward substitution through one front; returns flops"""
    layout = factor.layout
    tiles = layout.tiles
    variables = layout.variables
    p, q = layout.n_fully_summed_tiles, layout.n_tiles
    nrhs = B.shape[1]
    flops = 0

    for k in reversed(range(p)):
        rows_k = variables[tiles[k][0]:tiles[k][1]]
        rhs = B[rows_k]
        for j in range(k + 1, q):
            rows_j = variables[tiles[j][0]:tiles[j][1]]
            update, cost = apply_tile(factor.upper[(k, j)], B[rows_j], dtype)
            rhs = rhs - update
            flops += cost
        lu, _ = factor.diagonal[k]
        B[rows_k] = solve_triangular(lu, rhs, lower=False,
                                     check_finite=False)
        flops += lu.shape[0] * (lu.shape[0] + 1) * nrhs
    return flops


def working_format(precision: str) -> str:
    return WORKING_FORMAT[precision]
