"""
Low-rank tiles and their mixed-precision storage
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

# Third-party core
import numpy as np
from scipy.linalg import qr, svd

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

# unit roundoff of each storage format
UNIT_ROUNDOFF: Dict[str, float] = {
    'fp64': 2.0 ** -53,
    'fp32': 2.0 ** -24,
    'fp24': 2.0 ** -16,
    'fp16': 2.0 ** -11,
}

# bytes per complex entry
ENTRY_BYTES: Dict[str, int] = {'fp64': 16, 'fp32': 8, 'fp24': 6, 'fp16': 4}
SCALE_BYTES = 4

# cheapest first
_CANDIDATES = ('fp16', 'fp24', 'fp32')

WORKING_FORMAT = {'double': 'fp64', 'single': 'fp32'}
WORKING_DTYPE = {'double': np.complex128, 'single': np.complex64}


@dataclass
class LowRankBlock:
    """Tile stored as B ~ X Y^T with X (m x r) and Y (n x r)"""
    X: np.ndarray
    Y: np.ndarray

    @property
    def rank(self) -> int:
        return self.X.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.X.shape[0], self.Y.shape[0])

    @property
    def nbytes(self) -> int:
        return self.X.nbytes + self.Y.nbytes

    def to_dense(self) -> np.ndarray:
        return self.X @ self.Y.T


def compress_block(B: np.ndarray, eps: float,
                   max_rank_fraction: float = 0.5
                   ) -> Optional[LowRankBlock]:
    """Truncated QR factorization with column pivoting

    The rank is the number of diagonal entries of R above
    ``eps * ||B||_F``.

    Parameters
    ----------
    B
        dense tile
    eps
        relative truncation threshold
    max_rank_fraction, optional
        tiles whose rank reaches this fraction of min(m, n) stay dense, by
        default 0.5

    Returns
    -------
    LowRankBlock or None
        the compressed tile, or None when the tile should stay full-rank
    """
    m, n = B.shape
    if min(m, n) == 0:
        return LowRankBlock(np.zeros((m, 0), B.dtype),
                            np.zeros((n, 0), B.dtype))

    norm = np.linalg.norm(B)
    if norm == 0.0:
        return LowRankBlock(np.zeros((m, 0), B.dtype),
                            np.zeros((n, 0), B.dtype))

    Q, R, P = qr(B, mode='economic', pivoting=True)
    diagonal = np.abs(np.diag(R))
    rank = int(np.count_nonzero(diagonal > eps * norm))

    if rank >= max_rank_fraction * min(m, n):
        return None

    inverse = np.empty_like(P)
    inverse[P] = np.arange(P.size)
    X = np.ascontiguousarray(Q[:, :rank])
    Y = np.ascontiguousarray(R[:rank, inverse].T)
    return LowRankBlock(X, Y)

#                                                       Mixed-precision storage
# =============================================================================


def _encode(values: np.ndarray, fmt: str):
    if fmt == 'fp64':
        return values.astype(np.complex128)
    if fmt == 'fp32':
        return values.astype(np.complex64)

    pairs = np.ascontiguousarray(values.astype(np.complex64)).view(np.float32)
    if fmt == 'fp24':
        bits = pairs.view(np.uint32).astype(np.uint64)
        rounded = ((bits + 0x80) >> 8).astype(np.uint32)
        return np.stack([rounded & 0xFF, (rounded >> 8) & 0xFF,
                         (rounded >> 16) & 0xFF], axis=-1).astype(np.uint8)

    # fp16 with one float32 scale per column
    scale = np.max(np.abs(pairs), axis=0).astype(np.float32) \
        if pairs.size else np.ones(pairs.shape[1], np.float32)
    scale = np.where(scale > 0.0, scale, np.float32(1.0))
    column_scale = scale.reshape(-1, 2).max(axis=1)
    pairs = pairs / np.repeat(column_scale, 2)
    return pairs.astype(np.float16), column_scale.astype(np.float32)


def _decode(payload, fmt: str, dtype) -> np.ndarray:
    if fmt in ('fp64', 'fp32'):
        return payload.astype(dtype)

    if fmt == 'fp24':
        b = payload.astype(np.uint32)
        bits = (b[..., 0] | (b[..., 1] << 8) | (b[..., 2] << 16)) << 8
        pairs = np.ascontiguousarray(bits.astype(np.uint32)).view(
            np.float32)
    else:
        half, column_scale = payload
        pairs = half.astype(np.float32) * np.repeat(column_scale, 2)
        pairs = np.ascontiguousarray(pairs, dtype=np.float32)
    return pairs.view(np.complex64).astype(dtype)


def _payload_bytes(payload, fmt: str, entries: int, columns: int) -> int:
    if fmt == 'fp16':
        return ENTRY_BYTES[fmt] * entries + SCALE_BYTES * columns
    return ENTRY_BYTES[fmt] * entries


@dataclass
class PrecisionBucket:
    fmt: str
    columns: int
    X: object
    Y: object
    nbytes: int


@dataclass
class MixedPrecisionBlock:
    """Low-rank tile whose column groups use different storage formats

    Columns are stored in SVD form, X = U S and Y with orthonormal columns,
    ordered by decreasing singular value.
    """
    shape: Tuple[int, int]
    buckets: List[PrecisionBucket]
    singular_values: np.ndarray

    @property
    def rank(self) -> int:
        return int(sum(b.columns for b in self.buckets))

    @property
    def nbytes(self) -> int:
        return int(sum(b.nbytes for b in self.buckets))

    def bytes_per_format(self) -> Dict[str, int]:
        tally: Dict[str, int] = {}
        for b in self.buckets:
            tally[b.fmt] = tally.get(b.fmt, 0) + b.nbytes
        return tally

    def decode(self, dtype=np.complex64) -> LowRankBlock:
        """Promote every bucket to ``dtype`` before arithmetic"""
        m, n = self.shape
        if not self.buckets:
            return LowRankBlock(np.zeros((m, 0), dtype),
                                np.zeros((n, 0), dtype))
        X = np.concatenate([_decode(b.X, b.fmt, dtype).reshape(m, b.columns)
                            for b in self.buckets], axis=1)
        Y = np.concatenate([_decode(b.Y, b.fmt, dtype).reshape(n, b.columns)
                            for b in self.buckets], axis=1)
        return LowRankBlock(X, Y)

    def to_dense(self, dtype=np.complex64) -> np.ndarray:
        return self.decode(dtype).to_dense()


def _svd_form(X: np.ndarray, Y: np.ndarray
              ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rewrite X Y^T as (U S) V^T with orthonormal U and V"""
    qx, rx = np.linalg.qr(X)
    qy, ry = np.linalg.qr(Y)
    u, s, vh = svd(rx @ ry.T)
    return qx @ (u * s), qy @ vh.T, s


def choose_format(sigma: float, sigma_max: float, eps: float,
                  fallback: str = 'fp32') -> str:
    """Cheapest format whose rounding error u * sigma stays below
    eps * sigma_max
    """
    for fmt in _CANDIDATES:
        if UNIT_ROUNDOFF[fmt] * sigma <= eps * sigma_max:
            return fmt
    return fallback


def mp_partition(X: np.ndarray, Y: np.ndarray, eps: float,
                 precision: str = 'single') -> MixedPrecisionBlock:
    """Split a low-rank pair into precision buckets by singular value

    Parameters
    ----------
    X, Y
        low-rank factors of B ~ X Y^T
    eps
        relative accuracy target of the tile
    precision, optional
        working precision ('single' or 'double'); columns that no cheaper
        format can hold keep it, by default 'single'

    Returns
    -------
    MixedPrecisionBlock
        precision-tagged storage
    """
    m, n = X.shape[0], Y.shape[0]
    if X.shape[1] == 0:
        return MixedPrecisionBlock((m, n), [], np.zeros(0))

    Xs, Ys, sigma = _svd_form(X, Y)
    fallback = WORKING_FORMAT[precision]
    formats = [choose_format(s, sigma[0], eps, fallback) for s in sigma]

    buckets: List[PrecisionBucket] = []
    start = 0
    while start < len(formats):
        fmt = formats[start]
        stop = start
        while stop < len(formats) and formats[stop] == fmt:
            stop += 1
        columns = stop - start
        xp = _encode(Xs[:, start:stop], fmt)
        yp = _encode(Ys[:, start:stop], fmt)
        nbytes = _payload_bytes(xp, fmt, m * columns, columns) \
            + _payload_bytes(yp, fmt, n * columns, columns)
        buckets.append(PrecisionBucket(fmt, columns, xp, yp, nbytes))
        start = stop

    return MixedPrecisionBlock((m, n), buckets, sigma)
