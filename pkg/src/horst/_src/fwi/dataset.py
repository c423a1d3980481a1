"""
Monochromatic gathers and their acquisition geometry

Gather file layout, little-endian throughout::

    magic "FDG1" | version u32 | n_freq u32 |
    per frequency: f f64 | n_src u32 | n_rec u32 |
                   live-trace bitset (n_src*n_rec bits, LSB first) |
                   signatures complex64 x n_src |
                   gather complex64 [src][rec] |
    n_src u32 | n_src x 3 f64 | n_rec u32 | n_rec x 3 f64 | reciprocity u8
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional

# Third-party core
import numpy as np
import pandas as pd

# Local
from .._io import BinaryReader, PandasStore, StoreProtocol, write_bytes
from ..logger import logger

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

MAGIC = b"FDG1"
VERSION = 1
FREQUENCY_TOLERANCE = 1e-9


class GatherFormatError(IOError):
    """Raised when a gather file cannot be decoded"""


class MissingFrequencyError(KeyError):
    """Raised when a frequency is absent from a dataset"""

#                                                                   Acquisition
# =============================================================================


@dataclass
class Acquisition:
    """Source and receiver positions

    With ``reciprocity`` set, the ocean-bottom nodes play the role of the
    sources and the shot positions the role of the receivers.
    """
    sources: np.ndarray
    receivers: np.ndarray
    reciprocity: bool = True

    def __post_init__(self):
        self.sources = np.asarray(self.sources, dtype=float).reshape(-1, 3)
        self.receivers = np.asarray(self.receivers,
                                    dtype=float).reshape(-1, 3)

    @property
    def n_src(self) -> int:
        return self.sources.shape[0]

    @property
    def n_rec(self) -> int:
        return self.receivers.shape[0]

    @classmethod
    def empty(cls) -> Acquisition:
        return cls(np.zeros((0, 3)), np.zeros((0, 3)))

    def to_frame(self) -> pd.DataFrame:
        frames = [pd.DataFrame(points, columns=['x', 'y', 'z'])
                  .assign(kind=kind)
                  for kind, points in (('source', self.sources),
                                       ('receiver', self.receivers))]
        return pd.concat(frames, ignore_index=True)[['kind', 'x', 'y', 'z']]

    @classmethod
    def from_frame(cls, frame: pd.DataFrame,
                   reciprocity: bool = True) -> Acquisition:
        missing = {'kind', 'x', 'y', 'z'} - set(frame.columns)
        if missing:
            raise KeyError(f"Acquisition table lacks columns {missing}")
        points = {kind: frame.loc[frame['kind'] == kind, ['x', 'y', 'z']]
                  .to_numpy(dtype=float) for kind in ('source', 'receiver')}
        return cls(points['source'], points['receiver'], reciprocity)

    def to_csv(self, path: Path | str) -> Path:
        return PandasStore(self.to_frame(), path).store()

    @classmethod
    def from_csv(cls, path: Path | str) -> Acquisition:
        return cls.from_frame(PandasStore(None, path).load())

    def swapped(self) -> Acquisition:
        """Exchange the source and receiver roles"""
        return Acquisition(self.receivers.copy(), self.sources.copy(),
                           not self.reciprocity)

#                                                                       Gathers
# =============================================================================


@dataclass
class FrequencyData:
    """Gather at one frequency

    Parameters
    ----------
    frequency
        Hz
    gather
        complex traces, shape (n_src, n_rec)
    mask
        live traces, same shape, True when the trace is used
    signatures
        complex source signature per source
    """
    frequency: float
    gather: np.ndarray
    mask: Optional[np.ndarray] = None
    signatures: Optional[np.ndarray] = None

    def __post_init__(self):
        self.gather = np.atleast_2d(np.asarray(self.gather,
                                               dtype=np.complex64))
        shape = self.gather.shape
        self.mask = np.ones(shape, dtype=bool) if self.mask is None \
            else np.asarray(self.mask, dtype=bool)
        if self.mask.shape != shape:
            raise ValueError(
                f"Mask of shape {self.mask.shape} does not match the "
                f"gather shape {shape}")
        self.signatures = np.ones(shape[0], dtype=np.complex64) \
            if self.signatures is None \
            else np.asarray(self.signatures, dtype=np.complex64).ravel()
        if self.signatures.size != shape[0]:
            raise ValueError(
                f"Got {self.signatures.size} signatures for {shape[0]} "
                f"sources")

    @property
    def n_src(self) -> int:
        return self.gather.shape[0]

    @property
    def n_rec(self) -> int:
        return self.gather.shape[1]


@dataclass
class FreqDataset:
    """Gathers over several frequencies sharing one acquisition"""
    acquisition: Acquisition = field(default_factory=Acquisition.empty)
    items: List[FrequencyData] = field(default_factory=list)

    def __post_init__(self):
        for item in self.items:
            self._check(item)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[FrequencyData]:
        return iter(self.items)

    @property
    def frequencies(self) -> List[float]:
        return [item.frequency for item in self.items]

    def _check(self, item: FrequencyData):
        expected = (self.acquisition.n_src, self.acquisition.n_rec)
        if item.gather.shape != expected:
            raise ValueError(
                f"Gather at {item.frequency} Hz has shape "
                f"{item.gather.shape}, acquisition gives {expected}")

    def add(self, item: FrequencyData):
        self._check(item)
        self.items.append(item)

    def has(self, frequency: float) -> bool:
        return any(abs(f - frequency) <= FREQUENCY_TOLERANCE * max(1.0, f)
                   for f in self.frequencies)

    def at(self, frequency: float) -> FrequencyData:
        """Gather at a frequency

        Raises
        ------
        MissingFrequencyError
            If the dataset holds no gather at that frequency
        """
        for item in self.items:
            if abs(item.frequency - frequency) <= \
                    FREQUENCY_TOLERANCE * max(1.0, frequency):
                return item
        raise MissingFrequencyError(
            f"No gather at {frequency} Hz; dataset holds "
            f"{self.frequencies}")

    def store(self, path: Path | str) -> Path:
        return GatherStore(self, path).store()

    @classmethod
    def from_file(cls, path: Path | str) -> FreqDataset:
        return read_dataset(path)

#                                                                        Codec
# =============================================================================


def encode_dataset(dataset: FreqDataset) -> bytes:
    parts = [MAGIC, struct.pack('<II', VERSION, len(dataset))]
    for item in dataset:
        parts.append(struct.pack('<dII', item.frequency, item.n_src,
                                 item.n_rec))
        parts.append(np.packbits(item.mask.ravel(),
                                 bitorder='little').tobytes())
        parts.append(item.signatures.astype('<c8').tobytes())
        parts.append(np.ascontiguousarray(item.gather, dtype='<c8').tobytes())

    acquisition = dataset.acquisition
    for points in (acquisition.sources, acquisition.receivers):
        parts.append(struct.pack('<I', points.shape[0]))
        parts.append(np.ascontiguousarray(points, dtype='<f8').tobytes())
    parts.append(struct.pack('<B', int(acquisition.reciprocity)))
    return b''.join(parts)


def decode_dataset(payload: bytes) -> FreqDataset:
    reader = BinaryReader(payload, GatherFormatError)
    magic = reader.raw(4, 'magic')
    if magic != MAGIC:
        raise GatherFormatError(
            f"Bad magic {magic!r} at byte offset 0, expected {MAGIC!r}")
    offset = reader.offset
    version = reader.scalar('I')
    if version != VERSION:
        raise GatherFormatError(
            f"Unsupported gather file version {version} at byte offset "
            f"{offset}")

    items = []
    for _ in range(reader.scalar('I')):
        frequency = reader.scalar('d', 'frequency')
        n_src = reader.scalar('I', 'source count')
        n_rec = reader.scalar('I', 'receiver count')
        n_traces = n_src * n_rec
        bits = reader.array('u1', (n_traces + 7) // 8, 'trace mask')
        mask = np.unpackbits(bits, count=n_traces, bitorder='little')
        signatures = reader.array('c8', n_src, 'signatures')
        gather = reader.array('c8', n_traces, 'gather')
        items.append(FrequencyData(frequency,
                                   gather.reshape(n_src, n_rec),
                                   mask.reshape(n_src, n_rec).astype(bool),
                                   signatures))

    positions = []
    for kind in ('source', 'receiver'):
        count = reader.scalar('I', f'{kind} count')
        positions.append(reader.array('f8', 3 * count,
                                      f'{kind} positions').reshape(count, 3))
    reciprocity = bool(reader.scalar('B', 'reciprocity flag'))

    if reader.remaining:
        logger.warning(f"Ignoring {reader.remaining} trailing bytes in "
                       f"gather file")

    return FreqDataset(Acquisition(*positions, reciprocity), items)


class GatherStore(StoreProtocol):
    """Binary gather files"""
    suffix: str = '.fdg'

    def store(self) -> Path:
        return write_bytes(self.path, encode_dataset(self.object))

    def load(self) -> FreqDataset:
        return decode_dataset(self.path.read_bytes())


def write_dataset(dataset: FreqDataset, path: Path | str) -> Path:
    """Write a dataset; the file suffix is forced to '.fdg'"""
    return GatherStore(dataset, path).store()


def read_dataset(path: Path | str) -> FreqDataset:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Gather file {path} does not exist")
    return decode_dataset(path.read_bytes())
