"""
Common IO plumbing: storage protocol, locked writes and a bounds-checked
binary reader shared by the model and gather formats
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import struct
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, Type

# Third-party
import numpy as np
import pandas as pd
from filelock import FileLock

# Local
from .logger import logger

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================

LOCK_SUFFIX = ".lock"
LOCK_TIMEOUT = 60.0

#                                                                  File locking
# =============================================================================


@contextmanager
def locked(path: Path | str) -> Iterator[Path]:
    """Hold an exclusive lock on ``path`` (through a sibling lock file)
    while the body runs

    Parameters
    ----------
    path
        file that is about to be written

    Yields
    ------
    Path
        the path, with its parent directory created
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lock = FileLock(str(path) + LOCK_SUFFIX, timeout=LOCK_TIMEOUT)
    with lock:
        yield path


def write_bytes(path: Path | str, payload: bytes) -> Path:
    with locked(path) as target:
        target.write_bytes(payload)
    logger.debug(f"Wrote {len(payload)} bytes to {path}")
    return Path(path)


def append_csv(frame: pd.DataFrame, path: Path | str) -> Path:
    """Append rows to a CSV file, writing the header only when the file is
    new

    Parameters
    ----------
    frame
        rows to append
    path
        CSV file

    Returns
    -------
    Path
        path of the CSV file
    """
    with locked(path) as target:
        exists = target.exists() and target.stat().st_size > 0
        frame.to_csv(target, mode='a', header=not exists, index=False)
    return Path(path)

#                                                               Storing methods
# =============================================================================


class StoreProtocol:
    """Base class for storing and loading objects from disk"""
    suffix: str

    def __init__(self, object: Any, path: Path | str):
        """
        Protocol class for storing and loading objects from disk

        Parameters
        ----------
        object : Any
            object to store, None when loading
        path : Path
            location of the file, the suffix is enforced
        """
        self.path = Path(path).with_suffix(self.suffix)
        self.object = object

    def store(self) -> Path:
        raise NotImplementedError()

    def load(self) -> Any:
        raise NotImplementedError()


class PandasStore(StoreProtocol):
    """CSV files written and read through pandas"""
    suffix: str = '.csv'

    def store(self) -> Path:
        with locked(self.path) as target:
            self.object.to_csv(target, index=False)
        return self.path

    def load(self) -> pd.DataFrame:
        return pd.read_csv(self.path)


def save_object(object: Any, path: Path | str,
                store_method: Type[StoreProtocol] = PandasStore) -> Path:
    """Store an object with the given storage protocol

    Returns
    -------
    Path
        path of the written file
    """
    return store_method(object, path).store()


def load_object(path: Path | str,
                store_method: Type[StoreProtocol] = PandasStore) -> Any:
    return store_method(None, path).load()

#                                                                 Binary reader
# =============================================================================


class BinaryReader:
    """Little-endian reader over an in-memory buffer that reports the byte
    offset of every short read.

    Parameters
    ----------
    payload
        file content
    error
        exception class raised on truncation, called with a message
    """

    def __init__(self, payload: bytes, error: Type[Exception]):
        self.payload = memoryview(payload)
        self.offset = 0
        self.error = error

    @property
    def remaining(self) -> int:
        return len(self.payload) - self.offset

    def _take(self, size: int, what: str) -> memoryview:
        if size > self.remaining:
            raise self.error(
                f"Truncated file: expected {size} bytes of {what} at byte "
                f"offset {self.offset}, only {self.remaining} left")
        chunk = self.payload[self.offset:self.offset + size]
        self.offset += size
        return chunk

    def raw(self, size: int, what: str = 'data') -> bytes:
        return bytes(self._take(size, what))

    def scalar(self, fmt: str, what: str = 'header'):
        return struct.unpack('<' + fmt, self._take(struct.calcsize(fmt),
                                                   what))[0]

    def array(self, dtype: str, count: int, what: str = 'data'
              ) -> np.ndarray:
        dtype = np.dtype(dtype).newbyteorder('<')
        chunk = self._take(dtype.itemsize * int(count), what)
        return np.frombuffer(chunk, dtype=dtype, count=int(count)).copy()
