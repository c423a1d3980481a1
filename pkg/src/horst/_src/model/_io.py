"""
Binary model format

Layout, little-endian throughout::

    magic "FDM1" | version u32 | nx, ny, nz u32 | hx, hy, hz f64 |
    ox, oy, oz f64 | field_count u32 |
    per field: 16-byte ASCII name, nx*ny*nz f32 values (z fastest)
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
import struct
from pathlib import Path

# Third-party core
import numpy as np

# Local
from .._io import BinaryReader, StoreProtocol, write_bytes
from ..logger import logger
from .vti_model import FIELD_NAMES, VtiModel

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

MAGIC = b"FDM1"
VERSION = 1
NAME_BYTES = 16
WATER_FIELD = 'water'


class ModelFormatError(IOError):
    """Raised when a model file cannot be decoded"""


def encode_model(m: VtiModel) -> bytes:
    fields = {name: getattr(m, name) for name in FIELD_NAMES}
    fields[WATER_FIELD] = m.water_mask.astype(float)

    parts = [MAGIC, struct.pack('<I', VERSION),
             struct.pack('<3I', *m.dims),
             struct.pack('<3d', *m.spacing),
             struct.pack('<3d', *m.origin),
             struct.pack('<I', len(fields))]

    for name, values in fields.items():
        parts.append(name.encode('ascii').ljust(NAME_BYTES, b'\0'))
        parts.append(np.ascontiguousarray(values, dtype='<f4').tobytes())

    return b''.join(parts)


def decode_model(payload: bytes) -> VtiModel:
    reader = BinaryReader(payload, ModelFormatError)

    magic = reader.raw(4, 'magic')
    if magic != MAGIC:
        raise ModelFormatError(f"Bad magic {magic!r}, expected {MAGIC!r}")

    version = reader.scalar('I')
    if version != VERSION:
        raise ModelFormatError(f"Unsupported model file version {version}")

    dims = tuple(int(reader.scalar('I')) for _ in range(3))
    spacing = tuple(reader.scalar('d') for _ in range(3))
    origin = tuple(reader.scalar('d') for _ in range(3))
    field_count = reader.scalar('I')

    fields = {}
    for _ in range(field_count):
        name = reader.raw(NAME_BYTES, 'field name').rstrip(b'\0').decode(
            'ascii')
        fields[name] = reader.array('f4', np.prod(dims), f"field '{name}'"
                                    ).reshape(dims).astype(float)

    missing = [name for name in FIELD_NAMES if name not in fields]
    if missing:
        raise ModelFormatError(f"Model file lacks the fields {missing}")

    for name in set(fields) - set(FIELD_NAMES) - {WATER_FIELD}:
        logger.debug(f"Ignoring unknown model field '{name}'")

    water = fields.get(WATER_FIELD, np.zeros(dims)) > 0.5
    water_depth_index = np.where(
        water.all(axis=2), dims[2], np.argmin(water, axis=2))

    return VtiModel(**{name: fields[name] for name in FIELD_NAMES},
                    spacing=spacing, origin=origin,
                    water_depth_index=water_depth_index)


class ModelStore(StoreProtocol):
    """Binary model files"""
    suffix: str = '.fdm'

    def store(self) -> Path:
        return write_bytes(self.path, encode_model(self.object))

    def load(self) -> VtiModel:
        return decode_model(self.path.read_bytes())


def write_model(m: VtiModel, path: Path | str) -> Path:
    """Write a model; the file suffix is forced to '.fdm'"""
    return ModelStore(m, path).store()


def read_model(path: Path | str) -> VtiModel:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model file {path} does not exist")
    return decode_model(path.read_bytes())
