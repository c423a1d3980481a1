"""
Plane export of model grids as portable pixmaps and CSV tables
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from pathlib import Path
from typing import Dict, Optional

# Third-party core
import numpy as np
import pandas as pd
import xarray as xr

# Local
from .._io import PandasStore, write_bytes
from ..logger import logger
from ..model.vti_model import VtiModel

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

AXES = ('x', 'y', 'z')
OVERLAYS = ('gradient_magnitude', 'derivative_sum')


def velocity_derivatives(values: np.ndarray, spacing) -> np.ndarray:
    """Derivatives along x, y and z, shape (3,) + values.shape"""
    return np.stack([np.gradient(values, h, axis=axis)
                     if values.shape[axis] > 1 else np.zeros(values.shape)
                     for axis, h in enumerate(spacing)])


def overlay_field(m: VtiModel, mode: str, field_name: str = 'v0'
                  ) -> np.ndarray:
    """Pseudo-reflectivity of a model field

    Parameters
    ----------
    m
        model
    mode
        'gradient_magnitude' (Euclidean norm of the gradient) or
        'derivative_sum' (vertical plus horizontal derivatives)
    field_name, optional
        field to differentiate, by default 'v0'

    Returns
    -------
    np.ndarray
        grid of shape dims
    """
    if mode not in OVERLAYS:
        raise ValueError(f"Unknown overlay '{mode}', choose from {OVERLAYS}")
    d = velocity_derivatives(getattr(m, field_name), m.spacing)
    if mode == 'gradient_magnitude':
        return np.sqrt(np.sum(d ** 2, axis=0))
    return d.sum(axis=0)


def _to_bytes(plane: np.ndarray) -> np.ndarray:
    low, high = float(np.min(plane)), float(np.max(plane))
    if high <= low:
        return np.zeros(plane.shape, dtype=np.uint8)
    return np.rint(255.0 * (plane - low) / (high - low)).astype(np.uint8)


def encode_ppm(gray: np.ndarray, red: Optional[np.ndarray] = None) -> bytes:
    """Binary portable pixmap (P6); rows are the first array axis

    The gray plane fills the three channels, or only green and blue when a
    ``red`` overlay plane is given.
    """
    channels = [_to_bytes(gray)] * 3
    if red is not None:
        channels[0] = _to_bytes(red)
    pixels = np.stack(channels, axis=-1)
    rows, cols = gray.shape
    return f"P6\n{cols} {rows}\n255\n".encode('ascii') + pixels.tobytes()


def export_slices(m: VtiModel, output_dir: Path | str,
                  field_name: str = 'v0', axis: str = 'z', index: int = 0,
                  overlay: Optional[str] = None) -> Dict[str, Path]:
    """Write one plane of a model field as an image and a CSV table

    Parameters
    ----------
    m
        model
    output_dir
        directory receiving ``<field>_<axis><index>.ppm`` and ``.csv``
    field_name, optional
        model field, by default 'v0'
    axis, optional
        normal of the plane, by default 'z' (depth slice)
    index, optional
        node index along ``axis``
    overlay, optional
        'gradient_magnitude' or 'derivative_sum' to add an overlay channel
        and CSV column

    Returns
    -------
    Dict[str, Path]
        paths of the 'image' and the 'table'

    Raises
    ------
    ValueError
        If the axis, field or index is invalid
    """
    if axis not in AXES:
        raise ValueError(f"Slice axis must be one of {AXES}, got '{axis}'")
    n = m.dims[AXES.index(axis)]
    if not 0 <= index < n:
        raise ValueError(
            f"Slice index {index} is outside [0, {n - 1}] along {axis}")

    dataset: xr.Dataset = m.to_xarray()
    if field_name not in dataset:
        raise ValueError(f"Unknown field '{field_name}', choose from "
                         f"{list(dataset.data_vars)}")
    if overlay is not None:
        dataset['overlay'] = (AXES, overlay_field(m, overlay))

    plane = dataset.isel({axis: index})
    # depth increases downwards in the image
    order = [a for a in AXES if a != axis][::-1]
    values = plane[field_name].transpose(*order)

    output_dir = Path(output_dir)
    stem = f"{field_name}_{axis}{index}"
    red = plane['overlay'].transpose(*order).values if overlay else None
    image = write_bytes(output_dir / f"{stem}.ppm",
                        encode_ppm(values.values, red))

    frame: pd.DataFrame = values.to_dataframe().reset_index()
    columns = order[::-1] + [field_name]
    if overlay is not None:
        frame[overlay] = plane['overlay'].transpose(*order).values.ravel()
        columns.append(overlay)
    table = PandasStore(frame[columns], output_dir / stem).store()

    logger.info(f"Exported {field_name} plane {axis}={index} to {image}")
    return {'image': image, 'table': table}
