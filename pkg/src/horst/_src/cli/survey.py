"""
Synthetic ocean-bottom-node surveys for inverse-crime experiments
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

# Third-party core
import numpy as np

# Local
from ..fwi.dataset import Acquisition
from ..logger import logger
from ..model.physics import brocher_density
from ..model.vti_model import WATER_VELOCITY, VtiModel

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

# Full-scale acquisition pitches, m
FIELD_OBN_PITCH = 375.0
FIELD_SHOT_INLINE = 18.75
FIELD_SHOT_CROSSLINE = 37.5
DEFAULT_SCALE = 0.125


@dataclass(frozen=True)
class GaussianAnomaly:
    """Relative V0 perturbation amplitude * exp(-|x - c|^2 / (2 radius^2))"""
    position: Tuple[float, float, float]
    radius: float
    amplitude: float

    def __post_init__(self):
        object.__setattr__(self, 'position',
                           tuple(float(c) for c in self.position))
        if len(self.position) != 3:
            raise ValueError(
                f"Anomaly position needs three coordinates, got "
                f"{self.position}")
        if self.radius <= 0.0:
            raise ValueError(
                f"Anomaly radius must be > 0, got {self.radius}")

    def evaluate(self, m: VtiModel) -> np.ndarray:
        x, y, z = np.meshgrid(*(m.coordinates(a) for a in range(3)),
                              indexing='ij', sparse=True)
        cx, cy, cz = self.position
        r2 = (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2
        return self.amplitude * np.exp(-0.5 * r2 / self.radius ** 2)


@dataclass(frozen=True)
class SurveySpec:
    """Ocean-bottom nodes on a staggered grid and a regular shot carpet

    Pitches are full-scale values multiplied by ``scale``.

    Parameters
    ----------
    obn_pitch
        node spacing along both axes of the staggered grid, m
    shot_inline, shot_crossline
        shot interval and source-line interval, m
    scale
        factor applied to every pitch
    obn_depth, shot_depth
        depths below the origin, m; two cells below the deepest seabed
        node and one cell below the top when None
    margin
        horizontal distance kept free along every side, m
    anomalies
        perturbations of the true model
    """
    obn_pitch: float = FIELD_OBN_PITCH
    shot_inline: float = FIELD_SHOT_INLINE
    shot_crossline: float = FIELD_SHOT_CROSSLINE
    scale: float = DEFAULT_SCALE
    obn_depth: Optional[float] = None
    shot_depth: Optional[float] = None
    margin: float = 0.0
    anomalies: Tuple[GaussianAnomaly, ...] = field(default_factory=tuple)

    def __post_init__(self):
        for name in ('obn_pitch', 'shot_inline', 'shot_crossline', 'scale'):
            if getattr(self, name) <= 0.0:
                raise ValueError(
                    f"{name} must be > 0, got {getattr(self, name)}")
        if self.margin < 0.0:
            raise ValueError(f"margin must be >= 0, got {self.margin}")
        object.__setattr__(self, 'anomalies', tuple(self.anomalies))

    @property
    def pitches(self) -> Tuple[float, float, float]:
        """(node pitch, shot interval, line interval) after scaling"""
        return (self.obn_pitch * self.scale, self.shot_inline * self.scale,
                self.shot_crossline * self.scale)


def _axis(low: float, high: float, pitch: float) -> np.ndarray:
    count = int(np.floor((high - low) / pitch + 1e-9)) + 1
    offset = 0.5 * ((high - low) - (count - 1) * pitch)
    return low + offset + pitch * np.arange(count)


def staggered_grid(extent: Sequence[float], pitch: float,
                   margin: float = 0.0) -> np.ndarray:
    """Horizontal positions on a grid whose odd rows are shifted by half a
    pitch
    """
    xs = _axis(margin, extent[0] - margin, pitch)
    ys = _axis(margin, extent[1] - margin, pitch)
    points = []
    for row, y in enumerate(ys):
        shifted = xs + 0.5 * pitch if row % 2 else xs
        shifted = shifted[shifted <= extent[0] - margin + 1e-9]
        points += [(x, y) for x in shifted]
    return np.asarray(points, dtype=float).reshape(-1, 2)


def base_model(dims: Sequence[int], spacing: float, v0: float = 2000.0,
               v0_gradient: float = 0.5, delta: float = 0.0,
               epsilon: float = 0.0, q: float = np.inf,
               water_depth: int = 0) -> VtiModel:
    """Layer-cake VTI model: water on top, V0 growing linearly with depth,
    Brocher density
    """
    dims = tuple(int(n) for n in dims)
    z = spacing * np.arange(dims[2])
    velocity = np.broadcast_to(v0 + v0_gradient * z, dims).copy()
    water_depth_index = np.full(dims[:2], int(water_depth))
    water = np.arange(dims[2])[None, None, :] < water_depth_index[:, :, None]
    velocity[np.broadcast_to(water, dims)] = WATER_VELOCITY

    def full(value):
        return np.where(water, 0.0, value) * np.ones(dims)

    quality = np.where(water, np.inf, q) * np.ones(dims)
    return VtiModel(v0=velocity, delta=full(delta), epsilon=full(epsilon),
                    rho=brocher_density(velocity, water_depth_index),
                    q=quality, spacing=(spacing,) * 3,
                    water_depth_index=water_depth_index)


def synthesize_survey(spec: SurveySpec, base: VtiModel
                      ) -> Tuple[VtiModel, VtiModel, Acquisition]:
    """True model, starting model and acquisition of an inverse-crime
    experiment

    Parameters
    ----------
    spec
        survey layout and anomalies
    base
        background model, returned as the starting model

    Returns
    -------
    Tuple[VtiModel, VtiModel, Acquisition]
        true model, starting model, acquisition with the nodes as sources

    Raises
    ------
    ValueError
        If an anomaly centre or a receiver falls outside the model volume,
        or no node fits
    """
    for anomaly in spec.anomalies:
        if not base.contains(anomaly.position):
            raise ValueError(
                f"Anomaly at {anomaly.position} lies outside the model "
                f"volume {base.origin} + {base.extent}")

    perturbation = np.zeros(base.dims)
    for anomaly in spec.anomalies:
        perturbation += anomaly.evaluate(base)
    perturbation[base.water_mask] = 0.0
    true_model = base.with_v0(base.v0 * (1.0 + perturbation))

    h = base.spacing[2]
    extent = base.extent
    obn_pitch, shot_inline, shot_crossline = spec.pitches
    seabed = float(np.max(base.water_depth_index)) * h
    obn_depth = spec.obn_depth if spec.obn_depth is not None \
        else seabed + 2.0 * h
    shot_depth = spec.shot_depth if spec.shot_depth is not None else h

    nodes = staggered_grid(extent, obn_pitch, spec.margin)
    if nodes.shape[0] == 0:
        raise ValueError(
            f"No node fits a {extent[0]} x {extent[1]} m area at a "
            f"{obn_pitch} m pitch")
    xs = _axis(spec.margin, extent[0] - spec.margin, shot_inline)
    ys = _axis(spec.margin, extent[1] - spec.margin, shot_crossline)
    shots = np.stack(np.meshgrid(xs, ys, indexing='ij'), -1).reshape(-1, 2)

    origin = np.asarray(base.origin)
    sources = origin + np.column_stack(
        [nodes, np.full(len(nodes), obn_depth)])
    receivers = origin + np.column_stack(
        [shots, np.full(len(shots), shot_depth)])
    for kind, points in (('node', sources), ('shot', receivers)):
        outside = [p for p in points if not base.contains(p)]
        if outside:
            raise ValueError(
                f"{len(outside)} {kind} positions lie outside the model, "
                f"e.g. {outside[0]}")

    logger.info(f"Synthesized survey: {len(sources)} nodes, "
                f"{len(receivers)} shots, {len(spec.anomalies)} anomalies")
    return true_model, base, Acquisition(sources, receivers,
                                         reciprocity=True)


def anomalies_from_config(items) -> List[GaussianAnomaly]:
    return [GaussianAnomaly(tuple(item.position), item.radius,
                            item.amplitude) for item in items]
