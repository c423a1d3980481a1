"""
Frequency continuation schedule
"""

#                                                                       Modules
# =============================================================================

from __future__ import annotations

# Standard
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence, Tuple

# Third-party core
import numpy as np

# Local
from .physics import DEFAULT_PPW_MIN, grid_interval_for_frequency

#                                                          Authorship & Credits
# =============================================================================
__author__ = 'horst developers'
__credits__ = ['horst developers']
__status__ = 'Alpha'
# =============================================================================
#
# =============================================================================

DEFAULT_MAX_ITERATIONS = 15


class Stage(NamedTuple):
    cycle: int
    index: int
    frequency: float
    spacing: float
    max_iterations: int


@dataclass(frozen=True)
class FrequencyPlan:
    """Ordered mono-frequency stages, optionally repeated over several
    cycles.

    Parameters
    ----------
    frequencies
        stage frequencies in Hz, strictly increasing
    spacings
        grid interval per stage, m, non-increasing
    max_iterations
        iteration cap per stage
    cycles, optional
        number of passes over the whole ladder, by default 1
    """
    frequencies: Tuple[float, ...]
    spacings: Tuple[float, ...]
    max_iterations: Tuple[int, ...]
    cycles: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'frequencies',
                           tuple(float(f) for f in self.frequencies))
        object.__setattr__(self, 'spacings',
                           tuple(float(h) for h in self.spacings))
        object.__setattr__(self, 'max_iterations',
                           tuple(int(n) for n in self.max_iterations))

        n = len(self.frequencies)
        if n == 0:
            raise ValueError("A frequency plan needs at least one frequency")
        if len(self.spacings) != n or len(self.max_iterations) != n:
            raise ValueError(
                "frequencies, spacings and max_iterations must have the "
                "same length")
        if self.cycles < 1:
            raise ValueError(f"cycles must be >= 1, got {self.cycles}")
        if np.any(np.diff(self.frequencies) <= 0.0):
            raise ValueError(
                f"Frequencies must be strictly increasing: "
                f"{self.frequencies}")
        if np.any(np.diff(self.spacings) > 0.0):
            raise ValueError(
                f"Grid intervals must not increase with frequency: "
                f"{self.spacings}")
        if min(self.frequencies) <= 0.0 or min(self.spacings) <= 0.0:
            raise ValueError("Frequencies and grid intervals must be > 0")

    def __len__(self) -> int:
        return len(self.frequencies)

#                                                      Alternative constructors
# =============================================================================

    @classmethod
    def from_frequencies(cls, frequencies: Sequence[float], v_min: float,
                         ppw: float = 4.0,
                         max_iterations: int | Sequence[int] =
                         DEFAULT_MAX_ITERATIONS,
                         cycles: int = 1,
                         ppw_min: float = DEFAULT_PPW_MIN) -> FrequencyPlan:
        """Plan whose grid intervals follow the frequency ladder rule

        Parameters
        ----------
        frequencies
            stage frequencies in Hz
        v_min
            minimum wavespeed of the target, m/s
        ppw, optional
            points per minimum wavelength, by default 4
        max_iterations, optional
            iteration cap, scalar or one per stage, by default 15
        cycles, optional
            number of passes, by default 1
        ppw_min, optional
            hard lower bound on points per wavelength, by default 3.8

        Returns
        -------
        FrequencyPlan
        """
        frequencies = [float(f) for f in frequencies]
        spacings = [grid_interval_for_frequency(f, v_min, ppw, ppw_min)
                    for f in frequencies]
        return cls(frequencies=frequencies, spacings=spacings,
                   max_iterations=_broadcast(max_iterations,
                                             len(frequencies)),
                   cycles=cycles)

    @classmethod
    def from_band(cls, f_start: float = 1.7, f_split: float = 8.55,
                  f_end: float = 13.0, n_low: int = 13, n_high: int = 5,
                  v_min: float = 1500.0, ppw: float = 4.0,
                  max_iterations: int = DEFAULT_MAX_ITERATIONS,
                  cycles: int = 1) -> FrequencyPlan:
        """Two-regime ladder: ``n_low`` evenly spaced frequencies on
        [f_start, f_split] followed by ``n_high`` evenly spaced frequencies on
        (f_split, f_end].

        Returns
        -------
        FrequencyPlan
        """
        if not f_start < f_split < f_end:
            raise ValueError(
                f"Need f_start < f_split < f_end, got {f_start}, {f_split}, "
                f"{f_end}")
        low = np.linspace(f_start, f_split, n_low)
        high = f_split + (f_end - f_split) * np.arange(1, n_high + 1) / n_high
        frequencies = np.round(np.concatenate([low, high]), 4)
        return cls.from_frequencies(frequencies, v_min=v_min, ppw=ppw,
                                    max_iterations=max_iterations,
                                    cycles=cycles)

    @classmethod
    def single(cls, frequency: float, spacing: float,
               max_iterations: int = DEFAULT_MAX_ITERATIONS
               ) -> FrequencyPlan:
        return cls(frequencies=(frequency,), spacings=(spacing,),
                   max_iterations=(max_iterations,))

#                                                                Public Methods
# =============================================================================

    def stages(self) -> Iterator[Stage]:
        """Iterate over all (cycle, stage) pairs in processing order"""
        for cycle in range(self.cycles):
            for index, (f, h, n) in enumerate(zip(
                    self.frequencies, self.spacings, self.max_iterations)):
                yield Stage(cycle=cycle, index=index, frequency=f,
                            spacing=h, max_iterations=n)


def _broadcast(value: int | Sequence[int], n: int,
               name: Optional[str] = 'max_iterations') -> Tuple[int, ...]:
    if np.isscalar(value):
        return (int(value),) * n
    value = tuple(int(v) for v in value)
    if len(value) != n:
        raise ValueError(f"{name} needs {n} entries, got {len(value)}")
    return value
