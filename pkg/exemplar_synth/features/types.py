"""Module with feature containers and feature set layouts"""

from dataclasses import dataclass
from enum import StrEnum
from typing import Self

import numpy as np

from exemplar_synth.dsp.types import StftParams


FRAME_FEATURE_NAMES: tuple[str, ...] = (
    'zcr', 'odf', 'energy',
    'slope', 'centroid', 'spread', 'flux',
    *(f'mfcc{k}' for k in range(1, 14)),
)

SEGMENT_FEATURE_NAMES: tuple[str, ...] = (
    *(f'chroma{k}' for k in range(1, 13)),
    *(f'timbre{k}' for k in range(1, 13)),
    'loudness_start', 'loudness_peak', 'peak_position',
)

# 0-based column ranges of the 27-dim segment vector
FEATURE_GROUPS: dict[str, range] = {
    'chroma': range(0, 12),
    'timbre': range(12, 24),
    'loudness': range(24, 27),
}


class UnknownFeatureSetError(Exception):
    def __init__(self, value: object):
        super().__init__(
            f"Unknown feature set {value!r}, "
            f"expected one of {[s.value for s in FeatureSet]}"
        )


class FeatureSet(StrEnum):
    """Frame feature ladder (cumulative) and the segment vector"""
    M3 = '3'
    M8 = '8'
    M11 = '11'
    M21 = '21'
    MSD27 = 'msd27'

    @classmethod
    def parse(cls, value: 'str | int | FeatureSet') -> 'FeatureSet':
        try:
            return cls(str(value))
        except ValueError:
            raise UnknownFeatureSetError(value) from None

    @property
    def is_frame_set(self) -> bool:
        return self is not FeatureSet.MSD27

    @property
    def dimension(self) -> int:
        if self is FeatureSet.MSD27:
            return len(SEGMENT_FEATURE_NAMES)
        return int(self.value)

    @property
    def names(self) -> tuple[str, ...]:
        if self is FeatureSet.MSD27:
            return SEGMENT_FEATURE_NAMES
        return FRAME_FEATURE_NAMES[:self.dimension]


@dataclass(frozen=True)
class FeatureMatrix:
    """M x N feature values, one column per STFT frame"""
    values: np.ndarray
    names: tuple[str, ...]
    frame_params: StftParams

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != len(self.names):
            raise ValueError(
                f'{len(self.names)} names for values of shape {self.values.shape}'
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError('feature values contain NaN or Inf')

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]

    def rows(self) -> np.ndarray:
        """Frames as rows (N x M)"""
        return np.ascontiguousarray(self.values.T)


@dataclass(frozen=True, order=True)
class Segment:
    start: int
    length: int
    source_file: str = ''

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f'segment start must be >= 0, got {self.start}')
        if self.length < 1:
            raise ValueError(f'segment length must be >= 1, got {self.length}')

    @property
    def end(self) -> int:
        return self.start + self.length


@dataclass(frozen=True)
class SegmentFeatureVector:
    """Features f1..f27 of one segment"""
    chroma: tuple[float, ...]
    timbre: tuple[float, ...]
    loudness_start: float
    loudness_peak: float
    peak_position: float

    def __post_init__(self):
        if len(self.chroma) != 12 or len(self.timbre) != 12:
            raise ValueError(
                f'expected 12 chroma and 12 timbre values, '
                f'got {len(self.chroma)} and {len(self.timbre)}'
            )

    def as_array(self) -> np.ndarray:
        return np.array([
            *self.chroma,
            *self.timbre,
            self.loudness_start,
            self.loudness_peak,
            self.peak_position,
        ], dtype=np.float64)

    @classmethod
    def from_array(cls, values: np.ndarray) -> Self:
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (27,):
            raise ValueError(f'expected 27 values, got shape {values.shape}')
        return cls(
            chroma=tuple(float(v) for v in values[0:12]),
            timbre=tuple(float(v) for v in values[12:24]),
            loudness_start=float(values[24]),
            loudness_peak=float(values[25]),
            peak_position=float(values[26]),
        )
