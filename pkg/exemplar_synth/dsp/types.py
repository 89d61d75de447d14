"""Module with time and time-frequency signal containers"""

from dataclasses import dataclass
from typing import Literal
from typing import Self

import numpy as np
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import model_validator
from scipy import signal as sps


type WindowName = Literal['hann', 'rectangular']


class InvalidWaveformError(Exception):
    def __init__(self, reason: str):
        super().__init__(f"Waveform is not valid: {reason}")


class InvalidSpectrogramError(Exception):
    def __init__(self, reason: str):
        super().__init__(f"Spectrogram is not valid: {reason}")


class StftParams(BaseModel):
    """Framing of the short-time Fourier transform"""
    model_config = ConfigDict(frozen=True)

    frame_len: int = Field(default=1024, gt=0)
    hop: int = Field(default=256, gt=0)
    window: WindowName = 'hann'

    @model_validator(mode='after')
    def _hop_inside_frame(self) -> Self:
        if self.hop > self.frame_len:
            raise ValueError(
                f'hop ({self.hop}) must not exceed frame_len ({self.frame_len})'
            )
        return self

    @classmethod
    def from_milliseconds(
            cls,
            frame_ms: float,
            hop_ms: float,
            sample_rate: int,
            window: WindowName = 'hann'
    ) -> Self:
        """Framing given in milliseconds, e.g. 32 ms frames with 4 ms hop"""
        frame_len = max(1, round(frame_ms * sample_rate / 1000))
        hop = max(1, round(hop_ms * sample_rate / 1000))
        return cls(frame_len=frame_len, hop=hop, window=window)

    @property
    def n_bins(self) -> int:
        return self.frame_len // 2 + 1

    def window_array(self) -> np.ndarray:
        if self.window == 'rectangular':
            return np.ones(self.frame_len)
        # Periodic hann is COLA for hop = frame_len / 2, frame_len / 4, ...
        return sps.get_window('hann', self.frame_len, fftbins=True)

    def check_cola(self) -> bool:
        return bool(
            sps.check_COLA(
                self.window_array(),
                self.frame_len,
                self.frame_len - self.hop
            )
        )


@dataclass(frozen=True)
class Waveform:
    """Mono time-domain audio"""
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise InvalidWaveformError(f'expected mono, got shape {samples.shape}')
        if self.sample_rate <= 0:
            raise InvalidWaveformError(f'sample_rate={self.sample_rate}')
        if not np.all(np.isfinite(samples)):
            raise InvalidWaveformError('samples contain NaN or Inf')
        object.__setattr__(self, 'samples', samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return len(self) / self.sample_rate

    def slice(self, start: int, length: int) -> 'Waveform':
        return Waveform(
            self.samples[start:start + length].copy(),
            self.sample_rate
        )

    @classmethod
    def silence(cls, n_samples: int, sample_rate: int) -> Self:
        return cls(np.zeros(n_samples), sample_rate)


@dataclass(frozen=True)
class ComplexSpectrogram:
    """One-sided STFT, K x N"""
    values: np.ndarray
    params: StftParams
    sample_rate: int

    def __post_init__(self):
        if self.values.ndim != 2 or self.values.shape[0] != self.params.n_bins:
            raise InvalidSpectrogramError(
                f'shape {self.values.shape} does not match '
                f'{self.params.n_bins} frequency bins'
            )

    @property
    def n_bins(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class MagSpectrogram:
    """STFT modulus, K x N, nonnegative"""
    values: np.ndarray
    params: StftParams
    sample_rate: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != self.params.n_bins:
            raise InvalidSpectrogramError(
                f'shape {values.shape} does not match '
                f'{self.params.n_bins} frequency bins'
            )
        if not np.all(np.isfinite(values)):
            raise InvalidSpectrogramError('values contain NaN or Inf')
        if np.any(values < 0):
            raise InvalidSpectrogramError('values must be nonnegative')
        object.__setattr__(self, 'values', values)

    @property
    def n_bins(self) -> int:
        return self.values.shape[0]

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]

    def bin_frequencies(self) -> np.ndarray:
        return np.fft.rfftfreq(self.params.frame_len, d=1.0 / self.sample_rate)
