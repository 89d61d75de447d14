"""Module with length changes of waveforms and spectrograms"""

import numpy as np
from scipy import signal as sps

from exemplar_synth.dsp.types import Waveform


class StretchLengthError(Exception):
    def __init__(self, target_len: int):
        super().__init__(f"Target length must be at least 1, got {target_len}")


class EmptySignalError(Exception):
    def __init__(self):
        super().__init__("Can not stretch an empty signal")


def time_stretch(s: Waveform, target_len: int) -> Waveform:
    """
    Stretch by band-limited (FFT) resampling to exactly target_len samples.
    Pitch moves with length: stretching x2 halves every frequency.
    """
    if target_len < 1:
        raise StretchLengthError(target_len)
    if len(s) == 0:
        raise EmptySignalError()
    if target_len == len(s):
        return Waveform(s.samples.copy(), s.sample_rate)
    if not np.any(s.samples):
        return Waveform.silence(target_len, s.sample_rate)
    return Waveform(sps.resample(s.samples, target_len), s.sample_rate)


def resample_frames(values: np.ndarray, n_frames: int) -> np.ndarray:
    """
    Linear interpolation of a K x N matrix along time to K x n_frames.
    Frame centres are mapped onto each other end to end.
    """
    count = values.shape[1]
    if count == n_frames:
        return values.copy()
    if count == 1:
        return np.repeat(values, n_frames, axis=1)
    if n_frames == 1:
        positions = np.array([(count - 1) / 2.0])
    else:
        positions = np.linspace(0.0, count - 1, n_frames)
    left = np.floor(positions).astype(int)
    right = np.minimum(left + 1, count - 1)
    fraction = positions - left
    return values[:, left] * (1.0 - fraction) + values[:, right] * fraction
