"""Module with short-time Fourier analysis and overlap-add synthesis"""

import numpy as np
from loguru import logger
from scipy import fft

from exemplar_synth.dsp.types import ComplexSpectrogram
from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform


logger.debug('Initialize exemplar_synth.dsp.stft')


class SignalTooShortError(Exception):
    def __init__(self, n_samples: int, frame_len: int):
        super().__init__(
            f"Signal of {n_samples} samples is shorter than "
            f"one frame of {frame_len} samples"
        )


class ColaViolationError(Exception):
    def __init__(self, params: StftParams):
        super().__init__(
            f"Window {params.window!r} with frame_len={params.frame_len} "
            f"and hop={params.hop} does not satisfy constant overlap-add"
        )


def n_frames(n_samples: int, params: StftParams) -> int:
    """Frame count, the trailing partial frame included"""
    if n_samples < params.frame_len:
        raise SignalTooShortError(n_samples, params.frame_len)
    full, remainder = divmod(n_samples - params.frame_len, params.hop)
    return 1 + full + (1 if remainder else 0)


def synthesis_length(frame_count: int, params: StftParams) -> int:
    return (frame_count - 1) * params.hop + params.frame_len


def frame_boundary(sample: int, n_samples: int, params: StftParams) -> int:
    """
    Number of frames of an n_samples signal whose centre lies before sample.
    Boundaries of consecutive segments therefore split the frame axis
    into contiguous spans; the signal end maps to the frame count.
    """
    count = n_frames(max(n_samples, params.frame_len), params)
    if sample >= n_samples:
        return count
    first_after = -(-(2 * sample - params.frame_len) // (2 * params.hop))
    return min(max(first_after, 0), count)


def frame_signal(samples: np.ndarray, params: StftParams) -> np.ndarray:
    """Matrix of hopped frames (N x frame_len), trailing frame zero-padded"""
    count = n_frames(samples.shape[0], params)
    padded = np.zeros(synthesis_length(count, params))
    padded[:samples.shape[0]] = samples
    view = np.lib.stride_tricks.sliding_window_view(padded, params.frame_len)
    return view[::params.hop][:count]


def stft(w: Waveform, p: StftParams) -> ComplexSpectrogram:
    frames = frame_signal(w.samples, p) * p.window_array()
    values = fft.rfft(frames, axis=1).T
    return ComplexSpectrogram(np.ascontiguousarray(values), p, w.sample_rate)


def magnitude(c: ComplexSpectrogram) -> MagSpectrogram:
    return MagSpectrogram(np.abs(c.values), c.params, c.sample_rate)


def magnitude_spectrogram(w: Waveform, p: StftParams) -> MagSpectrogram:
    return magnitude(stft(w, p))


def _overlap_add(
        frames: np.ndarray,
        hop: int
) -> np.ndarray:
    """Sum frames (N x L) hopped by hop into one signal of (N-1)*hop + L"""
    count, frame_len = frames.shape
    blocks = -(-frame_len // hop)
    padded = np.zeros((count, blocks * hop))
    padded[:, :frame_len] = frames
    padded = padded.reshape(count, blocks, hop)
    out = np.zeros((count + blocks - 1, hop))
    for j in range(blocks):
        out[j:j + count] += padded[:, j, :]
    return out.reshape(-1)[:(count - 1) * hop + frame_len]


def istft(c: ComplexSpectrogram) -> Waveform:
    """
    Least-squares weighted overlap-add inverse:
    x = sum(w * irfft(X_n)) / sum(w ** 2).
    Samples where the summed squared window falls below 1e-3 of its peak
    (outer edges of the first and last frame) are set to 0.
    """
    p = c.params
    if not p.check_cola():
        raise ColaViolationError(p)
    window = p.window_array()
    frames = fft.irfft(c.values.T, n=p.frame_len, axis=1) * window
    numerator = _overlap_add(frames, p.hop)
    norm = _overlap_add(
        np.broadcast_to(window ** 2, frames.shape),
        p.hop
    )
    covered = norm > 1e-3 * norm.max()
    samples = np.zeros_like(numerator)
    samples[covered] = numerator[covered] / norm[covered]
    return Waveform(samples, c.sample_rate)
