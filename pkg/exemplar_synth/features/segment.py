"""Module with onset segmentation and per-segment features (chroma, timbre, loudness)"""

import math
from typing import Sequence

import numpy as np
from loguru import logger
from scipy import fft
from scipy import ndimage
from scipy import signal as sps

from exemplar_synth.dsp.stft import frame_signal
from exemplar_synth.dsp.stft import magnitude_spectrogram
from exemplar_synth.dsp.stretch import resample_frames
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.features.frame import EPSILON
from exemplar_synth.features.frame import mel_spectrogram
from exemplar_synth.features.frame import onset_strength
from exemplar_synth.features.types import Segment
from exemplar_synth.features.types import SegmentFeatureVector


logger.debug('Initialize exemplar_synth.features.segment')


MIN_ONSET_GAP_SECONDS = 0.05

CHROMA_MIN_HZ = 27.5
CHROMA_MAX_HZ = 4186.0
CHROMA_MIN_FFT = 4096

TIMBRE_MEL_BANDS = 23
TIMBRE_PATCH_FRAMES = 8
# (mel index, time index) of the 2-D DCT basis functions, zig-zag order
TIMBRE_BASIS_ORDER: tuple[tuple[int, int], ...] = (
    (0, 0),
    (1, 0), (0, 1),
    (2, 0), (1, 1), (0, 2),
    (3, 0), (2, 1), (1, 2), (0, 3),
    (4, 0), (3, 1),
)


class SegmentOutOfRangeError(Exception):
    def __init__(self, segment: Segment, n_samples: int):
        super().__init__(
            f"Segment [{segment.start}, {segment.end}) exceeds "
            f"signal of {n_samples} samples"
        )


def _pad_to_frame(w: Waveform, p: StftParams) -> Waveform:
    if len(w) >= p.frame_len:
        return w
    samples = np.zeros(p.frame_len)
    samples[:len(w)] = w.samples
    return Waveform(samples, w.sample_rate)


def onset_boundaries(w: Waveform, p: StftParams) -> list[int]:
    """
    Onset sample positions: peaks of the smoothed (3-frame moving average)
    half-wave-rectified spectral flux above median + 1 std,
    at least 50 ms apart. A peak at frame n maps to the frame centre.
    """
    m = magnitude_spectrogram(w, p)
    smoothed = ndimage.uniform_filter1d(
        onset_strength(m),
        size=3,
        mode='constant'
    )
    threshold = float(np.median(smoothed) + np.std(smoothed))
    min_gap = max(1, math.ceil(MIN_ONSET_GAP_SECONDS * w.sample_rate / p.hop))
    peaks, _ = sps.find_peaks(smoothed, height=threshold, distance=min_gap)
    peaks = [n for n in peaks if smoothed[n] > threshold]

    boundaries = []
    for n in peaks:
        position = int(n) * p.hop + p.frame_len // 2
        if 0 < position < len(w):
            boundaries.append(position)
    return boundaries


def segment_onsets(
        w: Waveform,
        p: StftParams,
        source_file: str = ''
) -> list[Segment]:
    """Segments tiling the signal, the first one starting at sample 0"""
    starts = [0, *onset_boundaries(w, p)]
    ends = [*starts[1:], len(w)]
    segments = [
        Segment(start, end - start, source_file)
        for start, end in zip(starts, ends)
    ]
    logger.debug(
        f'Segmented {len(w)} samples into {len(segments)} segments '
        f'({len(segments) / w.duration:.2f}/s)'
    )
    return segments


def chroma(w: Waveform) -> np.ndarray:
    """
    Spectral energy folded onto 12 pitch classes (C=0 ... A=9 ... B=11),
    peak-normalized to 1; all zeros for silence.
    """
    n_fft = max(CHROMA_MIN_FFT, 1 << max(0, len(w) - 1).bit_length())
    spectrum = fft.rfft(w.samples * sps.get_window('hann', len(w)), n=n_fft)
    energy = np.abs(spectrum) ** 2
    frequencies = np.fft.rfftfreq(n_fft, d=1.0 / w.sample_rate)

    usable = (frequencies >= CHROMA_MIN_HZ) & (frequencies <= CHROMA_MAX_HZ)
    midi = 69.0 + 12.0 * np.log2(frequencies[usable] / 440.0)
    pitch_class = np.mod(np.round(midi).astype(int), 12)
    folded = np.bincount(pitch_class, weights=energy[usable], minlength=12)

    peak = folded.max()
    if peak == 0:
        return np.zeros(12)
    return folded / peak


def timbre_surrogate(w: Waveform, p: StftParams | None = None) -> np.ndarray:
    """
    Log-mel spectrogram (23 bands) of the segment, resampled to a
    23 x 8 patch and projected on the first 12 orthonormal 2-D DCT
    basis functions (TIMBRE_BASIS_ORDER).
    Silence gives log(EPSILON) * sqrt(23 * 8) as coefficient 1, zeros elsewhere.
    """
    p = p or StftParams()
    m = magnitude_spectrogram(_pad_to_frame(w, p), p)
    log_mel = np.log(mel_spectrogram(m, TIMBRE_MEL_BANDS) + EPSILON)
    patch = resample_frames(log_mel, TIMBRE_PATCH_FRAMES)
    basis = fft.dctn(patch, type=2, norm='ortho')
    return np.array([basis[k, t] for k, t in TIMBRE_BASIS_ORDER])


def loudness_curve(w: Waveform, p: StftParams) -> np.ndarray:
    """Frame loudness in dB: 10 log10(windowed mean square + EPSILON)"""
    window = p.window_array()
    frames = frame_signal(_pad_to_frame(w, p).samples, p) * window
    mean_square = np.sum(frames ** 2, axis=1) / np.sum(window ** 2)
    return 10.0 * np.log10(mean_square + EPSILON)


def loudness_triple(
        w: Waveform,
        p: StftParams | None = None
) -> tuple[float, float, float]:
    """(loudness at start, loudness at peak, peak position in [0, 1])"""
    p = p or StftParams()
    curve = loudness_curve(w, p)
    peak_frame = int(np.argmax(curve))
    centre = peak_frame * p.hop + p.frame_len / 2
    position = min(max(centre / len(w), 0.0), 1.0)
    return float(curve[0]), float(curve[peak_frame]), position


def segment_feature_vector(
        w: Waveform,
        p: StftParams | None = None
) -> SegmentFeatureVector:
    loudness_start, loudness_peak, peak_position = loudness_triple(w, p)
    return SegmentFeatureVector(
        chroma=tuple(float(v) for v in chroma(w)),
        timbre=tuple(float(v) for v in timbre_surrogate(w, p)),
        loudness_start=loudness_start,
        loudness_peak=loudness_peak,
        peak_position=peak_position,
    )


def segment_features(
        w: Waveform,
        segs: Sequence[Segment],
        p: StftParams | None = None
) -> list[SegmentFeatureVector]:
    """Feature vectors f1..f27, output[i] describing segs[i]"""
    vectors = []
    for segment in segs:
        if segment.end > len(w):
            raise SegmentOutOfRangeError(segment, len(w))
        vectors.append(
            segment_feature_vector(w.slice(segment.start, segment.length), p)
        )
    return vectors
