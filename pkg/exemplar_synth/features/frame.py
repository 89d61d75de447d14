"""Module with frame-level features, one value per STFT frame"""

from functools import lru_cache

import librosa
import numpy as np
from loguru import logger
from scipy import fft

from exemplar_synth.dsp.stft import frame_signal
from exemplar_synth.dsp.stft import magnitude_spectrogram
from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.features.types import FeatureMatrix
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.features.types import UnknownFeatureSetError


logger.debug('Initialize exemplar_synth.features.frame')


# Floor added to energies before every log and ratio
EPSILON = 1e-10

N_MELS = 26
N_MFCC = 13


class CepstrumOrderError(Exception):
    def __init__(self, n_coeffs: int, n_mels: int):
        super().__init__(
            f"Coefficients 1..{n_coeffs} need more than {n_coeffs} "
            f"mel bands, got {n_mels}"
        )


@lru_cache(maxsize=32)
def mel_filterbank(sample_rate: int, frame_len: int, n_mels: int) -> np.ndarray:
    """Mel filters (n_mels x K), shared and read-only"""
    filters = librosa.filters.mel(sr=sample_rate, n_fft=frame_len, n_mels=n_mels)
    filters = filters.astype(np.float64)
    filters.flags.writeable = False
    return filters


def mel_spectrogram(m: MagSpectrogram, n_mels: int) -> np.ndarray:
    """Mel band energies (n_mels x N) of the power spectrum"""
    filters = mel_filterbank(m.sample_rate, m.params.frame_len, n_mels)
    return filters @ (m.values ** 2)


def cepstrum(log_mel: np.ndarray, n_coeffs: int) -> np.ndarray:
    """Orthonormal DCT-II over mel bands, coefficients 1..n_coeffs"""
    n_mels = log_mel.shape[0]
    if n_coeffs >= n_mels:
        raise CepstrumOrderError(n_coeffs, n_mels)
    coefficients = fft.dct(log_mel, type=2, norm='ortho', axis=0)
    return coefficients[1:n_coeffs + 1]


def mfcc(
        m: MagSpectrogram,
        n_mels: int = N_MELS,
        n_coeffs: int = N_MFCC
) -> FeatureMatrix:
    log_mel = np.log(mel_spectrogram(m, n_mels) + EPSILON)
    return FeatureMatrix(
        cepstrum(log_mel, n_coeffs),
        tuple(f'mfcc{k}' for k in range(1, n_coeffs + 1)),
        m.params
    )


def spectral_flux(m: MagSpectrogram) -> np.ndarray:
    """L2 norm of the frame-to-frame magnitude difference, 0 for frame 0"""
    flux = np.zeros(m.n_frames)
    flux[1:] = np.linalg.norm(np.diff(m.values, axis=1), axis=0)
    return flux


def onset_strength(m: MagSpectrogram) -> np.ndarray:
    """Half-wave-rectified spectral flux, 0 for frame 0"""
    strength = np.zeros(m.n_frames)
    strength[1:] = np.maximum(np.diff(m.values, axis=1), 0.0).sum(axis=0)
    return strength


def zero_crossing_rate(w: Waveform, p: StftParams) -> np.ndarray:
    """Sign changes per sample inside each (unwindowed) frame"""
    signs = np.signbit(frame_signal(w.samples, p))
    changes = np.count_nonzero(signs[:, 1:] != signs[:, :-1], axis=1)
    return changes / p.frame_len


def frame_energy(w: Waveform, p: StftParams) -> np.ndarray:
    windowed = frame_signal(w.samples, p) * p.window_array()
    return np.sum(windowed ** 2, axis=1)


def _spectral_shape(m: MagSpectrogram) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Least-squares slope, centroid and spread, in Hz units"""
    frequencies = m.bin_frequencies()[:, None]
    centered = frequencies - frequencies.mean()
    slope = np.sum(centered * m.values, axis=0) / np.sum(centered ** 2)

    mass = m.values.sum(axis=0) + EPSILON
    centroid = np.sum(frequencies * m.values, axis=0) / mass
    spread = np.sqrt(
        np.sum((frequencies - centroid) ** 2 * m.values, axis=0) / mass
    )
    return slope, centroid, spread


def frame_features(
        w: Waveform,
        p: StftParams,
        feature_set: FeatureSet | str | int
) -> FeatureMatrix:
    """
    Feature ladder, cumulative over the sets:
    3: zcr, odf, energy
    8: + spectral slope, centroid, spread, flux
    11: + mfcc 1-3
    21: + mfcc 4-13
    """
    feature_set = FeatureSet.parse(feature_set)
    if not feature_set.is_frame_set:
        raise UnknownFeatureSetError(feature_set.value)

    m = magnitude_spectrogram(w, p)
    rows = [
        zero_crossing_rate(w, p),
        onset_strength(m),
        frame_energy(w, p),
    ]
    if feature_set.dimension >= 8:
        slope, centroid, spread = _spectral_shape(m)
        rows.extend([slope, centroid, spread, spectral_flux(m)])
    if feature_set.dimension >= 11:
        cepstral = mfcc(m, N_MELS, N_MFCC).values
        rows.extend(cepstral[:feature_set.dimension - 8])

    return FeatureMatrix(np.vstack(rows), feature_set.names, p)
