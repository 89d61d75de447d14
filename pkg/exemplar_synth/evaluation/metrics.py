"""Module with objective spectrogram distances"""

import numpy as np

from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase


DB_FLOOR = -300.0
KL_EPSILON = 1e-12
NORMALIZATION_TOLERANCE = 1e-9


class ZeroReferenceError(Exception):
    def __init__(self):
        super().__init__("Reference spectrogram is all zero")


class ShapeMismatchError(Exception):
    def __init__(self, reference: tuple[int, ...], estimate: tuple[int, ...]):
        super().__init__(f"Spectrogram shapes differ: {reference} and {estimate}")


class NotNormalizedError(Exception):
    def __init__(self, total: float):
        super().__init__(f"Distribution sums to {total!r}, expected 1")


def _values(s: MagSpectrogram | np.ndarray) -> np.ndarray:
    if isinstance(s, MagSpectrogram):
        return s.values
    return np.asarray(s, dtype=np.float64)


def _error_ratio(s: MagSpectrogram | np.ndarray, s_hat: MagSpectrogram | np.ndarray) -> float:
    reference, estimate = _values(s), _values(s_hat)
    if reference.shape != estimate.shape:
        raise ShapeMismatchError(reference.shape, estimate.shape)
    norm = np.linalg.norm(reference)
    if norm == 0:
        raise ZeroReferenceError()
    return float(np.linalg.norm(reference - estimate) / norm)


def _to_db(ratio: float, factor: float) -> float:
    if ratio == 0:
        return DB_FLOOR
    return max(factor * float(np.log10(ratio)), DB_FLOOR)


def relative_error_db(s: MagSpectrogram | np.ndarray, s_hat: MagSpectrogram | np.ndarray) -> float:
    """20 log10(||S - S_hat||_F / ||S||_F), floored at -300 dB"""
    return _to_db(_error_ratio(s, s_hat), 20.0)


def mse_db(s: MagSpectrogram | np.ndarray, s_hat: MagSpectrogram | np.ndarray) -> float:
    """10 log10(||S - S_hat||_F / ||S||_F), floored at -300 dB"""
    return _to_db(_error_ratio(s, s_hat), 10.0)


def normalize_spectrogram(s: MagSpectrogram | np.ndarray) -> MagSpectrogram | np.ndarray:
    """Scale to unit total mass; returns the same type it was given"""
    values = _values(s)
    total = values.sum()
    if total == 0:
        raise ZeroReferenceError()
    normalized = values / total
    if isinstance(s, MagSpectrogram):
        return MagSpectrogram(normalized, s.params, s.sample_rate)
    return normalized


def _check_normalized(values: np.ndarray):
    total = float(values.sum())
    if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
        raise NotNormalizedError(total)


def kl_divergence(s_n: MagSpectrogram | np.ndarray, s_hat_n: MagSpectrogram | np.ndarray) -> float:
    """
    sum p * ln(p / q) over normalized spectrograms, with p and q floored
    at 1e-12 inside the ratio. Entries where p is 0 contribute nothing.
    """
    p, q = _values(s_n), _values(s_hat_n)
    if p.shape != q.shape:
        raise ShapeMismatchError(p.shape, q.shape)
    _check_normalized(p)
    _check_normalized(q)
    ratio = np.maximum(p, KL_EPSILON) / np.maximum(q, KL_EPSILON)
    return float(np.sum(p * np.log(ratio)))


def spectrogram_kl(s: MagSpectrogram | np.ndarray, s_hat: MagSpectrogram | np.ndarray) -> float:
    """KL divergence after normalizing both; an all-zero estimate scores against uniform mass"""
    estimate = _values(s_hat)
    if not estimate.any():
        estimate = np.ones_like(estimate)
    return kl_divergence(normalize_spectrogram(_values(s)), normalize_spectrogram(estimate))


def constant_baseline(db: DevDatabase, n_frames: int) -> MagSpectrogram:
    """Mean development magnitude column repeated over n_frames"""
    if db.mode is DatabaseMode.FRAME:
        columns = [db.entry_magnitude(i)[:, 0] for i in range(db.size)]
    else:
        columns = [
            db.audio.magnitude(f.id, db.params).mean(axis=1) for f in db.files
        ]
    mean = np.mean(columns, axis=0)
    return MagSpectrogram(
        np.repeat(mean[:, None], n_frames, axis=1),
        db.params,
        db.sample_rate
    )
