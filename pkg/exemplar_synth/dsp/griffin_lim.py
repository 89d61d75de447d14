"""
Phase reconstruction from a magnitude spectrogram with the Griffin-Lim algorithm.

Starting from uniformly random phases, every iteration

1. reconstructs the time-domain signal (least-squares overlap-add),
2. re-applies the STFT,
3. enforces the known magnitude, keeping the phase.

Measured in the full two-sided spectrum norm, the distance between the target magnitude and the
magnitude of the current estimate never increases.
"""

from typing import Callable

import numpy as np
from loguru import logger

from exemplar_synth.dsp.stft import istft
from exemplar_synth.dsp.stft import stft
from exemplar_synth.dsp.types import ComplexSpectrogram
from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.dsp.types import Waveform


logger.debug('Initialize exemplar_synth.dsp.griffin_lim')


type InconsistencyCallback = Callable[[int, float], None]


class GriffinLimIterationsError(Exception):
    def __init__(self, n_iter: int):
        super().__init__(f"Griffin-Lim needs at least 1 iteration, got {n_iter}")


def _bin_weights(n_bins: int, frame_len: int) -> np.ndarray:
    """Multiplicity of each one-sided bin in the two-sided spectrum"""
    weights = np.full(n_bins, 2.0)
    weights[0] = 1.0
    if frame_len % 2 == 0:
        weights[-1] = 1.0
    return weights[:, None]


def _inconsistency(target: np.ndarray, estimate: ComplexSpectrogram) -> float:
    weights = _bin_weights(target.shape[0], estimate.params.frame_len)
    reference = np.sqrt(np.sum(weights * target ** 2))
    if reference == 0:
        return 0.0
    residual = np.sqrt(np.sum(weights * (target - np.abs(estimate.values)) ** 2))
    return float(residual / reference)


def inconsistency(m: MagSpectrogram, w: Waveform) -> float:
    """
    Relative distance between m and |stft(w)|.
    w must span exactly m.n_frames frames.
    """
    estimate = stft(w, m.params)
    if estimate.n_frames != m.n_frames:
        raise ValueError(
            f'waveform spans {estimate.n_frames} frames, expected {m.n_frames}'
        )
    return _inconsistency(m.values, estimate)


def _unit_phase(values: np.ndarray) -> np.ndarray:
    # angle(0) == 0, so empty bins get phase 1
    return np.exp(1j * np.angle(values))


def griffin_lim(
        m: MagSpectrogram,
        n_iter: int = 50,
        seed: int = 0,
        callback: InconsistencyCallback | None = None
) -> Waveform:
    """
    Estimate a waveform whose STFT magnitude matches m.
    Deterministic for given (m, n_iter, seed).
    callback, if given, receives (iteration, inconsistency) before each
    iteration and once after the last one.
    """
    if n_iter < 1:
        raise GriffinLimIterationsError(n_iter)
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=m.values.shape)
    estimate = ComplexSpectrogram(
        m.values * np.exp(1j * phases),
        m.params,
        m.sample_rate
    )
    w = istft(estimate)

    for iteration in range(n_iter):
        analysis = stft(w, m.params)
        if callback is not None:
            callback(iteration, _inconsistency(m.values, analysis))
        estimate = ComplexSpectrogram(
            m.values * _unit_phase(analysis.values),
            m.params,
            m.sample_rate
        )
        w = istft(estimate)

    if callback is not None:
        callback(n_iter, _inconsistency(m.values, stft(w, m.params)))
    logger.debug(f'Griffin-Lim done, {n_iter=}, frames={m.n_frames}')
    return w
