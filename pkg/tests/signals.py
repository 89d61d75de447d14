"""Synthetic test audio"""

import numpy as np

from exemplar_synth.dsp.types import Waveform


SAMPLE_RATE = 16000


def sine(freq: float, n_samples: int, sample_rate: int = SAMPLE_RATE, amp: float = 0.5) -> Waveform:
    t = np.arange(n_samples) / sample_rate
    return Waveform(amp * np.sin(2 * np.pi * freq * t), sample_rate)


def tone_bursts(
        freqs: list[float],
        burst_seconds: float = 0.15,
        gap_seconds: float = 0.1,
        sample_rate: int = SAMPLE_RATE,
        amps: list[float] | None = None
) -> Waveform:
    """Sine bursts with abrupt onsets, each followed by silence"""
    amps = amps or [0.5] * len(freqs)
    burst = int(burst_seconds * sample_rate)
    gap = int(gap_seconds * sample_rate)
    t = np.arange(burst) / sample_rate
    parts = []
    for freq, amp in zip(freqs, amps):
        tone = amp * np.sin(2 * np.pi * freq * t) + 0.3 * amp * np.sin(4 * np.pi * freq * t)
        parts.extend([tone, np.zeros(gap)])
    return Waveform(np.concatenate(parts), sample_rate)


def noise(n_samples: int, seed: int = 0, sample_rate: int = SAMPLE_RATE, amp: float = 0.1) -> Waveform:
    rng = np.random.default_rng(seed)
    return Waveform(amp * rng.standard_normal(n_samples), sample_rate)


def speech_like(seconds: float, seed: int = 0, sample_rate: int = SAMPLE_RATE) -> Waveform:
    """
    Harmonic "syllables" with a gliding pitch and a smooth envelope,
    separated by short pauses, over a faint noise floor.
    """
    rng = np.random.default_rng(seed)
    n_samples = int(seconds * sample_rate)
    samples = 0.002 * rng.standard_normal(n_samples)
    position = 0
    while position < n_samples:
        length = int(rng.uniform(0.12, 0.3) * sample_rate)
        pause = int(rng.uniform(0.03, 0.12) * sample_rate)
        end = min(position + length, n_samples)
        count = end - position
        t = np.arange(count) / sample_rate
        f0 = rng.uniform(90, 260) * (1 + rng.uniform(-0.2, 0.2) * t / max(t[-1], 1e-9))
        phase = 2 * np.pi * np.cumsum(f0) / sample_rate
        envelope = np.sin(np.pi * np.arange(count) / count) * rng.uniform(0.1, 0.5)
        tilt = rng.uniform(0.5, 1.5)
        voice = sum(np.sin(h * phase) / h ** tilt for h in range(1, 9))
        samples[position:end] += envelope * voice / 3
        position = end + pause
    return Waveform(samples, sample_rate)
