"""Module with WAV reading (PCM 16 / float 32) and PCM 16 writing"""

from pathlib import Path

import numpy as np
import soundfile as sf
from loguru import logger

from exemplar_synth.dsp.types import Waveform


logger.debug('Initialize exemplar_synth.audio_io.wav')


PCM16_SCALE = 32768.0
SUPPORTED_SUBTYPES = ('PCM_16', 'FLOAT')
# WAVEX is WAVE_FORMAT_EXTENSIBLE
SUPPORTED_CONTAINERS = ('WAV', 'WAVEX')


class AudioFormatError(Exception):
    def __init__(self, path: Path | str, reason: str):
        super().__init__(f"Can not read audio file {path}: {reason}")


class AudioWriteError(Exception):
    def __init__(self, path: Path | str, reason: str):
        super().__init__(f"Can not write audio file {path}: {reason}")


def read_wav(path: Path | str) -> Waveform:
    """
    Read a WAV file as mono float64.
    Channels are averaged, 16-bit codes are scaled by 1/32768.
    """
    try:
        info = sf.info(str(path))
    except (sf.LibsndfileError, RuntimeError, OSError) as e:
        raise AudioFormatError(path, str(e)) from e
    if info.format not in SUPPORTED_CONTAINERS:
        raise AudioFormatError(path, f'container {info.format} is not WAV')
    if info.subtype not in SUPPORTED_SUBTYPES:
        raise AudioFormatError(
            path,
            f'codec {info.subtype} is not one of {SUPPORTED_SUBTYPES}'
        )

    try:
        if info.subtype == 'PCM_16':
            codes, sample_rate = sf.read(str(path), dtype='int16', always_2d=True)
            data = codes.astype(np.float64) / PCM16_SCALE
        else:
            data, sample_rate = sf.read(str(path), dtype='float64', always_2d=True)
    except (sf.LibsndfileError, RuntimeError, OSError) as e:
        raise AudioFormatError(path, str(e)) from e

    samples = data.mean(axis=1) if data.shape[1] > 1 else data[:, 0]
    if not np.all(np.isfinite(samples)):
        raise AudioFormatError(path, 'samples contain NaN or Inf')
    logger.debug(
        f'Read {path}: {data.shape[0]} samples, {data.shape[1]} channels, '
        f'{sample_rate} Hz, {info.subtype}'
    )
    return Waveform(samples, int(sample_rate))


def write_wav(w: Waveform, path: Path | str) -> int:
    """
    Write 16-bit PCM. Samples outside [-1, 1) are clipped;
    returns the clipped sample count.
    """
    samples = w.samples
    clipped = int(np.count_nonzero((samples >= 1.0) | (samples < -1.0)))
    codes = np.clip(np.round(samples * PCM16_SCALE), -32768, 32767)
    if clipped:
        logger.warning(f'Clipped {clipped} samples while writing {path}')
    try:
        sf.write(
            str(path),
            codes.astype(np.int16),
            w.sample_rate,
            subtype='PCM_16',
            format='WAV'
        )
    except (sf.LibsndfileError, RuntimeError, OSError) as e:
        raise AudioWriteError(path, str(e)) from e
    return clipped
