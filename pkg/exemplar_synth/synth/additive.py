"""
Module with additive synthesis: the magnitude spectrograms of the P nearest
development entries are combined per target segment (or frame), then one
Griffin-Lim pass recovers a waveform.
"""

from typing import Sequence

import numpy as np
from loguru import logger

from exemplar_synth.dsp.griffin_lim import griffin_lim
from exemplar_synth.dsp.stft import frame_boundary
from exemplar_synth.dsp.stft import n_frames
from exemplar_synth.dsp.stretch import resample_frames
from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.synth.config import CombineMode
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.selection import CandidateGrid
from exemplar_synth.synth.selection import build_candidate_grid
from exemplar_synth.synth.target import SynthTarget
from exemplar_synth.synth.target import TargetModeMismatchError


logger.debug('Initialize exemplar_synth.synth.additive')


class EmptyCombinationError(Exception):
    def __init__(self):
        super().__init__("Nothing to combine: no spectrograms given")


class CombineShapeError(Exception):
    def __init__(self, shapes: Sequence[tuple[int, ...]]):
        super().__init__(f"Spectrograms to combine differ in shape: {sorted(set(shapes))}")


def combine_magnitudes(stack: Sequence[np.ndarray], mode: CombineMode | str) -> np.ndarray:
    if len(stack) == 0:
        raise EmptyCombinationError()
    shapes = [s.shape for s in stack]
    if len(set(shapes)) > 1:
        raise CombineShapeError(shapes)
    if len(stack) == 1:
        return np.array(stack[0], dtype=np.float64)
    values = np.stack(stack)
    match CombineMode(mode):
        case CombineMode.MEDIAN:
            return np.median(values, axis=0)
        case CombineMode.MEAN:
            return np.mean(values, axis=0)
        case CombineMode.MAX:
            return np.max(values, axis=0)


def add_combine(spectra: Sequence[MagSpectrogram], mode: CombineMode | str) -> MagSpectrogram:
    """Elementwise median, mean or max of equally shaped spectrograms"""
    if len(spectra) == 0:
        raise EmptyCombinationError()
    first = spectra[0]
    values = combine_magnitudes([s.values for s in spectra], mode)
    return MagSpectrogram(values, first.params, first.sample_rate)


def _frame_count(target: SynthTarget, db: DevDatabase) -> int:
    return n_frames(max(target.length, db.params.frame_len), db.params)


def estimate_segment_magnitude(
        target: SynthTarget,
        db: DevDatabase,
        grid: CandidateGrid,
        mode: CombineMode
) -> MagSpectrogram:
    """
    K x N estimate over the target's frames. Frames of segment i
    (those whose centre lies inside it) take the combination of its
    candidates' spectrograms, each resampled to the span length.
    Frames outside every segment stay 0.
    """
    count = _frame_count(target, db)
    values = np.zeros((db.params.n_bins, count))
    length = max(target.length, db.params.frame_len)
    for segment, candidates in zip(target.segments, grid.candidates, strict=True):
        begin = frame_boundary(segment.start, length, db.params)
        end = frame_boundary(segment.end, length, db.params)
        if end <= begin:
            continue
        stack = [
            resample_frames(db.entry_magnitude(int(entry)), end - begin)
            for entry in candidates
        ]
        values[:, begin:end] = combine_magnitudes(stack, mode)
    return MagSpectrogram(values, db.params, db.sample_rate)


def estimate_frame_magnitude(
        target: SynthTarget,
        db: DevDatabase,
        grid: CandidateGrid
) -> MagSpectrogram:
    """Column n is the median of the P development frames nearest to target frame n"""
    count = _frame_count(target, db)
    values = np.zeros((db.params.n_bins, count))
    for n, candidates in enumerate(grid.candidates[:count]):
        stack = [db.entry_magnitude(int(entry))[:, 0] for entry in candidates]
        values[:, n] = combine_magnitudes(stack, CombineMode.MEDIAN)
    return MagSpectrogram(values, db.params, db.sample_rate)


def estimate_magnitude(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> MagSpectrogram:
    cfg.check_mode(db.mode)
    if target.mode is not db.mode:
        raise TargetModeMismatchError(target.mode, db.mode)
    grid = build_candidate_grid(target, db, cfg)
    if db.mode is DatabaseMode.FRAME:
        return estimate_frame_magnitude(target, db, grid)
    return estimate_segment_magnitude(target, db, grid, cfg.method.combine_mode)


def reconstruct(m: MagSpectrogram, length: int, cfg: SynthConfig) -> Waveform:
    """Griffin-Lim over the whole estimate, trimmed to length samples"""
    w = griffin_lim(
        m,
        cfg.gl_iters,
        cfg.gl_seed,
        lambda i, value: logger.debug(f'Griffin-Lim iteration {i}: inconsistency {value:.6f}')
    )
    return Waveform(w.samples[:length], w.sample_rate)


def additive_synthesize(
        target: SynthTarget,
        db: DevDatabase,
        cfg: SynthConfig
) -> tuple[Waveform, MagSpectrogram]:
    m = estimate_magnitude(target, db, cfg)
    return reconstruct(m, target.length, cfg), m
