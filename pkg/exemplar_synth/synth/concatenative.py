"""
Module with concatenative synthesis: every target segment is replaced by the
audio of a selected development segment, placed at the target's start.
"""

import numpy as np
from loguru import logger

from exemplar_synth.dsp.stretch import time_stretch
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.features.types import FEATURE_GROUPS
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.stats import unstandardize
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.config import SynthMethod
from exemplar_synth.synth.selection import build_candidate_grid
from exemplar_synth.synth.selection import viterbi_path
from exemplar_synth.synth.target import SynthTarget
from exemplar_synth.synth.target import TargetModeMismatchError


logger.debug('Initialize exemplar_synth.synth.concatenative')


LOUDNESS_PEAK_INDEX = FEATURE_GROUPS['loudness'].start + 1


def check_segment_target(target: SynthTarget, db: DevDatabase, cfg: SynthConfig):
    cfg.check_mode(db.mode)
    if target.mode is not DatabaseMode.SEGMENT:
        raise TargetModeMismatchError(target.mode, db.mode)


def nearest_entries(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> np.ndarray:
    """1-NN entry index per target segment"""
    grid = build_candidate_grid(target, db, cfg.model_copy(update={'P': 1}))
    return grid.candidates[:, 0]


def _fit_plain(samples: np.ndarray, length: int) -> np.ndarray:
    # Truncate, or zero-pad at the end
    out = np.zeros(length)
    count = min(length, samples.shape[0])
    out[:count] = samples[:count]
    return out


def _peak_gain(target_part: np.ndarray, replacement: np.ndarray) -> float:
    target_peak = np.max(np.abs(target_part)) if target_part.size else 0.0
    replacement_peak = np.max(np.abs(replacement))
    if target_peak == 0 or replacement_peak == 0:
        return 0.0
    return float(target_peak / replacement_peak)


def _loudness_gain(target: SynthTarget, db: DevDatabase, row: int, entry: int) -> float:
    target_db = target.raw_features[row, LOUDNESS_PEAK_INDEX]
    replacement_db = unstandardize(db.features[entry], db.stats)[LOUDNESS_PEAK_INDEX]
    return float(10.0 ** ((target_db - replacement_db) / 20.0))


def _fit_normalized(
        target: SynthTarget,
        db: DevDatabase,
        cfg: SynthConfig,
        row: int,
        entry: int
) -> np.ndarray:
    segment = target.segments[row]
    replacement = time_stretch(db.entry_audio(entry), segment.length).samples
    target_part = target.segment_audio(row)
    if cfg.gain == 'loudness' or target_part is None:
        gain = _loudness_gain(target, db, row, entry)
    else:
        gain = _peak_gain(target_part, replacement)
    if gain == 1.0:
        return replacement
    return replacement * gain


def _fade(part: np.ndarray, k: int, fade_in: bool, fade_out: bool) -> np.ndarray:
    if k <= 0 or not (fade_in or fade_out):
        return part
    part = part.copy()
    ramp = np.arange(1, k + 1) / (k + 1)
    if fade_in:
        part[:k] *= ramp
    if fade_out:
        part[-k:] *= ramp[::-1]
    return part


def render(
        target: SynthTarget,
        db: DevDatabase,
        cfg: SynthConfig,
        selection: np.ndarray,
        normalized: bool
) -> Waveform:
    """Place the selected entries at the target segments' starts"""
    out = np.zeros(target.length)
    fade_len = round(cfg.crossfade_ms * target.sample_rate / 1000.0)
    last = len(target.segments) - 1
    for row, (segment, entry) in enumerate(zip(target.segments, selection, strict=True)):
        entry = int(entry)
        if normalized:
            part = _fit_normalized(target, db, cfg, row, entry)
        else:
            part = _fit_plain(db.entry_audio(entry).samples, segment.length)
        k = min(fade_len, segment.length // 2)
        part = _fade(part, k, fade_in=row > 0, fade_out=row < last)
        out[segment.start:segment.end] = part
    return Waveform(out, target.sample_rate)


def cross_plain(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> Waveform:
    check_segment_target(target, db, cfg)
    return render(target, db, cfg, nearest_entries(target, db, cfg), normalized=False)


def cross_normalized(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> Waveform:
    check_segment_target(target, db, cfg)
    return render(target, db, cfg, nearest_entries(target, db, cfg), normalized=True)


def penalized_selection(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> np.ndarray:
    grid = build_candidate_grid(target, db, cfg)
    return viterbi_path(
        grid,
        db,
        cfg.lambda_v,
        cfg.transition,
        cfg.weight_vector(db.dimension)
    )


def cross_penalized(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> Waveform:
    check_segment_target(target, db, cfg)
    selection = penalized_selection(target, db, cfg)
    files = {db.entries[int(i)].source_file for i in selection}
    logger.debug(f'Viterbi selection over {len(selection)} segments uses {len(files)} files')
    return render(target, db, cfg, selection, normalized=True)


def concatenative_selection(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> np.ndarray:
    if cfg.method is SynthMethod.CROSS_PENALIZED:
        return penalized_selection(target, db, cfg)
    return nearest_entries(target, db, cfg)
