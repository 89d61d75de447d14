"""Module with the method dispatch: one entry point for every synthesis method"""

from dataclasses import dataclass

import numpy as np
from loguru import logger

from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.synth.additive import additive_synthesize
from exemplar_synth.synth.concatenative import check_segment_target
from exemplar_synth.synth.concatenative import concatenative_selection
from exemplar_synth.synth.concatenative import render
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.config import SynthMethod
from exemplar_synth.synth.target import SynthTarget


logger.debug('Initialize exemplar_synth.synth.engine')


@dataclass(frozen=True)
class SynthResult:
    waveform: Waveform
    # Magnitude estimate before phase reconstruction, additive methods only
    magnitude: MagSpectrogram | None = None
    # Selected entry per target segment, concatenative methods only
    selection: np.ndarray | None = None


def synthesize(target: SynthTarget, db: DevDatabase, cfg: SynthConfig) -> SynthResult:
    logger.info(
        f'Synthesize {target.size} {target.mode.value}s with {cfg.method.value}, '
        f'P={cfg.P}, database of {db.size} entries'
    )
    if cfg.method.is_concatenative:
        check_segment_target(target, db, cfg)
        selection = concatenative_selection(target, db, cfg)
        normalized = cfg.method is not SynthMethod.CROSS_PLAIN
        result = SynthResult(
            render(target, db, cfg, selection, normalized),
            selection=selection
        )
    else:
        waveform, magnitude = additive_synthesize(target, db, cfg)
        result = SynthResult(waveform, magnitude=magnitude)

    if len(result.waveform) != target.length:
        raise ValueError(
            f'synthesized {len(result.waveform)} samples for a target of {target.length}'
        )
    return result
