"""Module with synthesis targets: what to reconstruct, and from which features"""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from exemplar_synth.audio_io.analysis import AnalysisDocument
from exemplar_synth.audio_io.analysis import document_segments
from exemplar_synth.audio_io.analysis import load_analysis_document
from exemplar_synth.dsp.stft import synthesis_length
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.features.frame import frame_features
from exemplar_synth.features.segment import segment_features
from exemplar_synth.features.segment import segment_onsets
from exemplar_synth.features.types import FeatureMatrix
from exemplar_synth.features.types import Segment
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.stats import DimensionMismatchError


class TargetModeMismatchError(Exception):
    def __init__(self, target_mode: DatabaseMode, db_mode: DatabaseMode):
        super().__init__(
            f"Target in {target_mode.value} mode can not be synthesized "
            f"from a {db_mode.value}-mode database"
        )


class TargetSampleRateError(Exception):
    def __init__(self, target_rate: int, db_rate: int):
        super().__init__(
            f"Target at {target_rate} Hz can not be synthesized "
            f"from a database at {db_rate} Hz"
        )


@dataclass(frozen=True)
class SynthTarget:
    """
    Raw (unstandardized) target features, one row per segment or frame,
    with the time layout they describe. audio is the original signal
    when it is known.
    """
    mode: DatabaseMode
    raw_features: np.ndarray
    length: int
    sample_rate: int
    segments: tuple[Segment, ...] = ()
    audio: Waveform | None = None

    def __post_init__(self):
        if self.mode is DatabaseMode.SEGMENT:
            if len(self.segments) != self.raw_features.shape[0]:
                raise ValueError(
                    f'{len(self.segments)} segments for '
                    f'{self.raw_features.shape[0]} feature rows'
                )
            if self.segments and self.segments[-1].end > self.length:
                raise ValueError('segments exceed target length')

    @property
    def size(self) -> int:
        return self.raw_features.shape[0]

    def standardized(self, db: DevDatabase) -> np.ndarray:
        if self.mode is not db.mode:
            raise TargetModeMismatchError(self.mode, db.mode)
        if self.sample_rate != db.sample_rate:
            raise TargetSampleRateError(self.sample_rate, db.sample_rate)
        if self.raw_features.shape[1] != db.dimension:
            raise DimensionMismatchError(db.dimension, self.raw_features.shape[1])
        return db.standardize_query(self.raw_features)

    def segment_audio(self, index: int) -> np.ndarray | None:
        if self.audio is None:
            return None
        segment = self.segments[index]
        return self.audio.samples[segment.start:segment.end]


def target_from_segments(
        w: Waveform,
        segments: Sequence[Segment],
        params: StftParams
) -> SynthTarget:
    vectors = segment_features(w, segments, params)
    return SynthTarget(
        mode=DatabaseMode.SEGMENT,
        raw_features=np.vstack([v.as_array() for v in vectors]),
        length=len(w),
        sample_rate=w.sample_rate,
        segments=tuple(segments),
        audio=w,
    )


def target_from_frames(features: FeatureMatrix, w: Waveform | None, sample_rate: int) -> SynthTarget:
    length = len(w) if w is not None else synthesis_length(
        features.n_frames, features.frame_params
    )
    return SynthTarget(
        mode=DatabaseMode.FRAME,
        raw_features=features.rows(),
        length=length,
        sample_rate=sample_rate,
        audio=w,
    )


def target_from_waveform(w: Waveform, db: DevDatabase) -> SynthTarget:
    """Analyze target audio the same way the database was analyzed"""
    if w.sample_rate != db.sample_rate:
        raise TargetSampleRateError(w.sample_rate, db.sample_rate)
    if db.mode is DatabaseMode.FRAME:
        features = frame_features(w, db.params, db.feature_set)
        return target_from_frames(features, w, w.sample_rate)
    return target_from_segments(w, segment_onsets(w, db.params), db.params)


def target_from_analysis(
        document: AnalysisDocument | Path | str,
        sample_rate: int | None = None
) -> SynthTarget:
    """
    Segment-mode target without audio; its length is the last segment's end.
    Segment times are converted at sample_rate, the rate of the database it
    will be synthesized from; the document's own rate is only a fallback.
    """
    if not isinstance(document, AnalysisDocument):
        document = load_analysis_document(document)
    rate = sample_rate or document.resolve_sample_rate()
    segments, vectors = document_segments(document, rate)
    return SynthTarget(
        mode=DatabaseMode.SEGMENT,
        raw_features=np.vstack([v.as_array() for v in vectors]),
        length=segments[-1].end,
        sample_rate=rate,
        segments=tuple(segments),
    )
