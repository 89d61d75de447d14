"""
Module with the analysis JSON document: per-segment features in the
Echo Nest field layout (pitches, timbre, loudness_*), times in seconds.

{
  "schema": 1,
  "track_id": "...",
  "sample_rate": 22050,            # optional
  "segments": [
    {"start": 0.0, "duration": 0.25,
     "pitches": [12 values], "timbre": [12 values],
     "loudness_start": -30.1, "loudness_max": -12.5, "loudness_max_time": 0.04},
    ...
  ]
}
"""

import json
from pathlib import Path
from typing import Literal
from typing import Self
from typing import Sequence

from loguru import logger
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import ValidationError
from pydantic import model_validator

from exemplar_synth.config import get_settings
from exemplar_synth.features.types import FeatureMatrix
from exemplar_synth.features.types import Segment
from exemplar_synth.features.types import SegmentFeatureVector


logger.debug('Initialize exemplar_synth.audio_io.analysis')


class AnalysisSchemaError(Exception):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"Analysis document is not valid at {path}: {message}")


class AnalysisSegment(BaseModel):
    start: float = Field(ge=0)
    duration: float = Field(gt=0)
    pitches: list[float] = Field(min_length=12, max_length=12)
    timbre: list[float] = Field(min_length=12, max_length=12)
    loudness_start: float
    loudness_max: float
    loudness_max_time: float = Field(ge=0)


class AnalysisDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=1, alias='schema')
    track_id: str = ''
    sample_rate: int | None = Field(default=None, gt=0)
    segments: list[AnalysisSegment] = Field(min_length=1)

    @model_validator(mode='after')
    def _ordered_segments(self) -> Self:
        for i in range(1, len(self.segments)):
            if self.segments[i].start <= self.segments[i - 1].start:
                raise ValueError(
                    f'segments must be ordered by start, segment {i} starts at '
                    f'{self.segments[i].start} after {self.segments[i - 1].start}'
                )
        return self

    def resolve_sample_rate(self, sample_rate: int | None = None) -> int:
        return self.sample_rate or sample_rate or get_settings().sample_rate


def _error_path(error: ValidationError) -> tuple[str, str]:
    first = error.errors()[0]
    location = '.'.join(str(part) for part in first['loc']) or '$'
    return location, first['msg']


def load_analysis_document(path: Path | str) -> AnalysisDocument:
    try:
        payload = json.loads(Path(path).read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise AnalysisSchemaError('$', f'malformed JSON: {e}') from e
    try:
        return AnalysisDocument.model_validate(payload)
    except ValidationError as e:
        raise AnalysisSchemaError(*_error_path(e)) from e


def document_segments(
        document: AnalysisDocument,
        sample_rate: int
) -> tuple[list[Segment], list[SegmentFeatureVector]]:
    """Segments in samples and their f1..f27 vectors"""
    source = document.track_id
    starts = [round(s.start * sample_rate) for s in document.segments]
    segments = []
    vectors = []
    for i, item in enumerate(document.segments):
        end = round((item.start + item.duration) * sample_rate)
        if i + 1 < len(starts):
            end = min(end, starts[i + 1])
        segments.append(Segment(starts[i], max(1, end - starts[i]), source))
        vectors.append(
            SegmentFeatureVector(
                chroma=tuple(item.pitches),
                timbre=tuple(item.timbre),
                loudness_start=item.loudness_start,
                loudness_peak=item.loudness_max,
                peak_position=min(max(item.loudness_max_time / item.duration, 0.0), 1.0),
            )
        )
    return segments, vectors


def parse_analysis_document(
        path: Path | str,
        sample_rate: int | None = None
) -> tuple[list[Segment], list[SegmentFeatureVector]]:
    document = load_analysis_document(path)
    rate = document.resolve_sample_rate(sample_rate)
    segments, vectors = document_segments(document, rate)
    logger.debug(f'Parsed {path}: {len(segments)} segments at {rate} Hz')
    return segments, vectors


def analysis_document_from_features(
        segments: Sequence[Segment],
        vectors: Sequence[SegmentFeatureVector],
        sample_rate: int,
        track_id: str = ''
) -> AnalysisDocument:
    items = []
    for segment, vector in zip(segments, vectors, strict=True):
        duration = segment.length / sample_rate
        items.append(
            AnalysisSegment(
                start=segment.start / sample_rate,
                duration=duration,
                pitches=list(vector.chroma),
                timbre=list(vector.timbre),
                loudness_start=vector.loudness_start,
                loudness_max=vector.loudness_peak,
                loudness_max_time=vector.peak_position * duration,
            )
        )
    return AnalysisDocument(
        track_id=track_id,
        sample_rate=sample_rate,
        segments=items
    )


def write_analysis_document(
        document: 'AnalysisDocument | FrameFeatureDocument',
        path: Path | str
) -> Path:
    path = Path(path)
    path.write_text(
        document.model_dump_json(by_alias=True, indent=2),
        encoding='utf-8'
    )
    return path


class FrameFeatureDocument(BaseModel):
    """Frame features of one file, one row per STFT frame"""
    model_config = ConfigDict(populate_by_name=True)

    schema_version: Literal[1] = Field(default=1, alias='schema')
    track_id: str = ''
    sample_rate: int = Field(gt=0)
    frame_len: int = Field(gt=0)
    hop: int = Field(gt=0)
    names: list[str] = Field(min_length=1)
    frames: list[list[float]]


def frame_feature_document(
        features: FeatureMatrix,
        sample_rate: int,
        track_id: str = ''
) -> FrameFeatureDocument:
    return FrameFeatureDocument(
        track_id=track_id,
        sample_rate=sample_rate,
        frame_len=features.frame_params.frame_len,
        hop=features.frame_params.hop,
        names=list(features.names),
        frames=features.rows().tolist(),
    )
