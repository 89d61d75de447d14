"""Module with the experiment corpus: labelled audio and its cached analysis"""

import asyncio
from dataclasses import dataclass
from pathlib import Path
from typing import Literal
from typing import Sequence

import numpy as np
from loguru import logger

from exemplar_synth.audio_io.wav import AudioFormatError
from exemplar_synth.audio_io.wav import read_wav
from exemplar_synth.config import get_settings
from exemplar_synth.dsp.stft import SignalTooShortError
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.features.frame import frame_features
from exemplar_synth.features.segment import segment_features
from exemplar_synth.features.segment import segment_onsets
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.features.types import Segment
from exemplar_synth.index.database import AudioLibrary
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import SourceFile


logger.debug('Initialize exemplar_synth.evaluation.corpus')


class EmptyCorpusError(Exception):
    def __init__(self, reason: str):
        super().__init__(f"Corpus is empty: {reason}")


@dataclass(frozen=True)
class CorpusItem:
    name: str
    waveform: Waveform
    genre: str | None = None
    speaker: str | None = None

    def source_file(self) -> SourceFile:
        return SourceFile(self.name, genre=self.genre, speaker=self.speaker)


@dataclass(frozen=True)
class AnalyzedItem:
    """
    Features of a whole corpus file, computed once: the 21-row frame
    ladder as N x 21 rows (smaller sets are its leading columns), or the
    onset segments with their 27-dim vectors.
    """
    item: CorpusItem
    rows: np.ndarray
    segments: tuple[Segment, ...] = ()

    @property
    def size(self) -> int:
        return self.rows.shape[0]


def load_corpus(
        directory: Path | str,
        labels_from_dirs: bool = False,
        label: Literal['genre', 'speaker'] = 'genre'
) -> list[CorpusItem]:
    """
    Every WAV file under directory, sorted by relative path. With
    labels_from_dirs the parent directory name becomes the label.
    """
    directory = Path(directory)
    items = []
    for path in sorted(directory.rglob('*.wav')):
        name = path.relative_to(directory).as_posix()
        try:
            w = read_wav(path)
        except AudioFormatError as e:
            logger.warning(f'Skip {name}: {e}')
            continue
        tag = path.parent.name if labels_from_dirs and path.parent != directory else None
        items.append(CorpusItem(name, w, **{label: tag}))
    if not items:
        raise EmptyCorpusError(f'no readable WAV files in {directory}')
    logger.info(f'Loaded corpus of {len(items)} files from {directory}')
    return items


def analyze_item(
        item: CorpusItem,
        mode: DatabaseMode,
        params: StftParams
) -> AnalyzedItem | None:
    try:
        if mode is DatabaseMode.FRAME:
            features = frame_features(item.waveform, params, FeatureSet.M21)
            return AnalyzedItem(item, features.rows())
        segments = segment_onsets(item.waveform, params, item.name)
        vectors = segment_features(item.waveform, segments, params)
    except SignalTooShortError as e:
        logger.warning(f'Skip {item.name}: {e}')
        return None
    return AnalyzedItem(
        item,
        np.vstack([v.as_array() for v in vectors]),
        tuple(segments)
    )


async def analyze_corpus_async(
        items: Sequence[CorpusItem],
        mode: DatabaseMode,
        params: StftParams,
        workers: int | None = None
) -> list[AnalyzedItem]:
    """Analyze items concurrently; order is kept, short and off-rate files are dropped"""
    if not items:
        raise EmptyCorpusError('no items given')
    semaphore = asyncio.Semaphore(workers or get_settings().workers)

    async def analyze(item: CorpusItem):
        async with semaphore:
            return await asyncio.to_thread(analyze_item, item, mode, params)

    async with asyncio.TaskGroup() as task_group:
        tasks = [task_group.create_task(analyze(item)) for item in items]

    analyzed = [task.result() for task in tasks if task.result() is not None]
    if not analyzed:
        raise EmptyCorpusError('every file is shorter than one frame')
    sample_rate = analyzed[0].item.waveform.sample_rate
    kept = []
    for entry in analyzed:
        if entry.item.waveform.sample_rate != sample_rate:
            logger.warning(
                f'Skip {entry.item.name}: sample rate '
                f'{entry.item.waveform.sample_rate} Hz, corpus uses {sample_rate} Hz'
            )
            continue
        kept.append(entry)
    return kept


def corpus_library(analyzed: Sequence[AnalyzedItem]) -> AudioLibrary:
    """Audio access shared by every development subset drawn from the corpus"""
    return AudioLibrary(
        [a.item.source_file() for a in analyzed],
        {a.item.name: a.item.waveform for a in analyzed}
    )


def is_excluded(
        test: CorpusItem,
        other: CorpusItem,
        mode: DatabaseMode,
        genre_exclusion: bool
) -> bool:
    """
    Whether other may not contribute development data for test:
    the file itself always, the test speaker in frame mode and the
    test genre in segment mode (when labelled).
    """
    if other.name == test.name:
        return True
    if mode is DatabaseMode.FRAME:
        return test.speaker is not None and other.speaker == test.speaker
    return genre_exclusion and test.genre is not None and other.genre == test.genre
