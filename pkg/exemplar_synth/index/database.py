"""Module with the development database: entries, standardized features and audio access"""

import asyncio
import threading
from dataclasses import dataclass
from dataclasses import field
from enum import StrEnum
from pathlib import Path
from typing import Mapping
from typing import Self
from typing import Sequence

import numpy as np
from loguru import logger

from exemplar_synth.audio_io.wav import AudioFormatError
from exemplar_synth.audio_io.wav import read_wav
from exemplar_synth.config import get_settings
from exemplar_synth.dsp.stft import SignalTooShortError
from exemplar_synth.dsp.stft import frame_boundary
from exemplar_synth.dsp.stft import magnitude_spectrogram
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.features.frame import frame_features
from exemplar_synth.features.segment import segment_features
from exemplar_synth.features.segment import segment_onsets
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.index.search import WeightVector
from exemplar_synth.index.search import distances_to
from exemplar_synth.index.stats import StandardizationStats
from exemplar_synth.index.stats import compute_stats
from exemplar_synth.index.stats import standardize


logger.debug('Initialize exemplar_synth.index.database')


class DatabaseMode(StrEnum):
    FRAME = 'frame'
    SEGMENT = 'segment'


class ModeFeatureSetMismatchError(Exception):
    def __init__(self, mode: DatabaseMode, feature_set: FeatureSet):
        super().__init__(
            f"Database mode {mode.value!r} can not use feature set "
            f"{feature_set.value!r} (frame mode takes 3/8/11/21, "
            f"segment mode takes msd27)"
        )


class EmptyDatabaseError(Exception):
    def __init__(self):
        super().__init__("Development database has no entries")


class AudioUnavailableError(Exception):
    def __init__(self, source_file: str):
        super().__init__(
            f"Audio of development file {source_file!r} is not available"
        )


class SampleRateMismatchError(Exception):
    def __init__(self, source_file: str, expected: int, actual: int):
        super().__init__(
            f"{source_file}: sample rate {actual} Hz, "
            f"database uses {expected} Hz"
        )


@dataclass(frozen=True)
class SourceFile:
    """Row of the file table"""
    id: str
    path: str | None = None
    genre: str | None = None
    speaker: str | None = None


@dataclass(frozen=True)
class DevEntry:
    source_file: str
    start: int
    length: int

    @property
    def end(self) -> int:
        return self.start + self.length


class AudioLibrary:
    """
    Development audio by source file id. Waveforms given up front are
    kept in memory, the others are read from their path on first use.
    Thread-safe: loads and spectrograms are cached under a lock.
    """

    def __init__(
            self,
            files: Sequence[SourceFile] = (),
            waveforms: Mapping[str, Waveform] | None = None
    ):
        self._paths = {f.id: f.path for f in files}
        self._waveforms: dict[str, Waveform] = dict(waveforms or {})
        self._magnitudes: dict[tuple[str, StftParams], np.ndarray] = {}
        self._lock = threading.Lock()

    def waveform(self, source_file: str) -> Waveform:
        with self._lock:
            cached = self._waveforms.get(source_file)
        if cached is not None:
            return cached
        path = self._paths.get(source_file)
        if path is None:
            raise AudioUnavailableError(source_file)
        try:
            w = read_wav(path)
        except AudioFormatError as e:
            raise AudioUnavailableError(source_file) from e
        with self._lock:
            return self._waveforms.setdefault(source_file, w)

    def magnitude(self, source_file: str, params: StftParams) -> np.ndarray:
        """Magnitude spectrogram (K x N) of the whole file"""
        key = (source_file, params)
        with self._lock:
            cached = self._magnitudes.get(key)
        if cached is not None:
            return cached
        w = self.waveform(source_file)
        values = magnitude_spectrogram(pad_to(w, params.frame_len), params).values
        values.flags.writeable = False
        with self._lock:
            return self._magnitudes.setdefault(key, values)


def pad_to(w: Waveform, n_samples: int) -> Waveform:
    if len(w) >= n_samples:
        return w
    samples = np.zeros(n_samples)
    samples[:len(w)] = w.samples
    return Waveform(samples, w.sample_rate)


def _single_entry_stats(raw: np.ndarray) -> StandardizationStats:
    # One entry: centre on it, every dimension degenerate
    return StandardizationStats(
        raw[0].copy(),
        np.ones(raw.shape[1]),
        np.ones(raw.shape[1], dtype=bool)
    )


@dataclass(frozen=True)
class DevDatabase:
    features: np.ndarray
    entries: tuple[DevEntry, ...]
    stats: StandardizationStats
    mode: DatabaseMode
    feature_set: FeatureSet
    params: StftParams
    sample_rate: int
    files: tuple[SourceFile, ...]
    audio: AudioLibrary = field(default_factory=AudioLibrary, compare=False, repr=False)

    def __post_init__(self):
        if not self.entries:
            raise EmptyDatabaseError()
        if self.features.shape != (len(self.entries), self.feature_set.dimension):
            raise ValueError(
                f'features of shape {self.features.shape} for '
                f'{len(self.entries)} entries of dimension {self.feature_set.dimension}'
            )
        if self.mode is DatabaseMode.FRAME and not self.feature_set.is_frame_set:
            raise ModeFeatureSetMismatchError(self.mode, self.feature_set)
        if self.mode is DatabaseMode.SEGMENT and self.feature_set.is_frame_set:
            raise ModeFeatureSetMismatchError(self.mode, self.feature_set)
        self.features.flags.writeable = False

    @classmethod
    def from_raw_features(
            cls,
            raw: np.ndarray,
            entries: Sequence[DevEntry],
            files: Sequence[SourceFile],
            mode: DatabaseMode,
            feature_set: FeatureSet,
            params: StftParams,
            sample_rate: int,
            audio: AudioLibrary | None = None
    ) -> Self:
        """Compute standardization statistics from raw rows and apply them"""
        if not entries:
            raise EmptyDatabaseError()
        raw = np.asarray(raw, dtype=np.float64).reshape(len(entries), -1)
        stats = _single_entry_stats(raw) if raw.shape[0] == 1 else compute_stats(raw)
        return cls(
            features=standardize(raw, stats),
            entries=tuple(entries),
            stats=stats,
            mode=DatabaseMode(mode),
            feature_set=FeatureSet.parse(feature_set),
            params=params,
            sample_rate=sample_rate,
            files=tuple(files),
            audio=audio or AudioLibrary(files),
        )

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def dimension(self) -> int:
        return self.features.shape[1]

    def standardize_query(self, raw: np.ndarray) -> np.ndarray:
        """Standardize target features with the development statistics"""
        return standardize(raw, self.stats)

    def distances(self, query: np.ndarray, w: WeightVector) -> np.ndarray:
        return distances_to(self.features, query, w)

    def entry_audio(self, index: int) -> Waveform:
        entry = self.entries[index]
        w = self.audio.waveform(entry.source_file)
        return w.slice(entry.start, entry.length)

    def entry_magnitude(self, index: int) -> np.ndarray:
        """
        Magnitude columns of an entry, cut from its file's spectrogram:
        one column in frame mode, the segment's frame span (at least one
        column) in segment mode.
        """
        entry = self.entries[index]
        values = self.audio.magnitude(entry.source_file, self.params)
        if self.mode is DatabaseMode.FRAME:
            column = entry.start // self.params.hop
            return values[:, column:column + 1]
        total = len(self.audio.waveform(entry.source_file))
        begin = frame_boundary(entry.start, total, self.params)
        end = frame_boundary(entry.end, total, self.params)
        if end <= begin:
            centre = entry.start + entry.length // 2
            nearest = (centre - self.params.frame_len // 2) // self.params.hop
            begin = min(max(nearest, 0), values.shape[1] - 1)
            end = begin + 1
        return values[:, begin:end]


def extract_entries(
        source_file: str,
        w: Waveform,
        mode: DatabaseMode,
        feature_set: FeatureSet,
        params: StftParams
) -> tuple[np.ndarray, list[DevEntry]]:
    """Raw feature rows and entries of one development file"""
    if mode is DatabaseMode.FRAME:
        features = frame_features(w, params, feature_set)
        entries = [
            DevEntry(source_file, n * params.hop, params.frame_len)
            for n in range(features.n_frames)
        ]
        return features.rows(), entries

    segments = segment_onsets(w, params, source_file)
    vectors = segment_features(w, segments, params)
    entries = [DevEntry(source_file, s.start, s.length) for s in segments]
    return np.vstack([v.as_array() for v in vectors]), entries


def _check_mode(mode: DatabaseMode, feature_set: FeatureSet):
    if (mode is DatabaseMode.FRAME) != feature_set.is_frame_set:
        raise ModeFeatureSetMismatchError(mode, feature_set)


def _assemble(
        extracted: Sequence[tuple[SourceFile, Waveform, np.ndarray, list[DevEntry]] | None],
        mode: DatabaseMode,
        feature_set: FeatureSet,
        params: StftParams
) -> DevDatabase:
    usable = [item for item in extracted if item is not None]
    if not usable:
        raise EmptyDatabaseError()
    sample_rate = usable[0][1].sample_rate
    kept = []
    for source, w, rows, entries in usable:
        if w.sample_rate != sample_rate:
            logger.warning(
                f'Skip {source.id}: '
                f'{SampleRateMismatchError(source.id, sample_rate, w.sample_rate)}'
            )
            continue
        kept.append((source, w, rows, entries))

    files = [source for source, *_ in kept]
    raw = np.vstack([rows for *_, rows, _ in kept])
    entries = [entry for *_, file_entries in kept for entry in file_entries]
    audio = AudioLibrary(files, {source.id: w for source, w, *_ in kept})
    db = DevDatabase.from_raw_features(
        raw, entries, files, mode, feature_set, params, sample_rate, audio
    )
    logger.info(
        f'Built {mode.value} database: {db.size} entries of dimension '
        f'{db.dimension} from {len(files)} files'
    )
    return db


def build_database_from_waveforms(
        waveforms: Mapping[str, Waveform] | Sequence[tuple[SourceFile, Waveform]],
        mode: DatabaseMode | str,
        feature_set: FeatureSet | str | int,
        params: StftParams
) -> DevDatabase:
    """Database over in-memory audio, in the given order"""
    mode = DatabaseMode(mode)
    feature_set = FeatureSet.parse(feature_set)
    _check_mode(mode, feature_set)
    if isinstance(waveforms, Mapping):
        items = [(SourceFile(name), w) for name, w in waveforms.items()]
    else:
        items = list(waveforms)

    extracted = []
    for source, w in items:
        try:
            rows, entries = extract_entries(source.id, w, mode, feature_set, params)
        except SignalTooShortError as e:
            logger.warning(f'Skip {source.id}: {e}')
            extracted.append(None)
            continue
        extracted.append((source, w, rows, entries))
    return _assemble(extracted, mode, feature_set, params)


def _load_and_extract(
        source: SourceFile,
        mode: DatabaseMode,
        feature_set: FeatureSet,
        params: StftParams
) -> tuple[SourceFile, Waveform, np.ndarray, list[DevEntry]] | None:
    try:
        w = read_wav(source.path)
        rows, entries = extract_entries(source.id, w, mode, feature_set, params)
    except (AudioFormatError, SignalTooShortError) as e:
        logger.warning(f'Skip {source.id}: {e}')
        return None
    logger.info(f'Analyzed {source.id}: {len(entries)} entries')
    return source, w, rows, entries


def _as_source(item: SourceFile | Path | str) -> SourceFile:
    if isinstance(item, SourceFile):
        return item
    return SourceFile(id=str(item), path=str(Path(item).resolve()))


async def build_database_async(
        corpus: Sequence[SourceFile | Path | str],
        mode: DatabaseMode | str,
        feature_set: FeatureSet | str | int,
        params: StftParams,
        workers: int | None = None
) -> DevDatabase:
    """
    Analyze corpus files concurrently (bounded by workers), then compute
    statistics in one pass. Unreadable files are skipped with a warning.
    """
    mode = DatabaseMode(mode)
    feature_set = FeatureSet.parse(feature_set)
    _check_mode(mode, feature_set)
    sources = [_as_source(item) for item in corpus]
    if not sources:
        raise EmptyDatabaseError()
    semaphore = asyncio.Semaphore(workers or get_settings().workers)

    async def analyze(source: SourceFile):
        async with semaphore:
            return await asyncio.to_thread(
                _load_and_extract, source, mode, feature_set, params
            )

    async with asyncio.TaskGroup() as task_group:
        tasks = [task_group.create_task(analyze(source)) for source in sources]
    return _assemble([task.result() for task in tasks], mode, feature_set, params)


def build_database(
        corpus: Sequence[SourceFile | Path | str],
        mode: DatabaseMode | str,
        feature_set: FeatureSet | str | int,
        params: StftParams,
        workers: int | None = None
) -> DevDatabase:
    return asyncio.run(
        build_database_async(corpus, mode, feature_set, params, workers)
    )
