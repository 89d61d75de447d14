"""
Module with the E(M, N, P) experiment: for every cell of the parameter grid,
repeatedly draw a test excerpt and a disjoint development subset, synthesize
the excerpt from the subset and score it against the original.

Development data is drawn in whole runs: contiguous excerpts of
excerpt_seconds in frame mode, whole files in segment mode, taken in a
seeded random order until N units are gathered (the last run truncated).

Every trial derives its random state from (split_seed, trial) only, so the
splits of trial t are the same in every cell: development subsets of growing
N are nested, and the results never depend on scheduling.
"""

import asyncio
import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Self
from typing import Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field
from pydantic import model_validator

from exemplar_synth.config import get_settings
from exemplar_synth.dsp.stft import magnitude_spectrogram
from exemplar_synth.dsp.stft import synthesis_length
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.evaluation.corpus import AnalyzedItem
from exemplar_synth.evaluation.corpus import CorpusItem
from exemplar_synth.evaluation.corpus import analyze_corpus_async
from exemplar_synth.evaluation.corpus import corpus_library
from exemplar_synth.evaluation.corpus import is_excluded
from exemplar_synth.evaluation.metrics import mse_db
from exemplar_synth.evaluation.metrics import relative_error_db
from exemplar_synth.evaluation.metrics import spectrogram_kl
from exemplar_synth.features.types import FEATURE_GROUPS
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.features.types import Segment
from exemplar_synth.index.database import AudioLibrary
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.database import DevEntry
from exemplar_synth.index.database import pad_to
from exemplar_synth.index.search import WeightVector
from exemplar_synth.synth.additive import estimate_magnitude
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.config import SynthMethod
from exemplar_synth.synth.engine import synthesize
from exemplar_synth.synth.target import SynthTarget


logger.debug('Initialize exemplar_synth.evaluation.experiment')


REPORT_COLUMNS = (
    'M', 'N', 'P', 'method', 'feature_combo', 'seed',
    'relative_error_db', 'mse_db', 'kl',
)


@dataclass(frozen=True)
class Cell:
    feature_combo: str
    N: int
    P: int
    method: SynthMethod

    def __str__(self) -> str:
        return f'(M={self.feature_combo}, N={self.N}, P={self.P}, {self.method.value})'


class CorpusTooSmallError(Exception):
    def __init__(self, cell: Cell, reason: str):
        self.cell = cell
        super().__init__(f"Corpus is too small for cell {cell}: {reason}")


def parse_feature_combo(combo: str) -> tuple[str, ...]:
    """'chroma+timbre' (or 'chroma,timbre') -> ('chroma', 'timbre'), in layout order"""
    groups = {g.strip().lower() for g in combo.replace(',', '+').split('+') if g.strip()}
    unknown = groups - FEATURE_GROUPS.keys()
    if not groups or unknown:
        raise ValueError(
            f'feature combination {combo!r} must name some of {sorted(FEATURE_GROUPS)}'
        )
    return tuple(g for g in FEATURE_GROUPS if g in groups)


def all_feature_combos() -> tuple[str, ...]:
    """The 7 nonempty combinations of chroma, timbre and loudness"""
    names = list(FEATURE_GROUPS)
    combos = []
    for mask in range(1, 2 ** len(names)):
        combos.append('+'.join(n for i, n in enumerate(names) if mask & (1 << i)))
    return tuple(sorted(combos, key=lambda c: (c.count('+'), c)))


class ExperimentSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: DatabaseMode = DatabaseMode.FRAME
    # Frame mode: feature sets 3/8/11/21; segment mode: group combinations
    M_values: tuple[str, ...] = Field(default=('8',), min_length=1)
    N_values: tuple[int, ...] = Field(default=(1000,), min_length=1)
    P_values: tuple[int, ...] = Field(default=(10,), min_length=1)
    methods: tuple[SynthMethod, ...] = Field(default=(SynthMethod.FRAME_MEDIAN,), min_length=1)
    trials: int = Field(default=25, ge=1)
    split_seed: int = 0
    genre_exclusion: bool = True
    test_frames: int = Field(default=100, ge=1)
    test_segments: int = Field(default=20, ge=1)
    # Frame mode: length of the contiguous development excerpts
    excerpt_seconds: float = Field(default=10.0, gt=0)
    stft: StftParams = Field(default_factory=StftParams)

    @model_validator(mode='after')
    def _consistent(self) -> Self:
        for method in self.methods:
            if method.database_mode is not self.mode:
                raise ValueError(
                    f'method {method.value!r} does not run in {self.mode.value} mode'
                )
        for value in self.M_values:
            if self.mode is DatabaseMode.FRAME:
                if not FeatureSet.parse(value).is_frame_set:
                    raise ValueError(f'{value!r} is not a frame feature set')
            else:
                parse_feature_combo(value)
        if min(self.N_values) < 1 or min(self.P_values) < 1:
            raise ValueError('N and P values must be positive')
        return self

    def excerpt_frames(self, sample_rate: int) -> int:
        return max(1, round(self.excerpt_seconds * sample_rate / self.stft.hop))

    def cells(self) -> list[Cell]:
        return [
            Cell(combo, N, P, method)
            for combo in self.M_values
            for N in self.N_values
            for P in self.P_values
            for method in self.methods
        ]


class TrialResult(BaseModel):
    M: int
    N: int
    P: int
    method: str
    feature_combo: str
    seed: int
    relative_error_db: float
    mse_db: float
    kl: float


class CellSummary(BaseModel):
    M: int
    N: int
    P: int
    method: str
    feature_combo: str
    trials: int
    relative_error_db: float
    mse_db: float
    kl: float


class NeighborSummary(BaseModel):
    method: str
    P: int
    trials: int
    relative_error_db: float
    mse_db: float
    kl: float


def _means(rows: Sequence[TrialResult]) -> dict[str, float]:
    return {
        name: float(np.mean([getattr(r, name) for r in rows]))
        for name in ('relative_error_db', 'mse_db', 'kl')
    }


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[TrialResult, ...]

    def summary(self) -> list[CellSummary]:
        """Per-cell means, in grid order"""
        groups: dict[tuple, list[TrialResult]] = {}
        for row in self.rows:
            key = (row.M, row.N, row.P, row.method, row.feature_combo)
            groups.setdefault(key, []).append(row)
        return [
            CellSummary(
                M=M, N=N, P=P, method=method, feature_combo=combo,
                trials=len(rows), **_means(rows)
            )
            for (M, N, P, method, combo), rows in groups.items()
        ]

    def by_neighbors(self) -> list[NeighborSummary]:
        """Means per (method, P) over every feature combination and N"""
        groups: dict[tuple[str, int], list[TrialResult]] = {}
        for row in self.rows:
            groups.setdefault((row.method, row.P), []).append(row)
        return [
            NeighborSummary(method=method, P=P, trials=len(rows), **_means(rows))
            for (method, P), rows in sorted(groups.items())
        ]

    def cell_mean(self, feature_combo: str, N: int, P: int, method: SynthMethod | str) -> float:
        """Mean relative error of one cell"""
        values = [
            r.relative_error_db for r in self.rows
            if (r.feature_combo, r.N, r.P, r.method) == (feature_combo, N, P, str(method))
        ]
        if not values:
            raise KeyError((feature_combo, N, P, str(method)))
        return float(np.mean(values))

    def write_csv(self, path: Path | str) -> Path:
        path = Path(path)
        with path.open('w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=REPORT_COLUMNS, lineterminator='\n')
            writer.writeheader()
            for row in self.rows:
                values = row.model_dump()
                writer.writerow({
                    k: repr(v) if isinstance(v, float) else v
                    for k, v in values.items()
                })
        return path

    def write_summary(self, path: Path | str) -> Path:
        path = Path(path)
        payload = {
            'cells': [s.model_dump() for s in self.summary()],
            'by_neighbors': [s.model_dump() for s in self.by_neighbors()],
        }
        path.write_text(json.dumps(payload, indent=2), encoding='utf-8')
        return path


def trial_seed(split_seed: int, trial: int) -> int:
    return int(np.random.SeedSequence([split_seed, trial]).generate_state(1)[0])


@dataclass(frozen=True)
class _Split:
    test: int
    # Frame mode: first test frame; segment mode: first test segment
    offset: int
    # (item, frame or segment) pairs in draw order, run after run
    pool: np.ndarray


def _draw_split(
        analyzed: Sequence[AnalyzedItem],
        spec: ExperimentSpec,
        cell: Cell,
        seed: int
) -> _Split:
    test_len = spec.test_frames if spec.mode is DatabaseMode.FRAME else spec.test_segments
    eligible = [i for i, a in enumerate(analyzed) if a.size >= test_len]
    if not eligible:
        raise CorpusTooSmallError(cell, f'no file holds {test_len} test units')
    rng = np.random.default_rng(seed)
    test = eligible[int(rng.integers(len(eligible)))]
    offset = int(rng.integers(0, analyzed[test].size - test_len + 1))
    runs = []
    for i, a in enumerate(analyzed):
        if is_excluded(analyzed[test].item, a.item, spec.mode, spec.genre_exclusion):
            continue
        if spec.mode is DatabaseMode.FRAME:
            run_len = spec.excerpt_frames(a.item.waveform.sample_rate)
        else:
            run_len = max(a.size, 1)
        for start in range(0, a.size, run_len):
            units = np.arange(start, min(start + run_len, a.size))
            runs.append(np.column_stack([np.full(units.size, i), units]))
    if not runs:
        return _Split(test, offset, np.empty((0, 2), dtype=np.int64))
    order = rng.permutation(len(runs))
    return _Split(test, offset, np.vstack([runs[k] for k in order]))


def _dev_subset(
        analyzed: Sequence[AnalyzedItem],
        split: _Split,
        spec: ExperimentSpec,
        cell: Cell,
        library: AudioLibrary
) -> DevDatabase:
    if split.pool.shape[0] < cell.N:
        raise CorpusTooSmallError(
            cell,
            f'{split.pool.shape[0]} development units left after exclusion, need {cell.N}'
        )
    chosen = split.pool[:cell.N]
    chosen = chosen[np.lexsort((chosen[:, 1], chosen[:, 0]))]
    params = spec.stft
    entries = []
    for item, unit in chosen:
        a = analyzed[item]
        if spec.mode is DatabaseMode.FRAME:
            entries.append(DevEntry(a.item.name, int(unit) * params.hop, params.frame_len))
        else:
            s = a.segments[unit]
            entries.append(DevEntry(a.item.name, s.start, s.length))
    if spec.mode is DatabaseMode.FRAME:
        feature_set = FeatureSet.parse(cell.feature_combo)
        raw = np.vstack([analyzed[i].rows[u, :feature_set.dimension] for i, u in chosen])
    else:
        feature_set = FeatureSet.MSD27
        raw = np.vstack([analyzed[i].rows[u] for i, u in chosen])
    files = sorted({int(i) for i in chosen[:, 0]})
    return DevDatabase.from_raw_features(
        raw,
        entries,
        [analyzed[i].item.source_file() for i in files],
        spec.mode,
        feature_set,
        params,
        analyzed[0].item.waveform.sample_rate,
        library
    )


def _scores(reference: np.ndarray, estimate: np.ndarray) -> dict[str, float]:
    return {
        'relative_error_db': relative_error_db(reference, estimate),
        'mse_db': mse_db(reference, estimate),
        'kl': spectrogram_kl(reference, estimate),
    }


def _frame_trial(
        analyzed: Sequence[AnalyzedItem],
        split: _Split,
        spec: ExperimentSpec,
        cell: Cell,
        db: DevDatabase
) -> tuple[int, dict[str, float]]:
    test = analyzed[split.test]
    T = spec.test_frames
    feature_set = FeatureSet.parse(cell.feature_combo)
    target = SynthTarget(
        mode=DatabaseMode.FRAME,
        raw_features=test.rows[split.offset:split.offset + T, :feature_set.dimension],
        length=synthesis_length(T, spec.stft),
        sample_rate=db.sample_rate,
    )
    estimate = estimate_magnitude(target, db, SynthConfig(method=cell.method, P=cell.P))
    reference = db.audio.magnitude(test.item.name, spec.stft)[:, split.offset:split.offset + T]
    return feature_set.dimension, _scores(reference, estimate.values)


def _segment_trial(
        analyzed: Sequence[AnalyzedItem],
        split: _Split,
        spec: ExperimentSpec,
        cell: Cell,
        db: DevDatabase
) -> tuple[int, dict[str, float]]:
    test = analyzed[split.test]
    picked = test.segments[split.offset:split.offset + spec.test_segments]
    origin = picked[0].start
    excerpt = test.item.waveform.slice(origin, picked[-1].end - origin)
    target = SynthTarget(
        mode=DatabaseMode.SEGMENT,
        raw_features=test.rows[split.offset:split.offset + spec.test_segments],
        length=len(excerpt),
        sample_rate=excerpt.sample_rate,
        segments=tuple(Segment(s.start - origin, s.length) for s in picked),
        audio=excerpt,
    )
    w = WeightVector.from_groups(parse_feature_combo(cell.feature_combo))
    cfg = SynthConfig(method=cell.method, P=cell.P, weights=tuple(w.w))
    if cell.method.is_concatenative:
        output = synthesize(target, db, cfg).waveform
        estimate = _padded_magnitude(output, spec.stft)
    else:
        estimate = estimate_magnitude(target, db, cfg).values
    reference = _padded_magnitude(excerpt, spec.stft)
    return int(np.count_nonzero(w.w)), _scores(reference, estimate)


def _padded_magnitude(w: Waveform, params: StftParams) -> np.ndarray:
    return magnitude_spectrogram(pad_to(w, params.frame_len), params).values


def run_cell(
        analyzed: Sequence[AnalyzedItem],
        spec: ExperimentSpec,
        cell: Cell,
        library: AudioLibrary
) -> list[TrialResult]:
    if cell.P > cell.N:
        raise CorpusTooSmallError(
            cell,
            f'{cell.P} neighbors asked from {cell.N} development units'
        )
    results = []
    for trial in range(spec.trials):
        seed = trial_seed(spec.split_seed, trial)
        split = _draw_split(analyzed, spec, cell, seed)
        db = _dev_subset(analyzed, split, spec, cell, library)
        if spec.mode is DatabaseMode.FRAME:
            M, scores = _frame_trial(analyzed, split, spec, cell, db)
        else:
            M, scores = _segment_trial(analyzed, split, spec, cell, db)
        results.append(
            TrialResult(
                M=M,
                N=cell.N,
                P=cell.P,
                method=cell.method.value,
                feature_combo=cell.feature_combo,
                seed=seed,
                **scores
            )
        )
    logger.info(
        f'Cell {cell}: mean relative error '
        f'{np.mean([r.relative_error_db for r in results]):.3f} dB over {len(results)} trials'
    )
    return results


async def run_experiment_async(
        spec: ExperimentSpec,
        corpus: Sequence[CorpusItem],
        workers: int | None = None
) -> ExperimentReport:
    """Cells run concurrently; rows come back in grid order"""
    workers = workers or get_settings().workers
    analyzed = await analyze_corpus_async(corpus, spec.mode, spec.stft, workers)
    library = corpus_library(analyzed)
    semaphore = asyncio.Semaphore(workers)
    cells = spec.cells()
    logger.info(
        f'Experiment: {len(cells)} cells x {spec.trials} trials '
        f'over {len(analyzed)} files'
    )

    async def run(cell: Cell):
        async with semaphore:
            return await asyncio.to_thread(run_cell, analyzed, spec, cell, library)

    try:
        async with asyncio.TaskGroup() as task_group:
            tasks = [task_group.create_task(run(cell)) for cell in cells]
    except ExceptionGroup as group:
        # Surface the first failing cell as a plain error
        raise group.exceptions[0] from None
    return ExperimentReport(tuple(row for task in tasks for row in task.result()))


def run_experiment(
        spec: ExperimentSpec,
        corpus: Sequence[CorpusItem],
        workers: int | None = None
) -> ExperimentReport:
    return asyncio.run(run_experiment_async(spec, corpus, workers))
