import numpy as np
import pytest

from exemplar_synth.dsp.types import StftParams
from exemplar_synth.evaluation import CorpusItem
from exemplar_synth.evaluation import CorpusTooSmallError
from exemplar_synth.evaluation import ExperimentSpec
from exemplar_synth.evaluation import all_feature_combos
from exemplar_synth.evaluation import run_experiment
from exemplar_synth.evaluation.corpus import analyze_item
from exemplar_synth.evaluation.corpus import is_excluded
from exemplar_synth.evaluation.experiment import Cell
from exemplar_synth.evaluation.experiment import _draw_split
from exemplar_synth.evaluation.experiment import parse_feature_combo
from exemplar_synth.evaluation.experiment import trial_seed
from exemplar_synth.index import DatabaseMode
from exemplar_synth.synth import SynthMethod
from tests.signals import SAMPLE_RATE
from tests.signals import speech_like
from tests.signals import tone_bursts


PARAMS = StftParams(frame_len=512, hop=128)


@pytest.fixture(scope='module')
def speech_corpus() -> list[CorpusItem]:
    return [
        CorpusItem(f'spk{i % 3}/take{i}.wav', speech_like(1.5, seed=100 + i), speaker=f'spk{i % 3}')
        for i in range(6)
    ]


@pytest.fixture(scope='module')
def music_corpus() -> list[CorpusItem]:
    freqs = [220.0, 330.0, 440.0, 262.0, 392.0, 523.0]
    return [
        CorpusItem(
            f'{genre}/song{i}.wav',
            tone_bursts([f * (1 + 0.05 * i) for f in freqs]),
            genre=genre
        )
        for i, genre in enumerate(['rock', 'rock', 'jazz', 'jazz'])
    ]


def frame_spec(**overrides) -> ExperimentSpec:
    values = dict(
        mode=DatabaseMode.FRAME,
        M_values=('3', '8'),
        N_values=(200,),
        P_values=(3,),
        trials=3,
        split_seed=7,
        test_frames=20,
        stft=PARAMS,
    )
    return ExperimentSpec(**(values | overrides))


def test_experiment_is_reproducible(speech_corpus, tmp_path):
    spec = frame_spec()
    first = run_experiment(spec, speech_corpus, workers=2)
    second = run_experiment(spec, speech_corpus, workers=1)
    assert first.rows == second.rows
    assert len(first.rows) == 2 * 3
    assert [r.M for r in first.rows] == [3, 3, 3, 8, 8, 8]

    a = first.write_csv(tmp_path / 'a.csv').read_bytes()
    b = second.write_csv(tmp_path / 'b.csv').read_bytes()
    assert a == b
    assert a.decode().splitlines()[0] == 'M,N,P,method,feature_combo,seed,relative_error_db,mse_db,kl'


def test_report_summaries(speech_corpus, tmp_path):
    report = run_experiment(frame_spec(P_values=(1, 3)), speech_corpus, workers=2)
    cells = report.summary()
    assert len(cells) == 4
    assert all(c.trials == 3 for c in cells)
    neighbors = report.by_neighbors()
    assert [(n.method, n.P) for n in neighbors] == [('frame-median', 1), ('frame-median', 3)]
    assert neighbors[0].trials == 6
    mean = report.cell_mean('8', 200, 3, SynthMethod.FRAME_MEDIAN)
    assert mean == pytest.approx(
        np.mean([r.relative_error_db for r in report.rows if r.M == 8 and r.P == 3])
    )
    assert report.write_summary(tmp_path / 'summary.json').exists()


def test_splits_exclude_the_test_speaker(speech_corpus):
    analyzed = [analyze_item(item, DatabaseMode.FRAME, PARAMS) for item in speech_corpus]
    spec = frame_spec()
    cell = Cell('8', 200, 3, SynthMethod.FRAME_MEDIAN)
    for trial in range(10):
        split = _draw_split(analyzed, spec, cell, trial_seed(spec.split_seed, trial))
        speaker = analyzed[split.test].item.speaker
        used = {int(i) for i in split.pool[:, 0]}
        assert split.test not in used
        assert all(analyzed[i].item.speaker != speaker for i in used)
        assert 0 <= split.offset <= analyzed[split.test].size - spec.test_frames


def test_exclusion_rules():
    w = speech_like(0.1)
    a = CorpusItem('a', w, genre='rock', speaker='x')
    b = CorpusItem('b', w, genre='rock', speaker='y')
    c = CorpusItem('c', w, genre='jazz', speaker='x')
    assert is_excluded(a, a, DatabaseMode.FRAME, True)
    assert is_excluded(a, c, DatabaseMode.FRAME, True)
    assert not is_excluded(a, b, DatabaseMode.FRAME, True)
    assert is_excluded(a, b, DatabaseMode.SEGMENT, True)
    assert not is_excluded(a, b, DatabaseMode.SEGMENT, False)
    assert not is_excluded(a, c, DatabaseMode.SEGMENT, True)


def test_corpus_too_small(speech_corpus):
    with pytest.raises(CorpusTooSmallError):
        run_experiment(frame_spec(N_values=(10 ** 6,)), speech_corpus, workers=1)
    with pytest.raises(CorpusTooSmallError):
        run_experiment(frame_spec(test_frames=10 ** 5), speech_corpus, workers=1)


def test_segment_experiment(music_corpus):
    spec = ExperimentSpec(
        mode=DatabaseMode.SEGMENT,
        M_values=('chroma', 'chroma+timbre+loudness'),
        N_values=(6,),
        P_values=(2,),
        methods=(SynthMethod.CROSS_PLAIN, SynthMethod.ADD_MEDIAN),
        trials=2,
        test_segments=3,
        stft=PARAMS,
    )
    report = run_experiment(spec, music_corpus, workers=2)
    assert len(report.rows) == 2 * 2 * 2
    assert {r.M for r in report.rows} == {12, 27}
    for row in report.rows:
        assert np.isfinite(row.relative_error_db)
        assert row.kl >= -1e-9


def test_spec_rejects_inconsistent_grids():
    with pytest.raises(ValueError):
        ExperimentSpec(mode=DatabaseMode.FRAME, methods=(SynthMethod.CROSS_PLAIN,))
    with pytest.raises(ValueError):
        ExperimentSpec(mode=DatabaseMode.FRAME, M_values=('msd27',))
    with pytest.raises(ValueError):
        ExperimentSpec(
            mode=DatabaseMode.SEGMENT,
            M_values=('rhythm',),
            methods=(SynthMethod.ADD_MEDIAN,)
        )


def test_feature_combos():
    combos = all_feature_combos()
    assert len(combos) == 7
    assert combos[-1] == 'chroma+timbre+loudness'
    assert parse_feature_combo('loudness,chroma') == ('chroma', 'loudness')


@pytest.fixture(scope='module')
def long_speech_corpus() -> list[CorpusItem]:
    # 30 speakers x 6 takes x 10 s: 30 minutes
    return [
        CorpusItem(
            f'spk{i % 30}/take{i}.wav',
            speech_like(10.0, seed=500 + i),
            speaker=f'spk{i % 30}'
        )
        for i in range(180)
    ]


@pytest.mark.slow
def test_more_development_data_helps(long_speech_corpus):
    spec = ExperimentSpec(
        mode=DatabaseMode.FRAME,
        M_values=('3', '8'),
        N_values=(1000, 10000),
        P_values=(10,),
        trials=10,
        split_seed=1,
        test_frames=100,
        stft=PARAMS,
    )
    report = run_experiment(spec, long_speech_corpus)
    for M in ('3', '8'):
        small = report.cell_mean(M, 1000, 10, SynthMethod.FRAME_MEDIAN)
        large = report.cell_mean(M, 10000, 10, SynthMethod.FRAME_MEDIAN)
        assert large < small


async def test_async_experiment_ignores_worker_count(speech_corpus):
    from exemplar_synth.evaluation import run_experiment_async

    spec = frame_spec(M_values=('3',), trials=2)
    first = await run_experiment_async(spec, speech_corpus, workers=2)
    second = await run_experiment_async(spec, speech_corpus, workers=1)
    assert first.rows == second.rows
    assert len(first.rows) == 2


def test_every_feature_combination_runs(music_corpus, tmp_path):
    spec = ExperimentSpec(
        mode=DatabaseMode.SEGMENT,
        M_values=all_feature_combos(),
        N_values=(6,),
        P_values=(3,),
        methods=(SynthMethod.ADD_MEDIAN, SynthMethod.ADD_MEAN, SynthMethod.ADD_MAX),
        trials=1,
        test_segments=3,
        stft=PARAMS,
    )
    report = run_experiment(spec, music_corpus, workers=4)
    assert len(report.summary()) == 7 * 3
    for row in report.rows:
        assert np.isfinite(row.kl) and row.kl >= -1e-9
    lines = report.write_csv(tmp_path / 'grid.csv').read_text().splitlines()
    assert len(lines) == 1 + 7 * 3


@pytest.mark.slow
def test_median_of_ten_neighbors_beats_nearest(long_speech_corpus):
    spec = ExperimentSpec(
        mode=DatabaseMode.FRAME,
        M_values=('8',),
        N_values=(10000,),
        P_values=(1, 10),
        trials=20,
        split_seed=3,
        stft=PARAMS,
    )
    report = run_experiment(spec, long_speech_corpus)
    nearest = report.cell_mean('8', 10000, 1, SynthMethod.FRAME_MEDIAN)
    median = report.cell_mean('8', 10000, 10, SynthMethod.FRAME_MEDIAN)
    assert median <= nearest


def test_development_data_comes_in_whole_excerpts(speech_corpus):
    analyzed = [analyze_item(item, DatabaseMode.FRAME, PARAMS) for item in speech_corpus]
    # 20 frames at hop 128 and 16 kHz
    spec = frame_spec(excerpt_seconds=0.16)
    excerpt = spec.excerpt_frames(SAMPLE_RATE)
    assert excerpt == 20
    cell = Cell('8', 200, 3, SynthMethod.FRAME_MEDIAN)
    for trial in range(5):
        split = _draw_split(analyzed, spec, cell, trial_seed(spec.split_seed, trial))
        pool = split.pool
        starts = [0] + [
            k for k in range(1, pool.shape[0])
            if pool[k, 0] != pool[k - 1, 0]
            or pool[k, 1] != pool[k - 1, 1] + 1
            or pool[k, 1] % excerpt == 0
        ]
        for begin, end in zip(starts, [*starts[1:], pool.shape[0]]):
            item, first = pool[begin]
            assert first % excerpt == 0
            assert end - begin == min(excerpt, analyzed[item].size - first)
        assert len(starts) > 1


def test_segment_development_data_comes_in_whole_files(music_corpus):
    spec = ExperimentSpec(
        mode=DatabaseMode.SEGMENT,
        M_values=('chroma',),
        N_values=(6,),
        P_values=(2,),
        methods=(SynthMethod.ADD_MEDIAN,),
        test_segments=3,
        stft=PARAMS,
    )
    analyzed = [analyze_item(item, DatabaseMode.SEGMENT, PARAMS) for item in music_corpus]
    cell = spec.cells()[0]
    split = _draw_split(analyzed, spec, cell, trial_seed(spec.split_seed, 0))
    files = [int(i) for i in split.pool[:, 0]]
    # each file appears once, all of its segments in order
    changes = [k for k in range(1, len(files)) if files[k] != files[k - 1]]
    assert len(changes) == len(set(files)) - 1
    for i in set(files):
        units = split.pool[split.pool[:, 0] == i, 1]
        np.testing.assert_array_equal(units, np.arange(analyzed[i].size))


def test_more_neighbors_than_development_units(speech_corpus):
    with pytest.raises(CorpusTooSmallError):
        run_experiment(frame_spec(N_values=(5,), P_values=(10,)), speech_corpus, workers=1)
