import numpy as np
import pytest

from exemplar_synth.dsp.types import StftParams
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.index import DatabaseMode
from exemplar_synth.index import DevDatabase
from exemplar_synth.index import DevEntry
from exemplar_synth.index import DimensionMismatchError
from exemplar_synth.index import EmptyDatabaseError
from exemplar_synth.index import InvalidWeightsError
from exemplar_synth.index import ModeFeatureSetMismatchError
from exemplar_synth.index import NeighborCountError
from exemplar_synth.index import NotEnoughVectorsError
from exemplar_synth.index import SourceFile
from exemplar_synth.index import StandardizationStats
from exemplar_synth.index import UnknownFeatureGroupError
from exemplar_synth.index import WeightVector
from exemplar_synth.index import build_database_from_waveforms
from exemplar_synth.index import compute_stats
from exemplar_synth.index import knn
from exemplar_synth.index import standardize
from exemplar_synth.index import unstandardize
from exemplar_synth.index import weighted_distance
from exemplar_synth.synth.target import target_from_waveform


def random_db(
        rng: np.random.Generator,
        N: int,
        feature_set: FeatureSet,
        scale: np.ndarray | None = None
) -> DevDatabase:
    raw = rng.standard_normal((N, feature_set.dimension))
    if scale is not None:
        raw = raw * scale
    mode = DatabaseMode.FRAME if feature_set.is_frame_set else DatabaseMode.SEGMENT
    entries = [DevEntry(f'file{i % 7}', i * 10, 10) for i in range(N)]
    files = [SourceFile(f'file{k}') for k in range(7)]
    return DevDatabase.from_raw_features(
        raw, entries, files, mode, feature_set, StftParams(), 16000
    )


def full_sort_oracle(db: DevDatabase, query: np.ndarray, P: int, w: np.ndarray):
    distances = np.sqrt(((db.features - query) ** 2) @ w)
    order = np.argsort(distances, kind='stable')[:P]
    return order, distances[order]


def test_stats_are_population_moments():
    raw = np.array([[1.0, 5.0], [3.0, 5.0]])
    stats = compute_stats(raw)
    np.testing.assert_array_equal(stats.mu, [2.0, 5.0])
    np.testing.assert_array_equal(stats.sigma, [1.0, 1.0])
    np.testing.assert_array_equal(stats.degenerate, [False, True])
    np.testing.assert_array_equal(standardize(raw, stats), [[-1.0, 0.0], [1.0, 0.0]])
    np.testing.assert_array_equal(unstandardize(standardize(raw, stats), stats), raw)


def test_stats_need_two_vectors():
    with pytest.raises(NotEnoughVectorsError):
        compute_stats(np.ones((1, 3)))


def test_standardize_checks_dimension():
    stats = compute_stats(np.random.default_rng(0).standard_normal((5, 3)))
    with pytest.raises(DimensionMismatchError):
        standardize(np.zeros(4), stats)


def test_standardized_columns_have_zero_mean_unit_std():
    db = random_db(np.random.default_rng(1), 500, FeatureSet.M8, scale=np.arange(1, 9) * 10.0)
    np.testing.assert_allclose(db.features.mean(axis=0), 0.0, atol=1e-12)
    np.testing.assert_allclose(db.features.std(axis=0), 1.0, atol=1e-12)


def test_single_entry_database():
    db = DevDatabase.from_raw_features(
        np.array([[1.0, 2.0, 3.0]]),
        [DevEntry('a', 0, 10)],
        [SourceFile('a')],
        DatabaseMode.FRAME,
        FeatureSet.M3,
        StftParams(),
        16000
    )
    assert np.all(db.stats.degenerate)
    np.testing.assert_array_equal(db.features, [[0.0, 0.0, 0.0]])
    result = knn(db.standardize_query(np.array([5.0, 5.0, 5.0])), db, 1, WeightVector.ones(3))
    assert result.indices.tolist() == [0]


def test_weighted_distance():
    w = WeightVector(np.array([1.0, 0.0, 4.0]))
    assert weighted_distance(np.array([0.0, 0.0, 0.0]), np.array([3.0, 100.0, 2.0]), w) == 5.0


def test_weight_validation():
    with pytest.raises(InvalidWeightsError):
        WeightVector(np.array([1.0, -1.0]))
    with pytest.raises(InvalidWeightsError):
        WeightVector(np.zeros(3))


def test_weights_from_groups():
    w = WeightVector.from_groups(['timbre', 'loudness'], overrides={0: 0.5})
    assert w.w[0] == 0.5
    assert np.all(w.w[1:12] == 0)
    assert np.all(w.w[12:] == 1)
    with pytest.raises(UnknownFeatureGroupError):
        WeightVector.from_groups(['rhythm'])


@pytest.mark.parametrize('feature_set', [FeatureSet.M8, FeatureSet.MSD27])
def test_knn_matches_full_sort(feature_set):
    rng = np.random.default_rng(42 + feature_set.dimension)
    for _ in range(25):
        db = random_db(rng, 1000, feature_set)
        w = rng.uniform(0.0, 2.0, feature_set.dimension)
        query = rng.standard_normal(feature_set.dimension)
        P = int(rng.integers(1, 30))
        result = knn(query, db, P, WeightVector(w))
        indices, distances = full_sort_oracle(db, query, P, w)
        assert result.indices.tolist() == indices.tolist()
        np.testing.assert_allclose(result.distances, distances, rtol=1e-12)
        assert np.all(np.diff(result.distances) >= 0)


def test_knn_ties_broken_by_index():
    features = np.array([[0.0], [1.0], [-1.0], [1.0], [5.0]])
    features = np.hstack([features, np.zeros((5, 2))])
    db = DevDatabase(
        features=features,
        entries=tuple(DevEntry('a', i, 1) for i in range(5)),
        stats=StandardizationStats(np.zeros(3), np.ones(3), np.zeros(3, dtype=bool)),
        mode=DatabaseMode.FRAME,
        feature_set=FeatureSet.M3,
        params=StftParams(),
        sample_rate=16000,
        files=(SourceFile('a'),),
    )
    result = knn(np.zeros(3), db, 4, WeightVector.ones(3))
    assert result.indices.tolist() == [0, 1, 2, 3]
    np.testing.assert_array_equal(result.distances, [0.0, 1.0, 1.0, 1.0])


def test_knn_self_query_has_zero_distance():
    db = random_db(np.random.default_rng(5), 300, FeatureSet.M21)
    for i in (0, 17, 299):
        result = knn(db.features[i], db, 1, WeightVector.ones(21))
        assert result.indices.tolist() == [i]
        assert result.distances[0] == 0.0


def test_knn_invariant_to_feature_scaling():
    # Standardization removes per-dimension units
    rng = np.random.default_rng(9)
    raw = rng.standard_normal((400, 8))
    queries = rng.standard_normal((20, 8))
    scale = np.array([1e-3, 1.0, 1e3, 7.0, 0.5, 2.0, 100.0, 1e-2])
    entries = [DevEntry('a', i, 1) for i in range(400)]

    def build(values):
        return DevDatabase.from_raw_features(
            values, entries, [SourceFile('a')], DatabaseMode.FRAME, FeatureSet.M8, StftParams(), 16000
        )

    plain, scaled = build(raw), build(raw * scale)
    for q in queries:
        a = knn(plain.standardize_query(q), plain, 5, WeightVector.ones(8))
        b = knn(scaled.standardize_query(q * scale), scaled, 5, WeightVector.ones(8))
        assert a.indices.tolist() == b.indices.tolist()


def test_knn_neighbor_count_bounds():
    db = random_db(np.random.default_rng(3), 10, FeatureSet.M3)
    with pytest.raises(NeighborCountError):
        knn(np.zeros(3), db, 11, WeightVector.ones(3))
    with pytest.raises(NeighborCountError):
        knn(np.zeros(3), db, 0, WeightVector.ones(3))


def test_mode_and_feature_set_must_agree(speech, params):
    with pytest.raises(ModeFeatureSetMismatchError):
        build_database_from_waveforms({'s': speech}, DatabaseMode.FRAME, 'msd27', params)
    with pytest.raises(ModeFeatureSetMismatchError):
        build_database_from_waveforms({'s': speech}, DatabaseMode.SEGMENT, '8', params)


def test_empty_database_rejected(params):
    with pytest.raises(EmptyDatabaseError):
        build_database_from_waveforms({}, DatabaseMode.FRAME, '8', params)


def test_frame_database_entries(frame_db, speech, params):
    assert frame_db.size == frame_db.features.shape[0]
    assert frame_db.entries[3].start == 3 * params.hop
    column = frame_db.entry_magnitude(3)
    assert column.shape == (params.n_bins, 1)


def test_segment_database_entries_tile_the_file(segment_db, bursts):
    entries = segment_db.entries
    assert entries[0].start == 0
    assert entries[-1].end == len(bursts)
    for entry in range(segment_db.size):
        audio = segment_db.entry_audio(entry)
        assert len(audio) == entries[entry].length
        assert segment_db.entry_magnitude(entry).shape[1] >= 1


def test_target_from_database_audio_finds_itself(segment_db, bursts):
    target = target_from_waveform(bursts, segment_db)
    queries = target.standardized(segment_db)
    for i, query in enumerate(queries):
        result = knn(query, segment_db, 1, WeightVector.ones(27))
        assert result.indices.tolist() == [i]
        assert result.distances[0] == 0.0


async def test_async_build_keeps_corpus_order(tmp_path, bursts, other_bursts, params):
    from exemplar_synth.audio_io import write_wav
    from exemplar_synth.index import build_database_async

    first, broken, second = tmp_path / 'b.wav', tmp_path / 'broken.wav', tmp_path / 'a.wav'
    write_wav(bursts, first)
    broken.write_text('not audio')
    write_wav(other_bursts, second)

    db = await build_database_async([first, broken, second], 'segment', 'msd27', params, workers=3)
    assert [f.id for f in db.files] == [str(first), str(second)]
    sources = [e.source_file for e in db.entries]
    assert sources == sorted(sources, key=[str(first), str(second)].index)
    assert sources[0] == str(first) and sources[-1] == str(second)
