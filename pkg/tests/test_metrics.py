import math

import numpy as np
import pytest

from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.evaluation import NotNormalizedError
from exemplar_synth.evaluation import ShapeMismatchError
from exemplar_synth.evaluation import ZeroReferenceError
from exemplar_synth.evaluation import constant_baseline
from exemplar_synth.evaluation import kl_divergence
from exemplar_synth.evaluation import mse_db
from exemplar_synth.evaluation import normalize_spectrogram
from exemplar_synth.evaluation import relative_error_db
from exemplar_synth.evaluation import spectrogram_kl
from exemplar_synth.evaluation.metrics import DB_FLOOR


@pytest.fixture()
def reference() -> np.ndarray:
    return np.random.default_rng(0).uniform(0.0, 1.0, (33, 20))


def test_identical_spectrograms_hit_the_floor(reference):
    assert relative_error_db(reference, reference) == DB_FLOOR
    assert mse_db(reference, reference.copy()) == DB_FLOOR


def test_zero_estimate_is_zero_db(reference):
    assert relative_error_db(reference, np.zeros_like(reference)) == pytest.approx(0.0, abs=1e-12)
    assert mse_db(reference, np.zeros_like(reference)) == pytest.approx(0.0, abs=1e-12)


def test_tenth_of_the_norm_is_minus_twenty_db(reference):
    direction = np.random.default_rng(1).standard_normal(reference.shape)
    direction *= 0.1 * np.linalg.norm(reference) / np.linalg.norm(direction)
    estimate = reference + direction
    assert relative_error_db(reference, estimate) == pytest.approx(-20.0, abs=1e-9)
    assert mse_db(reference, estimate) == pytest.approx(-10.0, abs=1e-9)


def test_relative_error_is_twice_mse():
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = rng.uniform(0, 1, (10, 10))
        s_hat = rng.uniform(0, 1, (10, 10))
        assert relative_error_db(s, s_hat) == pytest.approx(2 * mse_db(s, s_hat), rel=1e-12)


def test_error_accepts_spectrograms(params, reference):
    values = np.random.default_rng(3).uniform(0, 1, (params.n_bins, 4))
    a = MagSpectrogram(values, params, 16000)
    b = MagSpectrogram(values * 0.5, params, 16000)
    assert relative_error_db(a, b) == pytest.approx(20 * math.log10(0.5))


def test_error_inputs_validated(reference):
    with pytest.raises(ZeroReferenceError):
        relative_error_db(np.zeros((3, 3)), np.ones((3, 3)))
    with pytest.raises(ShapeMismatchError):
        mse_db(reference, reference[:, :-1])


def test_normalize_uniform():
    np.testing.assert_allclose(normalize_spectrogram(np.ones((4, 5))), np.full((4, 5), 0.05))


def test_normalize_ignores_scale(reference):
    a = normalize_spectrogram(reference)
    b = normalize_spectrogram(reference * 37.0)
    np.testing.assert_allclose(a, b, rtol=1e-12)
    assert a.sum() == pytest.approx(1.0, abs=1e-12)


def test_normalize_keeps_the_type(params):
    m = MagSpectrogram(np.ones((params.n_bins, 2)), params, 16000)
    normalized = normalize_spectrogram(m)
    assert isinstance(normalized, MagSpectrogram)
    assert normalized.values.sum() == pytest.approx(1.0)
    with pytest.raises(ZeroReferenceError):
        normalize_spectrogram(np.zeros(3))


def test_kl_of_identical_is_zero(reference):
    p = normalize_spectrogram(reference)
    assert kl_divergence(p, p) == pytest.approx(0.0, abs=1e-12)


def test_kl_against_uniform():
    p = np.array([0.9, 0.1])
    q = np.array([0.5, 0.5])
    expected = 0.9 * math.log(1.8) + 0.1 * math.log(0.2)
    assert kl_divergence(p, q) == pytest.approx(expected, rel=1e-12)


def test_kl_zero_entries_contribute_nothing():
    assert kl_divergence(np.array([1.0, 0.0]), np.array([0.5, 0.5])) == pytest.approx(math.log(2.0))


def test_kl_is_non_negative():
    rng = np.random.default_rng(5)
    for _ in range(100):
        p = normalize_spectrogram(rng.uniform(0, 1, (6, 7)) ** 3)
        q = normalize_spectrogram(rng.uniform(0, 1, (6, 7)) ** 3)
        assert kl_divergence(p, q) >= -1e-9


def test_kl_needs_distributions():
    with pytest.raises(NotNormalizedError):
        kl_divergence(np.array([0.5, 0.6]), np.array([0.5, 0.5]))
    with pytest.raises(ShapeMismatchError):
        kl_divergence(np.array([1.0]), np.array([0.5, 0.5]))


def test_spectrogram_kl(reference):
    assert spectrogram_kl(reference, 3.0 * reference) == pytest.approx(0.0, abs=1e-12)
    uniform = np.full(reference.shape, 1.0)
    assert spectrogram_kl(reference, np.zeros_like(reference)) == pytest.approx(
        spectrogram_kl(reference, uniform)
    )


def test_constant_baseline_frame_mode(frame_db):
    m = constant_baseline(frame_db, 7)
    assert m.values.shape == (frame_db.params.n_bins, 7)
    expected = np.mean([frame_db.entry_magnitude(i)[:, 0] for i in range(frame_db.size)], axis=0)
    np.testing.assert_allclose(m.values[:, 3], expected)
    np.testing.assert_array_equal(m.values[:, 0], m.values[:, 6])


def test_constant_baseline_segment_mode(two_file_segment_db):
    m = constant_baseline(two_file_segment_db, 4)
    assert m.values.shape == (two_file_segment_db.params.n_bins, 4)
    assert np.all(m.values >= 0)
