"""Spectrogram metrics and the parameter-grid experiment"""

from exemplar_synth.evaluation.corpus import CorpusItem
from exemplar_synth.evaluation.corpus import EmptyCorpusError
from exemplar_synth.evaluation.corpus import load_corpus
from exemplar_synth.evaluation.experiment import Cell
from exemplar_synth.evaluation.experiment import CorpusTooSmallError
from exemplar_synth.evaluation.experiment import ExperimentReport
from exemplar_synth.evaluation.experiment import ExperimentSpec
from exemplar_synth.evaluation.experiment import TrialResult
from exemplar_synth.evaluation.experiment import all_feature_combos
from exemplar_synth.evaluation.experiment import run_experiment
from exemplar_synth.evaluation.experiment import run_experiment_async
from exemplar_synth.evaluation.metrics import NotNormalizedError
from exemplar_synth.evaluation.metrics import ShapeMismatchError
from exemplar_synth.evaluation.metrics import ZeroReferenceError
from exemplar_synth.evaluation.metrics import constant_baseline
from exemplar_synth.evaluation.metrics import kl_divergence
from exemplar_synth.evaluation.metrics import mse_db
from exemplar_synth.evaluation.metrics import normalize_spectrogram
from exemplar_synth.evaluation.metrics import relative_error_db
from exemplar_synth.evaluation.metrics import spectrogram_kl


__all__ = [
    "Cell",
    "CorpusItem",
    "CorpusTooSmallError",
    "EmptyCorpusError",
    "ExperimentReport",
    "ExperimentSpec",
    "NotNormalizedError",
    "ShapeMismatchError",
    "TrialResult",
    "ZeroReferenceError",
    "all_feature_combos",
    "constant_baseline",
    "kl_divergence",
    "load_corpus",
    "mse_db",
    "normalize_spectrogram",
    "relative_error_db",
    "run_experiment",
    "run_experiment_async",
    "spectrogram_kl",
]
