"""Frame feature ladder, onset segmentation and segment features"""

from exemplar_synth.features.frame import EPSILON
from exemplar_synth.features.frame import CepstrumOrderError
from exemplar_synth.features.frame import cepstrum
from exemplar_synth.features.frame import frame_features
from exemplar_synth.features.frame import mel_spectrogram
from exemplar_synth.features.frame import mfcc
from exemplar_synth.features.frame import onset_strength
from exemplar_synth.features.frame import spectral_flux
from exemplar_synth.features.segment import SegmentOutOfRangeError
from exemplar_synth.features.segment import chroma
from exemplar_synth.features.segment import loudness_triple
from exemplar_synth.features.segment import segment_features
from exemplar_synth.features.segment import segment_onsets
from exemplar_synth.features.segment import timbre_surrogate
from exemplar_synth.features.types import FEATURE_GROUPS
from exemplar_synth.features.types import FeatureMatrix
from exemplar_synth.features.types import FeatureSet
from exemplar_synth.features.types import Segment
from exemplar_synth.features.types import SegmentFeatureVector
from exemplar_synth.features.types import UnknownFeatureSetError


__all__ = [
    "EPSILON",
    "FEATURE_GROUPS",
    "CepstrumOrderError",
    "FeatureMatrix",
    "FeatureSet",
    "Segment",
    "SegmentFeatureVector",
    "SegmentOutOfRangeError",
    "UnknownFeatureSetError",
    "cepstrum",
    "chroma",
    "frame_features",
    "loudness_triple",
    "mel_spectrogram",
    "mfcc",
    "onset_strength",
    "segment_features",
    "segment_onsets",
    "spectral_flux",
    "timbre_surrogate",
]
