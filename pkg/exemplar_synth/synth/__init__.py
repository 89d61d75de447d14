"""Concatenative and additive synthesis from development exemplars"""

from exemplar_synth.synth.additive import CombineShapeError
from exemplar_synth.synth.additive import EmptyCombinationError
from exemplar_synth.synth.additive import add_combine
from exemplar_synth.synth.additive import additive_synthesize
from exemplar_synth.synth.additive import combine_magnitudes
from exemplar_synth.synth.additive import estimate_magnitude
from exemplar_synth.synth.concatenative import cross_normalized
from exemplar_synth.synth.concatenative import cross_penalized
from exemplar_synth.synth.concatenative import cross_plain
from exemplar_synth.synth.config import CombineMode
from exemplar_synth.synth.config import MethodModeMismatchError
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.config import SynthMethod
from exemplar_synth.synth.engine import SynthResult
from exemplar_synth.synth.engine import synthesize
from exemplar_synth.synth.selection import CandidateGrid
from exemplar_synth.synth.selection import EmptyGridError
from exemplar_synth.synth.selection import build_candidate_grid
from exemplar_synth.synth.selection import path_cost
from exemplar_synth.synth.selection import viterbi_path
from exemplar_synth.synth.target import SynthTarget
from exemplar_synth.synth.target import TargetModeMismatchError
from exemplar_synth.synth.target import TargetSampleRateError
from exemplar_synth.synth.target import target_from_analysis
from exemplar_synth.synth.target import target_from_frames
from exemplar_synth.synth.target import target_from_segments
from exemplar_synth.synth.target import target_from_waveform


__all__ = [
    "CandidateGrid",
    "CombineMode",
    "CombineShapeError",
    "EmptyCombinationError",
    "EmptyGridError",
    "MethodModeMismatchError",
    "SynthConfig",
    "SynthMethod",
    "SynthResult",
    "SynthTarget",
    "TargetModeMismatchError",
    "TargetSampleRateError",
    "add_combine",
    "additive_synthesize",
    "build_candidate_grid",
    "combine_magnitudes",
    "cross_normalized",
    "cross_penalized",
    "cross_plain",
    "estimate_magnitude",
    "path_cost",
    "synthesize",
    "target_from_analysis",
    "target_from_frames",
    "target_from_segments",
    "target_from_waveform",
    "viterbi_path",
]
