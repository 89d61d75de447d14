"""WAV audio and analysis JSON documents"""

from exemplar_synth.audio_io.analysis import AnalysisDocument
from exemplar_synth.audio_io.analysis import AnalysisSchemaError
from exemplar_synth.audio_io.analysis import AnalysisSegment
from exemplar_synth.audio_io.analysis import FrameFeatureDocument
from exemplar_synth.audio_io.analysis import analysis_document_from_features
from exemplar_synth.audio_io.analysis import frame_feature_document
from exemplar_synth.audio_io.analysis import load_analysis_document
from exemplar_synth.audio_io.analysis import parse_analysis_document
from exemplar_synth.audio_io.analysis import write_analysis_document
from exemplar_synth.audio_io.wav import AudioFormatError
from exemplar_synth.audio_io.wav import AudioWriteError
from exemplar_synth.audio_io.wav import read_wav
from exemplar_synth.audio_io.wav import write_wav


__all__ = [
    "AnalysisDocument",
    "AnalysisSchemaError",
    "AnalysisSegment",
    "AudioFormatError",
    "AudioWriteError",
    "FrameFeatureDocument",
    "analysis_document_from_features",
    "frame_feature_document",
    "load_analysis_document",
    "parse_analysis_document",
    "read_wav",
    "write_analysis_document",
    "write_wav",
]
