"""Audio synthesis from features by querying a development database of exemplars"""

from exemplar_synth.dsp import MagSpectrogram
from exemplar_synth.dsp import StftParams
from exemplar_synth.dsp import Waveform
from exemplar_synth.index import DatabaseMode
from exemplar_synth.index import DevDatabase
from exemplar_synth.index import build_database
from exemplar_synth.index import load_database
from exemplar_synth.index import save_database
from exemplar_synth.synth import SynthConfig
from exemplar_synth.synth import SynthMethod
from exemplar_synth.synth import synthesize


__all__ = [
    "DatabaseMode",
    "DevDatabase",
    "MagSpectrogram",
    "StftParams",
    "SynthConfig",
    "SynthMethod",
    "Waveform",
    "build_database",
    "load_database",
    "save_database",
    "synthesize",
]
