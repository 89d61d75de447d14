"""Time-frequency analysis and synthesis primitives"""

from exemplar_synth.dsp.griffin_lim import GriffinLimIterationsError
from exemplar_synth.dsp.griffin_lim import griffin_lim
from exemplar_synth.dsp.griffin_lim import inconsistency
from exemplar_synth.dsp.stft import ColaViolationError
from exemplar_synth.dsp.stft import SignalTooShortError
from exemplar_synth.dsp.stft import istft
from exemplar_synth.dsp.stft import frame_boundary
from exemplar_synth.dsp.stft import frame_signal
from exemplar_synth.dsp.stft import magnitude
from exemplar_synth.dsp.stft import magnitude_spectrogram
from exemplar_synth.dsp.stft import n_frames
from exemplar_synth.dsp.stft import stft
from exemplar_synth.dsp.stft import synthesis_length
from exemplar_synth.dsp.stretch import EmptySignalError
from exemplar_synth.dsp.stretch import StretchLengthError
from exemplar_synth.dsp.stretch import resample_frames
from exemplar_synth.dsp.stretch import time_stretch
from exemplar_synth.dsp.types import ComplexSpectrogram
from exemplar_synth.dsp.types import InvalidSpectrogramError
from exemplar_synth.dsp.types import InvalidWaveformError
from exemplar_synth.dsp.types import MagSpectrogram
from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform


__all__ = [
    "ColaViolationError",
    "ComplexSpectrogram",
    "GriffinLimIterationsError",
    "InvalidSpectrogramError",
    "InvalidWaveformError",
    "MagSpectrogram",
    "SignalTooShortError",
    "StftParams",
    "EmptySignalError",
    "StretchLengthError",
    "Waveform",
    "griffin_lim",
    "inconsistency",
    "istft",
    "frame_boundary",
    "frame_signal",
    "magnitude",
    "magnitude_spectrogram",
    "n_frames",
    "resample_frames",
    "stft",
    "synthesis_length",
    "time_stretch",
]
