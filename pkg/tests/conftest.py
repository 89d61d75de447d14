import pytest

from exemplar_synth.dsp.types import StftParams
from exemplar_synth.dsp.types import Waveform
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.database import build_database_from_waveforms
from tests.signals import speech_like
from tests.signals import tone_bursts


@pytest.fixture()
def params() -> StftParams:
    return StftParams(frame_len=512, hop=128)


@pytest.fixture()
def bursts() -> Waveform:
    return tone_bursts(
        [220.0, 330.0, 440.0, 262.0, 392.0, 523.0],
        amps=[0.5, 0.3, 0.6, 0.4, 0.2, 0.5]
    )


@pytest.fixture()
def other_bursts() -> Waveform:
    return tone_bursts([196.0, 294.0, 349.0, 247.0], amps=[0.4, 0.5, 0.3, 0.6])


@pytest.fixture()
def speech() -> Waveform:
    return speech_like(3.0, seed=1)


@pytest.fixture()
def segment_db(bursts: Waveform, params: StftParams) -> DevDatabase:
    return build_database_from_waveforms(
        {'bursts': bursts}, DatabaseMode.SEGMENT, 'msd27', params
    )


@pytest.fixture()
def two_file_segment_db(bursts: Waveform, other_bursts: Waveform, params: StftParams) -> DevDatabase:
    return build_database_from_waveforms(
        {'bursts': bursts, 'other': other_bursts}, DatabaseMode.SEGMENT, 'msd27', params
    )


@pytest.fixture()
def frame_db(speech: Waveform, params: StftParams) -> DevDatabase:
    return build_database_from_waveforms(
        {'speech': speech}, DatabaseMode.FRAME, '8', params
    )
