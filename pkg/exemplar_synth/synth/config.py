"""Module with synthesis method selection and parameters"""

from enum import StrEnum
from typing import Literal
from typing import Self

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field

from exemplar_synth.config import get_settings
from exemplar_synth.index.database import DatabaseMode
from exemplar_synth.index.search import WeightVector
from exemplar_synth.index.stats import DimensionMismatchError


class SynthMethod(StrEnum):
    CROSS_PLAIN = 'cross-plain'
    CROSS_NORMALIZED = 'cross-normalized'
    CROSS_PENALIZED = 'cross-penalized'
    ADD_MEDIAN = 'add-median'
    ADD_MEAN = 'add-mean'
    ADD_MAX = 'add-max'
    FRAME_MEDIAN = 'frame-median'

    @property
    def database_mode(self) -> DatabaseMode:
        if self is SynthMethod.FRAME_MEDIAN:
            return DatabaseMode.FRAME
        return DatabaseMode.SEGMENT

    @property
    def is_concatenative(self) -> bool:
        return self.value.startswith('cross-')

    @property
    def combine_mode(self) -> 'CombineMode':
        if self is SynthMethod.ADD_MEAN:
            return CombineMode.MEAN
        if self is SynthMethod.ADD_MAX:
            return CombineMode.MAX
        return CombineMode.MEDIAN


class CombineMode(StrEnum):
    MEDIAN = 'median'
    MEAN = 'mean'
    MAX = 'max'


class MethodModeMismatchError(Exception):
    def __init__(self, method: SynthMethod, mode: DatabaseMode):
        super().__init__(
            f"Method {method.value!r} needs a {method.database_mode.value}-mode "
            f"database, got {mode.value}-mode"
        )


class SynthConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    method: SynthMethod = SynthMethod.CROSS_PLAIN
    P: int = Field(default=10, ge=1)
    # None means all-ones weights of the database dimension
    weights: tuple[float, ...] | None = None
    lambda_v: float = Field(default=1.0, ge=0)
    # same-file: lambda_v on every file change;
    # feature: lambda_v times the weighted distance of consecutive candidates
    transition: Literal['same-file', 'feature'] = 'same-file'
    # peak: match target peak amplitude; loudness: match target peak loudness (f26)
    gain: Literal['peak', 'loudness'] = 'peak'
    crossfade_ms: float = Field(default=0.0, ge=0)
    gl_iters: int = Field(default=50, ge=1)
    gl_seed: int = 0

    @classmethod
    def from_settings(cls, **overrides) -> Self:
        settings = get_settings()
        defaults = {
            'P': settings.neighbors,
            'lambda_v': settings.lambda_v,
            'gl_iters': settings.gl_iters,
        }
        return cls(**(defaults | overrides))

    def weight_vector(self, dimension: int) -> WeightVector:
        if self.weights is None:
            return WeightVector.ones(dimension)
        if len(self.weights) != dimension:
            raise DimensionMismatchError(dimension, len(self.weights))
        return WeightVector(list(self.weights))

    def check_mode(self, mode: DatabaseMode):
        if self.method.database_mode is not mode:
            raise MethodModeMismatchError(self.method, mode)
