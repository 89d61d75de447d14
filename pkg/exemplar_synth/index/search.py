"""Module with the weighted distance kernel and exact P-nearest-neighbor search"""

from dataclasses import dataclass
from typing import TYPE_CHECKING
from typing import Iterable
from typing import Mapping
from typing import Self

import numpy as np

from exemplar_synth.features.types import FEATURE_GROUPS
from exemplar_synth.index.stats import DimensionMismatchError

if TYPE_CHECKING:
    from exemplar_synth.index.database import DevDatabase


class InvalidWeightsError(Exception):
    def __init__(self, reason: str):
        super().__init__(f"Weight vector is not valid: {reason}")


class UnknownFeatureGroupError(Exception):
    def __init__(self, group: str):
        super().__init__(
            f"Unknown feature group {group!r}, "
            f"expected some of {sorted(FEATURE_GROUPS)}"
        )


class NeighborCountError(Exception):
    def __init__(self, P: int, N: int):
        super().__init__(
            f"Can not select P={P} neighbors from a database of {N} entries"
        )


@dataclass(frozen=True)
class WeightVector:
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] == 0:
            raise InvalidWeightsError(f'expected a nonempty vector, got {w.shape}')
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidWeightsError('weights must be finite and nonnegative')
        if not np.any(w > 0):
            raise InvalidWeightsError('at least one weight must be positive')
        object.__setattr__(self, 'w', w)

    @property
    def dimension(self) -> int:
        return self.w.shape[0]

    @classmethod
    def ones(cls, dimension: int) -> Self:
        return cls(np.ones(dimension))

    @classmethod
    def from_groups(
            cls,
            groups: Iterable[str],
            overrides: Mapping[int, float] | None = None,
            dimension: int = 27
    ) -> Self:
        """
        1 on the columns of the named groups (chroma, timbre, loudness),
        0 elsewhere; overrides maps 0-based columns to explicit weights.
        """
        w = np.zeros(dimension)
        for group in groups:
            group = group.strip().lower()
            if group not in FEATURE_GROUPS:
                raise UnknownFeatureGroupError(group)
            w[list(FEATURE_GROUPS[group])] = 1.0
        for column, value in (overrides or {}).items():
            if not 0 <= column < dimension:
                raise InvalidWeightsError(
                    f'override column {column} outside 0..{dimension - 1}'
                )
            w[column] = value
        return cls(w)


@dataclass(frozen=True)
class NeighborSet:
    """P entry indices, ascending by distance, ties by index"""
    indices: np.ndarray
    distances: np.ndarray

    def __len__(self) -> int:
        return self.indices.shape[0]


def weighted_distance(f: np.ndarray, g: np.ndarray, w: WeightVector) -> float:
    """sqrt(sum_j w_j (f_j - g_j)^2)"""
    f = np.asarray(f, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if f.shape != g.shape:
        raise DimensionMismatchError(f.shape[-1], g.shape[-1])
    if f.shape[-1] != w.dimension:
        raise DimensionMismatchError(w.dimension, f.shape[-1])
    return float(np.sqrt(np.sum(w.w * (f - g) ** 2)))


def distances_to(
        features: np.ndarray,
        query: np.ndarray,
        w: WeightVector
) -> np.ndarray:
    """Flat scan: weighted distance from query to every row of features"""
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (features.shape[1],):
        raise DimensionMismatchError(features.shape[1], query.shape[-1])
    if w.dimension != features.shape[1]:
        raise DimensionMismatchError(features.shape[1], w.dimension)
    return np.sqrt(((features - query) ** 2) @ w.w)


def select_nearest(distances: np.ndarray, P: int) -> NeighborSet:
    """
    The P smallest distances, ascending, equal distances ordered by index.
    Partial selection first; every entry tied with the P-th value is kept
    as a candidate so the index tie-break stays exact.
    """
    N = distances.shape[0]
    if not 1 <= P <= N:
        raise NeighborCountError(P, N)
    if P < N:
        kth = np.partition(distances, P - 1)[P - 1]
        candidates = np.flatnonzero(distances <= kth)
    else:
        candidates = np.arange(N)
    order = np.lexsort((candidates, distances[candidates]))
    chosen = candidates[order][:P]
    return NeighborSet(chosen, distances[chosen])


def knn(
        query: np.ndarray,
        db: 'DevDatabase',
        P: int,
        w: WeightVector
) -> NeighborSet:
    """Exact P nearest entries of db to a standardized query"""
    if not 1 <= P <= db.size:
        raise NeighborCountError(P, db.size)
    return select_nearest(db.distances(query, w), P)
