"""Module with development-set standardization"""

from dataclasses import dataclass

import numpy as np


DEGENERATE_SIGMA = 1e-12


class NotEnoughVectorsError(Exception):
    def __init__(self, count: int):
        super().__init__(
            f"Standardization statistics need at least 2 vectors, got {count}"
        )


class DimensionMismatchError(Exception):
    def __init__(self, expected: int, actual: int):
        super().__init__(
            f"Feature dimension mismatch: expected {expected}, got {actual}"
        )


@dataclass(frozen=True)
class StandardizationStats:
    mu: np.ndarray
    sigma: np.ndarray
    # Constant dimensions, their sigma forced to 1
    degenerate: np.ndarray

    @property
    def dimension(self) -> int:
        return self.mu.shape[0]


def compute_stats(raw_features: np.ndarray) -> StandardizationStats:
    """Per-dimension mean and population standard deviation"""
    raw = np.atleast_2d(np.asarray(raw_features, dtype=np.float64))
    if raw.shape[0] < 2:
        raise NotEnoughVectorsError(raw.shape[0])
    mu = raw.mean(axis=0)
    sigma = raw.std(axis=0)
    degenerate = sigma < DEGENERATE_SIGMA
    sigma = np.where(degenerate, 1.0, sigma)
    return StandardizationStats(mu, sigma, degenerate)


def _check_dimension(f: np.ndarray, stats: StandardizationStats):
    if f.shape[-1] != stats.dimension:
        raise DimensionMismatchError(stats.dimension, f.shape[-1])


def standardize(f: np.ndarray, stats: StandardizationStats) -> np.ndarray:
    """(f - mu) / sigma, for one vector or a matrix of row vectors"""
    f = np.asarray(f, dtype=np.float64)
    _check_dimension(f, stats)
    return (f - stats.mu) / stats.sigma


def unstandardize(f: np.ndarray, stats: StandardizationStats) -> np.ndarray:
    f = np.asarray(f, dtype=np.float64)
    _check_dimension(f, stats)
    return f * stats.sigma + stats.mu
