"""
Module with candidate selection: the P x I grid of nearest neighbors and the
Viterbi search for the cheapest candidate sequence under a transition cost.
"""

import itertools
from dataclasses import dataclass
from typing import Literal
from typing import Sequence

import numpy as np
from loguru import logger

from exemplar_synth.index.database import DevDatabase
from exemplar_synth.index.search import WeightVector
from exemplar_synth.index.search import knn
from exemplar_synth.synth.config import SynthConfig
from exemplar_synth.synth.target import SynthTarget


logger.debug('Initialize exemplar_synth.synth.selection')


type TransitionKind = Literal['same-file', 'feature']


class EmptyGridError(Exception):
    def __init__(self):
        super().__init__("Candidate grid has no rows")


@dataclass(frozen=True)
class CandidateGrid:
    """Row i holds the P nearest entries of target segment i, ascending"""
    candidates: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        if self.candidates.shape != self.scores.shape or self.candidates.ndim != 2:
            raise ValueError(
                f'candidates {self.candidates.shape} and '
                f'scores {self.scores.shape} must be equal 2-D shapes'
            )

    @property
    def n_rows(self) -> int:
        return self.candidates.shape[0]

    @property
    def n_candidates(self) -> int:
        return self.candidates.shape[1]


def build_candidate_grid(
        target: SynthTarget,
        db: DevDatabase,
        cfg: SynthConfig
) -> CandidateGrid:
    queries = target.standardized(db)
    w = cfg.weight_vector(db.dimension)
    neighbors = [knn(query, db, cfg.P, w) for query in queries]
    return CandidateGrid(
        np.array([n.indices for n in neighbors], dtype=np.int64).reshape(len(queries), cfg.P),
        np.array([n.distances for n in neighbors], dtype=np.float64).reshape(len(queries), cfg.P),
    )


def transition_costs(
        db: DevDatabase,
        current: np.ndarray,
        following: np.ndarray,
        lambda_v: float,
        transition: TransitionKind = 'same-file',
        w: WeightVector | None = None
) -> np.ndarray:
    """P x P costs of moving from each current candidate to each following one"""
    if transition == 'feature':
        w = w or WeightVector.ones(db.dimension)
        left = db.features[current][:, None, :]
        right = db.features[following][None, :, :]
        return lambda_v * np.sqrt(((left - right) ** 2) @ w.w)
    files_now = np.array([db.entries[i].source_file for i in current])
    files_next = np.array([db.entries[i].source_file for i in following])
    return lambda_v * (files_now[:, None] != files_next[None, :]).astype(np.float64)


def viterbi_columns(
        grid: CandidateGrid,
        db: DevDatabase,
        lambda_v: float,
        transition: TransitionKind = 'same-file',
        w: WeightVector | None = None
) -> np.ndarray:
    """
    Column (0..P-1) chosen in every row, minimizing the sum of scores plus
    transition costs. Among equal-cost paths the lexicographically smallest
    column sequence wins: costs-to-go are computed backwards, then the path
    is walked forwards taking the first minimum at every step.
    """
    if grid.n_rows == 0:
        raise EmptyGridError()
    rows = grid.n_rows
    cost_to_go = np.empty_like(grid.scores)
    cost_to_go[-1] = grid.scores[-1]
    costs = []
    for i in range(rows - 2, -1, -1):
        step = transition_costs(
            db, grid.candidates[i], grid.candidates[i + 1], lambda_v, transition, w
        )
        costs.append(step)
        cost_to_go[i] = grid.scores[i] + np.min(step + cost_to_go[i + 1][None, :], axis=1)
    costs.reverse()

    columns = np.empty(rows, dtype=np.int64)
    columns[0] = int(np.argmin(cost_to_go[0]))
    for i in range(1, rows):
        step = costs[i - 1][columns[i - 1]]
        columns[i] = int(np.argmin(step + cost_to_go[i]))
    return columns


def viterbi_path(
        grid: CandidateGrid,
        db: DevDatabase,
        lambda_v: float,
        transition: TransitionKind = 'same-file',
        w: WeightVector | None = None
) -> np.ndarray:
    """Entry indices of the optimal candidate sequence, one per row"""
    columns = viterbi_columns(grid, db, lambda_v, transition, w)
    return grid.candidates[np.arange(grid.n_rows), columns]


def path_cost(
        grid: CandidateGrid,
        db: DevDatabase,
        columns: Sequence[int],
        lambda_v: float,
        transition: TransitionKind = 'same-file',
        w: WeightVector | None = None
) -> float:
    total = 0.0
    for i, column in enumerate(columns):
        total += grid.scores[i, column]
        if i + 1 < len(columns):
            step = transition_costs(
                db,
                grid.candidates[i, [column]],
                grid.candidates[i + 1, [columns[i + 1]]],
                lambda_v,
                transition,
                w
            )
            total += step[0, 0]
    return float(total)


def exhaustive_columns(
        grid: CandidateGrid,
        db: DevDatabase,
        lambda_v: float,
        transition: TransitionKind = 'same-file',
        w: WeightVector | None = None
) -> tuple[tuple[int, ...], float]:
    """Brute force over all P ** I paths; for checking small grids"""
    best: tuple[tuple[int, ...], float] | None = None
    for columns in itertools.product(range(grid.n_candidates), repeat=grid.n_rows):
        cost = path_cost(grid, db, columns, lambda_v, transition, w)
        if best is None or cost < best[1]:
            best = (columns, cost)
    return best
