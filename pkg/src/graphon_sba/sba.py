"""Greedy pivot clustering and the block-probability histogram."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .distance import FULL, NeighborhoodPolicy, SliceDistanceKernel
from .errors import ContractError, DomainError
from .graphon import GraphSampleSet
from .seeding import as_rng

EMPTY_CELL_FALLBACK = 0.5


@dataclass(frozen=True)
class Blocking:
    """A partition of ``range(n)`` into blocks, each with its pivot.

    ``distance_evaluations`` is instrumentation only and is not serialized.
    """

    blocks: list[list[int]]
    pivots: list[int]
    delta: float
    distance_evaluations: int = field(default=0, compare=False)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def assignment(self) -> np.ndarray:
        out = np.full(self.n, -1, dtype=np.int64)
        for k, members in enumerate(self.blocks):
            out[members] = k
        return out

    def validate(self, n: int | None = None) -> None:
        flat = [v for b in self.blocks for v in b]
        n = self.n if n is None else n
        if sorted(flat) != list(range(n)):
            raise ContractError("blocks must partition the vertex set")
        if len(self.pivots) != len(self.blocks):
            raise ContractError("one pivot per block is required")
        for p, members in zip(self.pivots, self.blocks):
            if p not in members:
                raise ContractError(f"pivot {p} is not in its block")

    def to_dict(self) -> dict:
        return {"delta": self.delta, "blocks": self.blocks, "pivots": self.pivots}

    @classmethod
    def from_dict(cls, d: dict) -> "Blocking":
        return cls([list(map(int, b)) for b in d["blocks"]], [int(p) for p in d["pivots"]], float(d["delta"]))

    @classmethod
    def from_labels(cls, block_ids, delta: float = 1.0) -> "Blocking":
        """Build a blocking from per-vertex block ids; lowest member is the pivot."""
        block_ids = np.asarray(block_ids)
        blocks = [np.flatnonzero(block_ids == b).tolist() for b in np.unique(block_ids)]
        return cls(blocks, [b[0] for b in blocks], delta)


def cluster(
    samples: GraphSampleSet,
    delta: float,
    policy: NeighborhoodPolicy = FULL,
    rng=None,
) -> Blocking:
    """Greedy pivot clustering with threshold ``delta**2`` on estimated distances.

    Pivots are drawn uniformly from the unassigned vertices; candidates are
    scanned in ascending index order. A candidate joins when its estimated
    distance to the pivot is ``<= delta**2``.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    rng = as_rng(rng)
    n = samples.n
    threshold = delta * delta
    kernel = SliceDistanceKernel(samples) if n >= 3 else None
    omega = np.arange(n)
    blocks, pivots = [], []
    while omega.size:
        pivot = int(omega[rng.integers(omega.size)])
        others = omega[omega != pivot]
        if others.size and kernel is None:
            # n == 2: empty neighborhood, distances undefined
            raise DomainError("need n >= 3 to compare two vertices")
        if others.size:
            d = kernel.from_pivot(pivot, others, policy, rng)
            members = others[d <= threshold]
        else:
            members = others
        block = np.sort(np.append(members, pivot))
        blocks.append(block.tolist())
        pivots.append(pivot)
        omega = np.setdiff1d(omega, block, assume_unique=True)
    evals = kernel.evaluations if kernel is not None else 0
    return Blocking(blocks, pivots, float(delta), evals)


@dataclass(frozen=True)
class EstimatedGraphon:
    block_probs: np.ndarray
    assignment: np.ndarray
    source_blocking: Blocking
    empty_cells: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.assignment.size

    @property
    def has_empty_cells(self) -> bool:
        return self.empty_cells is not None and bool(self.empty_cells.any())

    def predict(self, i: int, j: int) -> float:
        return predict(self, i, j)

    def to_matrix(self) -> np.ndarray:
        a = self.assignment
        return self.block_probs[a[:, None], a[None, :]]

    def to_dict(self) -> dict:
        return {"block_probs": self.block_probs.tolist(), "assignment": self.assignment.tolist()}


def _indicator(blocking: Blocking, n: int) -> np.ndarray:
    Z = np.zeros((n, blocking.num_blocks))
    Z[np.arange(n), blocking.assignment()] = 1.0
    return Z


def estimate_block_probabilities(samples: GraphSampleSet, blocking: Blocking) -> EstimatedGraphon:
    """Edge frequency per ordered block pair, pooled over every observation.

    Self-pairs count. With masks, only observed (pair, observation) slots are
    averaged; a block pair with no observed slot gets 0.5 and is flagged in
    ``empty_cells``.
    """
    n = samples.n
    blocking.validate(n)
    Z = _indicator(blocking, n)
    edges = Z.T @ samples.observations.sum(axis=0, dtype=np.int64) @ Z
    if samples.masks is None:
        sizes = np.asarray(blocking.sizes(), dtype=np.int64)
        slots = np.outer(sizes, sizes) * samples.num_observations
        empty = None
    else:
        slots = Z.T @ samples.masks.sum(axis=0, dtype=np.int64) @ Z
        empty = slots == 0
    with np.errstate(invalid="ignore", divide="ignore"):
        probs = edges / slots
    if empty is not None and empty.any():
        warnings.warn(
            f"{int(empty.sum())} block pair(s) fully masked; using {EMPTY_CELL_FALLBACK}",
            RuntimeWarning,
            stacklevel=2,
        )
        probs[empty] = EMPTY_CELL_FALLBACK
    return EstimatedGraphon(probs, blocking.assignment(), blocking, empty)


def predict(est: EstimatedGraphon, i: int, j: int) -> float:
    n = est.n
    if not (0 <= i < n and 0 <= j < n):
        raise ContractError(f"vertex pair ({i}, {j}) is not assigned")
    return float(est.block_probs[est.assignment[i], est.assignment[j]])
