"""Estimated and exact slice distances between two vertices.

The estimator splits the 2T observations into a first and a second half and
uses per-half edge counts ``A = sum_{t<=T} G_t`` and ``B = sum_{t>T} G_t``.
For a pair (i, j) and a third vertex k the four row products collapse to

    r_ii - r_ij - r_ji + r_jj = (A[i,k] - A[j,k]) * (B[i,k] - B[j,k]) / T**2

and likewise for columns, so a whole pivot row of distances costs one pass
over an (m, n) integer array. Counts stay integral until the final scaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ContractError, DomainError
from .graphon import BlockGraphon, Graphon, GraphSampleSet, _check_unit
from .seeding import as_rng

QUADRATURE_PANELS = 4096


@dataclass(frozen=True)
class NeighborhoodPolicy:
    mode: Literal["full", "random"] = "full"
    size: int | None = None

    def __post_init__(self):
        if self.mode not in ("full", "random"):
            raise DomainError(f"unknown neighborhood mode {self.mode!r}")
        if self.mode == "random" and (self.size is None or self.size < 1):
            raise DomainError("random neighborhoods need a positive size")

    @classmethod
    def random_subset(cls, size: int) -> "NeighborhoodPolicy":
        return cls("random", int(size))

    def neighborhood_size(self, n: int) -> int:
        if self.mode == "full":
            return n - 2
        if self.size > n - 2:
            raise DomainError(f"neighborhood size {self.size} exceeds n - 2 = {n - 2}")
        return self.size


FULL = NeighborhoodPolicy()


class SliceDistanceKernel:
    """Precomputed half-sums for repeated distance queries on one sample set.

    ``evaluations`` counts single-pair distance evaluations served so far.
    """

    def __init__(self, samples: GraphSampleSet):
        obs = samples.observations
        T = samples.T
        self.n = samples.n
        self.T = T
        self.first = obs[:T].sum(axis=0, dtype=np.int64)
        self.second = obs[T:].sum(axis=0, dtype=np.int64)
        self.evaluations = 0

    def _terms(self, pivot: int, others: np.ndarray) -> np.ndarray:
        """(m, n) integer array of T**2 * (row term + column term) per k."""
        A, B = self.first, self.second
        rows = (A[pivot] - A[others]) * (B[pivot] - B[others])
        cols = (A[:, pivot, None] - A[:, others]) * (B[:, pivot, None] - B[:, others])
        return rows + cols.T

    def from_pivot(
        self,
        pivot: int,
        others,
        policy: NeighborhoodPolicy = FULL,
        rng=None,
    ) -> np.ndarray:
        """Estimated distances between ``pivot`` and each vertex in ``others``."""
        others = np.asarray(others, dtype=np.int64)
        m = others.size
        if m == 0:
            return np.empty(0)
        if np.any(others == pivot):
            raise ContractError("a vertex has no distance to itself")
        S = policy.neighborhood_size(self.n)
        if S < 1:
            raise DomainError("need n >= 3 for a non-empty neighborhood")
        terms = self._terms(pivot, others)
        rows = np.arange(m)
        if policy.mode == "full":
            terms[:, pivot] = 0
            terms[rows, others] = 0
            total = terms.sum(axis=1)
        else:
            # uniform S-subset of {0..n-1} minus {pivot, other}, fresh per pair
            keys = as_rng(rng).random((m, self.n))
            keys[:, pivot] = np.inf
            keys[rows, others] = np.inf
            picked = np.argpartition(keys, S - 1, axis=1)[:, :S]
            total = np.take_along_axis(terms, picked, axis=1).sum(axis=1)
        self.evaluations += m
        return 0.5 * ((total / (self.T * self.T)) / S)


def slice_products(samples: GraphSampleSet, i: int, j: int, k: int) -> tuple[float, float]:
    """Row and column product estimates ``(r_hat, c_hat)`` for pair (i, j) via k."""
    if len({i, j, k}) < 3:
        raise ContractError("i, j and k must be distinct")
    obs = samples.observations
    T = samples.T
    r = int(obs[:T, i, k].sum()) * int(obs[T:, j, k].sum()) / (T * T)
    c = int(obs[:T, k, i].sum()) * int(obs[T:, k, j].sum()) / (T * T)
    return r, c


def estimate_distance(
    samples: GraphSampleSet,
    i: int,
    j: int,
    policy: NeighborhoodPolicy = FULL,
    rng=None,
) -> float:
    if i == j:
        raise ContractError("estimate_distance needs i != j")
    if samples.n < 3:
        raise DomainError("need n >= 3 for a non-empty neighborhood")
    kernel = SliceDistanceKernel(samples)
    return float(kernel.from_pivot(i, [j], policy, rng)[0])


def exact_distance(g: Graphon, u_i: float, u_j: float) -> float:
    """Averaged squared L2 gap between the row and column slices at u_i, u_j."""
    _check_unit([u_i, u_j], "labels")
    if isinstance(g, BlockGraphon):
        a, b = g.block_of([u_i, u_j])
        P, w = g.probabilities, g.widths
        row = float(np.dot(w, (P[a] - P[b]) ** 2))
        col = float(np.dot(w, (P[:, a] - P[:, b]) ** 2))
        return 0.5 * (row + col)
    return quadrature_distance(g, u_i, u_j)


def quadrature_distance(g: Graphon, u_i: float, u_j: float, panels: int = QUADRATURE_PANELS) -> float:
    """Midpoint-rule evaluation of the slice distance for any graphon."""
    x = (np.arange(panels) + 0.5) / panels
    row = np.mean((g.evaluate(u_i, x) - g.evaluate(u_j, x)) ** 2)
    col = np.mean((g.evaluate(x, u_i) - g.evaluate(x, u_j)) ** 2)
    return float(0.5 * (row + col))
