"""Choosing the clustering threshold by minimizing a histogram CV risk."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .distance import FULL, NeighborhoodPolicy
from .errors import DomainError
from .graphon import GraphSampleSet
from .sba import Blocking, cluster
from .seeding import as_rng, child_seed, derive_seed, make_rng


@dataclass(frozen=True)
class DeltaGrid:
    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise DomainError("delta grid is empty")
        if any(v <= 0 for v in vals):
            raise DomainError("delta values must be positive")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("delta grid must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @classmethod
    def geometric(cls, lo: float, hi: float, num: int) -> "DeltaGrid":
        return cls(tuple(np.geomspace(lo, hi, num)))


def default_grid() -> DeltaGrid:
    return DeltaGrid.geometric(0.05, 1.0, 10)


def cv_risk(blocking: Blocking, n: int) -> float:
    """Histogram cross-validation risk with bin width ``h = 1/K``.

    Evaluated in exact rational arithmetic, so K = 1 gives exactly -1 and
    all-singleton blockings give exactly +1.
    """
    if n < 2:
        raise DomainError("cv_risk needs n >= 2")
    sizes = blocking.sizes()
    if sum(sizes) != n or not sizes:
        raise DomainError("blocking does not partition n vertices")
    K = len(sizes)
    sum_sq = Fraction(sum(s * s for s in sizes), n * n)
    risk = Fraction(2 * K, n - 1) - Fraction((n + 1) * K, n - 1) * sum_sq
    return float(risk)


class CrossValidation(NamedTuple):
    delta: float
    blocking: Blocking
    risks: list[float]
    blockings: list[Blocking]


def select_delta(
    samples: GraphSampleSet,
    grid: DeltaGrid | None = None,
    policy: NeighborhoodPolicy = FULL,
    rng=None,
) -> CrossValidation:
    """Cluster once per grid value and keep the minimum-risk threshold.

    Grid value ``k`` clusters with stream ``derive_seed(base, k)``, ``base``
    being one draw from ``rng``. Ties go to the smallest delta.
    """
    grid = default_grid() if grid is None else grid
    base = child_seed(as_rng(rng))
    blockings = [
        cluster(samples, d, policy, make_rng(derive_seed(base, k)))
        for k, d in enumerate(grid.values)
    ]
    risks = [cv_risk(b, samples.n) for b in blockings]
    best = int(np.argmin(risks))  # first minimum == smallest delta
    return CrossValidation(grid.values[best], blockings[best], risks, blockings)


def risk_curve_csv(cv: CrossValidation) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delta", "K", "risk"])
    for b, r in zip(cv.blockings, cv.risks):
        w.writerow([repr(b.delta), b.num_blocks, repr(r)])
    return buf.getvalue()
