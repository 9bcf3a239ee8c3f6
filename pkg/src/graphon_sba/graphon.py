"""Graphon models and exchangeable random graph sampling.

A graphon is either a step function on an interval grid (``BlockGraphon``)
or one of the closed-form kernels ``w1_logistic`` / ``w2_product``
(``FormulaGraphon``). Graphs are drawn by giving every vertex a latent label
``u_i ~ U[0, 1]`` and setting ``G[i, j] = 1`` with probability
``w(u_i, u_j)``, diagonal included.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, DomainError
from .seeding import as_rng, child_seed, derive_seed, make_rng


def _w1_logistic(x, y):
    return 1.0 / (1.0 + np.exp(-50.0 * (x * x + y * y)))


def _w2_product(x, y):
    return x * y


FORMULAS: dict[str, Callable] = {
    "w1_logistic": _w1_logistic,
    "w2_product": _w2_product,
}

# (x, y) of a formula is symmetric in both of the built-in kernels
_SYMMETRIC_FORMULAS = {"w1_logistic", "w2_product"}


def _check_unit(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


class Graphon:
    symmetric_hint: bool

    def evaluate(self, x, y) -> np.ndarray:
        """Broadcasting evaluation of ``w(x, y)``; inputs must lie in [0, 1]."""
        raise NotImplementedError

    def matrix(self, labels) -> np.ndarray:
        """The n x n edge-probability matrix ``P[i, j] = w(u_i, u_j)``."""
        u = _check_unit(labels, "labels")
        return self.evaluate(u[:, None], u[None, :])

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class BlockGraphon(Graphon):
    boundaries: np.ndarray
    probabilities: np.ndarray
    symmetric_hint: bool = field(init=False)

    def __post_init__(self):
        b = np.asarray(self.boundaries, dtype=np.float64)
        p = np.asarray(self.probabilities, dtype=np.float64)
        k = len(b) - 1
        if k < 1 or b[0] != 0.0 or b[-1] != 1.0 or np.any(np.diff(b) <= 0):
            raise DomainError("boundaries must increase strictly from 0 to 1")
        if p.shape != (k, k):
            raise ContractError(f"probabilities must be {k}x{k}, got {p.shape}")
        _check_unit(p, "block probabilities")
        b.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "boundaries", b)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "symmetric_hint", bool(np.array_equal(p, p.T)))

    @classmethod
    def equispaced(cls, probabilities) -> "BlockGraphon":
        p = np.asarray(probabilities, dtype=np.float64)
        return cls(np.linspace(0.0, 1.0, p.shape[0] + 1), p)

    @property
    def num_blocks(self) -> int:
        return self.probabilities.shape[0]

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.boundaries)

    def block_of(self, x) -> np.ndarray:
        """Index of the interval containing ``x``: [a_{k-1}, a_k), last one closed."""
        x = _check_unit(x, "coordinate")
        idx = np.searchsorted(self.boundaries, x, side="right") - 1
        return np.minimum(idx, self.num_blocks - 1)

    def evaluate(self, x, y):
        return self.probabilities[self.block_of(x), self.block_of(y)]

    def to_dict(self) -> dict:
        return {
            "type": "blockmodel",
            "boundaries": self.boundaries.tolist(),
            "probabilities": self.probabilities.tolist(),
        }


@dataclass(frozen=True)
class FormulaGraphon(Graphon):
    formula: str
    symmetric_hint: bool = field(init=False)

    def __post_init__(self):
        if self.formula not in FORMULAS:
            raise DomainError(f"unknown formula {self.formula!r}; expected one of {sorted(FORMULAS)}")
        object.__setattr__(self, "symmetric_hint", self.formula in _SYMMETRIC_FORMULAS)

    def evaluate(self, x, y):
        x = _check_unit(x, "coordinate")
        y = _check_unit(y, "coordinate")
        return FORMULAS[self.formula](x, y)

    def to_dict(self) -> dict:
        return {"type": "formula", "formula": self.formula}


def reference_blockmodel() -> BlockGraphon:
    """The asymmetric 4x4 equispaced blockmodel used in the block experiments."""
    return BlockGraphon.equispaced(
        [
            [0.8, 0.9, 0.4, 0.5],
            [0.1, 0.6, 0.3, 0.2],
            [0.3, 0.2, 0.8, 0.3],
            [0.4, 0.1, 0.2, 0.9],
        ]
    )


def constant_graphon(p: float, k: int = 1) -> BlockGraphon:
    return BlockGraphon.equispaced(np.full((k, k), float(p)))


def random_blockmodel(k: int, rng) -> BlockGraphon:
    """K x K equispaced blockmodel with i.i.d. Uniform[0, 1] entries."""
    if k < 1:
        raise DomainError("k must be positive")
    return BlockGraphon.equispaced(as_rng(rng).random((k, k)))


def graphon_from_dict(spec: dict) -> Graphon:
    kind = spec.get("type")
    if kind == "blockmodel":
        return BlockGraphon(spec["boundaries"], spec["probabilities"])
    if kind == "formula":
        return FormulaGraphon(spec["formula"])
    raise DomainError(f"unknown graphon type {kind!r}")


def eval_graphon(g: Graphon, x: float, y: float) -> float:
    return float(g.evaluate(float(x), float(y)))


@dataclass(frozen=True)
class GraphSampleSet:
    """Latent labels plus 2T binary observations sharing them.

    ``observations`` has shape (2T, n, n) and dtype uint8. ``masks``, when
    present, has the same shape; a 1 marks an observed entry and the matching
    observation entry is already zeroed wherever the mask is 0.
    """

    labels: np.ndarray
    observations: np.ndarray
    masks: np.ndarray | None = None
    directed: bool = True

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.float64)
        obs = np.asarray(self.observations)
        if obs.ndim != 3 or obs.shape[1] != obs.shape[2]:
            raise ContractError(f"observations must have shape (2T, n, n), got {obs.shape}")
        if obs.shape[0] < 2 or obs.shape[0] % 2:
            raise ContractError(f"need an even number >= 2 of observations, got {obs.shape[0]}")
        if labels.shape != (obs.shape[1],):
            raise ContractError("one label per vertex is required")
        if not np.isin(obs, (0, 1)).all():
            raise ContractError("observation entries must be 0 or 1")
        obs = obs.astype(np.uint8, copy=True)
        if not self.directed and not np.array_equal(obs, obs.transpose(0, 2, 1)):
            raise ContractError("undirected observations must be symmetric")
        masks = self.masks
        if masks is not None:
            masks = np.asarray(masks)
            if masks.shape != obs.shape:
                raise ContractError("masks must match the observations' shape")
            if not np.isin(masks, (0, 1)).all():
                raise ContractError("mask entries must be 0 or 1")
            masks = masks.astype(np.uint8, copy=True)
            if not self.directed and not np.array_equal(masks, masks.transpose(0, 2, 1)):
                raise ContractError("undirected masks must be symmetric")
            if np.any(obs & (1 - masks)):
                raise ContractError("observations must be 0 wherever the mask is 0")
            masks.setflags(write=False)
        labels = labels.copy()
        labels.setflags(write=False)
        obs.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "observations", obs)
        object.__setattr__(self, "masks", masks)

    @property
    def n(self) -> int:
        return self.observations.shape[1]

    @property
    def num_observations(self) -> int:
        return self.observations.shape[0]

    @property
    def T(self) -> int:
        return self.observations.shape[0] // 2


def sample_labels(n: int, rng) -> np.ndarray:
    if n < 1:
        raise DomainError("n must be at least 1")
    return as_rng(rng).random(n)


def sample_adjacency(g: Graphon, labels, directed: bool, rng) -> np.ndarray:
    """One n x n binary draw with ``P(G[i, j] = 1) = w(u_i, u_j)``."""
    p = g.matrix(labels)
    draw = as_rng(rng).random(p.shape) < p
    if not directed:
        upper = np.triu(draw)
        draw = upper | upper.T
    return draw.astype(np.uint8)


def sample_graphs(
    g: Graphon,
    labels: Sequence[float],
    num_observations: int,
    directed: bool = True,
    rng=None,
) -> GraphSampleSet:
    """Draw ``num_observations`` independent graphs on fixed labels.

    Observation ``t`` uses its own stream seeded by
    ``derive_seed(base, t)``, where ``base`` is one draw from ``rng``.
    """
    if num_observations < 2 or num_observations % 2:
        raise ContractError(
            f"num_observations must be even and >= 2, got {num_observations}"
        )
    base = child_seed(as_rng(rng))
    obs = np.stack(
        [
            sample_adjacency(g, labels, directed, make_rng(derive_seed(base, t)))
            for t in range(num_observations)
        ]
    )
    return GraphSampleSet(np.asarray(labels, dtype=np.float64), obs, None, directed)


def draw_mask(shape, xi: float, directed: bool, rng) -> np.ndarray:
    """Binary mask whose entries are 0 independently with probability ``xi``."""
    if not 0.0 <= xi <= 1.0:
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    keep = as_rng(rng).random(shape) >= xi
    if not directed:
        upper = np.triu(keep)
        keep = upper | upper.T
    return keep.astype(np.uint8)


def apply_mask(samples: GraphSampleSet, xi: float, rng) -> GraphSampleSet:
    """Hide each entry of each observation independently with probability ``xi``."""
    if samples.masks is not None:
        raise ContractError("sample set is already masked")
    if not 0.0 <= xi <= 1.0:
        raise DomainError(f"xi must lie in [0, 1], got {xi}")
    base = child_seed(as_rng(rng))
    n = samples.n
    masks = np.stack(
        [
            draw_mask((n, n), xi, samples.directed, make_rng(derive_seed(base, t)))
            for t in range(samples.num_observations)
        ]
    )
    return GraphSampleSet(samples.labels, samples.observations * masks, masks, samples.directed)
