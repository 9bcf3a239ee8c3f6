"""Competitor estimators: singular value thresholding and degree-gap blocking."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import ContractError, DomainError

DEFAULT_ETA = 0.01


@dataclass(frozen=True)
class BaselineEstimate:
    matrix: np.ndarray
    method: Literal["USVT", "LG"]
    params: dict = field(default_factory=dict)

    def to_matrix(self) -> np.ndarray:
        return self.matrix


def _square(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def usvt(adjacency_mean, eta: float = DEFAULT_ETA) -> BaselineEstimate:
    """Universal singular value thresholding on entries in [0, 1].

    Entries are mapped to [-1, 1], singular values strictly below
    ``(2 + eta) * sqrt(n)`` are dropped, and the reconstruction is mapped back
    and clipped.
    """
    A = _square(adjacency_mean, "adjacency_mean")
    n = A.shape[0]
    if n < 2:
        raise ContractError("usvt needs n >= 2")
    if not eta > 0:
        raise DomainError("eta must be positive")
    if A.min() < 0 or A.max() > 1:
        raise DomainError("adjacency_mean entries must lie in [0, 1]")
    U, s, Vt = np.linalg.svd(2.0 * A - 1.0)
    keep = s >= (2.0 + eta) * np.sqrt(n)
    rank = int(keep.sum())
    shifted = (U[:, :rank] * s[:rank]) @ Vt[:rank]
    est = np.clip((shifted + 1.0) / 2.0, 0.0, 1.0)
    return BaselineEstimate(est, "USVT", {"eta": eta, "rank": rank})


def degree_gap_blocks(adjacency, k_blocks: int) -> list[np.ndarray]:
    """Split vertices at the ``k_blocks - 1`` widest gaps of sorted degree.

    Degrees are the mean of in- and out-degree with self-loops excluded,
    normalized by ``n - 1``. Blocks come back in increasing-degree order.
    """
    A = _square(adjacency, "adjacency")
    n = A.shape[0]
    if not 1 <= k_blocks <= n:
        raise ContractError(f"k_blocks must lie in [1, {n}], got {k_blocks}")
    off = A - np.diag(np.diag(A))
    degree = 0.5 * (off.sum(axis=0) + off.sum(axis=1)) / max(n - 1, 1)
    order = np.argsort(degree, kind="stable")
    gaps = np.diff(degree[order])
    cuts = np.sort(np.argsort(-gaps, kind="stable")[: k_blocks - 1]) + 1
    return np.split(order, cuts)


def largest_gap(adjacency, k_blocks: int) -> BaselineEstimate:
    A = _square(adjacency, "adjacency")
    blocks = degree_gap_blocks(A, k_blocks)
    n = A.shape[0]
    Z = np.zeros((n, len(blocks)))
    for k, members in enumerate(blocks):
        Z[members, k] = 1.0
    sizes = Z.sum(axis=0)
    probs = (Z.T @ A @ Z) / np.outer(sizes, sizes)
    assign = Z.argmax(axis=1)
    est = probs[assign[:, None], assign[None, :]]
    return BaselineEstimate(
        np.clip(est, 0.0, 1.0),
        "LG",
        {"k": k_blocks, "blocks": [sorted(b.tolist()) for b in blocks]},
    )
