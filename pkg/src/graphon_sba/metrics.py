"""Pointwise error between a graphon and an estimate at the latent labels."""

from __future__ import annotations

import numpy as np

from .errors import ContractError, DomainError
from .graphon import Graphon


def _estimate_matrix(est, n: int) -> np.ndarray:
    m = est.to_matrix() if hasattr(est, "to_matrix") else np.asarray(est, dtype=np.float64)
    if m.shape != (n, n):
        raise ContractError(f"estimate must be evaluable on {n}x{n} pairs, got {m.shape}")
    return m


def errors(g: Graphon, labels, est) -> np.ndarray:
    """Signed errors ``w(u_i, u_j) - w_hat(i, j)`` over all ordered pairs."""
    labels = np.asarray(labels, dtype=np.float64)
    n = labels.size
    if n == 0:
        raise DomainError("need at least one vertex")
    return g.matrix(labels) - _estimate_matrix(est, n)


def mae(g: Graphon, labels, est) -> float:
    return float(np.mean(np.abs(errors(g, labels, est))))


def mse(g: Graphon, labels, est) -> float:
    return float(np.mean(errors(g, labels, est) ** 2))
