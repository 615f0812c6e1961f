"""Reproducible random point clouds for each manifold."""

import math

import numpy as np

from .errors import DomainError

KLEIN_RADIUS = 0.8


def _unit_ball(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((n, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.random(n)[:, None] ** (1.0 / dim)


def euclidean_cloud(n: int, dim: int, seed: int) -> np.ndarray:
    """``n`` points uniform in the unit ball of R^dim."""
    return _unit_ball(np.random.default_rng(seed), n, dim)


def klein_cloud(n: int, dim: int, seed: int, radius: float = KLEIN_RADIUS) -> np.ndarray:
    """``n`` points uniform (in the Klein chart) within hyperbolic distance ``radius`` of 0.

    A Klein point at hyperbolic distance ``r`` from the origin has Euclidean
    norm ``tanh(r)``.
    """
    return _unit_ball(np.random.default_rng(seed), n, dim) * math.tanh(radius)


def spd_cloud(n: int, dim: int, seed: int) -> np.ndarray:
    """``n`` matrices ``expm(S)`` with ``S`` random symmetric, spectral norm at most 1."""
    rng = np.random.default_rng(seed)
    out = np.empty((n, dim, dim))
    for i in range(n):
        g = rng.standard_normal((dim, dim))
        s = 0.5 * (g + g.T)
        lam, u = np.linalg.eigh(s)
        lam *= rng.random() / np.max(np.abs(lam))
        m = (u * np.exp(lam)) @ u.T
        out[i] = 0.5 * (m + m.T)
    return out


def generate(manifold: str, n: int, dim: int, seed: int) -> np.ndarray:
    if n < 1 or dim < 1:
        raise DomainError("n and dim must be positive")
    makers = {"euclidean": euclidean_cloud, "klein": klein_cloud, "spd": spd_cloud}
    if manifold not in makers:
        raise DomainError(f"unknown manifold {manifold!r}")
    return makers[manifold](n, dim, seed)
