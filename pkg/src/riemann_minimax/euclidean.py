"""Flat Euclidean space R^d.

With fraction steps ``1/(i+1)`` the geodesic iteration on this manifold is the
classical core-set update ``c <- c + (f - c) / (i + 1)``.
"""

import numpy as np

from .errors import DomainError
from .geometry import Manifold


def _vec(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"expected a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("vector has non-finite coordinates")
    return arr


def _same_dim(p: np.ndarray, q: np.ndarray):
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")


def euclid_distance(p, q) -> float:
    p, q = _vec(p), _vec(q)
    _same_dim(p, q)
    return float(np.linalg.norm(p - q))


def euclid_interpolate(p, q, t: float) -> np.ndarray:
    """Return ``p + t (q - p)``, which is ``(1 - t) p + t q``.

    The ``p + t (q - p)`` form is used so that ``t = 1/(i+1)`` reproduces the
    core-set recurrence to the last bit.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"interpolation parameter must lie in [0, 1], got {t!r}")
    p, q = _vec(p), _vec(q)
    _same_dim(p, q)
    if t == 1.0:
        return q.copy()
    return p + t * (q - p)


class Euclidean(Manifold):
    """R^d with its flat metric. The dimension is fixed by the data, not the class."""

    name = "euclidean"

    def validate(self, x) -> np.ndarray:
        return _vec(x)

    def distance(self, p, q) -> float:
        _same_dim(p, q)
        return float(np.linalg.norm(p - q))

    def distances(self, x, points):
        diff = points - x
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))

    def interpolate(self, p, q, t):
        return p + t * (q - p)

    def log(self, x, y):
        return y - x

    def exp(self, x, v):
        return x + v

    def random_unit_tangent(self, x, rng):
        v = rng.standard_normal(x.shape)
        return v / np.linalg.norm(v)

    def tangent_dim(self, x):
        return x.shape[0]
