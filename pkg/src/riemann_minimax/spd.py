"""Symmetric positive definite matrices with the affine-invariant metric.

All spectral work goes through the symmetric eigendecomposition. The spectrum
of ``P^{-1} Q`` is read off the symmetric congruence ``P^{-1/2} Q P^{-1/2}``,
which is similar to it.
"""

import math
from typing import Callable

import numpy as np

from .errors import DomainError, NumericError
from .geometry import Manifold

# above this relative asymmetry the input is not treated as serialization noise
ASYMMETRY_REJECT = 1e-6
DEFAULT_ALPHA = 1e-3


def _eigh(m: np.ndarray):
    try:
        return np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"symmetric eigensolver failed: {exc}") from exc


def as_spd(m, dim=None) -> np.ndarray:
    """Symmetrize ``m`` and check it is positive definite."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DomainError(f"SPD point must be a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DomainError(f"expected a {dim}x{dim} matrix, got {arr.shape[0]}x{arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("SPD point has non-finite entries")
    scale = np.linalg.norm(arr)
    if scale == 0.0:
        raise DomainError("SPD point must be positive definite (zero matrix)")
    asym = np.linalg.norm(arr - arr.T) / scale
    if asym > ASYMMETRY_REJECT:
        raise DomainError(f"matrix is not symmetric (relative asymmetry {asym:.3g})")
    sym = 0.5 * (arr + arr.T)
    lam_min = _eigh(sym)[0][0]
    if not lam_min > 0:
        raise DomainError(f"matrix is not positive definite (smallest eigenvalue {lam_min:.3g})")
    return sym


def _apply(m: np.ndarray, h: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    lam, u = _eigh(m)
    out = (u * h(lam)) @ u.T
    return 0.5 * (out + out.T)


def spd_matrix_function(m, h: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply the scalar function ``h`` to the eigenvalues of an SPD matrix.

    Parameters
    ----------
    m : array_like, shape (d, d)
        SPD matrix.
    h : callable
        Vectorized function on positive reals (``np.sqrt``, ``np.log``,
        ``lambda x: x ** t``...).

    Returns
    -------
    ndarray, shape (d, d)
        ``U diag(h(lambda)) U^T`` with ``m = U diag(lambda) U^T``.
    """
    return _apply(as_spd(m), h)


def _inv_sqrt(p: np.ndarray) -> np.ndarray:
    return _apply(p, lambda lam: 1.0 / np.sqrt(lam))


def _whiten(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    w = _inv_sqrt(p)
    c = w @ q @ w
    return 0.5 * (c + c.T)


def _dist(p: np.ndarray, q: np.ndarray) -> float:
    if np.array_equal(p, q):
        return 0.0
    lam = np.linalg.eigvalsh(_whiten(p, q))
    if lam[0] <= 0:
        raise NumericError("congruence lost positive definiteness")
    return math.sqrt(float(np.sum(np.log(lam) ** 2)))


def spd_distance(p, q) -> float:
    """Affine-invariant distance ``sqrt(sum log^2 lambda_i)`` over the spectrum of ``P^{-1} Q``."""
    p, q = as_spd(p), as_spd(q)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    return _dist(p, q)


def _geodesic(p: np.ndarray, q: np.ndarray, r: float) -> np.ndarray:
    lam, u = _eigh(p)
    s = (u * np.sqrt(lam)) @ u.T
    w = (u / np.sqrt(lam)) @ u.T
    c = w @ q @ w
    out = s @ _apply(0.5 * (c + c.T), lambda mu: mu ** r) @ s
    return 0.5 * (out + out.T)


def spd_interpolate(p, q, r: float) -> np.ndarray:
    """Point ``P^{1/2} (P^{-1/2} Q P^{-1/2})^r P^{1/2}`` of the geodesic.

    The geodesic parameter is the distance fraction, so no search is needed:
    ``rho(P, result) = r rho(P, Q)``.
    """
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"interpolation parameter must lie in [0, 1], got {r!r}")
    p, q = as_spd(p), as_spd(q)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    if r == 0.0:
        return p
    if r == 1.0:
        return q
    return _geodesic(p, q, r)


class SPD(Manifold):
    """SPD matrices of a fixed size ``dim`` (or any size when ``dim`` is None).

    Tangent vectors at ``P`` are symmetric matrices in the whitened frame
    ``V = P^{-1/2} T P^{-1/2}``, where the metric is the Frobenius product.
    """

    name = "spd"

    def __init__(self, dim=None):
        self.dim = dim

    def validate(self, x):
        return as_spd(x, self.dim)

    def distance(self, p, q):
        if p.shape != q.shape:
            raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
        return _dist(p, q)

    def distances(self, x, points):
        w = _inv_sqrt(x)
        c = w @ points @ w
        lam = np.linalg.eigvalsh(0.5 * (c + np.swapaxes(c, -1, -2)))
        out = np.sqrt(np.sum(np.log(lam) ** 2, axis=-1))
        # exact zero for a point of the cloud itself, as in distance()
        out[np.all(points == x, axis=(-2, -1))] = 0.0
        return out

    def interpolate(self, p, q, t):
        return _geodesic(p, q, t)

    def log(self, x, y):
        return _apply(_whiten(x, y), np.log)

    def exp(self, x, v):
        lam, u = _eigh(x)
        s = (u * np.sqrt(lam)) @ u.T
        out = s @ _apply(0.5 * (v + v.T), np.exp) @ s
        return 0.5 * (out + out.T)

    def random_unit_tangent(self, x, rng):
        d = x.shape[0]
        g = rng.standard_normal((d, d))
        # unit-variance coordinates in the orthonormal basis of symmetric matrices
        v = np.triu(g, 1) / math.sqrt(2.0)
        v = v + v.T + np.diag(np.diag(g))
        return v / np.linalg.norm(v)

    def tangent_dim(self, x):
        d = x.shape[0]
        return d * (d + 1) // 2
