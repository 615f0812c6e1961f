"""Hyperbolic space (curvature -1) in the Klein ball model.

Geodesics are straight chords of the unit ball, so interpolation only has to
find the chord parameter matching a prescribed hyperbolic length; this is done
by bisection.

The distance is evaluated as

    sinh(rho) = |q - p| * sqrt(1 - |p_perp|^2) / sqrt((1 - |p|^2)(1 - |q|^2))

where ``p_perp`` is the component of ``p`` orthogonal to the chord direction.
This equals ``arccosh((1 - p.q) / sqrt((1 - |p|^2)(1 - |q|^2)))`` but keeps full
relative accuracy for nearby points.
"""

import math

import numpy as np

from .errors import DomainError, NumericError
from .geometry import Manifold

BOUNDARY_MARGIN = 1e-12
BISECTION_CAP = 200
# sectional curvature is -1 everywhere
BETA = 1.0
DEFAULT_ALPHA = 1e-3


def _point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"Klein point must be a non-empty vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("Klein point has non-finite coordinates")
    norm = float(np.linalg.norm(arr))
    if norm > 1.0 - BOUNDARY_MARGIN:
        raise DomainError(f"Klein point must satisfy |x| <= 1 - {BOUNDARY_MARGIN:g}, got |x| = {norm!r}")
    return arr


def _dist(p: np.ndarray, q: np.ndarray) -> float:
    diff = q - p
    chord = math.sqrt(float(np.dot(diff, diff)))
    if chord == 0.0:
        return 0.0
    u = diff / chord
    pp = float(np.dot(p, p))
    qq = float(np.dot(q, q))
    pu = float(np.dot(p, u))
    qu = float(np.dot(q, u))
    # p and q share the same component orthogonal to the chord; average both
    # evaluations so the result is exactly symmetric
    perp = 0.5 * ((1.0 - pp + pu * pu) + (1.0 - qq + qu * qu))
    return math.asinh(chord * math.sqrt(perp / ((1.0 - pp) * (1.0 - qq))))


def klein_distance(p, q) -> float:
    """Hyperbolic distance between two points of the Klein ball."""
    p, q = _point(p), _point(q)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    return _dist(p, q)


def _chord_distance_fn(p: np.ndarray, q: np.ndarray):
    """Scalar ``u -> rho(p, p + u (q - p))`` for ``u`` in [0, 1]."""
    diff = q - p
    chord2 = float(np.dot(diff, diff))
    chord = math.sqrt(chord2)
    pp = float(np.dot(p, p))
    b = float(np.dot(p, diff))
    perp = 1.0 - pp + (b / chord) ** 2
    one_minus_pp = 1.0 - pp

    def rho(u: float) -> float:
        mm = pp + 2.0 * u * b + u * u * chord2
        return math.asinh(u * chord * math.sqrt(perp / (one_minus_pp * (1.0 - mm))))

    return rho


def _bisect(p: np.ndarray, q: np.ndarray, t: float, total: float) -> np.ndarray:
    rho = _chord_distance_fn(p, q)
    target = t * total
    lo, hi = 0.0, 1.0
    f_lo, f_hi = 0.0, rho(1.0)
    # distances already agree far below the interpolation tolerance; tiny
    # targets would otherwise need ~1000 halvings to reach subnormal u
    floor = 1e-16 * max(1.0, total)
    for _ in range(BISECTION_CAP):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or f_hi - f_lo <= floor:
            break
        f_mid = rho(mid)
        if f_mid < target:
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    else:
        raise NumericError("Klein bisection did not converge")
    u = lo if abs(f_lo - target) <= abs(f_hi - target) else hi
    return p + u * (q - p)


def klein_interpolate(p, q, t: float) -> np.ndarray:
    """Point on the chord from ``p`` to ``q`` at hyperbolic fraction ``t``.

    Parameters
    ----------
    p, q : array_like
        Points of the open unit ball.
    t : float
        Fraction in [0, 1] of the distance ``rho(p, q)``.

    Returns
    -------
    ndarray
        ``(1 - u) p + u q`` where ``u`` is found by bisection so that
        ``rho(p, m) = t rho(p, q)`` up to rounding.
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"interpolation parameter must lie in [0, 1], got {t!r}")
    p, q = _point(p), _point(q)
    if p.shape != q.shape:
        raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    if t == 0.0:
        return p.copy()
    if t == 1.0:
        return q.copy()
    total = _dist(p, q)
    if total == 0.0:
        return p.copy()
    return _bisect(p, q, t, total)


def _boost(c: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Hyperbolic translation sending ``c`` to the origin, applied to ``x``.

    ``x`` may be a single point or a stack of points along axis 0.
    """
    cc = float(np.dot(c, c))
    if cc == 0.0:
        return np.array(x, dtype=float, copy=True)
    gamma = 1.0 / math.sqrt(1.0 - cc)
    cx = x @ c
    # (gamma - 1) / |c|^2 rewritten as gamma^2 / (gamma + 1)
    coef = gamma * gamma / (gamma + 1.0) * cx - gamma
    numer = x + np.multiply.outer(coef, c)
    denom = gamma * (1.0 - cx)
    return numer / np.expand_dims(denom, -1)


def translate_to_origin(c, x) -> np.ndarray:
    """Apply the hyperbolic isometry taking ``c`` to 0 (pure translation along the ``c`` axis)."""
    return _boost(np.asarray(c, dtype=float), np.asarray(x, dtype=float))


def translate_from_origin(c, z) -> np.ndarray:
    """Inverse of :func:`translate_to_origin`."""
    return _boost(-np.asarray(c, dtype=float), np.asarray(z, dtype=float))


class Klein(Manifold):
    """Hyperbolic d-space in the Klein model, any ``d >= 1``.

    Tangent vectors at ``x`` are written in the frame obtained by translating
    ``x`` to the origin, where the metric is the identity.
    """

    name = "klein"

    def validate(self, x):
        return _point(x)

    def distance(self, p, q):
        if p.shape != q.shape:
            raise DomainError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
        return _dist(p, q)

    def distances(self, x, points):
        diff = points - x
        chord = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        safe = np.where(chord > 0, chord, 1.0)
        u = diff / safe[:, None]
        xx = float(np.dot(x, x))
        pp = np.einsum("ij,ij->i", points, points)
        xu = u @ x
        pu = np.einsum("ij,ij->i", points, u)
        perp = 0.5 * ((1.0 - xx + xu * xu) + (1.0 - pp + pu * pu))
        out = np.arcsinh(chord * np.sqrt(perp / ((1.0 - xx) * (1.0 - pp))))
        out[chord == 0] = 0.0
        return out

    def interpolate(self, p, q, t):
        total = _dist(p, q)
        if total == 0.0:
            return p
        return _bisect(p, q, t, total)

    def log(self, x, y):
        z = _boost(x, y)
        nz = float(np.linalg.norm(z))
        if nz == 0.0:
            return np.zeros_like(z)
        return _dist(x, y) * z / nz

    def exp(self, x, v):
        nv = float(np.linalg.norm(v))
        if nv == 0.0:
            return x.copy()
        return _boost(-x, math.tanh(nv) * v / nv)

    def random_unit_tangent(self, x, rng):
        v = rng.standard_normal(x.shape)
        return v / np.linalg.norm(v)

    def tangent_dim(self, x):
        return x.shape[0]
