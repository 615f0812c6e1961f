"""Ground truth for the solvers.

* :func:`welzl_exact` -- exact Euclidean smallest enclosing ball.
* :func:`reference_solve` -- long fraction-step run, used as the reference
  center on curved manifolds.
* :func:`optimality_certificate` -- sampled check that no tangent direction
  at the center moves away from every farthest point.
* :func:`growth_estimate` -- empirical quadratic-growth constant of the
  farthest-distance cost around a center.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import euclid_harmonic_run
from .errors import DomainError
from .euclidean import Euclidean
from .geometry import Manifold, PointCloud, radius_at
from .solver import SolverConfig, StepSchedule, run_geo_alg

MAX_WELZL_DIM = 10
CERTIFICATE_TOL = 1e-3


class OracleMethod(enum.Enum):
    WELZL_EXACT = "welzl"
    LONG_RUN_REFERENCE = "reference"


@dataclass(frozen=True)
class OracleResult:
    center: np.ndarray
    radius: float
    method: OracleMethod
    support_indices: Optional[list] = None


def _circumball(pts: np.ndarray, boundary: list):
    """Smallest ball with every boundary point on its sphere (center in their affine hull)."""
    if not boundary:
        return None, -1.0
    p0 = pts[boundary[0]]
    if len(boundary) == 1:
        return p0.copy(), 0.0
    q = pts[boundary[1:]] - p0
    a = 2.0 * (q @ q.T)
    b = np.einsum("ij,ij->i", q, q)
    try:
        lam = np.linalg.solve(a, b)
    except np.linalg.LinAlgError:
        lam = np.linalg.lstsq(a, b, rcond=None)[0]
    c = p0 + lam @ q
    return c, float(np.dot(c - p0, c - p0))


def welzl_exact(points, seed: int = 0, tol: float = 1e-12) -> OracleResult:
    """Smallest enclosing ball of Euclidean points (move-to-front Welzl).

    Parameters
    ----------
    points : array_like, shape (n, d)
        ``d <= 10``.
    seed : int
        Seed of the initial random permutation.
    tol : float
        Relative slack when testing whether a point lies in the current ball.

    Returns
    -------
    OracleResult
        Center, radius, and the indices of the points that define the ball
        (at most ``d + 1``).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = pts.shape
    if n == 0:
        raise DomainError("no points")
    if d > MAX_WELZL_DIM:
        raise DomainError(f"dimension {d} is above {MAX_WELZL_DIM}; use reference_solve instead")
    order = list(np.random.default_rng(seed).permutation(n))
    scale = max(1.0, float(np.max(np.abs(pts))))

    def outside(i, c, r2):
        diff = pts[i] - c
        return float(np.dot(diff, diff)) > r2 * (1.0 + tol) + tol * scale * scale

    def mtf(end: int, boundary: list):
        c, r2 = _circumball(pts, boundary)
        support = list(boundary)
        if len(boundary) == d + 1:
            return c, r2, support
        i = 0
        while i < end:
            p = order[i]
            if c is None or outside(p, c, r2):
                c, r2, support = mtf(i, boundary + [p])
                order.pop(i)
                order.insert(0, p)
            i += 1
        return c, r2, support

    c, _, support = mtf(n, [])
    radius = float(np.max(np.linalg.norm(pts - c, axis=1)))
    return OracleResult(c, radius, OracleMethod.WELZL_EXACT, sorted(int(i) for i in support))


def reference_solve(manifold: Manifold, cloud: PointCloud, iterations: int = 10 ** 6,
                    start_index: int = 0) -> OracleResult:
    """Final iterate of a long harmonic fraction-step run (thin trace).

    Euclidean clouds go through a compiled loop with the same arithmetic.
    """
    if isinstance(manifold, Euclidean):
        pts = np.ascontiguousarray(cloud.points[cloud.active])
        start = int(np.searchsorted(cloud.active, start_index))
        if start >= len(cloud.active) or cloud.active[start] != start_index:
            raise DomainError("start point has zero weight")
        center, radius = euclid_harmonic_run(pts, start, iterations)
        return OracleResult(center, float(radius), OracleMethod.LONG_RUN_REFERENCE)
    config = SolverConfig(StepSchedule.harmonic(), max_iterations=iterations,
                          start_index=start_index, thin_trace=True)
    trace = run_geo_alg(manifold, cloud, config)
    return OracleResult(trace.final_center, trace.final_radius, OracleMethod.LONG_RUN_REFERENCE)


@dataclass(frozen=True)
class CertificateReport:
    passed: bool
    margin: float
    near_farthest: list
    directions: int


def default_direction_count(tangent_dim: int) -> int:
    return max(256, 64 * tangent_dim)


def optimality_certificate(manifold: Manifold, center, cloud: PointCloud, band: float = 1e-6,
                           directions: Optional[int] = None, tol: float = CERTIFICATE_TOL,
                           seed: int = 0) -> CertificateReport:
    """Sampled first-order optimality check for a candidate minimax center.

    At the true center, every unit tangent direction ``v`` has some farthest
    point ``y`` with ``<dir(c -> y), v> <= 0``. The report's ``margin`` is
    ``max_v min_y <dir(c -> y), v>`` over ``directions`` random unit vectors
    (plus the mean farthest direction); the certificate passes
    when ``margin <= tol``.

    Points whose distance is within ``band`` (relative) of the maximum count
    as farthest.
    """
    center = manifold.validate(center)
    pts = cloud.points[cloud.active]
    dists = manifold.distances(center, pts)
    dmax = float(dists.max())
    if dmax == 0.0:
        raise DomainError("center coincides with every support point; no farthest direction")
    near = np.flatnonzero(dists >= dmax * (1.0 - band))
    if len(near) < 1:
        raise DomainError("no near-farthest point found")
    dirs = np.stack([manifold.log(center, pts[i]) / dists[i] for i in near]).reshape(len(near), -1)
    if directions is None:
        directions = default_direction_count(manifold.tangent_dim(center))
    rng = np.random.default_rng(seed)
    probes = np.stack([manifold.random_unit_tangent(center, rng) for _ in range(directions)])
    probes = probes.reshape(directions, -1)
    # the mean farthest direction is the natural worst case; probe it too
    mean_dir = dirs.mean(axis=0)
    if np.linalg.norm(mean_dir) > 0:
        probes = np.vstack([probes, mean_dir / np.linalg.norm(mean_dir)])
    margin = float(np.max(np.min(probes @ dirs.T, axis=1)))
    return CertificateReport(margin <= tol, margin, [int(cloud.active[i]) for i in near], len(probes))


def growth_estimate(manifold: Manifold, cloud: PointCloud, reference: OracleResult,
                    samples: int = 1000, radius_cap: float = 1.0, seed: int = 0,
                    exclusion: float = 1e-6) -> float:
    """Smallest sampled ratio ``(H(x) - H(c)) / rho(x, c)^2`` over ``x`` in ``B(c, radius_cap)``.

    Samples are ``exp_c(s v)`` with ``v`` a uniform unit tangent and ``s``
    distributed like the radius of a uniform point of the tangent ball, so
    ``P(s < e) = (e / radius_cap)^dim``. Points within ``exclusion`` of the
    center are skipped. A correct center gives a positive value; for an
    approximate center, samples closer than its error can come out negative.
    """
    if samples < 1:
        raise DomainError("samples must be positive")
    if not radius_cap > 0:
        raise DomainError("radius_cap must be positive")
    rng = np.random.default_rng(seed)
    c = reference.center
    h_c = radius_at(manifold, c, cloud)
    best = math.inf
    inv_dim = 1.0 / manifold.tangent_dim(c)
    for _ in range(samples):
        v = manifold.random_unit_tangent(c, rng)
        s = radius_cap * (1.0 - rng.random()) ** inv_dim
        x = manifold.exp(c, s * v)
        r = manifold.distance(x, c)
        if r < exclusion:
            continue
        best = min(best, (radius_at(manifold, x, cloud) - h_c) / (r * r))
    return best
