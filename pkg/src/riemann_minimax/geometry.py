"""Manifold contract, point clouds and the farthest-distance cost.

Every manifold implements the :class:`Manifold` interface. Tangent vectors
returned by :meth:`Manifold.log` are expressed in an orthonormal frame at the
base point, so :meth:`Manifold.inner` is the plain Euclidean (Frobenius)
inner product of their coordinates.
"""

from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError

TIE_RTOL = 1e-12


class TieBreak(enum.Enum):
    DETERMINISTIC = "deterministic"
    SEEDED_RANDOM = "random"


class Manifold(ABC):
    """Geometry of a Riemannian manifold with unique minimal geodesics."""

    name: str = "manifold"

    @abstractmethod
    def validate(self, x) -> np.ndarray:
        """Return ``x`` as a canonical float array, or raise :class:`DomainError`."""

    @abstractmethod
    def distance(self, p: np.ndarray, q: np.ndarray) -> float:
        ...

    def distances(self, x: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Distances from ``x`` to each point stacked along axis 0."""
        return np.array([self.distance(x, p) for p in points])

    @abstractmethod
    def interpolate(self, p: np.ndarray, q: np.ndarray, t: float) -> np.ndarray:
        """Point ``m`` on the minimal geodesic with ``rho(p, m) = t * rho(p, q)``."""

    @abstractmethod
    def log(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Tangent vector at ``x`` pointing to ``y`` with norm ``rho(x, y)``."""

    @abstractmethod
    def exp(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        ...

    def inner(self, x: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.vdot(u, v))

    def norm(self, x: np.ndarray, v: np.ndarray) -> float:
        return math.sqrt(max(self.inner(x, v, v), 0.0))

    @abstractmethod
    def random_unit_tangent(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Tangent vector at ``x`` drawn uniformly from the unit sphere."""

    @abstractmethod
    def tangent_dim(self, x: np.ndarray) -> int:
        ...


@dataclass(frozen=True)
class PointCloud:
    """Finite weighted support of the input measure.

    Build it with :meth:`of` so that every point is validated against a
    manifold. Points are stacked along axis 0.
    """

    points: np.ndarray
    weights: np.ndarray
    active: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.points) == 0:
            raise DomainError("point cloud is empty")
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (len(self.points),):
            raise DomainError("weights must have one entry per point")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise DomainError(f"weights sum to {w.sum()!r}, expected 1")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "active", np.flatnonzero(w > 0))

    @classmethod
    def of(cls, manifold: Manifold, points, weights=None) -> "PointCloud":
        pts = [manifold.validate(p) for p in points]
        if not pts:
            raise DomainError("point cloud is empty")
        arr = np.stack(pts)
        if weights is None:
            weights = np.full(len(arr), 1.0 / len(arr))
        return cls(arr, np.asarray(weights, dtype=float))

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


@dataclass(frozen=True)
class GeometryEnvelope:
    """Curvature bounds and an enclosing ball for the support.

    ``alpha**2`` bounds the sectional curvature from above, ``-beta**2`` from
    below; every support point lies in ``B(center_o, radius_R)``.
    """

    alpha: float
    beta: float
    center_o: np.ndarray
    radius_R: float
    injectivity_radius: float = math.inf

    def __post_init__(self):
        for name in ("alpha", "beta", "radius_R"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be positive, got {value!r}")
        if not self.injectivity_radius > 0:
            raise DomainError("injectivity_radius must be positive")

    @classmethod
    def from_cloud(cls, manifold: Manifold, cloud: PointCloud, alpha: float, beta: float,
                   anchor: int = 0) -> "GeometryEnvelope":
        """Envelope centered at a support point, radius the farthest distance from it."""
        o = cloud.points[anchor]
        radius = radius_at(manifold, o, cloud)
        if radius == 0.0:
            raise DomainError("cloud collapses to a point; no enclosing radius")
        return cls(alpha, beta, o, radius)


class Step(NamedTuple):
    point: np.ndarray
    arclength: float
    degenerate: bool


def distance(manifold: Manifold, p, q) -> float:
    return manifold.distance(manifold.validate(p), manifold.validate(q))


def geodesic_interpolate(manifold: Manifold, p, q, t: float) -> np.ndarray:
    """Intermediate point at fraction ``t`` of the minimal geodesic from ``p`` to ``q``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"interpolation parameter must lie in [0, 1], got {t!r}")
    p = manifold.validate(p)
    q = manifold.validate(q)
    if t == 0.0:
        return p
    if t == 1.0:
        return q
    return manifold.interpolate(p, q, t)


def geodesic_step(manifold: Manifold, x, target, s: float,
                  dist: Optional[float] = None) -> Step:
    """Move arclength ``s`` from ``x`` along the unit-speed geodesic toward ``target``.

    Parameters
    ----------
    manifold : Manifold
    x, target : array_like
        Start point and the point being walked toward.
    s : float
        Nonnegative arclength. Values beyond ``rho(x, target)`` are clamped
        to the target.
    dist : float, optional
        Precomputed ``rho(x, target)``.

    Returns
    -------
    Step
        The new point, the arclength actually travelled, and whether the
        direction was undefined (``x == target`` with ``s > 0``).
    """
    if s < 0:
        raise DomainError(f"step length must be nonnegative, got {s!r}")
    if dist is None:
        dist = manifold.distance(x, target)
    if s == 0.0:
        return Step(x, 0.0, False)
    if dist == 0.0:
        return Step(x, 0.0, True)
    if s >= dist:
        return Step(target, dist, False)
    return Step(manifold.interpolate(x, target, s / dist), s, False)


def _active_distances(manifold: Manifold, x, cloud: PointCloud) -> np.ndarray:
    return manifold.distances(x, cloud.points[cloud.active])


def radius_at(manifold: Manifold, x, cloud: PointCloud) -> float:
    """Farthest distance from ``x`` to a point of positive weight."""
    return float(np.max(_active_distances(manifold, x, cloud)))


def select_farthest(dists: np.ndarray, tie_break: TieBreak = TieBreak.DETERMINISTIC,
                    rng: Optional[np.random.Generator] = None) -> int:
    """Position of the maximum in ``dists`` under a tie-breaking policy."""
    dmax = dists.max()
    if tie_break is TieBreak.DETERMINISTIC:
        if dists[0] == dmax or dmax == 0.0:
            return 0
        return int(np.flatnonzero(dists >= dmax * (1.0 - TIE_RTOL))[0])
    if rng is None:
        raise DomainError("SeededRandom tie-breaking needs a random generator")
    tied = np.flatnonzero(dists >= dmax * (1.0 - TIE_RTOL))
    return int(tied[0]) if len(tied) == 1 else int(rng.choice(tied))


def farthest_point(manifold: Manifold, x, cloud: PointCloud,
                   policy: TieBreak = TieBreak.DETERMINISTIC,
                   rng: Optional[np.random.Generator] = None) -> tuple[int, float]:
    """Index and distance of the farthest support point from ``x``.

    Under :attr:`TieBreak.DETERMINISTIC` the lowest index among points within
    relative ``1e-12`` of the maximum wins; :attr:`TieBreak.SEEDED_RANDOM`
    draws uniformly among them using ``rng``.
    """
    dists = _active_distances(manifold, x, cloud)
    pos = select_farthest(dists, policy, rng)
    return int(cloud.active[pos]), float(dists.max())
