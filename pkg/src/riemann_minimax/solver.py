"""Farthest-point iterations for the minimax center.

Two entry points share one loop:

* :func:`run_geo_alg` moves a *fraction* ``t_k`` of the way to the current
  farthest point (``t_k = 1/(k+1)`` gives the classical core-set scheme).
* :func:`run_rie_alg` moves an *arclength* ``t_k`` along the unit-speed
  geodesic toward it, with ``t_k`` capped by the admissible step size.

Iterate ``x_0`` is a support point and ``x_k`` is produced with schedule value
``t_k`` for ``k >= 1``.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import ConfigError
from .geometry import (TIE_RTOL, GeometryEnvelope, Manifold, PointCloud, TieBreak,
                       geodesic_step, select_farthest)
from .theory import theory_constants

log = logging.getLogger(__name__)


class ScheduleKind(enum.Enum):
    HARMONIC = "harmonic"
    SCALED = "scaled"
    CLAMPED_HARMONIC = "clamped"
    CUSTOM = "custom"


@dataclass(frozen=True)
class StepSchedule:
    """Step sizes ``t_k`` for ``k = 1, 2, ...``, optionally capped at ``delta``.

    Use the constructors :meth:`harmonic`, :meth:`scaled`, :meth:`clamped`
    and :meth:`custom`.
    """

    kind: ScheduleKind = ScheduleKind.HARMONIC
    scale: float = 1.0
    delta: Optional[float] = None
    values: tuple = ()

    def __post_init__(self):
        if not self.scale > 0:
            raise ConfigError(f"schedule scale must be positive, got {self.scale!r}")
        if self.delta is not None and not self.delta > 0:
            raise ConfigError(f"step cap delta must be positive, got {self.delta!r}")
        if self.kind is ScheduleKind.CLAMPED_HARMONIC and self.delta is None:
            raise ConfigError("clamped harmonic schedule needs a step cap delta")
        if self.kind is ScheduleKind.CUSTOM:
            if not self.values or any(not v > 0 for v in self.values):
                raise ConfigError("custom schedule needs positive step values")

    @classmethod
    def harmonic(cls, delta=None):
        return cls(ScheduleKind.HARMONIC, delta=delta)

    @classmethod
    def scaled(cls, r: float, delta=None):
        return cls(ScheduleKind.SCALED, scale=float(r), delta=delta)

    @classmethod
    def clamped(cls, delta: float):
        return cls(ScheduleKind.CLAMPED_HARMONIC, delta=float(delta))

    @classmethod
    def custom(cls, values: Sequence[float], delta=None):
        return cls(ScheduleKind.CUSTOM, values=tuple(float(v) for v in values), delta=delta)

    def __call__(self, k: int) -> float:
        if k < 1:
            raise ConfigError("schedule is indexed from k = 1")
        if self.kind is ScheduleKind.CUSTOM:
            if k > len(self.values):
                raise ConfigError(f"custom schedule has only {len(self.values)} steps")
            t = self.values[k - 1]
        elif self.kind is ScheduleKind.SCALED:
            t = self.scale / (k + 1)
        else:
            t = 1.0 / (k + 1)
        return t if self.delta is None else min(t, self.delta)

    def sup(self) -> float:
        """Largest value the schedule ever emits."""
        if self.kind is ScheduleKind.CUSTOM:
            top = max(self.values)
        elif self.kind is ScheduleKind.SCALED:
            top = self.scale / 2.0
        else:
            top = 0.5
        return top if self.delta is None else min(top, self.delta)

    def label(self) -> str:
        if self.kind is ScheduleKind.SCALED:
            return f"scaled:{self.scale!r}"
        return self.kind.value


@dataclass(frozen=True)
class SolverConfig:
    schedule: StepSchedule = field(default_factory=StepSchedule.harmonic)
    max_iterations: int = 100
    start_index: int = 0
    tie_break: TieBreak = TieBreak.DETERMINISTIC
    seed: Optional[int] = None
    stop_tolerance: Optional[float] = None
    thin_trace: bool = False
    # skip farthest-point candidates excluded by the triangle inequality
    screening: bool = True

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.start_index < 0:
            raise ConfigError("start_index must be nonnegative")
        if self.stop_tolerance is not None and self.stop_tolerance < 0:
            raise ConfigError("stop_tolerance must be nonnegative")


class _FarthestScan:
    """Farthest-point search that skips points ruled out by the triangle inequality.

    After a full scan at some iterate, a point whose distance was ``D_i`` is
    within ``D_i + T`` of any later iterate, where ``T`` is the arclength
    travelled since. Points that cannot reach the tie band of the maximum are
    not re-evaluated, so the selected index and radius equal those of a full
    scan.
    """

    REFRESH_EVERY = 256
    SLACK = 1e-9

    def __init__(self, manifold, support, tie_break, rng, screen=True):
        self.manifold = manifold
        self.support = support
        self.tie_break = tie_break
        self.rng = rng
        self.screen = screen and len(support) > 8
        self.base = None
        self.travel = 0.0
        self.age = 0

    def full(self, x):
        dists = self.manifold.distances(x, self.support)
        self.base, self.travel, self.age = dists, 0.0, 0
        return select_farthest(dists, self.tie_break, self.rng), float(dists.max())

    def after_step(self, x, moved):
        if not self.screen or self.age >= self.REFRESH_EVERY:
            return self.full(x)
        self.travel += moved * (1.0 + self.SLACK) + 1e-15
        self.age += 1
        top = float(self.base.max())
        low = (top - self.travel) * (1.0 - TIE_RTOL) - self.travel - self.SLACK * top
        cand = np.flatnonzero(self.base >= low)
        if 2 * len(cand) > len(self.base):
            return self.full(x)
        dists = self.manifold.distances(x, self.support[cand])
        return int(cand[select_farthest(dists, self.tie_break, self.rng)]), float(dists.max())


class IterationRecord(NamedTuple):
    k: int
    center: np.ndarray
    radius: float
    farthest_index: int
    step: float


@dataclass
class IterationTrace:
    """Iterates of one run.

    ``records`` holds every iterate, or only ``k = 0``, powers of two and the
    last one in thin mode. ``coreset`` lists the farthest points that drove a
    step, in order of first use.
    """

    records: list
    final_center: np.ndarray
    final_radius: float
    coreset: list
    iterations: int

    @property
    def radii(self) -> np.ndarray:
        return np.array([r.radius for r in self.records])

    @property
    def centers(self) -> list:
        return [r.center for r in self.records]


def coreset_indices(trace: IterationTrace) -> list:
    """Distinct farthest-point indices used by the run, in order of first appearance."""
    if not trace.records:
        raise ConfigError("empty trace")
    return list(trace.coreset)


def _keep(k: int) -> bool:
    return k & (k - 1) == 0


def _run(manifold: Manifold, cloud: PointCloud, config: SolverConfig, arclength: bool) -> IterationTrace:
    if config.start_index >= len(cloud):
        raise ConfigError(f"start_index {config.start_index} out of range for {len(cloud)} points")
    if config.schedule.kind is ScheduleKind.CUSTOM and len(config.schedule.values) < config.max_iterations:
        raise ConfigError("custom schedule is shorter than the iteration budget")
    rng = np.random.default_rng(config.seed)
    active = cloud.active
    support = cloud.points[active]
    schedule = config.schedule

    scan = _FarthestScan(manifold, support, config.tie_break, rng, config.screening)
    x = cloud.points[config.start_index]
    pos, radius = scan.full(x)
    last = IterationRecord(0, x, radius, int(active[pos]), 0.0)
    records = [last]
    coreset: list = []
    seen: set = set()
    k = 0
    if radius == 0.0:
        log.debug("all support points coincide; stationary at the start point")
        return IterationTrace(records, x, 0.0, coreset, 0)

    for k in range(1, config.max_iterations + 1):
        t = schedule(k)
        f = last.farthest_index
        if f not in seen:
            seen.add(f)
            coreset.append(f)
        target = cloud.points[f]
        if arclength:
            x, step, degenerate = geodesic_step(manifold, x, target, t, dist=radius)
            if degenerate:
                log.debug("iteration %d: zero-length direction, stationary", k)
        elif t >= 1.0:
            x, step = target, radius
        else:
            x, step = manifold.interpolate(x, target, t), t * radius
        pos, radius = scan.after_step(x, step)
        last = IterationRecord(k, x, radius, int(active[pos]), step)
        if not config.thin_trace or _keep(k):
            records.append(last)
        if config.stop_tolerance is not None and step < config.stop_tolerance:
            log.info("step %.3g below stop tolerance at iteration %d", step, k)
            break
    if records[-1] is not last:
        records.append(last)
    return IterationTrace(records, x, radius, coreset, k)


def run_geo_alg(manifold: Manifold, cloud: PointCloud, config: SolverConfig) -> IterationTrace:
    """Fraction-step iteration ``c_{k} = Geodesic(c_{k-1}, f_{k-1}, t_k)``.

    Parameters
    ----------
    manifold : Manifold
    cloud : PointCloud
    config : SolverConfig
        Its schedule must be harmonic (``t_k = 1/(k+1)``) or clamped
        harmonic; values are fractions of the distance to the farthest point.

    Returns
    -------
    IterationTrace
        Starts at ``cloud[config.start_index]``. A cloud whose points all
        coincide returns immediately with radius 0.
    """
    if config.schedule.kind not in (ScheduleKind.HARMONIC, ScheduleKind.CLAMPED_HARMONIC):
        raise ConfigError("fraction-step iteration expects a harmonic or clamped schedule")
    return _run(manifold, cloud, config, arclength=False)


def check_step_cap(schedule: StepSchedule, envelope: GeometryEnvelope, force: bool = False) -> float:
    """Compare the schedule's largest step with the admissible bound; return the bound."""
    bound = theory_constants(envelope).delta_max
    cap = schedule.sup()
    if cap > bound:
        msg = f"step cap {cap:.6g} exceeds the admissible step size {bound:.6g}"
        if not force:
            raise ConfigError(msg)
        log.warning("%s; continuing because the check was overridden", msg)
    return bound


def run_rie_alg(manifold: Manifold, cloud: PointCloud, envelope: Optional[GeometryEnvelope],
                config: SolverConfig, force_delta: bool = False) -> IterationTrace:
    """Arclength-step iteration toward the farthest point.

    Each iterate moves ``t_k`` along the unit-speed geodesic to the current
    farthest point (clamped at the point itself). When ``envelope`` is given
    the schedule's largest step must not exceed the admissible step size for
    that envelope, unless ``force_delta`` is set (a warning is logged). With
    ``envelope=None`` no check is possible and none is made.
    """
    if envelope is not None:
        check_step_cap(config.schedule, envelope, force_delta)
    else:
        log.info("no geometry envelope given; step sizes are not checked")
    return _run(manifold, cloud, config, arclength=True)


def relative_center_distances(manifold: Manifold, trace: IterationTrace, center, radius: float) -> np.ndarray:
    """``rho(x_k, center) / radius`` for every recorded iterate."""
    return np.array([manifold.distance(r.center, center) for r in trace.records]) / radius


def iterate_distances(manifold: Manifold, trace: IterationTrace, center) -> np.ndarray:
    return np.array([manifold.distance(r.center, center) for r in trace.records])


def capture_index(distances: np.ndarray, radius: float) -> Optional[int]:
    """First position after which every distance stays within ``radius``."""
    outside = np.flatnonzero(distances > radius)
    if len(outside) == 0:
        return 0
    k = int(outside[-1]) + 1
    return k if k < len(distances) else None


def fit_log_envelope(sq_dist: np.ndarray, fit_fraction: float = 0.5) -> tuple[float, float]:
    """Fit ``A (1 + ln(k+1)) / (k+1)`` to a post-capture squared-distance sequence.

    ``A`` is the smallest constant covering the first ``fit_fraction`` of the
    sequence; returns ``(A, coverage)`` where coverage is measured on the
    whole sequence.
    """
    k = np.arange(len(sq_dist))
    shape = (1.0 + np.log(k + 1.0)) / (k + 1.0)
    n_fit = max(1, int(math.ceil(fit_fraction * len(sq_dist))))
    a = float(np.max(sq_dist[:n_fit] / shape[:n_fit]))
    coverage = float(np.mean(sq_dist <= a * shape * (1 + 1e-12)))
    return a, coverage
