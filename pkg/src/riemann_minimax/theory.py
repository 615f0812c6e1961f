"""Closed-form constants and bounds for the geodesic minimax iteration.

Infinite values (injectivity radius of a Cartan-Hadamard manifold, the
resulting ``R_alpha``) are IEEE ``math.inf``; comparisons and ``min`` with it
are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import GeometryEnvelope

COS_CLAMP_SLACK = 1e-9


def r_alpha(alpha: float, injectivity: float = math.inf) -> float:
    """Radius ``min(inj, pi / alpha) / 2`` under which the 1-center is unique."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    if not injectivity > 0:
        raise DomainError(f"injectivity radius must be positive, got {injectivity!r}")
    return 0.5 * min(injectivity, math.pi / alpha)


def r_zero(R: float, R_alpha: float) -> float:
    """Capture radius ``min((R_alpha - R) / 2, R / 2)``."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R!r}")
    if not R < R_alpha:
        raise DomainError(f"enclosing radius R={R!r} must be below R_alpha={R_alpha!r}")
    return min(0.5 * (R_alpha - R), 0.5 * R)


def _check_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def _cos_alpha_R(alpha: float, R: float) -> float:
    c = math.cos(alpha * R)
    if not (alpha * R < 0.5 * math.pi and c > 0):
        raise DomainError(f"alpha * R = {alpha * R!r} must be below pi/2")
    return c


def delta_max(alpha: float, beta: float, R: float, R_0: float) -> float:
    """Largest admissible step length.

    ``min(R_0 / 2, (2 / beta) artanh(tanh(beta R_0 / 2) cos(alpha R) tan(alpha R_0 / 4)))``
    """
    _check_positive(alpha=alpha, beta=beta, R=R, R_0=R_0)
    arg = math.tanh(0.5 * beta * R_0) * _cos_alpha_R(alpha, R) * math.tan(0.25 * alpha * R_0)
    if not arg < 1.0:
        raise DomainError("step-size bound is undefined (artanh argument >= 1)")
    return min(0.5 * R_0, 2.0 / beta * math.atanh(arg))


def step_condition_slack(delta: float, alpha: float, beta: float, R: float, R_0: float) -> float:
    """``cos(aR) tan(aR0/4) tanh(bR0/2) - tanh(b delta / 2)``; nonnegative iff the
    monotonicity condition on the step holds."""
    return (_cos_alpha_R(alpha, R) * math.tan(0.25 * alpha * R_0) * math.tanh(0.5 * beta * R_0)
            - math.tanh(0.5 * beta * delta))


def hessian_constant(r: float, beta: float) -> float:
    """``C(r, beta) = 2 r beta coth(2 beta r)``, the Hessian bound of the squared distance."""
    _check_positive(r=r, beta=beta)
    x = 2.0 * beta * r
    return x / math.tanh(x)


def contraction_eta(alpha: float, beta: float, R: float, R_0: float) -> float:
    """Contraction coefficient ``eta`` of ``cosh(beta rho(c, x))`` outside ``B(c, R_0)``."""
    _check_positive(alpha=alpha, beta=beta, R=R, R_0=R_0)
    return (beta * _cos_alpha_R(alpha, R) * math.tan(0.25 * alpha * R_0)
            * _tanh_double_gap(0.5 * beta * R_0))


def _tanh_double_gap(y: float) -> float:
    """``tanh(2y) - tanh(y)`` without cancellation: ``tanh(y) sech^2(y) / (1 + tanh^2(y))``.

    The direct difference is exactly 0 in double precision once ``y > ~19``;
    this form stays accurate until ``sech^2`` underflows (``y > ~355``).
    """
    t = math.tanh(y)
    sech2 = 0.0 if y > 355.0 else 1.0 / math.cosh(y) ** 2
    return t * sech2 / (1.0 + t * t)


def tau_hint(alpha: float, R_alpha: float) -> float:
    """Heuristic quadratic-growth constant ``(alpha / 2) cot(alpha R_alpha)``.

    Only a hint; the true constant depends on the data. Returns 0 when
    ``alpha R_alpha = pi / 2``, the common case of infinite injectivity radius.
    """
    x = alpha * R_alpha
    if math.isclose(x, 0.5 * math.pi, rel_tol=1e-12):
        return 0.0
    return 0.5 * alpha / math.tan(x)


def rate_bound(k: int, lam: float, xi: float, u0: float) -> float:
    """Upper bound on ``u_{k+1}`` for ``u_{k+1} <= (1 - lam/(k+1)) u_k + xi/(k+1)^2``.

    Three regimes: ``lam < 1`` decays like ``(k+1)^-lam``, ``lam == 1`` like
    ``log(k+1)/(k+1)``, ``lam > 1`` like ``1/(k+2)``.
    """
    _check_positive(lam=lam, xi=xi)
    if k < 0:
        raise DomainError("k must be nonnegative")
    if lam < 1.0:
        return (u0 + 2.0 ** lam * xi * (2.0 - lam) / (1.0 - lam)) / (k + 1) ** lam
    if lam == 1.0:
        return xi * (1.0 + math.log(k + 1)) / (k + 1)
    m = lam - 1.0
    return (xi + (m * u0 - xi) / (k + 2) ** m) / (m * (k + 2))


def _clamp_cos(value: float) -> float:
    if not -1.0 - COS_CLAMP_SLACK <= value <= 1.0 + COS_CLAMP_SLACK:
        raise DomainError(f"cosine {value!r} out of range; sides do not form a triangle")
    return min(1.0, max(-1.0, value))


def cos_law_spherical(alpha: float, x1: float, x2: float, x3: float) -> float:
    """Cosine of the angle opposite ``x3`` in a triangle of constant curvature ``alpha**2``."""
    _check_positive(alpha=alpha)
    a, b, c = alpha * x1, alpha * x2, alpha * x3
    for side in (a, b):
        if not 0.0 < side < math.pi:
            raise DomainError(f"alpha * side = {side!r} must lie in (0, pi)")
    # cos c - cos a cos b = sin a sin b - 2 sin((c + a - b)/2) sin((c - a + b)/2)
    d = a - b
    value = 1.0 - 2.0 * math.sin(0.5 * (c + d)) * math.sin(0.5 * (c - d)) / (math.sin(a) * math.sin(b))
    return _clamp_cos(value)


def cos_law_hyperbolic(beta: float, x1: float, x2: float, x3: float) -> float:
    """Cosine of the angle opposite ``x3`` in a triangle of constant curvature ``-beta**2``."""
    _check_positive(beta=beta)
    if not (x1 > 0 and x2 > 0):
        raise DomainError("sides adjacent to the angle must be positive")
    a, b, c = beta * x1, beta * x2, beta * x3
    # cosh a cosh b - cosh c = sinh a sinh b - 2 sinh((c + a - b)/2) sinh((c - a + b)/2)
    d = a - b
    value = 1.0 - 2.0 * math.sinh(0.5 * (c + d)) * math.sinh(0.5 * (c - d)) / (math.sinh(a) * math.sinh(b))
    return _clamp_cos(value)


def cos_law_planar(x1: float, x2: float, x3: float) -> float:
    return (x1 * x1 + x2 * x2 - x3 * x3) / (2.0 * x1 * x2)


@dataclass(frozen=True)
class TheoryConstants:
    R_alpha: float
    R_0: float
    delta_max: float
    C_hessian: float
    eta: float
    tau_hint: float


def theory_constants(envelope: GeometryEnvelope) -> TheoryConstants:
    """Every closed-form constant for an envelope.

    ``C_hessian`` is evaluated at ``r = (R_alpha + R) / 2``.
    """
    a, b, R = envelope.alpha, envelope.beta, envelope.radius_R
    ra = r_alpha(a, envelope.injectivity_radius)
    r0 = r_zero(R, ra)
    return TheoryConstants(
        R_alpha=ra,
        R_0=r0,
        delta_max=delta_max(a, b, R, r0),
        C_hessian=hessian_constant(0.5 * (ra + R), b),
        eta=contraction_eta(a, b, R, r0),
        tau_hint=tau_hint(a, ra),
    )


def best_delta_over_alpha(beta: float, R: float, injectivity: float = math.inf,
                          num: int = 4000) -> tuple[float, float]:
    """Maximize :func:`delta_max` over the curvature parameter ``alpha``.

    On a nonpositively curved manifold every ``alpha > 0`` is a valid upper
    bound, so the caller may pick the one giving the largest step. The search
    is a log-spaced grid over ``alpha`` in ``(0, pi / (2 R))``. Returns
    ``(alpha, delta)``.
    """
    _check_positive(beta=beta, R=R)
    hi = 0.5 * math.pi / R
    best = (math.nan, -math.inf)
    for a in np.geomspace(hi * 1e-8, hi * (1 - 1e-9), num):
        a = float(a)
        try:
            r0 = r_zero(R, r_alpha(a, injectivity))
            d = delta_max(a, beta, R, r0)
        except DomainError:
            continue
        if d > best[1]:
            best = (a, d)
    if not math.isfinite(best[1]):
        raise DomainError("no admissible alpha for this envelope")
    return best
