"""Minimax center (smallest enclosing ball center) of point clouds on Riemannian manifolds.

Manifolds: :class:`Euclidean`, :class:`Klein` (hyperbolic space in the Klein
ball model) and :class:`SPD` (affine-invariant metric). Solvers live in
:mod:`riemann_minimax.solver`, closed-form constants in
:mod:`riemann_minimax.theory` and ground truth in :mod:`riemann_minimax.oracle`.
"""

from .errors import ConfigError, DomainError, NumericError
from .euclidean import Euclidean, euclid_distance, euclid_interpolate
from .geometry import (GeometryEnvelope, Manifold, PointCloud, Step, TieBreak, distance,
                       farthest_point, geodesic_interpolate, geodesic_step, radius_at)
from .klein import Klein, klein_distance, klein_interpolate
from .oracle import (CertificateReport, OracleMethod, OracleResult, growth_estimate,
                     optimality_certificate, reference_solve, welzl_exact)
from .solver import (IterationRecord, IterationTrace, ScheduleKind, SolverConfig, StepSchedule,
                     coreset_indices, run_geo_alg, run_rie_alg)
from .spd import SPD, spd_distance, spd_interpolate, spd_matrix_function
from .theory import (TheoryConstants, contraction_eta, cos_law_hyperbolic, cos_law_spherical,
                     delta_max, hessian_constant, r_alpha, r_zero, rate_bound, theory_constants)

__version__ = "0.1.0"

__all__ = [
    "CertificateReport", "ConfigError", "DomainError", "Euclidean", "GeometryEnvelope",
    "IterationRecord", "IterationTrace", "Klein", "Manifold", "NumericError", "OracleMethod",
    "OracleResult", "PointCloud", "SPD", "ScheduleKind", "SolverConfig", "Step", "StepSchedule",
    "TheoryConstants", "TieBreak", "contraction_eta", "coreset_indices", "cos_law_hyperbolic",
    "cos_law_spherical", "delta_max", "distance", "euclid_distance", "euclid_interpolate",
    "farthest_point", "geodesic_interpolate", "geodesic_step", "growth_estimate",
    "hessian_constant", "klein_distance", "klein_interpolate", "optimality_certificate",
    "r_alpha", "r_zero", "radius_at", "rate_bound", "reference_solve", "run_geo_alg",
    "run_rie_alg", "spd_distance", "spd_interpolate", "spd_matrix_function", "theory_constants",
    "welzl_exact",
]
