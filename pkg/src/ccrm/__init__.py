"""Convex feasibility via circumcentered reflections.

Solvers (cCRM, CRM, MAP), exact projection oracles for a catalog of
convex set families, and convergence-rate diagnostics: curvature of
smooth relative boundaries, local error-bound estimation, and
classification of linear / superlinear / quadratic tails.
"""

from .circumcenter import CircumResult, circumcenter
from .diagnostics import (
    CurvatureValue,
    FejerBoundReport,
    QuadConstantReport,
    RateReport,
    TangentBoundReport,
    curvature,
    estimate_omega,
    fejer_bound_check,
    intersection_distance,
    quad_constant_check,
    rate_report,
    tangent_bound_check,
    trace_reference_distances,
)
from .errors import ConvergenceError, GeometryError, RegularityError, UnsupportedOperation
from .linalg import (
    SymEig,
    least_squares_min_norm,
    orthonormal_nullspace,
    sym_to_vec,
    symmetric_eigh,
    vec_to_sym,
)
from .sets import (
    AffineSubspace,
    Ball,
    BallInAffine,
    DykstraIntersection,
    Ellipsoid,
    EmbeddedOracle,
    Halfspace,
    Hyperplane,
    IsometricImage,
    PowerEpigraph,
    PsdCone,
    SecondOrderCone,
    SetOracle,
    SpectralBoxTrace,
    boundary_eval,
    dykstra_project,
)
from .solvers import (
    FeasibilityProblem,
    IsometryReduction,
    KnownConstants,
    SolveTrace,
    SolverConfig,
    ccrm_step,
    crm_step,
    epigraph_scalar_step,
    isometry_reduce,
    map_step,
    run,
)

__version__ = "0.1.0"
