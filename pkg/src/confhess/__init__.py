"""Conformally invariant curvature operators and supporting numerics.

The package evaluates symmetric functions of Schouten-tensor eigenvalues
(the fully nonlinear conformal curvature operators), handles their
admissibility cones, computes conformal-geometry quantities in three
gauges, solves radial boundary value problems with a damped Newton method,
and provides the diagnostic monitors used to study a priori estimates and
blow-up behaviour.
"""

from .cones import (
    GammaK,
    InclusionReport,
    Positivity,
    SigmaDelta,
    boundary_shift,
    cone_contains,
    cone_violation,
    gamma_sigma_inclusion_test,
    inclusion_delta,
    min_k_positive_ricci,
    parse_cone,
    sample_cone,
)
from .conformal import (
    CallableProfile,
    FlatBackground,
    Profile,
    RadialProfile,
    SchoutenMatrix,
    SphereBackground,
    bubble_profile,
    conformal_hessian_matrix,
    constant_profile,
    flat_equivalent,
    gauge_convert,
    grid_radial_profile,
    inversion_profile,
    kelvin,
    load_radial_profile,
    parse_profile,
    radial_schouten_eigs,
    scale_profile,
    schouten_eigs,
    schouten_matrix,
)
from .diagnostics import (
    EstimateMonitor,
    HarnackReport,
    VolumeRatioCurve,
    bishop_gromov_curve,
    blowup_rescale,
    gradient_monitor,
    harnack_beta,
    harnack_report,
    hessian_monitor,
    holder_check,
    oscillation_on_ball,
    unit_ball_volume,
    unit_sphere_area,
)
from .errors import (
    AdmissibilityError,
    ConfhessError,
    DomainError,
    NumericError,
    PositivityError,
    UsageError,
)
from .radial_solver import (
    ConvergenceStudy,
    SolveResult,
    SolverConfig,
    admissibility_margins,
    continuation_p,
    convergence_study,
    jacobian,
    newton_solve,
    node_eigentuples,
    residual,
)
from .symfun import (
    AxiomReport,
    CurvatureOperator,
    EigenTuple,
    InvMonomialSum,
    InvPowerSum,
    PucciMin,
    Quotient,
    RicciComposite,
    Shifted,
    SigmaKRoot,
    as_eigentuple,
    concavity_quadform,
    eval_op,
    grad_op,
    parse_operator,
    ricci_map,
    sigma_k,
    verify_axioms,
)

__version__ = "0.1.0"
