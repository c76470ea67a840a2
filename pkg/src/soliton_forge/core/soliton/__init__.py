"""
Cohomogeneity-one tubes and the Calabi-ansatz soliton ODE.

The pipeline is solve_alpha -> calabi_to_tube -> soliton_residual /
boundary_check; tube_chart writes Hopf-base tubes on R^4 for the
finite-difference oracle.
"""

from .alpha_ode import (
    AlphaProfile,
    SolitonProblem,
    alpha_jet,
    alpha_ode_rhs,
    closed_form_alpha,
    flat_endpoint,
    fubini_study_alpha,
    solve_alpha,
)
from .boundary import (
    NOT_SMOOTH,
    REGULAR,
    SMOOTH_CIRCLE,
    SMOOTH_POINT,
    BoundaryKind,
    BoundaryResult,
    boundary_check,
    neville_limit,
    standard_sphere_check,
)
from .chart import (
    ChartCheck,
    chart_hessian_check,
    chart_hessian_eigenvalues,
    chart_points,
    chart_ricci_check,
    tube_chart,
)
from .curvature import (
    HessianSpectrum,
    SolitonResidual,
    TubeRicci,
    hessian_spectrum,
    slice_ricci_check,
    slice_ricci_einstein,
    soliton_residual,
    tube_ricci,
)
from .tube import (
    CalabiTube,
    ShapeProfile,
    SliceJet,
    WarpedProductMetric,
    analytic_profile,
    calabi_to_tube,
    constant_profile,
    shape_profile,
)

__all__ = [
    "AlphaProfile",
    "BoundaryKind",
    "BoundaryResult",
    "CalabiTube",
    "ChartCheck",
    "HessianSpectrum",
    "NOT_SMOOTH",
    "REGULAR",
    "SMOOTH_CIRCLE",
    "SMOOTH_POINT",
    "ShapeProfile",
    "SliceJet",
    "SolitonProblem",
    "SolitonResidual",
    "TubeRicci",
    "WarpedProductMetric",
    "alpha_jet",
    "alpha_ode_rhs",
    "analytic_profile",
    "boundary_check",
    "calabi_to_tube",
    "chart_hessian_check",
    "chart_hessian_eigenvalues",
    "chart_points",
    "chart_ricci_check",
    "closed_form_alpha",
    "constant_profile",
    "flat_endpoint",
    "fubini_study_alpha",
    "hessian_spectrum",
    "neville_limit",
    "shape_profile",
    "slice_ricci_check",
    "slice_ricci_einstein",
    "soliton_residual",
    "solve_alpha",
    "standard_sphere_check",
    "tube_chart",
    "tube_ricci",
]
