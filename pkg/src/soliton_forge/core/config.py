"""
Configuration constants for the soliton-forge numerical engine.

All tunable constants are loaded from tolerances.yaml at import time.
Python literals here serve as fallback defaults when the YAML file is
absent or a key is missing.

User overrides: create ~/.soliton-forge/tolerances.yaml with only the
keys you want to change -- the file is deep-merged over the bundled
definition.

See docs/numerics.md for how each knob is used.
"""

from __future__ import annotations

from .engine.config_loader import load_tolerances

# Load YAML config (bundled + user override); empty dict on any failure.
_cfg = load_tolerances()
_frame = _cfg.get("frame", {})
_fd = _cfg.get("finite_difference", {})
_acs = _cfg.get("almost_contact", {})
_ode = _cfg.get("alpha_ode", {})
_tube = _cfg.get("tube", {})
_boundary = _cfg.get("boundary", {})
_ident = _cfg.get("identities", {})
_parallel = _cfg.get("parallel", {})

# =============================================================================
# FRAME GEOMETRY
# =============================================================================

JACOBI_TOL: float = float(_frame.get("JACOBI_TOL", 1e-12))
SYMMETRY_TOL: float = float(_frame.get("SYMMETRY_TOL", 1e-12))
CONNECTION_TOL: float = float(_frame.get("CONNECTION_TOL", 1e-12))
TRACE_TOL: float = float(_frame.get("TRACE_TOL", 1e-10))

# =============================================================================
# FINITE DIFFERENCES
# =============================================================================

FD_STEP: float = float(_fd.get("FD_STEP", 1e-3))
FD_ORDER: int = int(_fd.get("FD_ORDER", 4))
IDENTITY_FD_STEP: float = float(_fd.get("IDENTITY_FD_STEP", 1e-2))
IDENTITY_FD_ORDER: int = int(_fd.get("IDENTITY_FD_ORDER", 8))

# =============================================================================
# ALMOST CONTACT STRUCTURES
# =============================================================================

STRUCTURE_TOL: float = float(_acs.get("STRUCTURE_TOL", 1e-12))
CLASSIFY_TOL: float = float(_acs.get("CLASSIFY_TOL", 1e-8))
KILLING_TOL: float = float(_acs.get("KILLING_TOL", 1e-10))
REEB_TOL: float = float(_acs.get("REEB_TOL", 1e-10))
SELF_ADJOINT_TOL: float = float(_acs.get("SELF_ADJOINT_TOL", 1e-10))

# =============================================================================
# ALPHA ODE
# =============================================================================

ODE_RTOL: float = float(_ode.get("ODE_RTOL", 1e-11))
ODE_ATOL: float = float(_ode.get("ODE_ATOL", 1e-13))
QUAD_EPSABS: float = float(_ode.get("QUAD_EPSABS", 1e-14))
QUAD_EPSREL: float = float(_ode.get("QUAD_EPSREL", 1e-12))
SINGULAR_BAND: float = float(_ode.get("SINGULAR_BAND", 1e-3))
BRACKET_WIDTH: float = float(_ode.get("BRACKET_WIDTH", 1e-10))
CROSS_CHECK_TOL: float = float(_ode.get("CROSS_CHECK_TOL", 1e-8))

# =============================================================================
# TUBES AND RESIDUALS
# =============================================================================

GRID_SIZE: int = int(_tube.get("GRID_SIZE", 200))
RESIDUAL_TOL: float = float(_tube.get("RESIDUAL_TOL", 1e-6))
CONSTRAINT_TOL: float = float(_tube.get("CONSTRAINT_TOL", 1e-8))
PROFILE_MATCH_TOL: float = float(_tube.get("PROFILE_MATCH_TOL", 1e-7))
EDGE_MARGIN: float = float(_tube.get("EDGE_MARGIN", 1e-6))
NODE_MARGIN: float = float(_tube.get("NODE_MARGIN", 0.25))

# =============================================================================
# BOUNDARY ANALYSIS
# =============================================================================

RICHARDSON_H0: float = float(_boundary.get("RICHARDSON_H0", 1e-2))
RICHARDSON_LEVELS: int = int(_boundary.get("RICHARDSON_LEVELS", 5))
LIMIT_TOL: float = float(_boundary.get("LIMIT_TOL", 1e-4))
CONVERGENCE_TOL: float = float(_boundary.get("CONVERGENCE_TOL", 1e-3))

# =============================================================================
# IDENTITY SUITE
# =============================================================================

SOLITON_PRECONDITION: float = float(_ident.get("SOLITON_PRECONDITION", 1e-6))
IDENTITY_TOL: float = float(_ident.get("IDENTITY_TOL", 1e-5))
GRADIENT_FLOOR: float = float(_ident.get("GRADIENT_FLOOR", 1e-10))
PARALLEL_TOL: float = float(_ident.get("PARALLEL_TOL", 1e-6))
RECTIFIABLE_TOL: float = float(_ident.get("RECTIFIABLE_TOL", 1e-5))
LEVEL_SET_STEP: float = float(_ident.get("LEVEL_SET_STEP", 1e-3))
LEVEL_SET_STEPS: int = int(_ident.get("LEVEL_SET_STEPS", 40))
FIT_TOL: float = float(_ident.get("FIT_TOL", 1e-5))
KILLING_RESIDUAL_TOL: float = float(_ident.get("KILLING_RESIDUAL_TOL", 1e-6))

# =============================================================================
# PARALLELISM
# =============================================================================

THREADS_ENV_VAR = "SOLITON_FORGE_THREADS"
MAX_WORKERS: int = int(_parallel.get("MAX_WORKERS", 1))

# =============================================================================
# NAMED TOLERANCES (targets of --tol NAME=VALUE)
# =============================================================================

TOLERANCE_NAMES: tuple[str, ...] = (
    "CLASSIFY_TOL",
    "RESIDUAL_TOL",
    "CONSTRAINT_TOL",
    "PROFILE_MATCH_TOL",
    "IDENTITY_TOL",
    "PARALLEL_TOL",
    "RECTIFIABLE_TOL",
    "FIT_TOL",
    "KILLING_RESIDUAL_TOL",
    "LIMIT_TOL",
    "CROSS_CHECK_TOL",
    "SOLITON_PRECONDITION",
)


def default_tolerances() -> dict[str, float]:
    """Return {name: value} for every tolerance the CLI can override."""
    return {name: float(globals()[name]) for name in TOLERANCE_NAMES}
