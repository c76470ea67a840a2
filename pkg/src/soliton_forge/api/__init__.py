"""soliton-forge public API."""
from __future__ import annotations

# Exceptions
from ._common import (
    UnknownModelError,
    NotAlmostContactError,
    ProfileFilesNotFoundError,
)
from ..core.errors import (
    DegenerateTubeError,
    EmptyProfileError,
    InconclusiveError,
    NotASolitonError,
    NotKContactError,
    OdeDomainError,
    PreconditionError,
    SolverError,
    UnsupportedInputError,
)

# ValidationError from io layer
from ..io.serializers import ValidationError

# Types
from .types import DeformationInput, RunConfig, MIN_GRID_SIZE

# Almost-contact models
from ._classify import (
    classify_model,
    deform_model,
    phi_sectional_report,
    structure_checks,
    structure_to_dict,
)

# Soliton ODE
from ._solve import (
    SolvedProfile,
    solve_problem,
    profile_columns,
    residual_columns,
)

# Verification and reports
from ._verify import CHECK_GROUPS, chart_sample, verify_model, verify_profile
from ._report import FIT_TABLE_FILE, REPORT_FILE, report_model, report_profile
