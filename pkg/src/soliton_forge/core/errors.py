"""Typed exceptions raised by the soliton-forge core.

Each exception subclasses the closest builtin so callers may catch either
the specific type or the generic ``ValueError`` / ``RuntimeError``.
"""

from __future__ import annotations


# ---------------------------------------------------------------------------
# Geometry input
# ---------------------------------------------------------------------------


class FrameError(ValueError):
    """Structure constants or frame metric violate the frame invariants."""


class DimensionMismatchError(ValueError):
    """An operand does not match the frame or chart dimension."""


class DegenerateChartError(ValueError):
    """A chart metric is not positive-definite at an evaluated point."""


class DegeneratePlaneError(ValueError):
    """Two vectors do not span a plane (sectional curvature undefined)."""


class InvalidStructureError(ValueError):
    """Almost-contact data fails validation (for example even dimension)."""


class SelfAdjointnessError(ValueError):
    """A shape operator is not self-adjoint with respect to the metric."""


class UnsupportedInputError(ValueError):
    """The input lacks data the operation needs (for example no complex structure)."""


# ---------------------------------------------------------------------------
# Preconditions
# ---------------------------------------------------------------------------


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class BundleLikeError(PreconditionError):
    """The metric is not bundle-like with respect to the Reeb foliation."""


class NotKContactError(PreconditionError):
    """The Reeb field is not Killing, so the Reeb foliation is not Riemannian."""


class NotASolitonError(PreconditionError):
    """The soliton equation residual is too large to test consequences of it."""


class InconclusiveError(ArithmeticError):
    """Equivalent numerical checks disagree at the tolerance boundary."""


# ---------------------------------------------------------------------------
# ODE / tube pipeline
# ---------------------------------------------------------------------------


class OdeDomainError(ValueError):
    """The alpha ODE was evaluated where 2s + A <= 0."""


class EmptyProfileError(RuntimeError):
    """alpha is non-positive before the integration makes any progress."""


class SolverError(RuntimeError):
    """Quadrature or the adaptive integrator failed to converge."""


class DegenerateTubeError(ValueError):
    """A profile vanishes in the interior of its interval."""
