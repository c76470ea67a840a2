"""
Layer 4: Boundary classification.

Every pipeline tube starts on the singular orbit s = 0, where the Hopf
fibres and the base collapse together: a smooth point over the standard
Sasakian sphere with H'(0) = F'(0) = 1.  The Fubini-Study profile solved
past s = 3 ends on a collapsing circle with F -> sqrt(6).
"""

from __future__ import annotations

import pytest

from soliton_forge.core.soliton import (
    SMOOTH_CIRCLE,
    SMOOTH_POINT,
    boundary_check,
)

from .constants import BOUNDARY_SLOPE_TOL, CLOSING_CIRCLE_RADIUS, CLOSING_ENDPOINT
from .reference_tubes import circle_collapse_tube


def test_point_collapse_is_smooth_over_standard_sphere(pipeline):
    result = boundary_check(pipeline.tube, "min")
    assert result.kind == SMOOTH_POINT, result.reason
    assert abs(result.limits["dH"]) == pytest.approx(1.0, abs=BOUNDARY_SLOPE_TOL)
    assert abs(result.limits["dF"]) == pytest.approx(1.0, abs=BOUNDARY_SLOPE_TOL)
    assert result.base_check["source"] == "frame"
    assert result.base_check["standard"] == "yes"


def test_reference_circle_collapse():
    result = boundary_check(circle_collapse_tube(), "min")
    assert result.kind == SMOOTH_CIRCLE, result.reason


def test_fubini_study_closes_on_a_circle(closing_pipeline):
    assert closing_pipeline.profile.endpoint == pytest.approx(CLOSING_ENDPOINT, abs=1e-8)
    result = boundary_check(closing_pipeline.tube, "max")
    assert result.kind == SMOOTH_CIRCLE, result.reason
    assert result.limits["F"] == pytest.approx(CLOSING_CIRCLE_RADIUS, abs=1e-6)
