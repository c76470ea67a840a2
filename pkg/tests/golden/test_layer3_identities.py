"""
Layer 3: Identity suite on certified solitons.

Gaussian and cigar charts and every pipeline tube must satisfy the soliton
identities, pass all three rectifiability conditions and (for tubes) show
the (2, 2) multiplicity pattern of Hess f.  A perturbed potential on the
cigar-times-plane chart is the negative control: it fails all three.
"""

from __future__ import annotations

import numpy as np
import pytest

from soliton_forge.api import chart_sample
from soliton_forge.core.identity_suite import (
    SolitonSample,
    hess_f_multiplicity,
    rectifiability_report,
    soliton_identities,
)
from soliton_forge.core.zoo import parse_model_id, product_cigar_plane

from .constants import (
    CIGAR_IDENTITY_TOL,
    GAUSSIAN_IDENTITY_TOL,
    PIPELINE_IDENTITY_TOL,
    SLICE_DEVIATION_TOL,
)

CONTROL_POINTS = np.array(
    [
        [0.3, 0.2, -0.1, 0.5],
        [0.8, -0.4, 0.2, 0.7],
        [-1.0, 0.5, 0.3, 0.2],
        [0.4, 1.2, -0.6, 0.4],
    ]
)


# ---------------------------------------------------------------------------
# Soliton identities
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "model,tol", [("gaussian", GAUSSIAN_IDENTITY_TOL), ("cigar", CIGAR_IDENTITY_TOL)]
)
def test_chart_soliton_identities(model, tol):
    report = soliton_identities(chart_sample(parse_model_id(model)), tol=tol)
    assert report.passed, report.residuals


def test_pipeline_identities(pipeline):
    sample = SolitonSample.from_tube(pipeline.tube, pipeline.problem.lam, size=32)
    report = soliton_identities(sample, tol=PIPELINE_IDENTITY_TOL)
    assert report.passed, report.residuals


# ---------------------------------------------------------------------------
# Rectifiability
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("model", ["gaussian", "cigar"])
def test_chart_solitons_are_rectifiable(model):
    report = rectifiability_report(chart_sample(parse_model_id(model)))
    assert report.all_pass, report.residuals


def test_pipeline_tubes_are_rectifiable(pipeline):
    sample = SolitonSample.from_tube(pipeline.tube, pipeline.problem.lam, size=32)
    report = rectifiability_report(sample)
    assert report.all_pass, report.residuals


def test_perturbed_potential_fails_every_condition():
    chart, f = product_cigar_plane(0.5)
    sample = SolitonSample.from_chart(chart, 0.0, CONTROL_POINTS, potential=f)
    report = rectifiability_report(sample)
    assert not any(report.passes.values()), report.residuals
    assert report.consistent


# ---------------------------------------------------------------------------
# Hess f multiplicities
# ---------------------------------------------------------------------------


def test_hess_f_multiplicity_on_pipeline_tubes(pipeline):
    tube = pipeline.tube
    lo, hi = tube.param_interval
    params = np.linspace(lo, hi, 7)[1:-1]
    report = hess_f_multiplicity(tube, params, tol=SLICE_DEVIATION_TOL)
    assert report.multiplicities == (2, 2)
    assert report.slice_deviation is not None
    assert report.ok, (report.pair_gap, report.slice_deviation)
