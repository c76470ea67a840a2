"""
Layer 1: Almost-contact models.

Phi-sectional curvatures of the normalized homogeneous models, the closed
form of the deformed Ricci tensor against the frame computation, and the
behaviour of the classifier under (1, c)-deformations.
"""

from __future__ import annotations

import numpy as np
import pytest

from soliton_forge.core.almost_contact import (
    DEFORMED_SASAKIAN,
    DeformationParams,
    classify,
    deformed_ricci,
    hf_deform,
    horizontal_basis,
    phi_sectional,
)
from soliton_forge.core.zoo import tanno_model

from .constants import (
    COVARIANCE_SCALES,
    COVARIANCE_TOL,
    DEFORMATION_RANGE,
    DEFORMATION_SAMPLES,
    DEFORMATION_SEED,
    DEFORMED_RICCI_TOL,
    K_CONTACT_MODELS,
    PHI_SECTIONAL_TOL,
    TANNO_PHI_SECTIONAL,
)


def _random_deformations() -> list[DeformationParams]:
    rng = np.random.default_rng(DEFORMATION_SEED)
    lo, hi = DEFORMATION_RANGE
    hf = rng.uniform(lo, hi, size=(DEFORMATION_SAMPLES, 2))
    return [
        DeformationParams(sign=1 if i % 2 == 0 else -1, H=float(h), F=float(f))
        for i, (h, f) in enumerate(hf)
    ]


# ---------------------------------------------------------------------------
# Phi-sectional curvature
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("model_id,expected", sorted(TANNO_PHI_SECTIONAL.items()))
def test_phi_sectional_of_homogeneous_models(model_id, expected):
    acs = tanno_model(model_id)
    for x in horizontal_basis(acs).T:
        assert phi_sectional(acs, x) == pytest.approx(expected, abs=PHI_SECTIONAL_TOL)


# ---------------------------------------------------------------------------
# Deformed Ricci tensor
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("model_id", K_CONTACT_MODELS)
def test_deformed_ricci_matches_frame_curvature(model_id):
    acs = tanno_model(model_id)
    for params in _random_deformations():
        report = deformed_ricci(acs, params)
        norms = report.residual_norms
        assert norms["closed_form_vs_frame"] < DEFORMED_RICCI_TOL, params

        # Rc*(zeta*, zeta*) = (H^2 / F^4)(dim - 1) with contact scale 1
        reeb_value = (params.H**2 / params.F**4) * (acs.dim - 1)
        assert norms["reeb_ricci"] <= DEFORMED_RICCI_TOL * max(1.0, reeb_value), params


# ---------------------------------------------------------------------------
# Classifier covariance
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("model_id", K_CONTACT_MODELS)
@pytest.mark.parametrize("c", COVARIANCE_SCALES)
@pytest.mark.parametrize("sign", [1, -1])
def test_classifier_covariance(model_id, c, sign):
    acs = tanno_model(model_id)
    base = classify(acs)
    deformed = classify(hf_deform(acs, DeformationParams(sign=sign, H=1.0, F=c)))
    assert deformed.tag == DEFORMED_SASAKIAN
    assert deformed.b == pytest.approx(sign * base.b / c**2, abs=COVARIANCE_TOL)
