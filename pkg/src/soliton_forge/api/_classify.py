"""Almost-contact classification and deformation for the soliton-forge API."""
from __future__ import annotations

import numpy as np

from ..core.almost_contact import (
    AlmostContactStructure,
    classify,
    contact_scale_of,
    deformed_ricci,
    geodesic_reeb_checks,
    hf_deform,
    horizontal_basis,
    is_k_contact,
    lie_derivative_metric,
    phi_sectional,
    shape_classify,
    validate,
)
from ..core.config import KILLING_TOL
from ..core.zoo import TANNO_KINDS, ModelId, build_structure, get_model
from ..core.zoo.hypersurface import round_sphere_hypersurface
from ._common import _merge_tolerances, _require_almost_contact
from .types import DeformationInput


def _structure(model: ModelId, deformation: DeformationInput | None) -> AlmostContactStructure:
    acs = build_structure(model)
    if deformation is not None:
        acs = hf_deform(acs, deformation.to_params())
    return acs


def structure_to_dict(acs: AlmostContactStructure) -> dict:
    """Frame data of a structure as nested lists."""
    return {
        "name": acs.name,
        "dim": acs.dim,
        "structure_constants": acs.frame.structure_constants.tolist(),
        "metric": acs.metric.tolist(),
        "zeta": acs.zeta.tolist(),
        "eta": acs.eta.tolist(),
        "phi": acs.phi.tolist(),
        "contact_scale": acs.contact_scale,
    }


def classify_model(
    model: str,
    deformation: DeformationInput | None = None,
    *,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Classify a model (optionally after a +-(H, F)-deformation).

    Returns a dict with keys ``model``, ``tag``, ``b``, ``residual``,
    ``deformation``.  A deformed model also reports ``base_b`` and
    ``expected_b`` = +-b H / F^2, which is b / c^2 for a (1, c)-deformation.

    Raises ``UnknownModelError`` or ``NotAlmostContactError`` for bad models.
    """
    tol = _merge_tolerances(tolerances)["CLASSIFY_TOL"]
    model_id = _require_almost_contact(model)
    base = build_structure(model_id)
    result = classify(base, tol)
    out = {
        "model": model_id.label,
        "tag": result.tag,
        "b": result.b,
        "residual": result.residual,
        "deformation": None,
    }
    if deformation is not None:
        deformed = classify(_structure(model_id, deformation), tol)
        sign = -1.0 if deformation.negative else 1.0
        out.update(
            tag=deformed.tag,
            b=deformed.b,
            residual=deformed.residual,
            deformation=deformation.to_dict(),
            base_b=result.b,
            expected_b=sign * result.b * deformation.H / deformation.F**2,
        )
    if model_id.kind == "RoundSphereHypersurface":
        acs, shape = round_sphere_hypersurface(model_id.radius)
        shape_class = shape_classify(shape, acs, tol)
        out["shape"] = {
            "tag": shape_class.tag,
            "alpha": shape_class.alpha,
            "beta": shape_class.beta,
            "residual": shape_class.residual,
        }
    return out


def deform_model(
    model: str,
    deformation: DeformationInput,
    *,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Deform a model and report the deformed structure with its Ricci tensor.

    The closed-form deformed Ricci tensor needs a K-contact structure;
    ``NotKContactError`` is raised otherwise.
    """
    tol = _merge_tolerances(tolerances)["CLASSIFY_TOL"]
    model_id = _require_almost_contact(model)
    base = build_structure(model_id)
    params = deformation.to_params()
    deformed = hf_deform(base, params)
    report = deformed_ricci(base, params)
    result = classify(deformed, tol)
    validation = validate(deformed)
    return {
        "model": model_id.label,
        "deformation": deformation.to_dict(),
        "structure": structure_to_dict(deformed),
        "validation": {"residuals": validation.residuals, "ok": validation.ok},
        "classification": {"tag": result.tag, "b": result.b, "residual": result.residual},
        "deformed_ricci": {
            "ricci": report.ricci.tolist(),
            "scalar": report.scalar,
            "residual_norms": dict(report.residual_norms),
        },
    }


def phi_sectional_report(model: str) -> dict:
    """
    Phi-sectional curvature K(X, Phi X) of a model on a horizontal unit vector.

    For the Tanno models the bundled acceptance value is included as ``expected``.
    """
    model_id = _require_almost_contact(model)
    acs = build_structure(model_id)
    x = horizontal_basis(acs)[:, 0]
    value = phi_sectional(acs, x)
    expected = get_model(model_id.kind).phi_sectional if model_id.kind in TANNO_KINDS else None
    return {"model": model_id.label, "value": value, "expected": expected}


def structure_checks(model: str, *, tolerances: dict[str, float] | None = None) -> dict:
    """
    Structure invariants, classification and Reeb-geodesic checks of a model.

    Returns ``{"checks": {name: {"value", "tol", "passed"}}, "reeb_consistent": bool}``.
    """
    tols = _merge_tolerances(tolerances)
    model_id = _require_almost_contact(model)
    acs = build_structure(model_id)
    validation = validate(acs)
    result = classify(acs, tols["CLASSIFY_TOL"])
    reeb = geodesic_reeb_checks(acs)
    a, contact_residual = contact_scale_of(acs)

    checks: dict[str, dict] = {
        f"structure:{name}": {
            "value": value,
            "tol": validation.tol,
            "passed": value <= validation.tol,
        }
        for name, value in validation.residuals.items()
    }
    checks["classification"] = {
        "value": result.residual,
        "tol": tols["CLASSIFY_TOL"],
        "passed": result.tag != "Neither",
        "tag": result.tag,
        "b": result.b,
    }
    for name, check in reeb.checks.items():
        checks[f"reeb:{name}"] = {"value": check.residual, "tol": reeb.tol, "passed": check.passed}
    checks["k_contact"] = {
        "value": float(np.max(np.abs(lie_derivative_metric(acs)))),
        "tol": KILLING_TOL,
        "passed": is_k_contact(acs),
        "contact_scale": a,
        "contact_fit_residual": contact_residual,
    }
    return {"model": model_id.label, "checks": checks, "reeb_consistent": reeb.consistent}
