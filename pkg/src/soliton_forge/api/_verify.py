"""Verification suites for the soliton-forge API.

Every suite returns ``{"target", "checks", "failing", "passed"}`` where each
check is ``{"value", "tol", "passed"}`` plus optional detail keys.
"""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from ..core.errors import NotASolitonError, UnsupportedInputError
from ..core.identity_suite import (
    SolitonSample,
    killing_residual,
    rectifiability_report,
    soliton_identities,
)
from ..core.soliton import chart_ricci_check
from ..core.zoo import ModelId, build_soliton
from ..io.serializers import PROFILE_COLUMNS, ValidationError
from ._classify import phi_sectional_report, structure_checks
from ._common import _merge_tolerances, _require_profile_store, _resolve_model
from ._solve import SolvedProfile, _solve, profile_columns

logger = logging.getLogger(__name__)

CHECK_GROUPS = ("structure", "phi-sectional", "identities", "killing", "rectifiability")

_ORACLE_POINTS = 10


def _check(value: float, tol: float, **detail) -> dict:
    return {"value": float(value), "tol": float(tol), "passed": bool(value <= tol), **detail}


def _groups(checks: tuple[str, ...] | None) -> tuple[str, ...]:
    groups = CHECK_GROUPS if not checks else tuple(checks)
    unknown = [g for g in groups if g not in CHECK_GROUPS]
    if unknown:
        raise ValueError(f"Unknown check '{unknown[0]}'. Valid: {', '.join(CHECK_GROUPS)}")
    return groups


def _result(target: str, checks: dict[str, dict]) -> dict:
    failing = [name for name, c in checks.items() if not c["passed"]]
    return {"target": target, "checks": checks, "failing": failing, "passed": not failing}


def chart_sample(model: ModelId, size: int = 12) -> SolitonSample:
    """Deterministic sample of a chart soliton away from the critical point of f."""
    chart, f, lam = build_soliton(model)
    rng = np.random.default_rng(20240611)
    radius = rng.uniform(0.3, 1.5, size)
    direction = rng.normal(size=(size, chart.dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    return SolitonSample.from_chart(chart, lam, radius[:, None] * direction, potential=f)


def _sample_checks(
    sample: SolitonSample, tols: dict[str, float], groups: tuple[str, ...]
) -> dict[str, dict]:
    checks: dict[str, dict] = {}
    if "identities" in groups:
        try:
            report = soliton_identities(
                sample, tol=tols["IDENTITY_TOL"], precondition_tol=tols["SOLITON_PRECONDITION"]
            )
        except NotASolitonError as exc:
            checks["identity:precondition"] = {
                "value": float("inf"),
                "tol": tols["SOLITON_PRECONDITION"],
                "passed": False,
                "reason": str(exc),
            }
        else:
            checks["identity:precondition"] = _check(
                report.precondition, tols["SOLITON_PRECONDITION"]
            )
            for name, value in report.residuals.items():
                checks[f"identity:{name}"] = _check(value, tols["IDENTITY_TOL"])
    if "killing" in groups:
        try:
            value = killing_residual(sample)
        except UnsupportedInputError as exc:
            logger.info("%s: Killing check skipped (%s)", sample.name, exc)
        else:
            checks["killing"] = _check(value, tols["KILLING_RESIDUAL_TOL"])
    if "rectifiability" in groups:
        try:
            rect = rectifiability_report(
                sample, rectifiable_tol=tols["RECTIFIABLE_TOL"], parallel_tol=tols["PARALLEL_TOL"]
            )
        except UnsupportedInputError as exc:
            logger.info("%s: rectifiability check skipped (%s)", sample.name, exc)
        else:
            for name, value in rect.residuals.items():
                checks[f"rectifiability:{name}"] = _check(value, rect.tolerances[name])
    return checks


def verify_model(
    model: str,
    *,
    checks: tuple[str, ...] | None = None,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Run the verification suite of a named model.

    Almost-contact models get the structure and Phi-sectional checks; chart
    solitons get the identity, Killing and rectifiability checks.  ``checks``
    restricts the groups (names from CHECK_GROUPS); groups that do not apply
    to the model are ignored.

    Raises ``UnknownModelError`` for unknown names and ``ValueError`` for an
    unknown check group.
    """
    groups = _groups(checks)
    tols = _merge_tolerances(tolerances)
    model_id = _resolve_model(model)

    results: dict[str, dict] = {}
    if model_id.is_almost_contact:
        if "structure" in groups:
            results.update(structure_checks(model, tolerances=tolerances)["checks"])
        if "phi-sectional" in groups:
            phi = phi_sectional_report(model)
            expected = phi["expected"]
            error = 0.0 if expected is None else abs(phi["value"] - expected)
            results["phi-sectional"] = _check(
                error, tols["CLASSIFY_TOL"], reported=phi["value"], expected=expected
            )
    else:
        sample = chart_sample(model_id)
        results.update(_sample_checks(sample, tols, groups))
    return _result(model_id.label, results)


def _oracle_checks(solved: SolvedProfile, tols: dict[str, float]) -> dict[str, dict]:
    tube = solved.tube
    lo, hi = tube.param_interval
    params = tube.interior_params(_ORACLE_POINTS, margin=0.05 * (hi - lo))
    try:
        check = chart_ricci_check(tube, params, tol=tols["IDENTITY_TOL"])
    except UnsupportedInputError as exc:
        logger.info("chart oracle skipped (%s)", exc)
        return {}
    return {f"oracle:{name}": _check(v, check.tol) for name, v in check.errors.items()}


def verify_profile(
    profile_dir: Path,
    *,
    checks: tuple[str, ...] | None = None,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Verify a solved-profile directory.

    The stored problem is solved again on the stored grid; stored columns
    must match the fresh solution and satisfy H^2 = alpha, F^2 = 2s + A and
    f = B s + C.  The residuals, the closed-form cross-check, the identity
    suite and (over the Hopf sphere) the chart curvature oracle follow.

    Raises ``ProfileFilesNotFoundError`` when files are missing.
    """
    groups = _groups(checks)
    tols = _merge_tolerances(tolerances)
    store = _require_profile_store(Path(profile_dir))
    problem, alpha_init = store.load_problem()
    stored = store.load_profile()
    missing = [c for c in PROFILE_COLUMNS if c not in stored]
    if missing:
        raise ValidationError(f"{store.profile_path}: missing columns {', '.join(missing)}")

    solved = _solve(problem, alpha_init, len(stored["s"]), tols)
    fresh = profile_columns(solved)

    results: dict[str, dict] = {}
    for name in PROFILE_COLUMNS:
        diff = float(np.max(np.abs(stored[name] - fresh[name])))
        results[f"profile:{name}"] = _check(diff, tols["PROFILE_MATCH_TOL"])

    s = stored["s"]
    constraint = tols["CONSTRAINT_TOL"]
    results["constraint:H"] = _check(np.max(np.abs(stored["H"] ** 2 - stored["alpha"])), constraint)
    results["constraint:F"] = _check(
        np.max(np.abs(stored["F"] ** 2 - (2 * s + problem.A))), constraint
    )
    results["constraint:f"] = _check(
        np.max(np.abs(stored["f"] - (problem.B * s + problem.C))), constraint
    )

    res = solved.residual
    for name in res.CORE:
        results[f"residual:{name}"] = _check(res.sup[name], res.tol)
    results["cross_check"] = _check(solved.profile.cross_check, tols["CROSS_CHECK_TOL"])

    sample = SolitonSample.from_tube(solved.tube, problem.lam)
    results.update(_sample_checks(sample, tols, groups))
    if "identities" in groups:
        results.update(_oracle_checks(solved, tols))
    return _result(str(store.directory), results)
