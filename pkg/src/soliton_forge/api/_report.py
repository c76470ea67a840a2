"""Identity-suite reports and fit tables for the soliton-forge API."""
from __future__ import annotations

import logging
from pathlib import Path

from ..core.errors import NotASolitonError, UnsupportedInputError
from ..core.identity_suite import (
    SolitonSample,
    hess_f_multiplicity,
    killing_residual,
    rectifiability_report,
    soliton_identities,
    transnormal_fit,
)
from ..io.report_store import ProfileStore
from ._common import (
    UnknownModelError,
    _merge_tolerances,
    _require_profile_store,
    _resolve_model,
)
from ._solve import _solve, boundary_summary
from ._verify import chart_sample

logger = logging.getLogger(__name__)

REPORT_FILE = "identities.json"
FIT_TABLE_FILE = "transnormal_fit.csv"


def _suite(sample: SolitonSample, tols: dict[str, float]) -> dict:
    out: dict = {"sample": sample.name, "points": int(len(sample.points))}
    try:
        out["identities"] = soliton_identities(
            sample, tol=tols["IDENTITY_TOL"], precondition_tol=tols["SOLITON_PRECONDITION"]
        ).to_dict()
    except NotASolitonError as exc:
        out["identities"] = {"passed": False, "error": str(exc)}
    try:
        out["killing_residual"] = killing_residual(sample)
    except UnsupportedInputError:
        out["killing_residual"] = None
    try:
        out["rectifiability"] = rectifiability_report(
            sample, rectifiable_tol=tols["RECTIFIABLE_TOL"], parallel_tol=tols["PARALLEL_TOL"]
        ).to_dict()
    except UnsupportedInputError:
        out["rectifiability"] = None
    return out


def _write(output_dir: Path, report: dict, fit_rows: list[dict]) -> dict:
    store = ProfileStore(output_dir)
    report_path = store.save_json(REPORT_FILE, report)
    fit_path = store.save_table(FIT_TABLE_FILE, fit_rows)
    logger.info("wrote %s and %s", report_path, fit_path)
    return {**report, "files": [str(report_path), str(fit_path)]}


def report_model(
    model: str,
    output_dir: Path,
    *,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Identity-suite report of a chart soliton (``gaussian``, ``cigar``).

    Writes identities.json and transnormal_fit.csv into ``output_dir``.
    Raises ``UnknownModelError`` for unknown names and for models that are
    not chart solitons.
    """
    tols = _merge_tolerances(tolerances)
    model_id = _resolve_model(model)
    if model_id.is_almost_contact:
        raise UnknownModelError(
            f"model '{model_id.label}' is not a chart soliton (report needs gaussian or cigar)"
        )
    sample = chart_sample(model_id, size=24)
    report = _suite(sample, tols)
    fit = transnormal_fit(sample, tol=tols["FIT_TOL"])
    report["transnormal_fit"] = fit.to_dict()
    return _write(Path(output_dir), report, fit.table())


def report_profile(
    profile_dir: Path,
    output_dir: Path | None = None,
    *,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Identity-suite report of a solved profile, written next to it by default.

    Adds the Hess f multiplicity check and the boundary classification.
    Raises ``ProfileFilesNotFoundError`` when files are missing.
    """
    tols = _merge_tolerances(tolerances)
    store = _require_profile_store(Path(profile_dir))
    problem, alpha_init = store.load_problem()
    grid_size = len(store.load_profile()["s"])
    solved = _solve(problem, alpha_init, grid_size, tols)

    sample = SolitonSample.from_tube(solved.tube, problem.lam)
    report = _suite(sample, tols)
    fit = transnormal_fit(sample, tol=tols["FIT_TOL"])
    report["transnormal_fit"] = fit.to_dict()
    mult = hess_f_multiplicity(solved.tube, sample.points[:: max(1, len(sample.points) // 8)])
    report["hess_f_multiplicity"] = {
        "multiplicities": list(mult.multiplicities),
        "pair_gap": mult.pair_gap,
        "slice_deviation": mult.slice_deviation,
        "chart_error": mult.chart_error,
        "ok": mult.ok,
    }
    report["boundary"] = boundary_summary(solved.tube, tols["LIMIT_TOL"])
    return _write(Path(output_dir or store.directory), report, fit.table())
