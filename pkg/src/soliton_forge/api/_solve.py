"""Soliton-ODE solving for the soliton-forge API."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core.config import GRID_SIZE, LIMIT_TOL
from ..core.soliton import (
    AlphaProfile,
    CalabiTube,
    SolitonProblem,
    SolitonResidual,
    boundary_check,
    calabi_to_tube,
    soliton_residual,
    solve_alpha,
)
from ..core.zoo import calabi_base
from ..io.report_store import ProfileStore
from ..io.serializers import PROFILE_COLUMNS, load_problem_file, problem_to_dict
from ._common import _merge_tolerances

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SolvedProfile:
    """Everything one solve produces, before serialization."""

    problem: SolitonProblem
    alpha_init: float | None
    profile: AlphaProfile
    tube: CalabiTube
    residual: SolitonResidual


def _solve(
    problem: SolitonProblem,
    alpha_init: float | None,
    grid_size: int,
    tolerances: dict[str, float],
) -> SolvedProfile:
    profile = solve_alpha(problem, alpha_init, grid_size)
    tube = calabi_to_tube(profile, problem, calabi_base(problem.n, problem.k))
    residual = soliton_residual(
        tube, problem, size=grid_size, tol=tolerances["RESIDUAL_TOL"]
    )
    return SolvedProfile(problem, alpha_init, profile, tube, residual)


def profile_columns(solved: SolvedProfile) -> dict[str, np.ndarray]:
    """(s, t, alpha, H, F, f) on the solver grid."""
    p, ap = solved.problem, solved.profile
    s = ap.grid
    alpha = np.maximum(ap.alpha, 0.0)
    values = (s, solved.tube.t_nodes, alpha, np.sqrt(alpha), np.sqrt(2 * s + p.A), p.B * s + p.C)
    return dict(zip(PROFILE_COLUMNS, values))


def residual_columns(solved: SolvedProfile) -> dict[str, np.ndarray]:
    """Profile columns and R1..R4 on the interior residual grid."""
    p, res = solved.problem, solved.residual
    s = res.params
    alpha = np.maximum(solved.profile.alpha_at(s), 0.0)
    values = (s, res.t, alpha, np.sqrt(alpha), np.sqrt(2 * s + p.A), p.B * s + p.C)
    columns = dict(zip(PROFILE_COLUMNS, values))
    for name in SolitonResidual.CORE:
        columns[name] = res.columns[name]
    return columns


def boundary_summary(tube: CalabiTube, limit_tol: float = LIMIT_TOL) -> dict[str, dict]:
    return {end: boundary_check(tube, end, limit_tol=limit_tol).to_dict() for end in ("min", "max")}


def summarize(solved: SolvedProfile, tolerances: dict[str, float]) -> dict:
    """Residual sup-norms, cross-check, endpoint and boundary classification."""
    ap, res = solved.profile, solved.residual
    cross_ok = ap.cross_check <= tolerances["CROSS_CHECK_TOL"]
    failing = list(res.failing) + ([] if cross_ok else ["cross_check"])
    return {
        "problem": problem_to_dict(solved.problem, solved.alpha_init),
        "grid_size": int(len(ap.grid)),
        "residual_sup": dict(res.sup),
        "residual_tol": res.tol,
        "cross_check": ap.cross_check,
        "cross_check_tol": tolerances["CROSS_CHECK_TOL"],
        "endpoint": ap.endpoint,
        "bracket": list(ap.bracket) if ap.bracket else None,
        "singular_start": ap.singular_start,
        "t_length": float(solved.tube.t_nodes[-1]),
        "boundary": boundary_summary(solved.tube, tolerances["LIMIT_TOL"]),
        "failing": failing,
        "ok": not failing,
    }


def solve_problem(
    problem_file: Path,
    output_dir: Path,
    *,
    grid_size: int = GRID_SIZE,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """
    Solve a problem document and write the solved-profile directory.

    Writes problem.json, profile.csv, residuals.csv and summary.json into
    ``output_dir`` and returns the summary dict (``summary["ok"]`` is True
    iff every residual and the closed-form cross-check are under tolerance).

    Raises ``ValidationError`` for malformed documents, ``OdeDomainError``
    when 2s + A < 0 and ``EmptyProfileError`` when alpha is not positive at
    the start.
    """
    tols = _merge_tolerances(tolerances)
    problem, alpha_init = load_problem_file(problem_file)
    solved = _solve(problem, alpha_init, grid_size, tols)
    summary = summarize(solved, tols)

    store = ProfileStore(output_dir)
    store.save_problem(problem, alpha_init)
    store.save_profile(profile_columns(solved))
    store.save_residuals(residual_columns(solved))
    store.save_summary(summary)
    logger.info("wrote solved profile to %s (ok=%s)", store.directory, summary["ok"])
    return summary
