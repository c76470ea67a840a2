"""
Session-scoped fixtures for the golden test suite.

Each pipeline problem is solved once per session on the acceptance grid and
turned into a Calabi tube over the Hopf sphere.
"""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from soliton_forge.core.soliton import (
    AlphaProfile,
    CalabiTube,
    SolitonProblem,
    calabi_to_tube,
    solve_alpha,
)
from soliton_forge.core.zoo import calabi_base

from .constants import (
    CLOSING_S_MAX,
    PIPELINE_GRID,
    PIPELINE_K,
    PIPELINE_N,
    PIPELINE_PROBLEMS,
)


@dataclass(frozen=True)
class Pipeline:
    name: str
    problem: SolitonProblem
    profile: AlphaProfile
    tube: CalabiTube


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def make_problem(lam: float, B: float, s_max: float) -> SolitonProblem:
    return SolitonProblem(
        lam=lam, k=PIPELINE_K, n=PIPELINE_N, A=0.0, B=B, C=0.0, s_min=0.0, s_max=s_max
    )


def run_pipeline(name: str, problem: SolitonProblem) -> Pipeline:
    profile = solve_alpha(problem, alpha_init=None, grid_size=PIPELINE_GRID)
    tube = calabi_to_tube(profile, problem, calabi_base(problem.n, problem.k))
    return Pipeline(name, problem, profile, tube)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


@pytest.fixture(scope="session")
def pipelines() -> dict[str, Pipeline]:
    return {
        name: run_pipeline(name, make_problem(spec["lambda"], spec["B"], spec["s_max"]))
        for name, spec in PIPELINE_PROBLEMS.items()
    }


@pytest.fixture(scope="session", params=sorted(PIPELINE_PROBLEMS))
def pipeline(request, pipelines) -> Pipeline:
    return pipelines[request.param]


@pytest.fixture(scope="session")
def closing_pipeline() -> Pipeline:
    """Fubini-Study profile solved past its endpoint; the tube closes at both ends."""
    return run_pipeline("closing", make_problem(1.0, 0.0, CLOSING_S_MAX))
