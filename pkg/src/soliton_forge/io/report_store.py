"""
Solved-profile directory.

A directory written by ``soliton-forge solve`` holds:

    problem.json    the validated problem document
    profile.csv     s, t, alpha, H, F, f on the solver grid
    residuals.csv   profile columns plus R1, R2_zeta, R2_horiz, R3, R4
    summary.json    residual sup-norms, endpoint, boundary classification

``verify --profile-dir`` and ``report --profile-dir`` read it back.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import numpy as np

from ..core.soliton.alpha_ode import SolitonProblem
from .serializers import (
    load_problem_file,
    problem_to_dict,
    read_columns,
    read_json,
    write_columns,
    write_csv,
    write_json,
)


class ProfileStore:
    """Reads and writes the files of one solved-profile directory."""

    PROBLEM = "problem.json"
    PROFILE = "profile.csv"
    RESIDUALS = "residuals.csv"
    SUMMARY = "summary.json"
    REQUIRED = (PROBLEM, PROFILE, RESIDUALS)

    def __init__(self, directory: Path):
        """
        Initialize store.

        Args:
            directory: Solved-profile directory (created on first write)
        """
        self.directory = Path(directory)

    @property
    def problem_path(self) -> Path:
        return self.directory / self.PROBLEM

    @property
    def profile_path(self) -> Path:
        return self.directory / self.PROFILE

    @property
    def residuals_path(self) -> Path:
        return self.directory / self.RESIDUALS

    @property
    def summary_path(self) -> Path:
        return self.directory / self.SUMMARY

    def path(self, name: str) -> Path:
        return self.directory / name

    def missing_files(self) -> list[str]:
        """Names of required files that do not exist (empty when complete)."""
        return [name for name in self.REQUIRED if not (self.directory / name).is_file()]

    def exists(self) -> bool:
        return not self.missing_files()

    def _ensure_dir(self) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)

    # ------------------------------------------------------------------
    # Writing
    # ------------------------------------------------------------------

    def save_problem(self, problem: SolitonProblem, alpha_init: float | None) -> None:
        self._ensure_dir()
        write_json(self.problem_path, problem_to_dict(problem, alpha_init))

    def save_profile(self, columns: dict[str, np.ndarray]) -> None:
        """
        Write profile.csv.

        Args:
            columns: Equal-length arrays keyed s, t, alpha, H, F, f
        """
        self._ensure_dir()
        write_columns(self.profile_path, columns)

    def save_residuals(self, columns: dict[str, np.ndarray]) -> None:
        self._ensure_dir()
        write_columns(self.residuals_path, columns)

    def save_summary(self, summary: dict[str, Any]) -> None:
        self._ensure_dir()
        write_json(self.summary_path, summary)

    def save_json(self, name: str, data: Any) -> Path:
        """Write an extra JSON report (for example identities.json) next to the profile."""
        self._ensure_dir()
        path = self.path(name)
        write_json(path, data)
        return path

    def save_table(self, name: str, rows: list[dict[str, Any]]) -> Path:
        """Write a list of equal-keyed dicts as CSV (header from the first row)."""
        self._ensure_dir()
        path = self.path(name)
        header = list(rows[0]) if rows else []
        write_csv(path, header, ([row[key] for key in header] for row in rows))
        return path

    # ------------------------------------------------------------------
    # Reading
    # ------------------------------------------------------------------

    def _require(self, path: Path) -> Path:
        if not path.is_file():
            raise FileNotFoundError(f"Profile file not found: {path}. Run 'solve' first.")
        return path

    def load_problem(self) -> tuple[SolitonProblem, float | None]:
        """
        Raises:
            FileNotFoundError: If problem.json does not exist
            ValidationError: If problem.json is malformed
        """
        return load_problem_file(self._require(self.problem_path))

    def load_profile(self) -> dict[str, np.ndarray]:
        """
        Raises:
            FileNotFoundError: If profile.csv does not exist
            ValidationError: If profile.csv is malformed
        """
        return read_columns(self._require(self.profile_path))

    def load_residuals(self) -> dict[str, np.ndarray]:
        return read_columns(self._require(self.residuals_path))

    def load_summary(self) -> dict[str, Any] | None:
        """Return summary.json, or None if it is absent."""
        if not self.summary_path.is_file():
            return None
        return read_json(self.summary_path)
