"""Tests for the command line (exit codes and written files)."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from soliton_forge.cli import main as cli_module
from soliton_forge.cli.main import (
    EX_DATAERR,
    EX_NOINPUT,
    EX_USAGE,
    EXIT_EMPTY_PROFILE,
    EXIT_FAILED,
    EXIT_NEITHER,
    EXIT_OK,
    UsageError,
    main,
    parse_tolerances,
)
from soliton_forge.io.report_store import ProfileStore
from soliton_forge.io.serializers import write_columns

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _problem_file(tmp_path: Path, **overrides) -> Path:
    doc = {
        "lambda": 1.0,
        "k": 4.0,
        "n": 1,
        "A": 0.0,
        "B": 1.0,
        "C": 0.0,
        "s_min": 0.0,
        "s_max": 2.0,
    }
    doc.update(overrides)
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(doc))
    return path


def _run(tmp_path: Path, *args: str) -> int:
    return main([*args, "--output-dir", str(tmp_path / "out"), "-q"])


def _read(tmp_path: Path, name: str) -> dict:
    return json.loads((tmp_path / "out" / name).read_text())


# ---------------------------------------------------------------------------
# Tolerance parsing
# ---------------------------------------------------------------------------


class TestParseTolerances:
    def test_case_insensitive(self):
        assert parse_tolerances(["residual_tol=1e-4"]) == {"RESIDUAL_TOL": 1e-4}

    @pytest.mark.parametrize("item", ["RESIDUAL_TOL", "NOPE=1", "FIT_TOL=abc", "FIT_TOL=-1"])
    def test_rejects(self, item):
        with pytest.raises(UsageError):
            parse_tolerances([item])


# ---------------------------------------------------------------------------
# classify / deform
# ---------------------------------------------------------------------------


class TestClassify:
    def test_nil3(self, tmp_path):
        assert _run(tmp_path, "classify", "--model", "nil3") == EXIT_OK
        assert _read(tmp_path, "classification.json")["tag"] == "DeformedSasakian"

    def test_deformed_sphere(self, tmp_path):
        assert _run(tmp_path, "classify", "--model", "sphere3", "--deform", "1:0.5") == EXIT_OK
        assert _read(tmp_path, "classification.json")["b"] == pytest.approx(4.0, abs=1e-8)

    def test_neither_exit_code(self, tmp_path, monkeypatch):
        neither = {"tag": "Neither", "b": 0.0, "residual": 1.0}
        monkeypatch.setattr(cli_module, "classify_model", lambda *a, **k: neither)
        assert _run(tmp_path, "classify", "--model", "nil3") == EXIT_NEITHER

    @pytest.mark.parametrize("model", ["gaussian", "torus"])
    def test_bad_models_are_usage_errors(self, tmp_path, model):
        assert _run(tmp_path, "classify", "--model", model) == EX_USAGE

    def test_malformed_deformation(self, tmp_path):
        assert _run(tmp_path, "classify", "--model", "nil3", "--deform", "1") == EX_USAGE

    def test_deform_requires_deformation(self, tmp_path):
        assert _run(tmp_path, "deform", "--model", "nil3") == EX_USAGE

    def test_deform(self, tmp_path):
        args = ("deform", "--model", "sphere3", "--deform", "2:1", "--negative")
        assert _run(tmp_path, *args) == EXIT_OK
        assert _read(tmp_path, "deformation.json")["deformation"]["sign"] == -1


class TestUsage:
    def test_missing_command(self):
        assert main([]) == EX_USAGE

    def test_unknown_tolerance(self, tmp_path):
        assert _run(tmp_path, "classify", "--model", "nil3", "--tol", "NOPE=1") == EX_USAGE

    def test_grid_size_floor(self, tmp_path):
        assert _run(tmp_path, "classify", "--model", "nil3", "--grid-size", "4") == EX_USAGE

    def test_unknown_check(self, tmp_path):
        assert _run(tmp_path, "verify", "--model", "nil3", "--check", "astrology") == EX_USAGE

    def test_model_and_profile_dir_are_exclusive(self, tmp_path):
        args = ("verify", "--model", "nil3", "--profile-dir", str(tmp_path))
        assert _run(tmp_path, *args) == EX_USAGE


# ---------------------------------------------------------------------------
# solve / verify / report
# ---------------------------------------------------------------------------


class TestSolve:
    def test_gaussian_profile(self, tmp_path):
        problem = _problem_file(tmp_path)
        assert _run(tmp_path, "solve", str(problem), "--grid-size", "64") == EXIT_OK
        assert ProfileStore(tmp_path / "out").exists()

    def test_malformed_document(self, tmp_path):
        problem = _problem_file(tmp_path, n=0)
        assert _run(tmp_path, "solve", str(problem)) == EX_DATAERR

    def test_domain_error(self, tmp_path):
        problem = _problem_file(tmp_path, A=-1.0)
        assert _run(tmp_path, "solve", str(problem)) == EX_DATAERR

    def test_empty_profile(self, tmp_path):
        problem = _problem_file(tmp_path, A=1.0, alpha_init=-0.5)
        assert _run(tmp_path, "solve", str(problem)) == EXIT_EMPTY_PROFILE

    def test_missing_problem_file(self, tmp_path):
        assert _run(tmp_path, "solve", str(tmp_path / "absent.json")) == EX_NOINPUT


class TestVerify:
    def test_model_check_group(self, tmp_path):
        args = ("verify", "--model", "sphere3", "--check", "phi-sectional")
        assert _run(tmp_path, *args) == EXIT_OK
        result = _read(tmp_path, "verification.json")
        assert list(result["checks"]) == ["phi-sectional"]

    def test_missing_profile_dir(self, tmp_path):
        args = ("verify", "--profile-dir", str(tmp_path / "nowhere"))
        assert _run(tmp_path, *args) == EX_NOINPUT

    def test_perturbed_profile_fails(self, tmp_path):
        profile_dir = tmp_path / "profile"
        problem = _problem_file(tmp_path)
        solve_args = ["solve", str(problem), "--output-dir", str(profile_dir), "--grid-size", "64"]
        assert main(solve_args) == EXIT_OK

        store = ProfileStore(profile_dir)
        columns = store.load_profile()
        columns["alpha"] = columns["alpha"] * 1.01
        write_columns(store.profile_path, columns)

        args = ("verify", "--profile-dir", str(profile_dir), "--check", "structure")
        assert _run(tmp_path, *args) == EXIT_FAILED
        assert "profile:alpha" in _read(tmp_path, "verification.json")["failing"]


class TestReport:
    def test_cigar(self, tmp_path):
        assert _run(tmp_path, "report", "--model", "cigar") == EXIT_OK
        assert (tmp_path / "out" / "identities.json").is_file()

    def test_almost_contact_model_is_rejected(self, tmp_path):
        assert _run(tmp_path, "report", "--model", "nil3") == EX_USAGE
