"""Tests for problem documents, CSV/JSON serialization and the profile directory."""

from __future__ import annotations

import json

import numpy as np
import pytest

from soliton_forge.core.errors import OdeDomainError
from soliton_forge.core.soliton import SolitonProblem
from soliton_forge.io.report_store import ProfileStore
from soliton_forge.io.serializers import (
    ValidationError,
    format_float,
    load_problem_file,
    problem_to_dict,
    read_columns,
    read_json,
    validate_problem_document,
    write_columns,
    write_json,
)


def _document(**overrides) -> dict:
    doc = {
        "lambda": 1.0,
        "k": 4.0,
        "n": 1,
        "A": 0.0,
        "B": 0.0,
        "C": 0.0,
        "s_min": 0.0,
        "s_max": 2.0,
    }
    doc.update(overrides)
    return doc


# ---------------------------------------------------------------------------
# Problem documents
# ---------------------------------------------------------------------------


class TestProblemDocument:
    def test_valid_document(self):
        problem, alpha_init = validate_problem_document(_document(alpha_init=0.5))
        assert problem.lam == 1.0
        assert problem.n == 1
        assert alpha_init == 0.5

    def test_alpha_init_defaults_to_none(self):
        _, alpha_init = validate_problem_document(_document())
        assert alpha_init is None

    def test_integral_float_n_accepted(self):
        problem, _ = validate_problem_document(_document(n=2.0))
        assert problem.n == 2
        assert isinstance(problem.n, int)

    @pytest.mark.parametrize(
        "overrides,match",
        [
            ({"lambda": "one"}, "lambda must be a number"),
            ({"k": float("nan")}, "k must be finite"),
            ({"B": True}, "B must be a number"),
            ({"n": 1.5}, "n must be an integer"),
            ({"n": 0}, "n must be positive"),
            ({"alpha_init": "x"}, "alpha_init must be a number"),
            ({"s_max": 0.0}, "s_max must exceed s_min"),
            ({"extra": 1}, "unknown keys"),
        ],
    )
    def test_malformed_values_raise(self, overrides, match):
        with pytest.raises(ValidationError, match=match):
            validate_problem_document(_document(**overrides))

    def test_missing_keys_are_listed(self):
        doc = _document()
        del doc["C"]
        del doc["s_max"]
        with pytest.raises(ValidationError, match="C, s_max"):
            validate_problem_document(doc)

    def test_non_object_rejected(self):
        with pytest.raises(ValidationError, match="JSON object"):
            validate_problem_document([1, 2, 3])

    def test_negative_width_is_a_domain_error(self):
        with pytest.raises(OdeDomainError):
            validate_problem_document(_document(A=-1.0, s_min=0.0))

    def test_problem_to_dict_round_trips(self):
        problem, _ = validate_problem_document(_document(B=0.25))
        again, alpha_init = validate_problem_document(problem_to_dict(problem, 0.1))
        assert again == problem
        assert alpha_init == 0.1


class TestProblemFile:
    def test_load(self, tmp_path):
        path = tmp_path / "problem.json"
        path.write_text(json.dumps(_document()))
        problem, _ = load_problem_file(path)
        assert problem.s_max == 2.0

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "problem.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="malformed JSON"):
            load_problem_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_problem_file(tmp_path / "absent.json")


# ---------------------------------------------------------------------------
# CSV and JSON
# ---------------------------------------------------------------------------


class TestFormatting:
    def test_seventeen_significant_digits(self):
        assert format_float(0.1) == "0.10000000000000001"
        assert float(format_float(1.0 / 3.0)) == 1.0 / 3.0

    def test_non_finite(self):
        assert format_float(float("nan")) == "nan"
        assert format_float(float("inf")) == "inf"


class TestColumns:
    def test_write_then_read(self, tmp_path):
        path = tmp_path / "profile.csv"
        columns = {"s": np.array([0.0, 0.5, 1.0]), "alpha": np.array([0.0, 2.0 / 3.0, 1.0])}
        write_columns(path, columns)
        assert path.read_text().splitlines()[0] == "s,alpha"
        loaded = read_columns(path)
        assert list(loaded) == ["s", "alpha"]
        np.testing.assert_array_equal(loaded["alpha"], columns["alpha"])

    def test_output_is_reproducible(self, tmp_path):
        columns = {"s": np.linspace(0.0, 1.0, 7), "f": np.exp(np.linspace(0.0, 1.0, 7))}
        write_columns(tmp_path / "a.csv", columns)
        write_columns(tmp_path / "b.csv", columns)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_wrong_width_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("s,alpha\n0.0,1.0\n0.5\n")
        with pytest.raises(ValidationError, match=":3: expected 2 fields"):
            read_columns(path)

    def test_non_numeric_value(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("s,alpha\n0.0,abc\n")
        with pytest.raises(ValidationError, match=":2:"):
            read_columns(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValidationError, match="empty CSV"):
            read_columns(path)

    def test_header_only(self, tmp_path):
        path = tmp_path / "header.csv"
        path.write_text("s,alpha\n")
        loaded = read_columns(path)
        assert loaded["s"].shape == (0,)


class TestJson:
    def test_numpy_values_and_non_finite(self, tmp_path):
        path = tmp_path / "report.json"
        write_json(
            path,
            {
                "residual": np.float64(float("nan")),
                "count": np.int64(3),
                "ok": np.bool_(True),
                "values": np.array([1.0, float("inf")]),
                1: "int key",
            },
        )
        data = read_json(path)
        assert data == {
            "residual": "nan",
            "count": 3,
            "ok": True,
            "values": [1.0, "inf"],
            "1": "int key",
        }

    def test_keys_are_sorted(self, tmp_path):
        path = tmp_path / "sorted.json"
        write_json(path, {"b": 1, "a": 2})
        assert path.read_text().index('"a"') < path.read_text().index('"b"')

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("[1, 2")
        with pytest.raises(ValidationError):
            read_json(path)


# ---------------------------------------------------------------------------
# ProfileStore
# ---------------------------------------------------------------------------


class TestProfileStore:
    def test_empty_directory_reports_missing_files(self, tmp_path):
        store = ProfileStore(tmp_path / "out")
        assert store.missing_files() == ["problem.json", "profile.csv", "residuals.csv"]
        assert not store.exists()
        assert store.load_summary() is None

    def test_load_before_solve_raises(self, tmp_path):
        store = ProfileStore(tmp_path)
        with pytest.raises(FileNotFoundError, match="Run 'solve' first"):
            store.load_profile()
        with pytest.raises(FileNotFoundError):
            store.load_problem()

    def test_save_and_load(self, tmp_path):
        store = ProfileStore(tmp_path / "nested" / "out")
        problem = SolitonProblem(lam=1.0, k=4.0, n=1, A=0.0, B=0.0, C=0.0, s_min=0.0, s_max=2.0)
        columns = {name: np.linspace(0.0, 1.0, 4) for name in ("s", "t", "alpha", "H", "F", "f")}
        store.save_problem(problem, None)
        store.save_profile(columns)
        store.save_residuals({**columns, "R1": np.zeros(4)})
        store.save_summary({"endpoint": 1.5})

        assert store.exists()
        assert store.load_problem() == (problem, None)
        assert list(store.load_profile()) == ["s", "t", "alpha", "H", "F", "f"]
        assert "R1" in store.load_residuals()
        assert store.load_summary() == {"endpoint": 1.5}

    def test_save_table(self, tmp_path):
        store = ProfileStore(tmp_path)
        path = store.save_table("fit.csv", [{"f": 0.5, "b": 1}, {"f": 1.0, "b": 2}])
        assert path.read_text() == "f,b\n0.5,1\n1,2\n"
