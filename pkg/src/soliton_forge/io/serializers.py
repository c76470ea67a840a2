"""
Serialization of problem documents, profile tables and reports.

Floats are written with 17 significant digits ('.' decimal separator) so a
re-run on identical input produces byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np

from ..core.errors import OdeDomainError
from ..core.soliton.alpha_ode import SolitonProblem

PROBLEM_KEYS = ("lambda", "k", "n", "A", "B", "C", "s_min", "s_max")
PROFILE_COLUMNS = ("s", "t", "alpha", "H", "F", "f")
RESIDUAL_COLUMNS = (*PROFILE_COLUMNS, "R1", "R2_zeta", "R2_horiz", "R3", "R4")


class ValidationError(Exception):
    """Raised when data validation fails."""

    pass


def validate_finite(value: Any, name: str) -> float:
    """
    Validate that a value is a finite real number.

    Raises:
        ValidationError: If value is not a finite number
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}")
    return float(value)


def validate_positive_int(value: Any, name: str) -> int:
    """
    Validate that a value is a positive integer.

    Raises:
        ValidationError: If value is not a positive integer
    """
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValidationError(f"{name} must be positive, got {value}")
    return int(value)


def validate_problem_document(data: Any) -> tuple[SolitonProblem, float | None]:
    """
    Convert a problem document to (SolitonProblem, alpha_init).

    Keys: lambda, k, n, A, B, C, s_min, s_max and optionally alpha_init
    (null or absent for a start on the singular line).

    Raises:
        ValidationError: If keys are missing or values malformed
        OdeDomainError: If 2s + A is negative at s_min
    """
    if not isinstance(data, dict):
        raise ValidationError(f"problem document must be a JSON object, got {type(data).__name__}")
    missing = [key for key in PROBLEM_KEYS if key not in data]
    if missing:
        raise ValidationError(f"problem document is missing keys: {', '.join(missing)}")
    unknown = sorted(set(data) - {*PROBLEM_KEYS, "alpha_init"})
    if unknown:
        raise ValidationError(f"unknown keys in problem document: {', '.join(unknown)}")

    values = {key: validate_finite(data[key], key) for key in PROBLEM_KEYS if key != "n"}
    n = validate_positive_int(data["n"], "n")
    alpha_init = data.get("alpha_init")
    if alpha_init is not None:
        alpha_init = validate_finite(alpha_init, "alpha_init")

    try:
        problem = SolitonProblem(
            lam=values["lambda"],
            k=values["k"],
            n=n,
            A=values["A"],
            B=values["B"],
            C=values["C"],
            s_min=values["s_min"],
            s_max=values["s_max"],
        )
    except OdeDomainError:
        raise
    except ValueError as e:
        raise ValidationError(str(e)) from e
    return problem, alpha_init


def problem_to_dict(problem: SolitonProblem, alpha_init: float | None) -> dict[str, Any]:
    return {
        "lambda": problem.lam,
        "k": problem.k,
        "n": problem.n,
        "A": problem.A,
        "B": problem.B,
        "C": problem.C,
        "s_min": problem.s_min,
        "s_max": problem.s_max,
        "alpha_init": alpha_init,
    }


def load_problem_file(path: str | Path) -> tuple[SolitonProblem, float | None]:
    """
    Read and validate a problem JSON file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValidationError: If the JSON is malformed or invalid
    """
    path = Path(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: malformed JSON ({e})") from e
    return validate_problem_document(data)


def format_float(value: float) -> str:
    """17 significant digits; nan and inf spelled as Python writes them."""
    return f"{float(value):.17g}"


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write a header row and rows, formatting floats with format_float."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [
                    format_float(v) if isinstance(v, (float, np.floating)) else v
                    for v in row
                ]
            )


def write_columns(path: str | Path, columns: dict[str, np.ndarray]) -> None:
    """Write equally long float columns as CSV in dict order."""
    header = list(columns)
    data = [np.asarray(columns[name], dtype=float) for name in header]
    write_csv(path, header, (tuple(float(col[i]) for col in data) for i in range(len(data[0]))))


def read_columns(path: str | Path) -> dict[str, np.ndarray]:
    """
    Read a float CSV written by write_columns.

    Raises:
        ValidationError: If a row has the wrong width or a non-numeric value
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration as e:
            raise ValidationError(f"{path}: empty CSV") from e
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValidationError(f"{path}:{lineno}: expected {len(header)} fields")
            try:
                rows.append([float(v) for v in row])
            except ValueError as e:
                raise ValidationError(f"{path}:{lineno}: {e}") from e
    table = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: table[:, i] for i, name in enumerate(header)}


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_json(path: str | Path, data: Any) -> None:
    """Write a JSON document with sorted keys; non-finite floats become strings."""
    with open(path, "w") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path: str | Path) -> Any:
    """
    Raises:
        ValidationError: If the file is not valid JSON
    """
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: malformed JSON ({e})") from e
