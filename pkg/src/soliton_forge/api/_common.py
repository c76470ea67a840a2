"""Shared exceptions and private helpers for the soliton-forge API."""
from __future__ import annotations

from pathlib import Path

from ..core.config import TOLERANCE_NAMES, default_tolerances
from ..core.zoo import ModelId, parse_model_id
from ..io.report_store import ProfileStore
from ..io.serializers import ValidationError


# ---------------------------------------------------------------------------
# Typed exceptions
# ---------------------------------------------------------------------------


class UnknownModelError(ValueError):
    """Raised when a model name does not resolve to a buildable model."""


class NotAlmostContactError(ValueError):
    """Raised when an almost-contact operation is asked of a chart soliton."""


class ProfileFilesNotFoundError(FileNotFoundError):
    """Raised when a solved-profile directory lacks problem/profile/residual files."""


# ---------------------------------------------------------------------------
# Internal helpers
# ---------------------------------------------------------------------------


def _resolve_model(name: str) -> ModelId:
    """Parse a model string, converting lookup failures to UnknownModelError."""
    try:
        return parse_model_id(name)
    except ValueError as exc:
        raise UnknownModelError(str(exc)) from exc


def _require_almost_contact(name: str) -> ModelId:
    model = _resolve_model(name)
    if not model.is_almost_contact:
        raise NotAlmostContactError(
            f"model '{model.label}' is not an almost-contact model "
            "(classify and deform need sphere3, sl2r, nil3 or hopf-hypersurface)"
        )
    return model


def _require_profile_store(directory: Path) -> ProfileStore:
    """Return a ProfileStore, raising ProfileFilesNotFoundError if files are missing."""
    store = ProfileStore(directory)
    missing = store.missing_files()
    if missing:
        raise ProfileFilesNotFoundError(
            f"Solved-profile directory {store.directory} is missing {', '.join(missing)}. "
            "Run 'solve' first."
        )
    return store


def _merge_tolerances(overrides: dict[str, float] | None) -> dict[str, float]:
    """
    Defaults from tolerances.yaml with case-insensitive overrides applied.

    Raises:
        ValidationError: On an unknown name or a non-positive value
    """
    merged = default_tolerances()
    for name, value in (overrides or {}).items():
        key = name.strip().upper()
        if key not in merged:
            raise ValidationError(
                f"Unknown tolerance '{name}'. Valid names: {', '.join(TOLERANCE_NAMES)}"
            )
        if not float(value) > 0:
            raise ValidationError(f"tolerance {key} must be positive, got {value}")
        merged[key] = float(value)
    return merged
