"""
YAML -> ModelDefinition loader.

Loads homogeneous model definitions from individual YAML files in the
bundled ``src/soliton_forge/models/`` directory.  Each file (e.g. nil3.yaml)
holds a flat definition matching the ModelDefinition schema.

User overrides: place matching files in ``~/.soliton-forge/models/``.
A user file is deep-merged over the bundled definition; a user file without
a bundled counterpart is added as a new model.

Usage (internal -- called by registry.py):
    from .loader import load_models_from_yaml
    models = load_models_from_yaml()   # dict or None on failure
"""

from __future__ import annotations

import warnings
from pathlib import Path
from typing import get_args

from ..engine.config_loader import deep_merge, get_user_dir, read_yaml
from .base import TANNO_KINDS, ModelDefinition, ModelKind

_REQUIRED_FIELDS: frozenset[str] = frozenset(
    {
        "model_id",
        "display_name",
        "kind",
        "brackets",
        "reeb_index",
        "transverse_einstein",
        "phi_sectional",
    }
)


def model_from_dict(d: dict) -> ModelDefinition:
    """Convert a raw dict (from YAML) to a ModelDefinition.

    Raises ValueError if a required field is absent or malformed.
    """
    missing = _REQUIRED_FIELDS - set(d)
    if missing:
        raise ValueError(f"ModelDefinition missing fields: {sorted(missing)}")

    kind = str(d["kind"])
    if kind not in get_args(ModelKind):
        raise ValueError(f"unknown kind '{kind}'")
    if kind not in TANNO_KINDS:
        raise ValueError(f"kind '{kind}' is not a homogeneous Sasakian model")

    brackets = d["brackets"]
    if not isinstance(brackets, dict) or {"kappa", "nu"} - set(brackets):
        raise ValueError("brackets must define kappa and nu")
    kappa = float(brackets["kappa"])
    if kappa == 0.0:
        raise ValueError("kappa must be non-zero (the Reeb bracket defines the contact form)")

    reeb_index = int(d["reeb_index"])
    if reeb_index not in (0, 1, 2):
        raise ValueError(f"reeb_index must be 0, 1 or 2, got {reeb_index}")

    return ModelDefinition(
        model_id=str(d["model_id"]),
        display_name=str(d["display_name"]),
        kind=kind,  # type: ignore[arg-type]
        kappa=kappa,
        nu=float(brackets["nu"]),
        reeb_index=reeb_index,
        transverse_einstein=float(d["transverse_einstein"]),
        phi_sectional=float(d["phi_sectional"]),
        aliases=[str(a) for a in d.get("aliases", [])],
    )


def _get_bundled_models_dir() -> Path | None:
    # loader.py lives at src/soliton_forge/core/zoo/loader.py
    candidate = Path(__file__).parent.parent.parent / "models"
    return candidate if candidate.is_dir() else None


def _get_user_models_dir() -> Path | None:
    p = get_user_dir() / "models"
    return p if p.is_dir() else None


def load_models_from_yaml() -> dict[str, ModelDefinition] | None:
    """Return {model_id: ModelDefinition} loaded from per-model YAML files.

    Returns None (rather than raising) so the registry can report the failure.
    """
    try:
        bundled_dir = _get_bundled_models_dir()
        user_dir = _get_user_models_dir()
        if bundled_dir is None and user_dir is None:
            return None

        sources: dict[str, list[Path]] = {}
        for directory in (bundled_dir, user_dir):
            if directory is None:
                continue
            for p in sorted(directory.glob("*.yaml")):
                sources.setdefault(p.stem, []).append(p)

        result: dict[str, ModelDefinition] = {}
        for stem, paths in sources.items():
            raw: dict = {}
            for p in paths:
                raw = deep_merge(raw, read_yaml(p))
            if not raw:
                continue
            try:
                model = model_from_dict(raw)
                result[model.model_id] = model
            except ValueError as exc:
                warnings.warn(f"soliton-forge: skipping model '{stem}' -- {exc}", stacklevel=2)

        return result if result else None

    except Exception as exc:
        warnings.warn(f"soliton-forge: failed to load models from YAML ({exc})", stacklevel=2)
        return None
