"""
Model registry.

Homogeneous models are loaded from the bundled ``models/*.yaml`` files at
import time; the application cannot start without them.  Use get_model() to
look up a definition by id, kind or alias, and parse_model_id() to turn a
CLI model string into a ModelId.
"""

from __future__ import annotations

from .base import ModelDefinition, ModelId


def _build_registry() -> dict[str, ModelDefinition]:
    from .loader import load_models_from_yaml

    loaded = load_models_from_yaml()
    if not loaded:
        raise RuntimeError(
            "soliton-forge: no model definitions could be loaded from YAML. "
            "Check that src/soliton_forge/models/*.yaml files are present and valid."
        )
    return loaded


MODEL_REGISTRY: dict[str, ModelDefinition] = _build_registry()


def _lookup() -> dict[str, ModelDefinition]:
    table: dict[str, ModelDefinition] = {}
    for model in MODEL_REGISTRY.values():
        for key in (model.model_id, model.kind, *model.aliases):
            table[key.lower()] = model
    return table


def get_model(name: str) -> ModelDefinition:
    """
    Return the ModelDefinition for a model id, kind name or alias.

    Raises:
        ValueError: If the name is not in the registry
    """
    table = _lookup()
    key = name.strip().lower()
    if key not in table:
        valid = ", ".join(MODEL_REGISTRY)
        raise ValueError(f"Unknown model '{name}'. Valid IDs: {valid}")
    return table[key]


def model_names() -> list[str]:
    """All names accepted by parse_model_id (homogeneous ids plus chart models)."""
    return [*MODEL_REGISTRY, "gaussian", "cigar", "hopf-hypersurface"]


def parse_model_id(text: str) -> ModelId:
    """
    Parse ``sphere3 | sl2r | nil3 | gaussian[:dim[:lambda]] | cigar |
    hopf-hypersurface[:radius]`` into a ModelId.

    Raises:
        ValueError: On unknown names or malformed parameters
    """
    head, *params = text.strip().split(":")
    key = head.lower()
    try:
        if key in ("gaussian", "gaussiansoliton"):
            dim = int(params[0]) if params else 4
            lam = float(params[1]) if len(params) > 1 else 1.0
            return ModelId(kind="GaussianSoliton", dim=dim, lam=lam)
        if key == "cigar":
            return ModelId(kind="Cigar")
        if key in ("hopf-hypersurface", "roundspherehypersurface"):
            radius = float(params[0]) if params else 1.0
            return ModelId(kind="RoundSphereHypersurface", radius=radius)
    except (IndexError, TypeError) as exc:
        raise ValueError(f"malformed model '{text}': {exc}") from exc
    if params:
        raise ValueError(f"model '{head}' takes no parameters")
    return ModelId(kind=get_model(head).kind)
