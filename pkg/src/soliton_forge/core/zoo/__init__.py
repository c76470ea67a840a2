"""
Closed-form reference geometries.

Homogeneous Sasakian models are YAML definitions (``models/*.yaml``)
normalized at build time; chart solitons and the sphere hypersurface are
built in code.
"""

from __future__ import annotations

from ..almost_contact import AlmostContactStructure
from ..frame_geometry import ChartMetric
from .base import ALMOST_CONTACT_KINDS, TANNO_KINDS, ModelDefinition, ModelId, ModelKind
from .charts import (
    ScalarFn,
    cigar_soliton,
    flat_chart,
    gaussian_soliton,
    heisenberg_chart,
    heisenberg_coframe,
    product_cigar_plane,
    quadratic_soliton,
    standard_complex_structure,
    stereographic_sphere_chart,
)
from .homogeneous import calabi_base, tanno_model
from .hypersurface import round_sphere_hypersurface
from .registry import MODEL_REGISTRY, get_model, model_names, parse_model_id


def build_structure(model: ModelId) -> AlmostContactStructure:
    """Almost-contact structure of a model.

    Raises:
        ValueError: If the model carries no almost-contact structure
    """
    if model.kind in TANNO_KINDS:
        return tanno_model(model)
    if model.kind == "RoundSphereHypersurface":
        return round_sphere_hypersurface(model.radius)[0]
    raise ValueError(f"model '{model.label}' is not an almost-contact model")


def build_soliton(model: ModelId) -> tuple[ChartMetric, ScalarFn, float]:
    """(chart, potential, lambda) of a chart soliton.

    Raises:
        ValueError: If the model is not a chart soliton
    """
    if model.kind == "GaussianSoliton":
        chart, f = gaussian_soliton(model.dim, model.lam)
        return chart, f, model.lam
    if model.kind == "Cigar":
        chart, f = cigar_soliton()
        return chart, f, 0.0
    raise ValueError(f"model '{model.label}' is not a chart soliton")


__all__ = [
    "ALMOST_CONTACT_KINDS",
    "MODEL_REGISTRY",
    "TANNO_KINDS",
    "ModelDefinition",
    "ModelId",
    "ModelKind",
    "ScalarFn",
    "build_soliton",
    "build_structure",
    "calabi_base",
    "cigar_soliton",
    "flat_chart",
    "gaussian_soliton",
    "get_model",
    "heisenberg_chart",
    "heisenberg_coframe",
    "model_names",
    "parse_model_id",
    "product_cigar_plane",
    "quadratic_soliton",
    "round_sphere_hypersurface",
    "standard_complex_structure",
    "stereographic_sphere_chart",
    "tanno_model",
]
