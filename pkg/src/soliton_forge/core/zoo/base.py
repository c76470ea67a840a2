"""
Base types for reference models.

ModelDefinition is the YAML-backed description of one homogeneous Sasakian
model (raw bracket ratios, Reeb index, acceptance value).  ModelId names any
model the zoo can build, including the parametrised chart solitons and the
sphere hypersurface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

ModelKind = Literal[
    "Sphere3",
    "SL2RCover",
    "Nil3",
    "GaussianSoliton",
    "Cigar",
    "RoundSphereHypersurface",
]

TANNO_KINDS: tuple[ModelKind, ...] = ("Sphere3", "SL2RCover", "Nil3")
ALMOST_CONTACT_KINDS: tuple[ModelKind, ...] = (*TANNO_KINDS, "RoundSphereHypersurface")


@dataclass(frozen=True)
class ModelDefinition:
    """One homogeneous Sasakian model loaded from models/<model_id>.yaml."""

    model_id: str  # e.g. "sphere3"
    display_name: str
    kind: ModelKind
    kappa: float  # raw [e1,e2] = kappa e3
    nu: float  # raw [e2,e3] = nu e1, [e3,e1] = nu e2
    reeb_index: int
    transverse_einstein: float
    phi_sectional: float
    aliases: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class ModelId:
    """A buildable model.

    dim and lam apply to GaussianSoliton, radius to RoundSphereHypersurface.
    """

    kind: ModelKind
    dim: int = 4
    lam: float = 1.0
    radius: float = 1.0

    def __post_init__(self) -> None:
        if self.kind == "GaussianSoliton" and (self.dim < 2 or self.dim % 2):
            raise ValueError(f"Gaussian soliton needs an even dimension >= 2, got {self.dim}")
        if self.kind == "RoundSphereHypersurface" and not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    @property
    def is_almost_contact(self) -> bool:
        return self.kind in ALMOST_CONTACT_KINDS

    @property
    def label(self) -> str:
        if self.kind == "GaussianSoliton":
            return f"gaussian:{self.dim}:{self.lam:g}"
        if self.kind == "RoundSphereHypersurface":
            return f"hopf-hypersurface:{self.radius:g}"
        return self.kind
