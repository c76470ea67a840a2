"""Public input types for the soliton-forge API."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from ..core.almost_contact import DeformationParams

Command = Literal["classify", "deform", "solve", "verify", "report"]

MIN_GRID_SIZE = 16


@dataclass
class DeformationInput:
    """A +-(H, F)-deformation as given on the command line (``H:F``)."""

    H: float
    F: float
    negative: bool = False

    def __post_init__(self) -> None:
        if not (self.H > 0 and self.F > 0):
            raise ValueError(f"DeformationInput needs H > 0 and F > 0, got {self.H}:{self.F}")

    @classmethod
    def parse(cls, text: str, negative: bool = False) -> DeformationInput:
        """Parse ``"H:F"``; raises ValueError when malformed."""
        parts = text.strip().split(":")
        if len(parts) != 2:
            raise ValueError(f"deformation must be written H:F, got {text!r}")
        try:
            h, f = (float(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"deformation must be written H:F, got {text!r}") from exc
        return cls(H=h, F=f, negative=negative)

    def to_params(self) -> DeformationParams:
        return DeformationParams(sign=-1 if self.negative else 1, H=self.H, F=self.F)

    def to_dict(self) -> dict:
        return {"sign": -1 if self.negative else 1, "H": self.H, "F": self.F}


@dataclass
class RunConfig:
    """One CLI invocation after argument parsing."""

    command: Command
    output_dir: Path
    model: str | None = None
    problem_file: Path | None = None
    profile_dir: Path | None = None
    deformation: DeformationInput | None = None
    checks: tuple[str, ...] = ()
    tolerances: dict[str, float] = field(default_factory=dict)
    grid_size: int = 200

    def __post_init__(self) -> None:
        if self.grid_size < MIN_GRID_SIZE:
            raise ValueError(f"RunConfig.grid_size must be >= {MIN_GRID_SIZE}")
        self.output_dir = Path(self.output_dir)
