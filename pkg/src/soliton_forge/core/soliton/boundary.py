"""
Smoothness of a tube at an endpoint of its interval.

H, F, H' and F' are sampled at t-distances tau_j from the endpoint and
extrapolated to tau = 0 with Neville's scheme.  A point collapse (H, F -> 0)
closes smoothly over a round sphere only when |H'|, |F'| -> 1 and the base is
the standard Sasakian sphere; a circle collapse (H -> 0, F > 0) needs
|H'| -> 1 and F' -> 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..almost_contact import DEFORMED_SASAKIAN, classify, horizontal_basis, phi_sectional
from ..config import CONVERGENCE_TOL, LIMIT_TOL, RICHARDSON_H0, RICHARDSON_LEVELS
from .tube import WarpedProductMetric

logger = logging.getLogger(__name__)

BoundaryKind = Literal["SmoothPoint", "SmoothCircleCollapse", "RegularBoundary", "NotSmooth"]

SMOOTH_POINT: BoundaryKind = "SmoothPoint"
SMOOTH_CIRCLE: BoundaryKind = "SmoothCircleCollapse"
REGULAR: BoundaryKind = "RegularBoundary"
NOT_SMOOTH: BoundaryKind = "NotSmooth"


@dataclass(frozen=True)
class BoundaryResult:
    kind: BoundaryKind
    end: str
    reason: str = ""
    limits: dict[str, float] = field(default_factory=dict)
    spreads: dict[str, float] = field(default_factory=dict)
    base_check: dict[str, float | str] | None = None

    @property
    def smooth(self) -> bool:
        return self.kind in (SMOOTH_POINT, SMOOTH_CIRCLE, REGULAR)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "end": self.end,
            "reason": self.reason,
            "limits": dict(self.limits),
            "spreads": dict(self.spreads),
            "base_check": None if self.base_check is None else dict(self.base_check),
        }


def neville_limit(tau: np.ndarray, values: np.ndarray) -> float:
    """Value at tau = 0 of the interpolating polynomial through (tau_j, values_j)."""
    tau = np.asarray(tau, dtype=float)
    p = np.array(values, dtype=float)
    n = len(tau)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (tau[i] * p[i + 1] - tau[i + m] * p[i]) / (tau[i] - tau[i + m])
    return float(p[0])


def richardson_limits(
    tau: np.ndarray, samples: dict[str, np.ndarray]
) -> tuple[dict[str, float], dict[str, float]]:
    """(limits, spreads); a spread compares with the extrapolant that drops the coarsest sample."""
    limits: dict[str, float] = {}
    spreads: dict[str, float] = {}
    for name, values in samples.items():
        full = neville_limit(tau, values)
        reduced = neville_limit(tau[1:], values[1:])
        limits[name] = full
        spreads[name] = abs(full - reduced)
    return limits, spreads


def standard_sphere_check(w: WarpedProductMetric, tol: float = 1e-6) -> dict[str, float | str]:
    """Is the base the standard Sasakian sphere (b = 1, Phi-sectional curvature 1)?

    Without a base frame the closed-form data is compared: transverse constant
    k = 2(n + 1) and contact scale 1.
    """
    if w.base is None:
        ok = abs(w.k - 2.0 * (w.n + 1)) <= tol and abs(abs(w.contact_scale) - 1.0) <= tol
        return {
            "source": "closed-form",
            "k": float(w.k),
            "a": float(w.contact_scale),
            "standard": "yes" if ok else "no",
        }
    structure = classify(w.base)
    x = horizontal_basis(w.base)[:, 0]
    value = phi_sectional(w.base, x)
    ok = (
        structure.tag == DEFORMED_SASAKIAN
        and abs(abs(structure.b) - 1.0) <= tol
        and abs(value - 1.0) <= tol
    )
    return {
        "source": "frame",
        "tag": structure.tag,
        "b": float(structure.b),
        "phi_sectional": float(value),
        "standard": "yes" if ok else "no",
    }


def boundary_check(
    w: WarpedProductMetric,
    end: str,
    h0: float = RICHARDSON_H0,
    levels: int = RICHARDSON_LEVELS,
    limit_tol: float = LIMIT_TOL,
    convergence_tol: float = CONVERGENCE_TOL,
) -> BoundaryResult:
    """Classify the tube endpoint *end* ("min" or "max").

    Raises:
        ValueError: If end is not "min" or "max"
    """
    if end not in ("min", "max"):
        raise ValueError(f"Unknown endpoint '{end}'. Valid: min, max")

    tau, jets = w.end_samples(end, h0, levels)
    samples = {"H": jets.H, "F": jets.F, "dH": jets.dH, "dF": jets.dF}
    limits, spreads = richardson_limits(tau, samples)

    stalled = [
        name
        for name, spread in spreads.items()
        if not np.isfinite(limits[name]) or spread > convergence_tol * max(1.0, abs(limits[name]))
    ]
    if stalled:
        result = BoundaryResult(
            kind=NOT_SMOOTH,
            end=end,
            reason=f"extrapolation did not converge for {', '.join(stalled)}",
            limits=limits,
            spreads=spreads,
        )
        logger.info("%s[%s]: %s", w.name, end, result.reason)
        return result

    h_zero = abs(limits["H"]) <= limit_tol
    f_zero = abs(limits["F"]) <= limit_tol
    dh, df = abs(limits["dH"]), abs(limits["dF"])

    def result(kind: BoundaryKind, reason: str = "", base_check=None) -> BoundaryResult:
        out = BoundaryResult(kind, end, reason, limits, spreads, base_check)
        logger.debug("%s[%s]: %s %s", w.name, end, kind, reason)
        return out

    if h_zero and f_zero:
        if abs(dh - 1.0) > limit_tol or abs(df - 1.0) > limit_tol:
            reason = f"cone angle at point collapse: |H'|={dh:.6g}, |F'|={df:.6g}"
            return result(NOT_SMOOTH, reason)
        base = standard_sphere_check(w)
        if base["standard"] != "yes":
            return result(NOT_SMOOTH, "point collapse over a non-standard sphere", base)
        return result(SMOOTH_POINT, "", base)
    if h_zero:
        if abs(dh - 1.0) > limit_tol or df > limit_tol:
            reason = f"cone angle at circle collapse: |H'|={dh:.6g}, F'={df:.6g}"
            return result(NOT_SMOOTH, reason)
        return result(SMOOTH_CIRCLE)
    if f_zero:
        return result(NOT_SMOOTH, f"F collapses while H -> {limits['H']:.6g}")
    return result(REGULAR)
