"""
Closed-form tubes over the Hopf sphere (n = 1, k = 4, a = 1) with known curvature,
shared by the unit and golden tests.
"""

from __future__ import annotations

import numpy as np

from soliton_forge.core.soliton import (
    SliceJet,
    SolitonProblem,
    WarpedProductMetric,
    analytic_profile,
    constant_profile,
)

_ZERO = constant_profile(0.0)


def _linear(slope: float):
    return analytic_profile(lambda t: slope * t, lambda t: slope + 0.0 * t, lambda t: 0.0 * t)


def gaussian_tube(
    lam: float = 1.0, t_max: float = 2.0
) -> tuple[WarpedProductMetric, SolitonProblem]:
    """Flat C^2 in polar form, H = F = t, f = lam t^2 / 2.

    In Calabi variables s = t^2/2 this is alpha = 2s with B = lam, so the
    matching problem is returned alongside the tube.
    """
    f = analytic_profile(
        lambda t: 0.5 * lam * t * t, lambda t: lam * t, lambda t: lam + 0.0 * t
    )
    tube = WarpedProductMetric(
        interval=(0.0, t_max),
        H=_linear(1.0),
        F=_linear(1.0),
        f=f,
        k=4.0,
        n=1,
        name=f"gaussian-tube({lam:g})",
    )
    problem = SolitonProblem(
        lam=lam, k=4.0, n=1, A=0.0, B=lam, C=0.0, s_min=0.0, s_max=0.5 * t_max * t_max
    )
    return tube, problem


def round_sphere_tube() -> WarpedProductMetric:
    """The unit 4-sphere, H = F = sin t on (0, pi); Rc = 3 g."""
    sine = analytic_profile(np.sin, np.cos, lambda t: -np.sin(t))
    return WarpedProductMetric(
        interval=(0.0, float(np.pi)), H=sine, F=sine, f=_ZERO, k=4.0, n=1, name="round-s4"
    )


def circle_collapse_tube(length: float = 1.0) -> WarpedProductMetric:
    """H = t, F = 1: a flat disc times the base quotient near t = 0."""
    return WarpedProductMetric(
        interval=(0.0, length),
        H=_linear(1.0),
        F=constant_profile(1.0),
        f=_ZERO,
        k=4.0,
        n=1,
        name="circle-collapse",
    )


def cone_tube(slope: float = 2.0, length: float = 1.0) -> WarpedProductMetric:
    """H = slope * t, F = t: a cone singularity at t = 0 unless slope = 1."""
    return WarpedProductMetric(
        interval=(0.0, length),
        H=_linear(slope),
        F=_linear(1.0),
        f=_ZERO,
        k=4.0,
        n=1,
        name=f"cone({slope:g})",
    )


def scale_reeb_profile(w: WarpedProductMetric, factor: float) -> WarpedProductMetric:
    """Copy of *w* (in its t-parametrisation) with H multiplied by *factor*."""

    def pick(name: str):
        def profile(t: np.ndarray):
            jet: SliceJet = w.jet(t)
            d1 = {"H": "dH", "F": "dF", "f": "df"}[name]
            scale = factor if name == "H" else 1.0
            return (
                scale * getattr(jet, name),
                scale * getattr(jet, d1),
                scale * getattr(jet, "d2" + name),
            )

        return profile

    return WarpedProductMetric(
        interval=w.interval,
        H=pick("H"),
        F=pick("F"),
        f=pick("f"),
        k=w.k,
        n=w.n,
        base=w.base,
        contact_scale=w.contact_scale,
        name=f"{w.name}*H{factor:g}",
    )
