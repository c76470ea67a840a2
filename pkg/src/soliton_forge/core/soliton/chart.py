"""
Tubes over the round Hopf sphere written on C^2 = R^4.

A point x != 0 sits on the slice with parameter u = u_min + |x|.  With
rho = |x|, u_hat = x / rho, v = -J0 u_hat (the unit Hopf direction) and
P_h the projection onto the complement of span(u_hat, v):

    G = t_u^2 u_hat u_hat^T + (H^2 / rho^2) v v^T + (F^2 / rho^2) P_h

The complex structure rotates the normal N into the unit Reeb vector and
agrees with J0 on horizontal vectors.  These charts are the finite-difference
oracle for the closed-form tube curvature.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from ..config import FD_ORDER, FD_STEP, RESIDUAL_TOL
from ..errors import UnsupportedInputError
from ..finite_difference import gradient, hessian
from ..frame_geometry import ChartMetric, christoffel_chart, fd_curvature_oracle
from ..parallel import parallel_map
from ..zoo.charts import standard_complex_structure
from .curvature import hessian_spectrum, tube_ricci
from .tube import WarpedProductMetric

logger = logging.getLogger(__name__)

_J0 = standard_complex_structure(4)
_DIRECTION = np.array([0.6, -0.2, 0.7, 0.3]) / np.linalg.norm([0.6, -0.2, 0.7, 0.3])


def _require_hopf_base(w: WarpedProductMetric, tol: float = 1e-6) -> None:
    if w.n != 1:
        raise UnsupportedInputError(f"{w.name}: chart form needs complex dimension 1, got {w.n}")
    if abs(w.k - 4.0) > tol or abs(abs(w.contact_scale) - 1.0) > tol:
        raise UnsupportedInputError(
            f"{w.name}: chart form needs the round Hopf base (k=4, a=1), "
            f"got k={w.k:g}, a={w.contact_scale:g}"
        )


def _polar(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    rho = np.linalg.norm(x, axis=-1)
    u_hat = x / rho[..., None]
    v = -np.einsum("ab,...b->...a", _J0, u_hat)
    p_h = np.eye(4) - np.einsum("...a,...b->...ab", u_hat, u_hat) - np.einsum(
        "...a,...b->...ab", v, v
    )
    return rho, u_hat, v, p_h


def tube_chart(w: WarpedProductMetric) -> ChartMetric:
    """Chart metric, potential and complex structure of a tube over the Hopf sphere.

    Raises:
        UnsupportedInputError: If the base is not the round Hopf 3-sphere
    """
    _require_hopf_base(w)
    u_min = w.param_interval[0]

    def data(x: np.ndarray):
        x = np.asarray(x, dtype=float)
        rho, u_hat, v, p_h = _polar(x)
        t_u, H, F, f = (np.reshape(a, rho.shape) for a in w.chart_data((u_min + rho).ravel()))
        return rho, u_hat, v, p_h, t_u, H, F, f

    def metric_at(x: np.ndarray) -> np.ndarray:
        rho, u_hat, v, p_h, t_u, H, F, _ = data(x)
        outer = np.einsum("...a,...b->...ab", u_hat, u_hat)
        reeb = np.einsum("...a,...b->...ab", v, v)
        return (
            (t_u * t_u)[..., None, None] * outer
            + (H * H / (rho * rho))[..., None, None] * reeb
            + (F * F / (rho * rho))[..., None, None] * p_h
        )

    def potential(x: np.ndarray) -> np.ndarray:
        return data(x)[-1]

    def complex_structure_at(x: np.ndarray) -> np.ndarray:
        rho, u_hat, v, p_h, t_u, H, _, _ = data(x)
        return (
            -(t_u * rho / H)[..., None, None] * np.einsum("...a,...b->...ab", v, u_hat)
            + (H / (rho * t_u))[..., None, None] * np.einsum("...a,...b->...ab", u_hat, v)
            + np.einsum("ab,...bc->...ac", _J0, p_h)
        )

    return ChartMetric(
        dim=4,
        metric_at=metric_at,
        scalar_field_at=potential,
        complex_structure_at=complex_structure_at,
        name=f"{w.name}/chart",
    )


def chart_points(
    w: WarpedProductMetric, params: np.ndarray, direction: np.ndarray | None = None
) -> np.ndarray:
    """Chart points on the ray through *direction* at the given slice parameters."""
    d = _DIRECTION if direction is None else np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    rho = np.asarray(params, dtype=float) - w.param_interval[0]
    return rho[:, None] * d[None, :]


@dataclass(frozen=True)
class ChartCheck:
    """Closed-form tube quantities against finite differences on the chart."""

    errors: dict[str, float]
    tol: float

    @property
    def ok(self) -> bool:
        return all(v <= self.tol for v in self.errors.values())


def _unit_frame(w: WarpedProductMetric, x: np.ndarray) -> tuple[np.ndarray, ...]:
    """(N, zeta_hat, X_hat) as g-unit coordinate vectors at a chart point."""
    rho, u_hat, v, p_h = _polar(x[None, :])
    t_u, H, F, _ = w.chart_data(w.param_interval[0] + rho)
    horizontal = p_h[0] @ np.array([1.0, 0.0, 0.0, 0.0])
    if np.linalg.norm(horizontal) < 0.3:
        horizontal = p_h[0] @ np.array([0.0, 0.0, 1.0, 0.0])
    horizontal /= np.linalg.norm(horizontal)
    return (
        u_hat[0] / t_u[0],
        rho[0] * v[0] / H[0],
        rho[0] * horizontal / F[0],
    )


def chart_ricci_check(
    w: WarpedProductMetric,
    params: np.ndarray,
    step: float = FD_STEP,
    order: int = FD_ORDER,
    tol: float = RESIDUAL_TOL,
) -> ChartCheck:
    """Compare tube_ricci with the finite-difference Ricci tensor of tube_chart."""
    chart = tube_chart(w)
    params = np.asarray(params, dtype=float)
    points = chart_points(w, params)
    closed = tube_ricci(w, params)

    def one(i: int) -> dict[str, float]:
        report = fd_curvature_oracle(chart, points[i], step, order)
        n, z, h = _unit_frame(w, points[i])
        rc = report.ricci
        return {
            "normal": abs(float(n @ rc @ n) - float(closed.normal[i])),
            "reeb": abs(float(z @ rc @ z) - float(closed.reeb[i])),
            "horizontal": abs(float(h @ rc @ h) - float(closed.horizontal[i])),
            "mixed": max(abs(float(n @ rc @ h)), abs(float(n @ rc @ z))),
        }

    per_point = parallel_map(one, range(len(params)))
    errors = {key: max(e[key] for e in per_point) for key in per_point[0]}
    logger.debug("%s: chart Ricci errors %s", w.name, errors)
    return ChartCheck(errors=errors, tol=tol)


def chart_hessian_eigenvalues(
    chart: ChartMetric, points: np.ndarray, step: float = FD_STEP, order: int = FD_ORDER
) -> np.ndarray:
    """Eigenvalues of Hess f relative to g at each point, ascending; shape (m, dim)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    gamma = christoffel_chart(chart, pts, step, order)
    df = gradient(chart.potential, pts, step, order)
    hess = hessian(chart.potential, pts, step, order) - np.einsum("mkij,mk->mij", gamma, df)
    g = chart.metric(pts)
    return np.stack([eigh(0.5 * (h + h.T), gi, eigvals_only=True) for h, gi in zip(hess, g)])


def chart_hessian_check(
    w: WarpedProductMetric,
    params: np.ndarray,
    step: float = FD_STEP,
    order: int = FD_ORDER,
    tol: float = RESIDUAL_TOL,
) -> ChartCheck:
    """Compare the closed-form Hess f spectrum with the generalized eigenproblem on the chart."""
    params = np.asarray(params, dtype=float)
    chart = tube_chart(w)
    fd = chart_hessian_eigenvalues(chart, chart_points(w, params), step, order)
    spectrum = hessian_spectrum(w, params)
    closed = np.stack([spectrum.eigenvalues(i) for i in range(len(params))])
    return ChartCheck(errors={"hess_f": float(np.max(np.abs(fd - closed)))}, tol=tol)
