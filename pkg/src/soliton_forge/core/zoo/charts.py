"""
Coordinate-chart reference geometries.

All evaluators are vectorized: points of shape (..., dim) map to
(..., dim, dim) for metrics and complex structures and to (...,) for
potentials.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from ..frame_geometry import ChartMetric

ScalarFn = Callable[[np.ndarray], np.ndarray]


def standard_complex_structure(dim: int) -> np.ndarray:
    """J0 on R^dim: J0 e_{2i} = e_{2i+1}, J0 e_{2i+1} = -e_{2i}."""
    if dim % 2:
        raise ValueError(f"complex structure needs an even dimension, got {dim}")
    j = np.zeros((dim, dim))
    for i in range(0, dim, 2):
        j[i + 1, i] = 1.0
        j[i, i + 1] = -1.0
    return j


def _constant_field(matrix: np.ndarray) -> ScalarFn:
    def at(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(matrix, x.shape[:-1] + matrix.shape).copy()

    return at


def flat_chart(dim: int, name: str = "flat") -> ChartMetric:
    j = standard_complex_structure(dim) if dim % 2 == 0 else None
    return ChartMetric(
        dim=dim,
        metric_at=_constant_field(np.eye(dim)),
        complex_structure_at=_constant_field(j) if j is not None else None,
        name=name,
    )


def quadratic_soliton(
    weights: np.ndarray, name: str = "quadratic"
) -> tuple[ChartMetric, ScalarFn]:
    """Flat metric with f = 1/2 sum_i w_i x_i^2.

    A gradient Ricci soliton exactly when all weights are equal; unequal
    weights give a J-non-invariant Hessian.
    """
    w = np.asarray(weights, dtype=float)
    dim = w.shape[0]

    def potential(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return 0.5 * np.sum(w * x * x, axis=-1)

    base = flat_chart(dim, name)
    chart = ChartMetric(
        dim=dim,
        metric_at=base.metric_at,
        scalar_field_at=potential,
        complex_structure_at=base.complex_structure_at,
        name=name,
    )
    return chart, potential


def gaussian_soliton(dim: int, lam: float) -> tuple[ChartMetric, ScalarFn]:
    """Flat R^dim with f = (lam/2)|x|^2, so Hess f = lam g and Rc = 0."""
    if dim < 2 or dim % 2:
        raise ValueError(f"Gaussian soliton needs an even dimension >= 2, got {dim}")
    return quadratic_soliton(np.full(dim, float(lam)), name=f"gaussian{dim}({lam:g})")


def cigar_soliton() -> tuple[ChartMetric, ScalarFn]:
    """Steady soliton on R^2: g = (dx^2 + dy^2)/(1 + r^2), f = -log(1 + r^2).

    Gaussian curvature 2/(1 + r^2); S + |grad f|^2 = 4.
    """

    def metric_at(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        factor = 1.0 / (1.0 + np.sum(x * x, axis=-1))
        return factor[..., None, None] * np.eye(2)

    def potential(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return -np.log1p(np.sum(x * x, axis=-1))

    chart = ChartMetric(
        dim=2,
        metric_at=metric_at,
        scalar_field_at=potential,
        complex_structure_at=_constant_field(standard_complex_structure(2)),
        name="cigar",
    )
    return chart, potential


def product_cigar_plane(epsilon: float = 0.0) -> tuple[ChartMetric, ScalarFn]:
    """Cigar x flat R^2 with f = -log(1 + x1^2 + x2^2) + epsilon x1 x3.

    epsilon = 0 is a steady soliton; epsilon != 0 breaks the soliton equation.
    """

    def metric_at(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        factor = 1.0 / (1.0 + x[..., 0] ** 2 + x[..., 1] ** 2)
        g = np.zeros(x.shape[:-1] + (4, 4))
        g[..., 0, 0] = factor
        g[..., 1, 1] = factor
        g[..., 2, 2] = 1.0
        g[..., 3, 3] = 1.0
        return g

    def potential(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return -np.log1p(x[..., 0] ** 2 + x[..., 1] ** 2) + epsilon * x[..., 0] * x[..., 2]

    chart = ChartMetric(
        dim=4,
        metric_at=metric_at,
        scalar_field_at=potential,
        complex_structure_at=_constant_field(standard_complex_structure(4)),
        name=f"cigar_x_plane({epsilon:g})",
    )
    return chart, potential


def stereographic_sphere_chart(radius: float = 1.0, dim: int = 2) -> ChartMetric:
    """Round sphere of the given radius: g = 4 R^4 / (R^2 + |x|^2)^2 delta."""
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    r2 = radius * radius

    def metric_at(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        factor = 4.0 * r2 * r2 / (r2 + np.sum(x * x, axis=-1)) ** 2
        return factor[..., None, None] * np.eye(dim)

    return ChartMetric(dim=dim, metric_at=metric_at, name=f"sphere{dim}({radius:g})")


def heisenberg_coframe(x: np.ndarray) -> np.ndarray:
    """theta[i, a] dual to e1 = d_x - y d_z, e2 = d_y + x d_z, e3 = d_z.

    theta^3 = dz + y dx - x dy; [e1, e2] = 2 e3.
    """
    x = np.asarray(x, dtype=float)
    p = np.broadcast_to(np.eye(3), x.shape[:-1] + (3, 3)).copy()
    p[..., 2, 0] = x[..., 1]
    p[..., 2, 1] = -x[..., 0]
    return p


def heisenberg_chart() -> ChartMetric:
    """Left-invariant Heisenberg metric in exponential coordinates: G = P^T P."""

    def metric_at(x: np.ndarray) -> np.ndarray:
        p = heisenberg_coframe(x)
        return np.einsum("...ia,...ib->...ab", p, p)

    return ChartMetric(dim=3, metric_at=metric_at, name="heisenberg_chart")
