"""
Exact curvature on homogeneous frames and a finite-difference curvature oracle.

Conventions (shared by both computation paths):

    [e_i, e_j]            = sum_k c[k, i, j] e_k
    nabla_{e_i} e_j       = sum_k Gamma[k, i, j] e_k
    R(X, Y)Z              = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
    riemann[i, j, k, l]   = g(R(e_i, e_j) e_k, e_l)
    ricci[j, k]           = sum_{i,l} g^{il} riemann[i, j, k, l]
    K(X, Y)               = riemann(X, Y, Y, X) / (|X|^2 |Y|^2 - g(X, Y)^2)

On a frame the metric components are constant, so the Koszul formula reduces
to an algebraic expression in the structure constants.  On a chart the
Christoffel symbols come from central differences of the metric and the
Riemann tensor from central differences of the Christoffel symbols.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .config import CONNECTION_TOL, FD_ORDER, FD_STEP, JACOBI_TOL, SYMMETRY_TOL
from .errors import (
    DegenerateChartError,
    DegeneratePlaneError,
    DimensionMismatchError,
    FrameError,
)
from .finite_difference import gradient

logger = logging.getLogger(__name__)

PointFn = Callable[[np.ndarray], np.ndarray]


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


# =============================================================================
# Domain types
# =============================================================================


@dataclass(frozen=True)
class StructureFrame:
    """Left-invariant frame of a Lie group: structure constants plus a constant metric."""

    structure_constants: np.ndarray  # c[k, i, j]
    metric: np.ndarray  # g[i, j]
    name: str = "frame"

    def __post_init__(self) -> None:
        c = _frozen(self.structure_constants)
        g = _frozen(self.metric)
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "metric", g)

        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise FrameError(f"structure constants must be (n, n, n), got {c.shape}")
        n = c.shape[0]
        if g.shape != (n, n):
            raise FrameError(f"metric must be ({n}, {n}), got {g.shape}")
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c + np.swapaxes(c, 1, 2))) > SYMMETRY_TOL * scale:
            raise FrameError("structure constants are not antisymmetric in the lower indices")
        jacobi = jacobi_residual(c)
        if jacobi > JACOBI_TOL * scale * scale:
            raise FrameError(f"Jacobi identity fails (residual {jacobi:.3e})")
        if np.max(np.abs(g - g.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(g)))):
            raise FrameError("frame metric is not symmetric")
        if np.min(np.linalg.eigvalsh(g)) <= 0.0:
            raise FrameError("frame metric is not positive-definite")

    @property
    def dim(self) -> int:
        return int(self.metric.shape[0])

    @property
    def inverse_metric(self) -> np.ndarray:
        return np.linalg.inv(self.metric)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[X, Y] for frame-constant vector fields X, Y."""
        return np.einsum("kij,i,j->k", self.structure_constants, x, y)

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.asarray(x) @ self.metric @ np.asarray(y))

    def with_metric(self, metric: np.ndarray, name: str | None = None) -> StructureFrame:
        return StructureFrame(self.structure_constants, metric, name or self.name)

    def orthonormalized(self) -> tuple[StructureFrame, np.ndarray]:
        """Return (frame, basis) with an orthonormal metric.

        Column a of *basis* holds the new vector e'_a in old frame coordinates.
        """
        lower = np.linalg.cholesky(self.metric)
        basis = np.linalg.inv(lower).T
        inv_basis = np.linalg.inv(basis)
        c = np.einsum(
            "kl,lij,ia,jb->kab", inv_basis, self.structure_constants, basis, basis
        )
        return StructureFrame(c, np.eye(self.dim), f"{self.name}/on"), basis


@dataclass(frozen=True)
class ChartMetric:
    """Metric given in a coordinate chart by vectorized evaluators.

    ``metric_at`` maps points of shape (..., dim) to (..., dim, dim);
    ``scalar_field_at`` maps (..., dim) to (...,);
    ``complex_structure_at`` returns the (1,1)-tensor J[a, b] with (JX)^a = J[a, b] X^b.
    """

    dim: int
    metric_at: PointFn
    scalar_field_at: PointFn | None = None
    complex_structure_at: PointFn | None = None
    name: str = "chart"

    def metric(self, points: np.ndarray) -> np.ndarray:
        """Evaluate the metric, rejecting non-symmetric or non-positive values."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"{self.name}: points have dimension {pts.shape[-1]}, chart has {self.dim}"
            )
        g = np.asarray(self.metric_at(pts), dtype=float)
        asym = np.max(np.abs(g - np.swapaxes(g, -1, -2))) if g.size else 0.0
        if asym > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(g)))):
            raise DegenerateChartError(f"{self.name}: metric is not symmetric ({asym:.3e})")
        eig = np.linalg.eigvalsh(g)
        if not np.all(np.isfinite(eig)) or np.min(eig) <= 0.0:
            raise DegenerateChartError(f"{self.name}: metric is not positive-definite")
        return g

    def potential(self, points: np.ndarray) -> np.ndarray:
        if self.scalar_field_at is None:
            raise ValueError(f"{self.name}: no scalar field attached to this chart")
        return np.asarray(self.scalar_field_at(np.asarray(points, dtype=float)), dtype=float)


@dataclass(frozen=True)
class CurvatureReport:
    """Riemann, Ricci and scalar curvature plus named residual norms."""

    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    metric: np.ndarray
    residual_norms: dict[str, float] = field(default_factory=dict)

    def sectional(self, x: np.ndarray, y: np.ndarray) -> float:
        return sectional_curvature(self.riemann, self.metric, x, y)


# =============================================================================
# Shared tensor algebra
# =============================================================================


def jacobi_residual(c: np.ndarray) -> float:
    """Sup-norm of the Jacobi identity for structure constants c[k, i, j]."""
    t1 = np.einsum("mij,lmk->ijkl", c, c)
    t2 = np.einsum("mjk,lmi->ijkl", c, c)
    t3 = np.einsum("mki,lmj->ijkl", c, c)
    return float(np.max(np.abs(t1 + t2 + t3))) if c.size else 0.0


def _assemble(rup: np.ndarray, metric: np.ndarray) -> tuple[np.ndarray, ...]:
    """Lower R^l_{k i j} to riemann[i, j, k, l]; contract Ricci and scalar two ways.

    Works on a single point or on a leading batch axis.
    """
    ginv = np.linalg.inv(metric)
    riemann = np.einsum("...lp,...pkij->...ijkl", metric, rup)
    ricci = ricci_from_riemann(riemann, metric)
    ricci_direct = np.einsum("...ikij->...jk", rup)
    scalar = np.einsum("...jk,...jk->...", ginv, ricci)
    scalar_direct = np.einsum("...il,...jk,...ijkl->...", ginv, ginv, riemann)

    residuals = {
        "antisymmetry": riemann + np.swapaxes(riemann, -4, -3),
        "antisymmetry_last": riemann + np.swapaxes(riemann, -2, -1),
        "pair_symmetry": riemann - np.einsum("...ijkl->...klij", riemann),
        "bianchi": riemann
        + np.einsum("...jkil->...ijkl", riemann)
        + np.einsum("...kijl->...ijkl", riemann),
        "ricci_symmetry": ricci - np.swapaxes(ricci, -1, -2),
        "ricci_trace": ricci - ricci_direct,
        "scalar_trace": scalar - scalar_direct,
    }
    return riemann, ricci, scalar, residuals


def _sup(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def ricci_from_riemann(riemann: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """ricci[j, k] = sum g^{il} riemann[i, j, k, l]; accepts a leading batch axis."""
    return np.einsum("...il,...ijkl->...jk", np.linalg.inv(metric), riemann)


def sectional_curvature(
    riemann: np.ndarray, metric: np.ndarray, x: np.ndarray, y: np.ndarray
) -> float:
    """Sectional curvature of span{X, Y}.

    Raises:
        DegeneratePlaneError: If X and Y are (numerically) linearly dependent
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xx, yy, xy = x @ metric @ x, y @ metric @ y, x @ metric @ y
    area = xx * yy - xy * xy
    if area <= 1e-14 * max(xx * yy, 1e-300):
        raise DegeneratePlaneError("vectors do not span a plane")
    return float(np.einsum("ijkl,i,j,k,l->", riemann, x, y, y, x) / area)


# =============================================================================
# Frame path (exact)
# =============================================================================


def levi_civita_frame(frame: StructureFrame) -> np.ndarray:
    """Connection coefficients Gamma[k, i, j] of a frame via the Koszul formula.

    2 g(nabla_i e_j, e_k) = g([e_i,e_j],e_k) - g([e_j,e_k],e_i) + g([e_k,e_i],e_j)
    """
    c = frame.structure_constants
    g = frame.metric
    c_low = np.einsum("mij,mk->ijk", c, g)
    gamma_low = 0.5 * (
        c_low - np.einsum("jki->ijk", c_low) + np.einsum("kij->ijk", c_low)
    )
    return np.einsum("kl,ijl->kij", frame.inverse_metric, gamma_low)


def connection_residuals(frame: StructureFrame, gamma: np.ndarray) -> dict[str, float]:
    """Torsion and metric-compatibility residuals of frame coefficients."""
    torsion = gamma - np.swapaxes(gamma, 1, 2) - frame.structure_constants
    gamma_low = np.einsum("kij,kl->ijl", gamma, frame.metric)
    compat = gamma_low + np.swapaxes(gamma_low, 1, 2)
    return {"torsion": _sup(torsion), "metric_compatibility": _sup(compat)}


def _frame_rup(frame: StructureFrame, gamma: np.ndarray) -> np.ndarray:
    c = frame.structure_constants
    return (
        np.einsum("lip,pjk->lkij", gamma, gamma)
        - np.einsum("ljp,pik->lkij", gamma, gamma)
        - np.einsum("pij,lpk->lkij", c, gamma)
    )


def curvature_frame(frame: StructureFrame) -> CurvatureReport:
    """Exact curvature report of a homogeneous frame."""
    gamma = levi_civita_frame(frame)
    riemann, ricci, scalar, residuals = _assemble(_frame_rup(frame, gamma), frame.metric)
    norms = {name: _sup(v) for name, v in residuals.items()}
    norms.update(connection_residuals(frame, gamma))
    if norms["torsion"] > CONNECTION_TOL or norms["metric_compatibility"] > CONNECTION_TOL:
        logger.warning("%s: connection residuals %s", frame.name, norms)
    return CurvatureReport(
        riemann=riemann,
        ricci=ricci,
        scalar=float(scalar),
        metric=np.array(frame.metric),
        residual_norms=norms,
    )


def covariant_derivative_endomorphism(
    frame: StructureFrame, gamma: np.ndarray, t: np.ndarray
) -> np.ndarray:
    """(nabla_{e_i} T)(e_j) for a frame-constant endomorphism T.

    Returns D with D[i] the matrix of nabla_{e_i} T, i.e.
    D[i, l, j] = component l of (nabla_{e_i} T)(e_j) = [Gamma_i, T][l, j]
    where Gamma_i[l, k] = Gamma[l, i, k].

    Raises:
        DimensionMismatchError: If T is not a square matrix of frame dimension
    """
    t = np.asarray(t, dtype=float)
    n = frame.dim
    if t.shape != (n, n) or gamma.shape != (n, n, n):
        raise DimensionMismatchError(
            f"expected ({n}, {n}) endomorphism and ({n}, {n}, {n}) connection, "
            f"got {t.shape} and {gamma.shape}"
        )
    return np.einsum("lik,kj->ilj", gamma, t) - np.einsum("lk,kij->ilj", t, gamma)


# =============================================================================
# Chart path (finite differences)
# =============================================================================


def christoffel_chart(
    chart: ChartMetric, points: np.ndarray, step: float = FD_STEP, order: int = FD_ORDER
) -> np.ndarray:
    """Gamma[m, k, i, j] at every point from central differences of the metric."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    g = chart.metric(pts)
    dg = gradient(chart.metric, pts, step, order)  # dg[m, a, i, j] = d_a g_ij
    lower = 0.5 * (
        dg + np.transpose(dg, (0, 2, 1, 3)) - np.transpose(dg, (0, 2, 3, 1))
    )  # lower[m, i, j, l] = Gamma_{ij l}
    return np.einsum("mkl,mijl->mkij", np.linalg.inv(g), lower)


def _chart_rup(
    chart: ChartMetric, pts: np.ndarray, step: float, order: int
) -> tuple[np.ndarray, np.ndarray]:
    def gamma_fn(p: np.ndarray) -> np.ndarray:
        return christoffel_chart(chart, p, step, order)

    gamma = gamma_fn(pts)
    dgamma = gradient(gamma_fn, pts, step, order)  # dgamma[m, a, l, i, j] = d_a Gamma^l_ij
    rup = (
        np.einsum("miljk->mlkij", dgamma)
        - np.einsum("mjlik->mlkij", dgamma)
        + np.einsum("mlip,mpjk->mlkij", gamma, gamma)
        - np.einsum("mljp,mpik->mlkij", gamma, gamma)
    )
    return rup, gamma


def curvature_chart(
    chart: ChartMetric, points: np.ndarray, step: float = FD_STEP, order: int = FD_ORDER
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Batched (riemann, ricci, scalar, metric) at every point of a chart."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rup, _ = _chart_rup(chart, pts, step, order)
    metric = chart.metric(pts)
    riemann, ricci, scalar, _ = _assemble(rup, metric)
    return riemann, ricci, scalar, metric


def riemann_chart(
    chart: ChartMetric, points: np.ndarray, step: float = FD_STEP, order: int = FD_ORDER
) -> np.ndarray:
    """riemann[m, i, j, k, l] at every point."""
    return curvature_chart(chart, points, step, order)[0]


def scalar_curvature_chart(
    chart: ChartMetric, points: np.ndarray, step: float = FD_STEP, order: int = FD_ORDER
) -> np.ndarray:
    """Scalar curvature at every point; shape (m,)."""
    return curvature_chart(chart, points, step, order)[2]


def fd_curvature_oracle(
    chart: ChartMetric,
    point: np.ndarray,
    step: float = FD_STEP,
    order: int = FD_ORDER,
) -> CurvatureReport:
    """Finite-difference curvature report at one chart point.

    Args:
        chart: Chart metric (vectorized evaluators)
        point: Coordinate array of length chart.dim
        step: Stencil spacing (default 1e-3)
        order: Stencil order, 4 (default) or 8

    Raises:
        DegenerateChartError: If the metric is not positive-definite at a stencil point
    """
    pts = np.asarray(point, dtype=float).reshape(1, chart.dim)
    rup, _ = _chart_rup(chart, pts, step, order)
    metric = chart.metric(pts)
    riemann, ricci, scalar, residuals = _assemble(rup[0], metric[0])
    return CurvatureReport(
        riemann=riemann,
        ricci=ricci,
        scalar=float(scalar),
        metric=metric[0],
        residual_norms={name: _sup(v) for name, v in residuals.items()},
    )


def transform_covariant(tensor: np.ndarray, coframe: np.ndarray) -> np.ndarray:
    """Express a covariant frame tensor in coordinates.

    coframe[i, a] is the a-th coordinate component of the dual form theta^i.
    """
    out = np.asarray(tensor, dtype=float)
    for _ in range(out.ndim):
        out = np.tensordot(out, coframe, axes=([0], [0]))
    return out
