"""
Numerical consequences of the gradient soliton equation  Rc + Hess f = lam g.

A SolitonSample is either a coordinate chart with a potential, evaluated by
finite differences, or a cohomogeneity-one tube, evaluated through its
one-dimensional reduction (grad phi = phi' N, Delta phi = phi'' + tr L phi').

The identities checked are

    S + Delta f = dim lam
    Rc(grad f) = 1/2 grad S
    S + |grad f|^2 - 2 lam f = const        (per connected component)
    Delta S + 2 |Rc|^2 = <grad f, grad S> + 2 lam S

and they are only meaningful once the soliton equation itself holds, so
soliton_identities refuses samples whose soliton residual is too large.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline

from .config import (
    FD_ORDER,
    FD_STEP,
    FIT_TOL,
    GRADIENT_FLOOR,
    IDENTITY_FD_ORDER,
    IDENTITY_FD_STEP,
    IDENTITY_TOL,
    KILLING_RESIDUAL_TOL,
    LEVEL_SET_STEP,
    LEVEL_SET_STEPS,
    PARALLEL_TOL,
    RECTIFIABLE_TOL,
    RESIDUAL_TOL,
    SOLITON_PRECONDITION,
)
from .errors import InconclusiveError, NotASolitonError, UnsupportedInputError
from .finite_difference import derivative_1d, gradient, hessian
from .frame_geometry import (
    ChartMetric,
    PointFn,
    christoffel_chart,
    curvature_chart,
    scalar_curvature_chart,
)
from .parallel import parallel_map
from .soliton.chart import chart_hessian_eigenvalues, chart_points, tube_chart
from .soliton.curvature import equation_residuals, hessian_spectrum, ricci_from_jet
from .soliton.tube import WarpedProductMetric, shape_from_jet

logger = logging.getLogger(__name__)

ScalarFn = PointFn


# =============================================================================
# Samples
# =============================================================================


@dataclass(frozen=True, eq=False)
class SolitonSample:
    """Metric, potential and soliton constant with the points to test at.

    For charts ``points`` has shape (m, dim); for tubes it holds m slice
    parameters.  ``components`` labels the connected component of each point.
    """

    geometry: ChartMetric | WarpedProductMetric
    lam: float
    points: np.ndarray
    potential: ScalarFn | None = None
    components: np.ndarray | None = None
    complex_structure: PointFn | None = None
    name: str = ""

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if self.is_tube:
            pts = np.atleast_1d(pts)
            lo, hi = self.geometry.param_interval
            if pts.ndim != 1 or np.any(pts <= lo) or np.any(pts >= hi):
                raise ValueError(f"tube sample parameters must lie inside ({lo}, {hi})")
        else:
            pts = np.atleast_2d(pts)
            if pts.shape[1] != self.geometry.dim:
                raise ValueError(
                    f"sample points have dimension {pts.shape[1]}, chart has {self.geometry.dim}"
                )
            if self.potential is None:
                object.__setattr__(self, "potential", self.geometry.potential)
            if self.complex_structure is None:
                object.__setattr__(
                    self, "complex_structure", self.geometry.complex_structure_at
                )
        object.__setattr__(self, "points", pts)

        labels = (
            np.zeros(len(pts), dtype=int)
            if self.components is None
            else np.asarray(self.components, dtype=int)
        )
        if labels.shape != (len(pts),):
            raise ValueError(f"expected {len(pts)} component labels, got {labels.shape}")
        object.__setattr__(self, "components", labels)
        if not self.name:
            object.__setattr__(self, "name", self.geometry.name)

        values = self.f_values()
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.name}: potential is not finite at every sample point")

    @property
    def is_tube(self) -> bool:
        return isinstance(self.geometry, WarpedProductMetric)

    @property
    def dim(self) -> int:
        return self.geometry.dim

    def f_values(self) -> np.ndarray:
        if self.is_tube:
            return self.geometry.jet_at_param(self.points).f
        return np.asarray(self.potential(self.points), dtype=float)

    @classmethod
    def from_chart(
        cls,
        chart: ChartMetric,
        lam: float,
        points: np.ndarray,
        potential: ScalarFn | None = None,
        components: np.ndarray | None = None,
    ) -> SolitonSample:
        return cls(
            geometry=chart, lam=lam, points=points, potential=potential, components=components
        )

    @classmethod
    def from_tube(
        cls,
        w: WarpedProductMetric,
        lam: float,
        params: np.ndarray | None = None,
        size: int = 64,
        via_chart: bool = False,
    ) -> SolitonSample:
        """Sample a tube on interior slices.

        With via_chart the tube is written on R^4 (Hopf base only) and the
        sample is a chart sample on a ray.
        """
        if params is None:
            lo, hi = w.param_interval
            params = w.interior_params(size, margin=0.05 * (hi - lo))
        params = np.asarray(params, dtype=float)
        if via_chart:
            chart = tube_chart(w)
            return cls(geometry=chart, lam=lam, points=chart_points(w, params), name=chart.name)
        return cls(geometry=w, lam=lam, points=params)


# =============================================================================
# Pointwise fields
# =============================================================================


@dataclass(frozen=True, eq=False)
class PointFields:
    """Scalar invariants of (g, f) at the sample points (arrays over points)."""

    f: np.ndarray
    scalar: np.ndarray
    grad_f_sq: np.ndarray
    lap_f: np.ndarray
    ricci_grad_f: np.ndarray  # |Rc(grad f) - 1/2 grad S|
    ricci_sq: np.ndarray
    grad_f_dot_grad_s: np.ndarray
    lap_s: np.ndarray


def _chart_point(
    sample: SolitonSample, p: np.ndarray, step: float, order: int
) -> tuple[float, ...]:
    chart = sample.geometry
    f = sample.potential
    pts = p[None, :]
    gamma = christoffel_chart(chart, pts, step, order)[0]
    _, ricci, scalar, metric = curvature_chart(chart, pts, step, order)
    ricci, g = ricci[0], metric[0]
    ginv = np.linalg.inv(g)

    df = gradient(f, pts, step, order)[0]
    hess_f = hessian(f, pts, step, order)[0] - np.einsum("kij,k->ij", gamma, df)

    def s_fn(q: np.ndarray) -> np.ndarray:
        return scalar_curvature_chart(chart, q, step, order)

    ds = gradient(s_fn, pts, step, order)[0]
    hess_s = hessian(s_fn, pts, step, order)[0] - np.einsum("kij,k->ij", gamma, ds)

    grad_f = ginv @ df
    mismatch = ricci @ grad_f - 0.5 * ds
    ricci_up = ginv @ ricci @ ginv
    return (
        float(f(pts)[0]),
        float(scalar[0]),
        float(df @ grad_f),
        float(np.sum(ginv * hess_f)),
        float(np.sqrt(max(mismatch @ ginv @ mismatch, 0.0))),
        float(np.sum(ricci_up * ricci)),
        float(ds @ grad_f),
        float(np.sum(ginv * hess_s)),
    )


def _tube_step(w: WarpedProductMetric) -> float:
    lo, hi = w.param_interval
    return 1e-3 * (hi - lo)


def point_fields(
    sample: SolitonSample, step: float = IDENTITY_FD_STEP, order: int = IDENTITY_FD_ORDER
) -> PointFields:
    """S, |grad f|^2, Delta f, |Rc|^2, Delta S and friends at every sample point.

    Charts use finite differences of the given step and order (S, grad S and
    Delta S need derivatives of the metric up to fourth order).  Tubes use the
    closed-form reduction with one-dimensional differences of S.
    """
    if sample.is_tube:
        return _tube_fields(sample)
    rows = parallel_map(lambda p: _chart_point(sample, p, step, order), list(sample.points))
    columns = np.array(rows, dtype=float).T
    return PointFields(*columns)


def _tube_fields(sample: SolitonSample) -> PointFields:
    w: WarpedProductMetric = sample.geometry
    u = sample.points
    jet = w.jet_at_param(u)
    rc = ricci_from_jet(jet, w.k, w.n, w.contact_scale)
    shape = shape_from_jet(jet, w.n)

    def scalar_of(params: np.ndarray) -> np.ndarray:
        return ricci_from_jet(w.jet_at_param(params), w.k, w.n, w.contact_scale).scalar

    step = _tube_step(w)
    s_u = derivative_1d(scalar_of, u, step, order=8)
    s_uu = derivative_1d(scalar_of, u, step, order=8, nth=2)
    t_u, t_uu = w.param_speed(u)
    s_t = s_u / t_u
    s_tt = s_uu / t_u**2 - s_u * t_uu / t_u**3

    return PointFields(
        f=jet.f,
        scalar=rc.scalar,
        grad_f_sq=jet.df**2,
        lap_f=jet.d2f + shape.trace * jet.df,
        ricci_grad_f=np.abs(rc.normal * jet.df - 0.5 * s_t),
        ricci_sq=rc.norm_sq,
        grad_f_dot_grad_s=jet.df * s_t,
        lap_s=s_tt + shape.trace * s_t,
    )


# =============================================================================
# Soliton equation and identities
# =============================================================================


def fd_soliton_residual(
    sample: SolitonSample, step: float = FD_STEP, order: int = FD_ORDER
) -> float:
    """Sup over the sample of |Rc + Hess f - lam g|_g.

    Tubes use the reduced system on the normal, Reeb and horizontal directions.
    """
    if sample.is_tube:
        w = sample.geometry
        jet = w.jet_at_param(sample.points)
        columns = equation_residuals(jet, sample.lam, w.k, w.n, w.contact_scale)
        return float(max(np.max(np.abs(v)) for v in columns.values()))

    chart = sample.geometry
    pts = sample.points
    gamma = christoffel_chart(chart, pts, step, order)
    _, ricci, _, g = curvature_chart(chart, pts, step, order)
    df = gradient(sample.potential, pts, step, order)
    hess_f = hessian(sample.potential, pts, step, order) - np.einsum("mkij,mk->mij", gamma, df)
    t = ricci + hess_f - sample.lam * g
    ginv = np.linalg.inv(g)
    norm_sq = np.einsum("mik,mjl,mij,mkl->m", ginv, ginv, t, t)
    return float(np.max(np.sqrt(np.maximum(norm_sq, 0.0))))


@dataclass(frozen=True)
class IdentityReport:
    """Sup-norm residuals of the four identities.

    ``conservation`` is the largest per-component standard deviation of
    S + |grad f|^2 - 2 lam f; ``constants`` holds the per-component means.
    """

    residuals: dict[str, float]
    constants: dict[int, float]
    precondition: float
    tol: float

    @property
    def failing(self) -> list[str]:
        return [name for name, value in self.residuals.items() if value > self.tol]

    @property
    def passed(self) -> bool:
        return not self.failing

    def to_dict(self) -> dict:
        return {
            "residuals": dict(self.residuals),
            "conservation_constants": {str(k): v for k, v in self.constants.items()},
            "soliton_residual": self.precondition,
            "tol": self.tol,
            "passed": self.passed,
        }


def soliton_identities(
    sample: SolitonSample,
    tol: float = IDENTITY_TOL,
    precondition_tol: float = SOLITON_PRECONDITION,
    step: float = IDENTITY_FD_STEP,
    order: int = IDENTITY_FD_ORDER,
) -> IdentityReport:
    """Residuals of the trace, Bianchi, conservation and Laplacian identities.

    Raises:
        NotASolitonError: If the soliton equation residual exceeds precondition_tol
    """
    residual = fd_soliton_residual(sample)
    if residual > precondition_tol:
        raise NotASolitonError(
            f"{sample.name}: soliton residual {residual:.3e} exceeds {precondition_tol:.1e}; "
            "the identities are consequences of the equation and cannot be tested"
        )

    fields = point_fields(sample, step, order)
    lam = sample.lam
    conserved = fields.scalar + fields.grad_f_sq - 2 * lam * fields.f

    constants: dict[int, float] = {}
    spread = 0.0
    for label in np.unique(sample.components):
        values = conserved[sample.components == label]
        constants[int(label)] = float(np.mean(values))
        spread = max(spread, float(np.std(values)))

    residuals = {
        "trace": float(np.max(np.abs(fields.scalar + fields.lap_f - sample.dim * lam))),
        "bianchi": float(np.max(fields.ricci_grad_f)),
        "conservation": spread,
        "laplacian": float(
            np.max(
                np.abs(
                    fields.lap_s
                    + 2 * fields.ricci_sq
                    - fields.grad_f_dot_grad_s
                    - 2 * lam * fields.scalar
                )
            )
        ),
    }
    report = IdentityReport(
        residuals=residuals, constants=constants, precondition=residual, tol=tol
    )
    logger.info("%s: identities %s", sample.name, residuals)
    return report


# =============================================================================
# Killing field J grad f
# =============================================================================


def _chart_and_points(
    sample: SolitonSample,
) -> tuple[ChartMetric, np.ndarray, PointFn, ScalarFn]:
    if sample.is_tube:
        chart = tube_chart(sample.geometry)
        pts = chart_points(sample.geometry, sample.points)
        return chart, pts, chart.complex_structure_at, chart.potential
    if sample.complex_structure is None:
        raise UnsupportedInputError(f"{sample.name}: no complex structure supplied")
    return sample.geometry, sample.points, sample.complex_structure, sample.potential


def killing_residual(sample: SolitonSample, step: float = FD_STEP, order: int = FD_ORDER) -> float:
    """Sup over the sample of |L_W g|_g with W = J grad f.

    (L_W g)_ij = W^c d_c g_ij + g_cj d_i W^c + g_ic d_j W^c

    Raises:
        UnsupportedInputError: If no complex structure is available (tubes need a Hopf base)
    """
    chart, pts, j_at, f = _chart_and_points(sample)

    def field(x: np.ndarray) -> np.ndarray:
        df = gradient(f, x, step, order)
        ginv = np.linalg.inv(chart.metric(x))
        return np.einsum("mab,mbc,mc->ma", j_at(x), ginv, df)

    w = field(pts)
    dw = gradient(field, pts, step, order)  # dw[m, i, c] = d_i W^c
    g = chart.metric(pts)
    dg = gradient(chart.metric, pts, step, order)  # dg[m, c, i, j]
    lie = (
        np.einsum("mc,mcij->mij", w, dg)
        + np.einsum("mcj,mic->mij", g, dw)
        + np.einsum("mic,mjc->mij", g, dw)
    )
    ginv = np.linalg.inv(g)
    norm_sq = np.einsum("mik,mjl,mij,mkl->m", ginv, ginv, lie, lie)
    value = float(np.max(np.sqrt(np.maximum(norm_sq, 0.0))))
    logger.debug("%s: |L_(J grad f) g| = %.3e", sample.name, value)
    return value


def killing_passes(value: float, tol: float = KILLING_RESIDUAL_TOL) -> bool:
    return value <= tol


# =============================================================================
# Rectifiability
# =============================================================================


@dataclass(frozen=True)
class RectifiabilityReport:
    """Three equivalent conditions on grad f and their residuals.

    rectifiable: |grad f| constant along level sets of f
    eigenvector: grad f is an eigenvector of Rc
    parallel: grad f and grad S are parallel
    """

    residuals: dict[str, float]
    tolerances: dict[str, float]
    skipped: int

    @property
    def passes(self) -> dict[str, bool]:
        return {k: v <= self.tolerances[k] for k, v in self.residuals.items()}

    @property
    def consistent(self) -> bool:
        return len(set(self.passes.values())) == 1

    @property
    def all_pass(self) -> bool:
        return all(self.passes.values())

    def require_consistent(self) -> None:
        """
        Raises:
            InconclusiveError: If the three conditions disagree
        """
        if not self.consistent:
            raise InconclusiveError(f"rectifiability conditions disagree: {self.passes}")

    def to_dict(self) -> dict:
        return {
            "residuals": dict(self.residuals),
            "passes": self.passes,
            "consistent": self.consistent,
            "skipped_points": self.skipped,
        }


def _g_norm(v: np.ndarray, g: np.ndarray) -> float:
    return float(np.sqrt(max(v @ g @ v, 0.0)))


def _gradient_vector(chart: ChartMetric, f: ScalarFn, x: np.ndarray) -> tuple[np.ndarray, ...]:
    pts = x[None, :]
    g = chart.metric(pts)[0]
    df = gradient(f, pts, FD_STEP, FD_ORDER)[0]
    return np.linalg.solve(g, df), g


def _trace_level_set(chart: ChartMetric, f: ScalarFn, p: np.ndarray) -> float:
    """Relative variation of |grad f| along a traced piece of the level set through p.

    Steps follow the tangential part of grad |grad f|^2 (any tangent direction
    when that vanishes) and are projected back onto the level set by Newton.
    """
    level = float(f(p[None, :])[0])

    def grad_sq(x: np.ndarray) -> np.ndarray:
        df = gradient(f, x, FD_STEP, FD_ORDER)
        ginv = np.linalg.inv(chart.metric(x))
        return np.einsum("ma,mab,mb->m", df, ginv, df)

    x = p.copy()
    grad, g = _gradient_vector(chart, f, x)
    norms = [_g_norm(grad, g)]
    fallback = np.linspace(1.0, 2.0, len(p))
    for _ in range(LEVEL_SET_STEPS):
        grad, g = _gradient_vector(chart, f, x)
        gn2 = float(grad @ g @ grad)
        direction = np.linalg.solve(g, gradient(grad_sq, x[None, :], FD_STEP, FD_ORDER)[0])
        tangent = direction - (direction @ g @ grad) / gn2 * grad
        if _g_norm(tangent, g) <= 1e-9 * (1.0 + _g_norm(direction, g)):
            tangent = fallback - (fallback @ g @ grad) / gn2 * grad
        x = x + LEVEL_SET_STEP * tangent / _g_norm(tangent, g)
        for _ in range(3):
            grad, g = _gradient_vector(chart, f, x)
            x = x - (float(f(x[None, :])[0]) - level) * grad / float(grad @ g @ grad)
        grad, g = _gradient_vector(chart, f, x)
        norms.append(_g_norm(grad, g))
    norms_arr = np.array(norms)
    return float((norms_arr.max() - norms_arr.min()) / max(norms_arr.mean(), GRADIENT_FLOOR))


def _chart_rectifiability_point(
    sample: SolitonSample, p: np.ndarray
) -> tuple[float, float, float] | None:
    chart, f = sample.geometry, sample.potential
    pts = p[None, :]
    grad, g = _gradient_vector(chart, f, p)
    grad_norm = _g_norm(grad, g)
    if grad_norm < GRADIENT_FLOOR:
        return None

    _, ricci, _, _ = curvature_chart(chart, pts, FD_STEP, FD_ORDER)
    rc_grad = np.linalg.solve(g, ricci[0] @ grad)
    mu = float(grad @ ricci[0] @ grad) / grad_norm**2
    eigen = _g_norm(rc_grad - mu * grad, g) / grad_norm

    def s_fn(q: np.ndarray) -> np.ndarray:
        return scalar_curvature_chart(chart, q, IDENTITY_FD_STEP, IDENTITY_FD_ORDER)

    grad_s = np.linalg.solve(g, gradient(s_fn, pts, IDENTITY_FD_STEP, IDENTITY_FD_ORDER)[0])
    s_norm = _g_norm(grad_s, g)
    if s_norm < GRADIENT_FLOOR:
        parallel = 0.0
    else:
        wedge = grad_norm**2 * s_norm**2 - float(grad @ g @ grad_s) ** 2
        parallel = float(np.sqrt(max(wedge, 0.0))) / (grad_norm * s_norm)

    return _trace_level_set(chart, f, p), eigen, parallel


def rectifiability_report(
    sample: SolitonSample,
    rectifiable_tol: float = RECTIFIABLE_TOL,
    parallel_tol: float = PARALLEL_TOL,
    max_slices: int = 8,
) -> RectifiabilityReport:
    """Check the three equivalent rectifiability conditions at every sample point.

    Points with |grad f| below GRADIENT_FLOOR are skipped and counted.  A tube
    sample is written on tube_chart and checked there on at most *max_slices*
    evenly spaced slices, since its slice reduction assumes all three.

    Raises:
        UnsupportedInputError: If a tube sample has no Hopf chart
    """
    tolerances = {
        "rectifiable": rectifiable_tol,
        "eigenvector": parallel_tol,
        "parallel": parallel_tol,
    }
    if sample.is_tube:
        stride = max(1, int(np.ceil(len(sample.points) / max_slices)))
        params = sample.points[::stride]
        sample = SolitonSample.from_tube(sample.geometry, sample.lam, params, via_chart=True)

    rows = parallel_map(lambda p: _chart_rectifiability_point(sample, p), list(sample.points))
    kept = [r for r in rows if r is not None]
    skipped = len(rows) - len(kept)
    if kept:
        arr = np.array(kept)
        residuals = {
            "rectifiable": float(arr[:, 0].max()),
            "eigenvector": float(arr[:, 1].max()),
            "parallel": float(arr[:, 2].max()),
        }
    else:
        residuals = {"rectifiable": 0.0, "eigenvector": 0.0, "parallel": 0.0}
    report = RectifiabilityReport(residuals, tolerances, skipped)
    if not report.consistent:
        logger.warning("%s: rectifiability conditions disagree %s", sample.name, report.passes)
    return report


# =============================================================================
# Transnormal / isoparametric fit
# =============================================================================


@dataclass(frozen=True, eq=False)
class ComponentFit:
    """b(f) = |grad f|^2 and a(f) = Delta f fitted on one component."""

    component: int
    f: np.ndarray
    b: np.ndarray
    a: np.ndarray
    b_scatter: float
    a_scatter: float
    witness: tuple[float, float, float] | None = None  # (f, b_1, b_2)

    def b_fit(self) -> CubicSpline | None:
        return _spline(self.f, self.b)

    def a_fit(self) -> CubicSpline | None:
        return _spline(self.f, self.a)


@dataclass(frozen=True, eq=False)
class TransnormalFit:
    components: list[ComponentFit]
    global_witness: tuple[float, float, float] | None
    segment: dict[str, float] | None
    tol: float
    critical_values: list[float] = field(default_factory=list)

    @property
    def transnormal(self) -> bool:
        local = all(c.b_scatter <= self.tol and c.witness is None for c in self.components)
        return local and self.global_witness is None

    @property
    def isoparametric(self) -> bool:
        return all(c.a_scatter <= self.tol for c in self.components)

    @property
    def global_functional(self) -> bool:
        return self.global_witness is None

    def table(self) -> list[dict[str, float]]:
        """Rows (component, f, b, a, b_fit, a_fit) for CSV output."""
        rows: list[dict[str, float]] = []
        for comp in self.components:
            b_fit, a_fit = comp.b_fit(), comp.a_fit()
            for f, b, a in zip(comp.f, comp.b, comp.a):
                rows.append(
                    {
                        "component": comp.component,
                        "f": float(f),
                        "b": float(b),
                        "a": float(a),
                        "b_fit": float(b_fit(f)) if b_fit is not None else float(b),
                        "a_fit": float(a_fit(f)) if a_fit is not None else float(a),
                    }
                )
        return rows

    def to_dict(self) -> dict:
        return {
            "transnormal": self.transnormal,
            "isoparametric": self.isoparametric,
            "global_functional": self.global_functional,
            "b_scatter": {str(c.component): c.b_scatter for c in self.components},
            "a_scatter": {str(c.component): c.a_scatter for c in self.components},
            "witness": {
                str(c.component): list(c.witness) for c in self.components if c.witness
            },
            "global_witness": list(self.global_witness) if self.global_witness else None,
            "critical_values": list(self.critical_values),
            "segment": self.segment,
        }


def _spline(x: np.ndarray, y: np.ndarray) -> CubicSpline | None:
    if len(x) < 2:
        return None
    return CubicSpline(x, y)


def _merge_levels(
    f: np.ndarray, b: np.ndarray, a: np.ndarray, tol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple[float, float, float] | None]:
    """Sort by f and merge coincident f-values; disagreeing b at one f is a witness."""
    order = np.argsort(f)
    f, b, a = f[order], b[order], a[order]
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    fs, bs, as_ = [f[0]], [b[0]], [a[0]]
    witness = None
    for fi, bi, ai in zip(f[1:], b[1:], a[1:]):
        if fi - fs[-1] <= 1e-12 * max(1.0, abs(fi)):
            if abs(bi - bs[-1]) > tol * scale and witness is None:
                witness = (float(fi), float(bs[-1]), float(bi))
            continue
        fs.append(fi)
        bs.append(bi)
        as_.append(ai)
    return np.array(fs), np.array(bs), np.array(as_), witness


def _holdout_scatter(x: np.ndarray, y: np.ndarray, breaks: list[float]) -> float:
    """Fit even-indexed points, measure the odd ones; segments split at critical values."""
    scale = max(1.0, float(np.max(np.abs(y))) if y.size else 1.0)
    worst = 0.0
    edges = [-np.inf, *sorted(breaks), np.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (x > lo) & (x < hi)
        xs, ys = x[mask], y[mask]
        if len(xs) < 3:
            continue
        train_x, train_y = xs[::2], ys[::2]
        test_x, test_y = xs[1::2], ys[1::2]
        inside = (test_x > train_x[0]) & (test_x < train_x[-1])
        if not np.any(inside):
            continue
        if len(train_x) >= 3:
            pred = CubicSpline(train_x, train_y)(test_x[inside])
        else:
            pred = np.interp(test_x[inside], train_x, train_y)
        worst = max(worst, float(np.max(np.abs(pred - test_y[inside]))) / scale)
    return worst


def _cross_witness(
    fits: list[ComponentFit], tol: float
) -> tuple[float, float, float] | None:
    """Compare component fits on their common f-range."""
    worst: tuple[float, float, float] | None = None
    worst_gap = 0.0
    for i, first in enumerate(fits):
        for second in fits[i + 1 :]:
            lo = max(first.f.min(), second.f.min())
            hi = min(first.f.max(), second.f.max())
            if not hi > lo:
                continue
            spline_1, spline_2 = first.b_fit(), second.b_fit()
            if spline_1 is None or spline_2 is None:
                continue
            grid = np.linspace(lo, hi, 33)
            b1, b2 = spline_1(grid), spline_2(grid)
            scale = max(1.0, float(np.max(np.abs(b1))), float(np.max(np.abs(b2))))
            gaps = np.abs(b1 - b2) / scale
            j = int(np.argmax(gaps))
            if gaps[j] > tol and gaps[j] > worst_gap:
                worst_gap = float(gaps[j])
                worst = (float(grid[j]), float(b1[j]), float(b2[j]))
    return worst


def _traced_length(sample: SolitonSample, start_index: int, target: float) -> float | None:
    """Length of the unit-speed gradient curve from a sample point to the level f = target."""
    if sample.is_tube:
        w = sample.geometry
        u0 = float(sample.points[start_index])
        values = sample.f_values()
        u1 = float(np.interp(target, np.sort(values), sample.points[np.argsort(values)]))
        return float(abs(w.param_to_t(u1)[0] - w.param_to_t(u0)[0]))

    chart, f = sample.geometry, sample.potential

    def flow(_: float, x: np.ndarray) -> np.ndarray:
        grad, g = _gradient_vector(chart, f, x)
        return grad / _g_norm(grad, g)

    def reached(_: float, x: np.ndarray) -> float:
        return float(f(x[None, :])[0]) - target

    reached.terminal = True  # type: ignore[attr-defined]
    reached.direction = 1  # type: ignore[attr-defined]
    result = solve_ivp(
        flow,
        (0.0, 1e3),
        sample.points[start_index],
        method="RK45",
        rtol=1e-10,
        atol=1e-12,
        events=reached,
    )
    if result.status != 1 or not len(result.t_events[0]):
        return None
    return float(result.t_events[0][0])


def _segment_check(sample: SolitonSample, fit: ComponentFit) -> dict[str, float] | None:
    """f-segment length int df / sqrt(b) against the traced gradient curve."""
    values = sample.f_values()
    mask = sample.components == fit.component
    idx = np.flatnonzero(mask)
    comp_values = values[idx]
    order = np.argsort(comp_values)
    start = int(idx[order[len(order) // 2]])
    c0 = float(values[start])
    c1 = float(np.quantile(comp_values, 0.75))
    b_fit = fit.b_fit()
    if b_fit is None or not c1 > c0:
        return None
    integral, _ = quad(lambda c: 1.0 / np.sqrt(max(float(b_fit(c)), 1e-300)), c0, c1, limit=200)
    traced = _traced_length(sample, start, c1)
    if traced is None:
        return None
    return {
        "level_from": c0,
        "level_to": c1,
        "integral": float(integral),
        "traced": traced,
        "relative_error": abs(integral - traced) / max(traced, GRADIENT_FLOOR),
    }


def transnormal_fit(sample: SolitonSample, tol: float = FIT_TOL) -> TransnormalFit:
    """Fit |grad f|^2 = b(f) and Delta f = a(f) per component.

    Points with |grad f| below GRADIENT_FLOOR mark critical values; the
    hold-out fit treats them as breakpoints and does not assume smoothness
    across them.
    """
    values = sample.f_values()
    fields = _first_order_fields(sample)
    grad_sq, lap_f = fields

    critical = sorted(
        {float(v) for v, q in zip(values, grad_sq) if np.sqrt(max(q, 0.0)) < GRADIENT_FLOOR}
    )
    fits: list[ComponentFit] = []
    for label in np.unique(sample.components):
        mask = sample.components == label
        f, b, a, witness = _merge_levels(values[mask], grad_sq[mask], lap_f[mask], tol)
        fits.append(
            ComponentFit(
                component=int(label),
                f=f,
                b=b,
                a=a,
                b_scatter=_holdout_scatter(f, b, critical),
                a_scatter=_holdout_scatter(f, a, critical),
                witness=witness,
            )
        )

    global_witness = _cross_witness(fits, tol)
    segment = _segment_check(sample, fits[0]) if fits else None
    result = TransnormalFit(
        components=fits,
        global_witness=global_witness,
        segment=segment,
        tol=tol,
        critical_values=critical,
    )
    logger.info(
        "%s: transnormal=%s isoparametric=%s global=%s",
        sample.name,
        result.transnormal,
        result.isoparametric,
        result.global_functional,
    )
    return result


def _first_order_fields(sample: SolitonSample) -> tuple[np.ndarray, np.ndarray]:
    """(|grad f|^2, Delta f) at the sample points."""
    if sample.is_tube:
        w = sample.geometry
        jet = w.jet_at_param(sample.points)
        shape = shape_from_jet(jet, w.n)
        return jet.df**2, jet.d2f + shape.trace * jet.df

    chart, f, pts = sample.geometry, sample.potential, sample.points
    gamma = christoffel_chart(chart, pts, FD_STEP, FD_ORDER)
    g = chart.metric(pts)
    ginv = np.linalg.inv(g)
    df = gradient(f, pts, FD_STEP, FD_ORDER)
    hess_f = hessian(f, pts, FD_STEP, FD_ORDER) - np.einsum("mkij,mk->mij", gamma, df)
    return np.einsum("ma,mab,mb->m", df, ginv, df), np.einsum("mij,mij->m", ginv, hess_f)


# =============================================================================
# Hess f eigenvalues on tubes
# =============================================================================


@dataclass(frozen=True)
class MultiplicityReport:
    """Two eigenvalues of Hess f per slice, each of multiplicity two in real dimension 4.

    ``pair_gap`` is the largest |f'' - f' H'/H| (the two normal-plane
    eigenvalues); ``slice_deviation`` the largest standard deviation of the
    finite-difference spectrum across points of one slice and ``chart_error``
    its largest distance from the closed-form spectrum (Hopf base only).
    """

    multiplicities: tuple[int, int]
    pair_gap: float
    slice_deviation: float | None
    chart_error: float | None
    tol: float
    chart_tol: float = RESIDUAL_TOL

    @property
    def ok(self) -> bool:
        checks = [self.pair_gap]
        if self.slice_deviation is not None:
            checks.append(self.slice_deviation)
        if self.chart_error is not None and self.chart_error > self.chart_tol:
            return False
        return max(checks) <= self.tol


_SLICE_DIRECTIONS = np.array(
    [[0.6, -0.2, 0.7, 0.3], [1.0, 0.0, 0.0, 0.0], [0.1, 0.9, -0.3, 0.3]]
)


def hess_f_multiplicity(
    w: WarpedProductMetric,
    params: np.ndarray,
    tol: float = 1e-7,
    chart_tol: float = RESIDUAL_TOL,
) -> MultiplicityReport:
    """Check that Hess f has two eigenvalues of multiplicity (2, 2n) on each slice.

    For tubes over the Hopf sphere the spectrum is also computed by finite
    differences on tube_chart at several points of each slice; it must agree
    with the closed form to *chart_tol*.
    """
    params = np.asarray(params, dtype=float)
    spectrum = hessian_spectrum(w, params)
    pair_gap = float(np.max(np.abs(spectrum.normal - spectrum.reeb)))

    slice_deviation: float | None = None
    chart_error: float | None = None
    try:
        chart = tube_chart(w)
    except UnsupportedInputError:
        chart = None
    if chart is not None:
        eig = np.stack(
            [
                chart_hessian_eigenvalues(chart, chart_points(w, params, d))
                for d in _SLICE_DIRECTIONS
            ]
        )  # (direction, param, 4)
        slice_deviation = float(np.max(np.std(eig, axis=0)))
        closed = np.stack([spectrum.eigenvalues(i) for i in range(len(params))])
        chart_error = float(np.max(np.abs(eig - closed[None])))
    return MultiplicityReport(
        multiplicities=(2, 2 * w.n),
        pair_gap=pair_gap,
        slice_deviation=slice_deviation,
        chart_error=chart_error,
        tol=tol,
        chart_tol=chart_tol,
    )
