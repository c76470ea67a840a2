"""
Cohomogeneity-one metrics  g = dt^2 + H(t)^2 eta (x) eta + F(t)^2 g_perp.

A WarpedProductMetric is evaluated through SliceJets, the values and first
two t-derivatives of (H, F, f) at a slice.  Tubes may be parametrised by a
variable u other than t (the Calabi tube uses u = s); ``param_speed`` returns
(dt/du, d^2t/du^2) so one-dimensional derivatives can be converted.
"""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from ..almost_contact import AlmostContactStructure
from ..config import GRID_SIZE, NODE_MARGIN
from ..errors import DegenerateTubeError
from ..finite_difference import derivative_1d, derivative_on_grid, stencil_reach
from .alpha_ode import AlphaProfile, SolitonProblem

logger = logging.getLogger(__name__)

ProfileFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray, np.ndarray]]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


@dataclass(frozen=True, eq=False)
class SliceJet:
    """Values and t-derivatives of the profiles at one or more slices."""

    t: np.ndarray
    H: np.ndarray
    dH: np.ndarray
    d2H: np.ndarray
    F: np.ndarray
    dF: np.ndarray
    d2F: np.ndarray
    f: np.ndarray
    df: np.ndarray
    d2f: np.ndarray


def analytic_profile(
    value: Callable[[np.ndarray], np.ndarray],
    d1: Callable[[np.ndarray], np.ndarray],
    d2: Callable[[np.ndarray], np.ndarray],
) -> ProfileFn:
    """Bundle closed-form value and derivative evaluators."""

    def profile(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        t = np.asarray(t, dtype=float)
        return (
            np.broadcast_to(value(t), t.shape).astype(float),
            np.broadcast_to(d1(t), t.shape).astype(float),
            np.broadcast_to(d2(t), t.shape).astype(float),
        )

    return profile


def constant_profile(c: float) -> ProfileFn:
    return analytic_profile(lambda t: c + 0.0 * t, lambda t: 0.0 * t, lambda t: 0.0 * t)


@dataclass(frozen=True, eq=False)
class WarpedProductMetric:
    """Interval profiles (H, F, f) over a base almost-contact structure.

    ``base`` may be None when only the closed-form Einstein data of the base
    (transverse Einstein constant k, complex dimension n, contact scale) is
    used.
    """

    interval: tuple[float, float]
    H: ProfileFn
    F: ProfileFn
    f: ProfileFn
    k: float
    n: int
    base: AlmostContactStructure | None = None
    contact_scale: float = 1.0
    name: str = "tube"

    def __post_init__(self) -> None:
        lo, hi = self.interval
        if not hi > lo:
            raise ValueError(f"empty interval {self.interval}")
        if self.base is not None and self.base.dim != 2 * self.n + 1:
            raise ValueError(
                f"base dimension {self.base.dim} does not match complex dimension n={self.n}"
            )

    @property
    def dim(self) -> int:
        return 2 * self.n + 2

    @property
    def param_interval(self) -> tuple[float, float]:
        return self.interval

    def jet(self, t: np.ndarray | float) -> SliceJet:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        H = self.H(t)
        F = self.F(t)
        f = self.f(t)
        return SliceJet(t, *H, *F, *f)

    def jet_at_param(self, u: np.ndarray | float) -> SliceJet:
        return self.jet(u)

    def param_speed(self, u: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
        """(dt/du, d^2t/du^2)."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return np.ones_like(u), np.zeros_like(u)

    def param_to_t(self, u: np.ndarray | float) -> np.ndarray:
        return np.atleast_1d(np.asarray(u, dtype=float))

    def chart_data(self, u: np.ndarray) -> tuple[np.ndarray, ...]:
        """(dt/du, H, F, f) at parameter values, without derivatives."""
        jet = self.jet_at_param(u)
        return np.ones_like(jet.t), jet.H, jet.F, jet.f

    def interior_params(self, size: int = GRID_SIZE, margin: float = 0.0) -> np.ndarray:
        """size strictly interior parameter values, at least *margin* from each end."""
        lo, hi = self.param_interval
        return np.linspace(lo + margin, hi - margin, size + 2)[1:-1]

    def end_samples(
        self, end: str, h0: float, levels: int
    ) -> tuple[np.ndarray, SliceJet]:
        """(tau, jets) at t-distances tau_j = h0 / 2^j from an endpoint."""
        lo, hi = self.interval
        tau = h0 / 2.0 ** np.arange(levels)
        t = lo + tau if end == "min" else hi - tau
        return tau, self.jet(t)

    def validate_profiles(self, size: int = 16, tol: float = 1e-6) -> dict[str, float]:
        """Positivity on the interior and FD self-consistency of supplied derivatives.

        Raises:
            DegenerateTubeError: If H or F is not positive in the interior
        """
        u = self.interior_params(size, margin=0.05 * np.diff(self.param_interval)[0])
        jets = self.jet_at_param(u)
        if np.any(jets.H <= 0.0) or np.any(jets.F <= 0.0):
            raise DegenerateTubeError(f"{self.name}: H or F vanishes in the interior")

        t = jets.t
        step = 1e-3 * float(np.diff(self.interval)[0])
        errors: dict[str, float] = {}
        for label, value, first, second in (
            ("H", "H", "dH", "d2H"),
            ("F", "F", "dF", "d2F"),
            ("f", "f", "df", "d2f"),
        ):
            fd1 = derivative_1d(lambda x, v=value: getattr(self.jet(x), v), t, step, order=8)
            fd2 = derivative_1d(
                lambda x, v=value: getattr(self.jet(x), v), t, step, order=8, nth=2
            )
            scale = max(1.0, float(np.max(np.abs(getattr(jets, second)))))
            errors[f"{label}'"] = float(np.max(np.abs(fd1 - getattr(jets, first)))) / scale
            errors[f"{label}''"] = float(np.max(np.abs(fd2 - getattr(jets, second)))) / scale
        bad = {k: v for k, v in errors.items() if v > tol}
        if bad:
            logger.warning("%s: profile derivatives disagree with FD: %s", self.name, bad)
        return errors


@dataclass(frozen=True, eq=False)
class CalabiTube(WarpedProductMetric):
    """Tube of the Calabi ansatz, parametrised internally by s.

    H = sqrt(alpha), F = sqrt(2s + A), f = B s + C, dt/ds = 1/sqrt(alpha).
    """

    profile: AlphaProfile | None = None
    problem: SolitonProblem | None = None
    s_nodes: np.ndarray = field(default_factory=lambda: np.zeros(0))
    t_nodes: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def param_interval(self) -> tuple[float, float]:
        return (float(self.s_nodes[0]), float(self.s_nodes[-1]))

    def jet_at_s(self, s: np.ndarray | float) -> SliceJet:
        p = self.problem
        s = np.atleast_1d(np.asarray(s, dtype=float))
        alpha, d_alpha, d2_alpha = self.profile.jet(s)
        w = 2.0 * s + p.A
        H = np.sqrt(alpha)
        F = np.sqrt(w)
        return SliceJet(
            t=self.t_of_s(s),
            H=H,
            dH=0.5 * d_alpha,
            d2H=0.5 * H * d2_alpha,
            F=F,
            dF=H / F,
            d2F=0.5 * d_alpha / F - alpha / F**3,
            f=p.B * s + p.C,
            df=p.B * H,
            d2f=0.5 * p.B * d_alpha,
        )

    def jet_at_param(self, u: np.ndarray | float) -> SliceJet:
        return self.jet_at_s(u)

    def node_jet(self, size: int | None = None) -> tuple[np.ndarray, SliceJet]:
        """(s, jet) on grid nodes, differentiated from the tabulated columns.

        H = sqrt(alpha_closed), F, f and t_nodes are read at the nodes and their
        s-derivatives taken with the order-8 grid stencil, then converted with
        dt/ds and d^2t/ds^2 from the same stencil on t_nodes.  Nodes inside the
        stencil reach of an end are skipped, and so is a NODE_MARGIN share of the
        grid next to an end where alpha vanishes (t ~ sqrt(s - s_end) there).
        At most *size* nodes are returned, evenly spread over the usable range.

        Raises:
            DegenerateTubeError: If the grid is too coarse to leave a usable node
        """
        p, ap = self.problem, self.profile
        s = self.s_nodes
        last = len(s) - 1
        reach = stencil_reach(8)
        wide = max(reach, int(np.ceil(NODE_MARGIN * last)))
        lo = wide if ap.singular_start or ap.alpha_closed[0] <= 0.0 else reach
        closes = ap.endpoint is not None or ap.alpha_closed[-1] <= 0.0
        hi = last - (wide if closes else reach)
        if hi < lo:
            raise DegenerateTubeError(
                f"{self.name}: {len(s)} grid nodes leave none for finite differences"
            )
        idx = np.arange(lo, hi + 1)
        if size is not None and size < len(idx):
            idx = idx[np.unique(np.round(np.linspace(0, len(idx) - 1, size)).astype(int))]

        step = float(s[1] - s[0])
        t_s = derivative_on_grid(self.t_nodes, idx, step)
        t_ss = derivative_on_grid(self.t_nodes, idx, step, nth=2)
        columns = (
            np.sqrt(np.maximum(ap.alpha_closed, 0.0)),
            np.sqrt(2.0 * s + p.A),
            p.B * s + p.C,
        )
        parts: list[np.ndarray] = []
        for col in columns:
            d1 = derivative_on_grid(col, idx, step) / t_s
            d2 = (derivative_on_grid(col, idx, step, nth=2) - d1 * t_ss) / (t_s * t_s)
            parts.extend((col[idx], d1, d2))
        return s[idx], SliceJet(self.t_nodes[idx], *parts)

    def jet(self, t: np.ndarray | float) -> SliceJet:
        return self.jet_at_s(self.s_of_t(t))

    def param_speed(self, u: np.ndarray | float) -> tuple[np.ndarray, np.ndarray]:
        alpha, d_alpha, _ = self.profile.jet(np.atleast_1d(np.asarray(u, dtype=float)))
        return alpha**-0.5, -0.5 * d_alpha * alpha**-1.5

    def param_to_t(self, u: np.ndarray | float) -> np.ndarray:
        return self.t_of_s(u)

    def chart_data(self, u: np.ndarray) -> tuple[np.ndarray, ...]:
        u = np.asarray(u, dtype=float)
        alpha = self.profile.alpha_at(u.ravel()).reshape(u.shape)
        p = self.problem
        return alpha**-0.5, np.sqrt(alpha), np.sqrt(2.0 * u + p.A), p.B * u + p.C

    def _t_between(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """int_a^b ds / sqrt(alpha) with a square-root substitution at the smaller-alpha end."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        sign = np.where(b >= a, 1.0, -1.0)
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        degenerate_lo = self.profile.alpha_at(lo) < self.profile.alpha_at(hi)
        root = np.sqrt(hi - lo)
        x = 0.5 * (_GL_NODES + 1.0)
        u = root[..., None] * x
        # substitute at the end where alpha is smaller: sigma = lo + u^2 or hi - u^2
        sigma = np.where(degenerate_lo[..., None], lo[..., None] + u * u, hi[..., None] - u * u)
        alpha = np.maximum(self.profile.alpha_at(sigma.ravel()).reshape(sigma.shape), 1e-300)
        integrand = 2.0 * u / np.sqrt(alpha)
        return sign * 0.5 * root * np.sum(integrand * _GL_WEIGHTS, axis=-1)

    def t_of_s(self, s: np.ndarray | float) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        idx = np.clip(np.searchsorted(self.s_nodes, s), 1, len(self.s_nodes) - 1)
        left_closer = (s - self.s_nodes[idx - 1]) < (self.s_nodes[idx] - s)
        idx = np.where(left_closer, idx - 1, idx)
        return self.t_nodes[idx] + self._t_between(self.s_nodes[idx], s)

    def s_of_t(self, t: np.ndarray | float, iterations: int = 12) -> np.ndarray:
        """Invert t(s): interpolation followed by Newton steps with ds/dt = sqrt(alpha)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.param_interval
        s = np.interp(t, self.t_nodes, self.s_nodes)
        for _ in range(iterations):
            err = self.t_of_s(s) - t
            s = np.clip(s - err * np.sqrt(np.maximum(self.profile.alpha_at(s), 0.0)), lo, hi)
            if np.max(np.abs(err)) < 1e-14:
                break
        return s

    def end_samples(
        self, end: str, h0: float, levels: int
    ) -> tuple[np.ndarray, SliceJet]:
        """Samples at s-offsets (h0 / 2^j)^2; tau is the exact t-distance to the end."""
        lo, hi = self.param_interval
        delta = (h0 / 2.0 ** np.arange(levels)) ** 2
        if end == "min":
            s = lo + delta
            tau = self._t_between(np.full_like(s, lo), s)
        else:
            s = hi - delta
            tau = self._t_between(s, np.full_like(s, hi))
        return tau, self.jet_at_s(s)


def calabi_to_tube(
    ap: AlphaProfile,
    p: SolitonProblem | None = None,
    base: AlmostContactStructure | None = None,
) -> CalabiTube:
    """Tube metric ds^2/alpha + alpha eta (x) eta + (2s + A) g_N with f = B s + C.

    The t-coordinate is t(s) = int ds / sqrt(alpha) from the start of the profile.

    Raises:
        DegenerateTubeError: If alpha vanishes inside the profile
    """
    p = p or ap.problem
    interior = ap.alpha_closed[1:-1]
    if np.any(interior <= 0.0):
        bad = ap.grid[1:-1][interior <= 0.0][0]
        raise DegenerateTubeError(f"alpha vanishes in the interior of the profile at s={bad}")

    # interval endpoints are provisional until t_nodes are known
    shell = CalabiTube(
        interval=(0.0, 1.0),
        H=_unset,
        F=_unset,
        f=_unset,
        k=p.k,
        n=p.n,
        base=base,
        name="calabi",
        profile=ap,
        problem=p,
        s_nodes=np.array(ap.grid),
        t_nodes=np.zeros_like(ap.grid),
    )
    steps = shell._t_between(ap.grid[:-1], ap.grid[1:])
    t_nodes = np.concatenate([[0.0], np.cumsum(steps)])

    tube = CalabiTube(
        interval=(0.0, float(t_nodes[-1])),
        H=_unset,
        F=_unset,
        f=_unset,
        k=p.k,
        n=p.n,
        base=base,
        name=f"calabi(lam={p.lam:g},k={p.k:g},n={p.n},B={p.B:g})",
        profile=ap,
        problem=p,
        s_nodes=np.array(ap.grid),
        t_nodes=t_nodes,
    )
    object.__setattr__(tube, "H", lambda t: _pick(tube.jet(t), "H"))
    object.__setattr__(tube, "F", lambda t: _pick(tube.jet(t), "F"))
    object.__setattr__(tube, "f", lambda t: _pick(tube.jet(t), "f"))
    logger.debug("%s: t-length %.12g over %d nodes", tube.name, t_nodes[-1], len(t_nodes))
    return tube


def _unset(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    raise RuntimeError("profile evaluator not initialised")


def _pick(jet: SliceJet, name: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d1 = {"H": "dH", "F": "dF", "f": "df"}[name]
    return getattr(jet, name), getattr(jet, d1), getattr(jet, "d2" + name)


# =============================================================================
# Shape operator along the tube
# =============================================================================


@dataclass(frozen=True, eq=False)
class ShapeProfile:
    """L_t = (H'/H) zeta (x) eta + (F'/F) (Id - zeta (x) eta) on each slice."""

    t: np.ndarray
    reeb: np.ndarray  # H'/H
    horizontal: np.ndarray  # F'/F
    trace: np.ndarray  # tr L
    trace_sq: np.ndarray  # tr L^2
    trace_prime: np.ndarray  # (tr L)'
    m: int

    def operator(self, i: int, base: AlmostContactStructure) -> np.ndarray:
        """Operator form of L at the i-th slice, in base frame coordinates."""
        reeb_part = np.outer(base.zeta, base.eta)
        return self.reeb[i] * reeb_part + self.horizontal[i] * (np.eye(base.dim) - reeb_part)


def shape_from_jet(jet: SliceJet, m: int) -> ShapeProfile:
    hh = jet.dH / jet.H
    ff = jet.dF / jet.F
    return ShapeProfile(
        t=jet.t,
        reeb=hh,
        horizontal=ff,
        trace=hh + 2 * m * ff,
        trace_sq=hh * hh + 2 * m * ff * ff,
        trace_prime=jet.d2H / jet.H + 2 * m * jet.d2F / jet.F - hh * hh - 2 * m * ff * ff,
        m=m,
    )


def shape_profile(w: WarpedProductMetric, params: np.ndarray | None = None) -> ShapeProfile:
    """Shape operator data on interior slices (m = n, the base complex dimension)."""
    u = w.interior_params() if params is None else np.asarray(params, dtype=float)
    return shape_from_jet(w.jet_at_param(u), w.n)
