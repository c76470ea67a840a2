"""
The first-order ODE for the Calabi profile alpha(s).

    d alpha/ds = k - lam w - 2 n alpha / w + B alpha,      w = 2 s + A

The equation is linear in alpha.  With the integrating factor
mu(s) = w^n exp(-B s) it integrates to

    alpha(s) = [mu(s0) alpha(s0) + int_{s0}^{s} mu(q) (k - lam w(q)) dq] / mu(s),

which is evaluated with the ratio mu(q)/mu(s) to stay finite.  solve_alpha
computes this closed form by adaptive quadrature and, independently, the
adaptive Runge-Kutta solution; the sup-difference of the two is recorded on
the profile.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp

from ..config import (
    BRACKET_WIDTH,
    GRID_SIZE,
    ODE_ATOL,
    ODE_RTOL,
    QUAD_EPSABS,
    QUAD_EPSREL,
    SINGULAR_BAND,
)
from ..errors import EmptyProfileError, OdeDomainError, SolverError

logger = logging.getLogger(__name__)

# Gauss-Legendre order of the smooth evaluator (short intervals between grid nodes)
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)


# =============================================================================
# Problem definition
# =============================================================================


@dataclass(frozen=True)
class SolitonProblem:
    """Constants of the reduced soliton ODE.

    lam: soliton constant; k: Einstein constant of the base (Rc_N = k g_N);
    n: complex dimension of the base; f = B s + C on the tube.
    """

    lam: float
    k: float
    n: int
    A: float
    B: float
    C: float
    s_min: float
    s_max: float

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.s_max > self.s_min:
            raise ValueError(f"s_max must exceed s_min, got [{self.s_min}, {self.s_max}]")
        if 2.0 * self.s_min + self.A < -1e-12 * max(1.0, abs(self.A)):
            raise OdeDomainError(
                f"2s + A must be positive on the interval; at s_min it is {2 * self.s_min + self.A}"
            )

    @property
    def s_interval(self) -> tuple[float, float]:
        return (self.s_min, self.s_max)

    @property
    def singular_point(self) -> float:
        """s where 2s + A = 0."""
        return -0.5 * self.A

    @property
    def singular_start(self) -> bool:
        return abs(2.0 * self.s_min + self.A) <= 1e-12 * max(1.0, abs(self.A))

    def w(self, s: np.ndarray | float) -> np.ndarray | float:
        return 2.0 * np.asarray(s, dtype=float) + self.A

    def source(self, s: np.ndarray | float) -> np.ndarray | float:
        """Inhomogeneous term k - lam (2s + A)."""
        return self.k - self.lam * self.w(s)


def alpha_ode_rhs(s: float, alpha: float, p: SolitonProblem) -> float:
    """d alpha / ds.

    Raises:
        OdeDomainError: If 2s + A <= 0
    """
    w = 2.0 * s + p.A
    if w <= 0.0:
        raise OdeDomainError(f"alpha ODE evaluated at s={s} where 2s + A = {w} <= 0")
    return p.k - p.lam * w - 2.0 * p.n * alpha / w + p.B * alpha


def _rhs_vec(s: np.ndarray, alpha: np.ndarray, p: SolitonProblem) -> np.ndarray:
    w = 2.0 * s + p.A
    if np.any(w <= 0.0):
        raise OdeDomainError("alpha ODE evaluated where 2s + A <= 0")
    return p.k - p.lam * w - 2.0 * p.n * alpha / w + p.B * alpha


def alpha_jet(
    s: np.ndarray, alpha: np.ndarray, p: SolitonProblem
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(alpha, alpha', alpha'') with derivatives taken from the ODE itself."""
    s = np.asarray(s, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    d1 = _rhs_vec(s, alpha, p)
    w = 2.0 * s + p.A
    d_s = -2.0 * p.lam + 4.0 * p.n * alpha / (w * w)
    d_alpha = -2.0 * p.n / w + p.B
    return alpha, d1, d_s + d_alpha * d1


# =============================================================================
# Closed form (integrating factor)
# =============================================================================


def _mu_ratio(q: np.ndarray, s: np.ndarray, p: SolitonProblem) -> np.ndarray:
    """mu(q) / mu(s) with mu = (2s + A)^n exp(-B s).

    The ratio is 1 where q == s and 0 where mu(q) vanishes; mu(s) may vanish only
    when q == s.

    Raises:
        SolverError: If mu(s) vanishes at some q != s
    """
    q, s = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(s, dtype=float))
    wq = 2.0 * q + p.A
    ws = 2.0 * s + p.A
    same = q == s
    if np.any((ws <= 0.0) & ~same):
        raise SolverError("integrating factor ratio taken onto the singular line 2s + A = 0")
    live = (wq > 0.0) & ~same
    log_ratio = p.n * (np.log(np.where(live, wq, 1.0)) - np.log(np.where(live, ws, 1.0)))
    log_ratio = log_ratio - p.B * (q - s)
    return np.where(live, np.exp(log_ratio), np.where(same, 1.0, 0.0))


def closed_form_alpha(p: SolitonProblem, s0: float, alpha0: float, s: float) -> float:
    """alpha(s) from alpha(s0) by the integrating factor and adaptive quadrature.

    Raises:
        SolverError: If the quadrature reports non-convergence
    """
    if s == s0:
        return float(alpha0)

    def integrand(q: float) -> float:
        return float(_mu_ratio(np.float64(q), np.float64(s), p) * p.source(q))

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            integral, _ = quad(
                integrand, s0, s, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=200
            )
        except IntegrationWarning as exc:
            raise SolverError(f"closed-form quadrature on [{s0}, {s}] failed: {exc}") from exc
    return float(alpha0 * _mu_ratio(np.float64(s0), np.float64(s), p) + integral)


def propagate_alpha(
    p: SolitonProblem, s0: np.ndarray, alpha0: np.ndarray, s: np.ndarray
) -> np.ndarray:
    """Vectorized closed form over short intervals [s0, s] by Gauss-Legendre."""
    s0 = np.asarray(s0, dtype=float)
    alpha0 = np.asarray(alpha0, dtype=float)
    s = np.asarray(s, dtype=float)
    half = 0.5 * (s - s0)
    mid = 0.5 * (s + s0)
    q = mid[..., None] + half[..., None] * _GL_NODES
    ratio = _mu_ratio(q, s[..., None], p)
    integral = half * np.sum(ratio * p.source(q) * _GL_WEIGHTS, axis=-1)
    return alpha0 * _mu_ratio(s0, s, p) + integral


# =============================================================================
# Solved profile
# =============================================================================


@dataclass(frozen=True, eq=False)
class AlphaProfile:
    """alpha on an increasing s-grid, numeric and closed-form columns.

    ``alpha`` is the adaptive Runge-Kutta solution (dense output), ``alpha_closed``
    the integrating-factor quadrature; ``cross_check`` is their sup-difference.
    ``endpoint`` is the first s where alpha reaches 0 (None if alpha stays
    positive up to s_max) and ``bracket`` its bisection interval.
    """

    problem: SolitonProblem
    grid: np.ndarray
    alpha: np.ndarray
    alpha_prime: np.ndarray
    alpha_closed: np.ndarray
    cross_check: float
    endpoint: float | None = None
    bracket: tuple[float, float] | None = None
    singular_start: bool = False
    diagnostics: dict[str, float] = field(default_factory=dict)

    @property
    def s_start(self) -> float:
        return float(self.grid[0])

    @property
    def s_end(self) -> float:
        return float(self.grid[-1])

    def alpha_at(self, s: np.ndarray | float) -> np.ndarray:
        """Smooth evaluator: closed form propagated from the nearest grid node."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        grid = self.grid
        idx = np.clip(np.searchsorted(grid, s), 1, len(grid) - 1)
        left_closer = (s - grid[idx - 1]) < (grid[idx] - s)
        idx = np.where(left_closer, idx - 1, idx)
        return propagate_alpha(self.problem, grid[idx], self.alpha_closed[idx], s)

    def jet(self, s: np.ndarray | float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(alpha, alpha', alpha'') at s with exact ODE derivatives."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return alpha_jet(s, self.alpha_at(s), self.problem)


def _bisect_zero(sol, lo: float, hi: float, width: float) -> tuple[float, float]:
    """Shrink [lo, hi] with alpha(lo) > 0 >= alpha(hi) (up to rounding) below width."""
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if float(sol(mid)[0]) > 0.0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def solve_alpha(
    p: SolitonProblem,
    alpha_init: float | None,
    grid_size: int = GRID_SIZE,
) -> AlphaProfile:
    """Solve the alpha ODE from s_min.

    A start on the singular line 2s + A = 0 admits a single bounded solution;
    alpha_init is then ignored.  Within SINGULAR_BAND of the singular line the
    integrating-factor form supplies the profile and the explicit integrator
    starts at the edge of the band.

    Raises:
        EmptyProfileError: If alpha is not positive when integration starts
        SolverError: If the quadrature or the integrator fails
        OdeDomainError: If the interval leaves 2s + A > 0
    """
    if grid_size < 2:
        raise ValueError(f"grid_size must be at least 2, got {grid_size}")

    s0 = p.s_min
    if p.singular_start:
        if alpha_init:
            warnings.warn(
                f"soliton-forge: s_min lies on 2s + A = 0; ignoring alpha_init={alpha_init} "
                "and using the bounded branch",
                stacklevel=2,
            )
        alpha0 = 0.0
    else:
        if alpha_init is None or alpha_init <= 0.0:
            raise EmptyProfileError(
                f"alpha_init must be positive at a regular start, got {alpha_init}"
            )
        alpha0 = float(alpha_init)

    distance = s0 - p.singular_point
    band_end = min(p.singular_point + SINGULAR_BAND, p.s_max)
    if distance < SINGULAR_BAND:
        start = band_end
        alpha_start = closed_form_alpha(p, s0, alpha0, start)
        logger.debug("start within singular band; closed form up to s=%.6g", start)
    else:
        start, alpha_start = s0, alpha0
    if alpha_start <= 0.0:
        raise EmptyProfileError(
            f"alpha is not positive at s={start} (alpha={alpha_start:.3e}); "
            "the profile is empty"
        )

    def crossing(s: float, y: np.ndarray) -> float:
        return float(y[0])

    crossing.terminal = True  # type: ignore[attr-defined]
    crossing.direction = -1  # type: ignore[attr-defined]

    endpoint: float | None = None
    bracket: tuple[float, float] | None = None
    s_end = p.s_max
    sol = None
    if start < p.s_max:
        result = solve_ivp(
            lambda s, y: [alpha_ode_rhs(s, y[0], p)],
            (start, p.s_max),
            [alpha_start],
            method="RK45",
            rtol=ODE_RTOL,
            atol=ODE_ATOL,
            dense_output=True,
            events=crossing,
        )
        if result.status == -1:
            raise SolverError(f"adaptive integration failed: {result.message}")
        sol = result.sol
        if result.status == 1 and len(result.t_events[0]):
            event = float(result.t_events[0][0])
            lo = float(result.t[-2]) if len(result.t) > 1 else start
            lo, hi = _bisect_zero(sol, min(lo, event), event, BRACKET_WIDTH)
            bracket = (lo, hi)
            endpoint = 0.5 * (lo + hi)
            s_end = endpoint
            if endpoint - start <= BRACKET_WIDTH:
                raise EmptyProfileError(f"alpha reaches 0 at s={endpoint} before any progress")
            logger.info("alpha reaches 0 at s=%.12g (bracket width %.2e)", endpoint, hi - lo)

    grid = np.linspace(s0, s_end, grid_size)
    closed = np.array([closed_form_alpha(p, s0, alpha0, s) for s in grid])
    numeric = np.empty_like(grid)
    in_band = grid < start
    numeric[in_band] = closed[in_band]
    if sol is not None:
        numeric[~in_band] = sol(grid[~in_band])[0]
    else:
        numeric[~in_band] = closed[~in_band]
    if endpoint is not None:
        numeric[-1] = max(numeric[-1], 0.0)
        closed[-1] = max(closed[-1], 0.0)

    interior = 2.0 * grid + p.A > 0.0
    prime = np.full_like(grid, np.nan)
    prime[interior] = _rhs_vec(grid[interior], numeric[interior], p)
    if not interior[0]:
        # bounded branch: alpha ~ k w / (2 (n + 1)) near w = 0
        prime[0] = p.k / (p.n + 1.0)

    cross = float(np.max(np.abs(numeric - closed)))
    logger.debug("closed form vs integrator: %.3e", cross)
    return AlphaProfile(
        problem=p,
        grid=grid,
        alpha=numeric,
        alpha_prime=prime,
        alpha_closed=closed,
        cross_check=cross,
        endpoint=endpoint,
        bracket=bracket,
        singular_start=p.singular_start,
        diagnostics={"band_end": float(start), "alpha_start": float(alpha_start)},
    )


def fubini_study_alpha(s: np.ndarray, lam: float) -> np.ndarray:
    """alpha = 2s - (2 lam / 3) s^2, the n = 1, k = 4, A = B = 0 bounded solution."""
    s = np.asarray(s, dtype=float)
    return 2.0 * s - (2.0 * lam / 3.0) * s * s


def flat_endpoint(lam: float) -> float:
    """Zero of the n = 1, k = 4, A = B = 0 profile for lam > 0."""
    if lam <= 0:
        return math.inf
    return 3.0 / lam
