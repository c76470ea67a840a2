"""
Curvature of cohomogeneity-one tubes and the reduced soliton system.

Ricci components are taken on g-unit vectors: the normal N = d/dt, the unit
Reeb vector zeta/H and a unit horizontal vector.  With a the contact scale
of the base, k its transverse Einstein constant and m = n:

    Rc(N, N)      = -(tr L)' - tr L^2
    Rc(zeta, zeta) = 2n a^2 H^2/F^4 - tr L H'/H - (H'/H)'
    Rc(X, X)      = k/F^2 - 2 a^2 H^2/F^4 - tr L F'/F - (F'/F)'
    Rc(X, N)      = 0

The slice terms are the closed-form Ricci tensor of the (H, F)-deformed base.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..almost_contact import DeformationParams, deformed_ricci, horizontal_basis
from ..config import GRID_SIZE, RESIDUAL_TOL
from ..parallel import parallel_map
from .alpha_ode import SolitonProblem
from .tube import CalabiTube, SliceJet, WarpedProductMetric, shape_from_jet

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TubeRicci:
    t: np.ndarray
    normal: np.ndarray
    reeb: np.ndarray
    horizontal: np.ndarray
    mixed: np.ndarray
    n: int

    @property
    def scalar(self) -> np.ndarray:
        return self.normal + self.reeb + 2 * self.n * self.horizontal

    @property
    def norm_sq(self) -> np.ndarray:
        """|Rc|^2 (the tensor is diagonal in the adapted frame)."""
        return self.normal**2 + self.reeb**2 + 2 * self.n * self.horizontal**2


def slice_ricci_einstein(
    k: float, n: int, a: float, H: np.ndarray, F: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(Reeb, horizontal) unit Ricci components of H^2 eta^2 + F^2 g_perp."""
    twist = a * a * H * H / F**4
    return 2 * n * twist, k / (F * F) - 2 * twist


def ricci_from_jet(jet: SliceJet, k: float, n: int, a: float = 1.0) -> TubeRicci:
    shape = shape_from_jet(jet, n)
    slice_reeb, slice_horizontal = slice_ricci_einstein(k, n, a, jet.H, jet.F)
    hh, ff = shape.reeb, shape.horizontal
    return TubeRicci(
        t=jet.t,
        normal=-shape.trace_prime - shape.trace_sq,
        reeb=slice_reeb - shape.trace * hh - (jet.d2H / jet.H - hh * hh),
        horizontal=slice_horizontal - shape.trace * ff - (jet.d2F / jet.F - ff * ff),
        mixed=np.zeros_like(jet.t),
        n=n,
    )


def tube_ricci(w: WarpedProductMetric, params: np.ndarray | None = None) -> TubeRicci:
    """Ricci components on interior slices of the tube."""
    u = w.interior_params() if params is None else np.asarray(params, dtype=float)
    return ricci_from_jet(w.jet_at_param(u), w.k, w.n, w.contact_scale)


def slice_ricci_check(w: WarpedProductMetric, params: np.ndarray) -> float:
    """Max difference between the closed-form slice terms and deformed_ricci on the base.

    Needs a base structure with a recorded contact scale.
    """
    if w.base is None:
        raise ValueError(f"{w.name}: no base structure to compare against")
    base = w.base
    jets = w.jet_at_param(params)
    x = horizontal_basis(base)[:, 0]

    def one(i: int) -> float:
        H, F = float(jets.H[i]), float(jets.F[i])
        report = deformed_ricci(base, DeformationParams(sign=1, H=H, F=F))
        zeta_star = base.zeta / H
        x_star = x / F
        reeb = float(zeta_star @ report.ricci @ zeta_star)
        horizontal = float(x_star @ report.ricci @ x_star)
        exp_reeb, exp_horizontal = slice_ricci_einstein(w.k, w.n, w.contact_scale, H, F)
        return max(abs(reeb - exp_reeb), abs(horizontal - exp_horizontal))

    return max(parallel_map(one, range(len(jets.t))))


@dataclass(frozen=True, eq=False)
class SolitonResidual:
    """Reduced soliton system on a parameter grid.

    R1: lam - (Rc(N,N) + f'')
    R2_zeta, R2_horiz: lam - (Rc + f' L) on the Reeb and a horizontal vector
    R3: F F' - H
    R4: f' - B H (closes the Calabi system); R4_literal: H - f' B
    """

    params: np.ndarray
    t: np.ndarray
    columns: dict[str, np.ndarray]
    tol: float = RESIDUAL_TOL
    sup: dict[str, float] = field(default_factory=dict)

    CORE = ("R1", "R2_zeta", "R2_horiz", "R3", "R4")

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "sup",
            {k: float(np.max(np.abs(v))) if v.size else 0.0 for k, v in self.columns.items()},
        )

    @property
    def failing(self) -> list[str]:
        return [k for k in self.CORE if self.sup.get(k, 0.0) > self.tol]

    @property
    def ok(self) -> bool:
        return not self.failing


def equation_residuals(jet: SliceJet, lam: float, k: float, n: int, a: float = 1.0) -> dict:
    rc = ricci_from_jet(jet, k, n, a)
    return {
        "R1": lam - (rc.normal + jet.d2f),
        "R2_zeta": lam - (rc.reeb + jet.df * jet.dH / jet.H),
        "R2_horiz": lam - (rc.horizontal + jet.df * jet.dF / jet.F),
    }


def soliton_residual(
    w: WarpedProductMetric,
    p: SolitonProblem,
    params: np.ndarray | None = None,
    size: int = GRID_SIZE,
    tol: float = RESIDUAL_TOL,
) -> SolitonResidual:
    """Residuals of the reduced soliton system on a grid of interior slices.

    A Calabi tube without explicit *params* is checked on its grid nodes with
    derivatives differenced from the stored columns (see ``CalabiTube.node_jet``),
    so a profile that does not solve the ODE shows up in R1 and R2.  Other tubes
    and explicit parameters use the supplied jets.
    """
    if isinstance(w, CalabiTube) and params is None:
        u, jet = w.node_jet(size)
    else:
        u = w.interior_params(size) if params is None else np.asarray(params, dtype=float)
        jet = w.jet_at_param(u)
    columns = equation_residuals(jet, p.lam, w.k, w.n, w.contact_scale)
    columns["R3"] = jet.F * jet.dF - jet.H
    columns["R4"] = jet.df - p.B * jet.H
    columns["R4_literal"] = jet.H - jet.df * p.B
    result = SolitonResidual(params=u, t=jet.t, columns=columns, tol=tol)
    logger.debug("%s: soliton residual %s", w.name, result.sup)
    return result


@dataclass(frozen=True, eq=False)
class HessianSpectrum:
    """Eigenvalues of Hess f on a slice: f'' (normal), f' H'/H (Reeb), f' F'/F (2n-fold)."""

    t: np.ndarray
    normal: np.ndarray
    reeb: np.ndarray
    horizontal: np.ndarray
    n: int

    def eigenvalues(self, i: int) -> np.ndarray:
        return np.sort(
            np.concatenate(
                [[self.normal[i], self.reeb[i]], np.full(2 * self.n, self.horizontal[i])]
            )
        )


def hessian_spectrum(w: WarpedProductMetric, params: np.ndarray | None = None) -> HessianSpectrum:
    u = w.interior_params() if params is None else np.asarray(params, dtype=float)
    jet = w.jet_at_param(u)
    return HessianSpectrum(
        t=jet.t,
        normal=jet.d2f,
        reeb=jet.df * jet.dH / jet.H,
        horizontal=jet.df * jet.dF / jet.F,
        n=w.n,
    )
