"""
Almost-contact metric structures on homogeneous frames.

An almost-contact metric structure (zeta, eta, Phi, g) is stored in frame
coordinates: zeta is a vector, eta a covector, Phi a matrix acting on column
vectors, and g the frame metric of the underlying StructureFrame.

Exterior derivative convention (fixed, no flag):

    2 d_eta(X, Y) = X eta(Y) - Y eta(X) - eta([X, Y])

so for frame fields  d_eta[i, j] = -1/2 sum_k eta_k c[k, i, j].
A structure is contact with scale a when d_eta(X, Y) = a g(X, Phi Y).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import null_space

from .config import (
    CLASSIFY_TOL,
    KILLING_TOL,
    REEB_TOL,
    SELF_ADJOINT_TOL,
    STRUCTURE_TOL,
)
from .errors import (
    BundleLikeError,
    DimensionMismatchError,
    InconclusiveError,
    InvalidStructureError,
    NotKContactError,
    PreconditionError,
    SelfAdjointnessError,
)
from .frame_geometry import (
    CurvatureReport,
    StructureFrame,
    covariant_derivative_endomorphism,
    curvature_frame,
    levi_civita_frame,
    sectional_curvature,
)

logger = logging.getLogger(__name__)

StructureTag = Literal["DeformedSasakian", "ProductKahler", "Neither"]

DEFORMED_SASAKIAN: StructureTag = "DeformedSasakian"
PRODUCT_KAHLER: StructureTag = "ProductKahler"
NEITHER: StructureTag = "Neither"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _sup(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


# =============================================================================
# Domain types
# =============================================================================


@dataclass(frozen=True)
class AlmostContactStructure:
    """(zeta, eta, Phi, g) in the coordinates of a StructureFrame.

    Construction only checks shapes; validate() reports the structure
    invariants so that broken inputs can still be inspected.
    """

    frame: StructureFrame
    zeta: np.ndarray
    eta: np.ndarray
    phi: np.ndarray
    contact_scale: float | None = None
    name: str = ""

    def __post_init__(self) -> None:
        n = self.frame.dim
        zeta, eta, phi = _frozen(self.zeta), _frozen(self.eta), _frozen(self.phi)
        if zeta.shape != (n,) or eta.shape != (n,) or phi.shape != (n, n):
            raise DimensionMismatchError(
                f"structure data must match frame dimension {n}: "
                f"zeta {zeta.shape}, eta {eta.shape}, phi {phi.shape}"
            )
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "phi", phi)
        if not self.name:
            object.__setattr__(self, "name", self.frame.name)

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def metric(self) -> np.ndarray:
        return self.frame.metric


@dataclass(frozen=True)
class DeformationParams:
    """Parameters of a +-(H, F)-deformation."""

    sign: int
    H: float
    F: float

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if not (self.H > 0 and self.F > 0):
            raise ValueError(f"H and F must be positive, got H={self.H}, F={self.F}")


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict[str, float]
    tol: float

    @property
    def violations(self) -> list[str]:
        return [name for name, value in self.residuals.items() if value > self.tol]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class StructureClass:
    tag: StructureTag
    b: float
    residual: float


@dataclass(frozen=True)
class ShapeClass:
    tag: StructureTag
    alpha: float
    beta: float
    residual: float


@dataclass(frozen=True)
class ATensorReport:
    """A_X zeta on the horizontal bundle plus the sign bookkeeping of A_X Y."""

    matrix: np.ndarray
    reeb_residual: float  # g(A_X zeta, Y) - d_eta(X, Y)
    a_xy_residuals: dict[str, float]  # "minus": g(A_X Y, zeta) + d_eta, "plus": ... - d_eta
    antisymmetry_residual: float  # g(A_X zeta, Y) + g(zeta, A_X Y)
    closing_sign: str


@dataclass(frozen=True)
class ReebCheck:
    passed: bool
    residual: float


@dataclass(frozen=True)
class ReebReport:
    checks: dict[str, ReebCheck]
    tol: float

    @property
    def consistent(self) -> bool:
        return len({c.passed for c in self.checks.values()}) == 1

    @property
    def inconclusive(self) -> bool:
        return not self.consistent

    @property
    def geodesic(self) -> bool:
        """True when all four equivalent conditions hold."""
        self.require_consistent()
        return all(c.passed for c in self.checks.values())

    def require_consistent(self) -> None:
        if not self.consistent:
            detail = ", ".join(
                f"{k}={c.residual:.3e}{'' if c.passed else '!'}" for k, c in self.checks.items()
            )
            raise InconclusiveError(
                f"equivalent Reeb conditions disagree at tolerance {self.tol:g}: {detail}"
            )


@dataclass(frozen=True)
class DeformedSectional:
    plane_reading: float
    vector_reading: float
    frame_value: float

    @property
    def selected(self) -> str:
        plane = abs(self.plane_reading - self.frame_value)
        vector = abs(self.vector_reading - self.frame_value)
        return "plane" if plane <= vector else "vector"


# =============================================================================
# Frame-level building blocks
# =============================================================================


def d_eta(acs: AlmostContactStructure) -> np.ndarray:
    """d_eta[i, j] = d_eta(e_i, e_j) = -1/2 eta([e_i, e_j])."""
    return -0.5 * np.einsum("k,kij->ij", acs.eta, acs.frame.structure_constants)


def contact_form_matrix(acs: AlmostContactStructure) -> np.ndarray:
    """Matrix of (X, Y) -> g(X, Phi Y)."""
    return acs.metric @ acs.phi


def contact_scale_of(acs: AlmostContactStructure) -> tuple[float, float]:
    """Least-squares a in d_eta = a g(., Phi .); returns (a, sup residual)."""
    deta = d_eta(acs)
    gphi = contact_form_matrix(acs)
    denom = float(np.sum(gphi * gphi))
    a = float(np.sum(deta * gphi) / denom) if denom > 0 else 0.0
    return a, _sup(deta - a * gphi)


def horizontal_projection(acs: AlmostContactStructure) -> np.ndarray:
    """Pi = Id - zeta (x) eta acting on column vectors."""
    return np.eye(acs.dim) - np.outer(acs.zeta, acs.eta)


def horizontal_basis(acs: AlmostContactStructure) -> np.ndarray:
    """Columns: a g-orthonormal basis of ker(eta)."""
    raw = null_space(acs.eta.reshape(1, -1))
    gram = raw.T @ acs.metric @ raw
    lower = np.linalg.cholesky(gram)
    return raw @ np.linalg.inv(lower).T


def reeb_covariant_derivative(acs: AlmostContactStructure, gamma: np.ndarray) -> np.ndarray:
    """N with column i equal to nabla_{e_i} zeta."""
    return np.einsum("kij,j->ki", gamma, acs.zeta)


def lie_derivative_metric(
    acs: AlmostContactStructure, gamma: np.ndarray | None = None
) -> np.ndarray:
    """(L_zeta g)(e_i, e_j) = g(nabla_i zeta, e_j) + g(e_i, nabla_j zeta)."""
    if gamma is None:
        gamma = levi_civita_frame(acs.frame)
    m = reeb_covariant_derivative(acs, gamma).T @ acs.metric
    return m + m.T


def is_k_contact(acs: AlmostContactStructure, tol: float = KILLING_TOL) -> bool:
    """Reeb field Killing and a contact scale recorded."""
    killing = _sup(lie_derivative_metric(acs)) <= tol * max(1.0, _sup(acs.metric))
    return killing and acs.contact_scale is not None


# =============================================================================
# Operations
# =============================================================================


def validate(acs: AlmostContactStructure, tol: float = STRUCTURE_TOL) -> ValidationReport:
    """Evaluate the almost-contact metric invariants.

    Raises:
        InvalidStructureError: If the frame dimension is even
    """
    if acs.dim % 2 == 0:
        raise InvalidStructureError(
            f"{acs.name}: almost-contact structures need odd dimension, got {acs.dim}"
        )
    g, zeta, eta, phi = acs.metric, acs.zeta, acs.eta, acs.phi
    n = acs.dim
    residuals = {
        "eta_zeta": abs(float(eta @ zeta) - 1.0),
        "phi_squared": _sup(phi @ phi + np.eye(n) - np.outer(zeta, eta)),
        "metric_compatibility": _sup(phi.T @ g @ phi - g + np.outer(eta, eta)),
        "zeta_unit": abs(float(zeta @ g @ zeta) - 1.0),
        "phi_zeta": _sup(phi @ zeta),
        "eta_phi": _sup(eta @ phi),
        "eta_dual": _sup(g @ zeta - eta),
    }
    if acs.contact_scale is not None:
        residuals["contact"] = _sup(d_eta(acs) - acs.contact_scale * contact_form_matrix(acs))
    report = ValidationReport(residuals=residuals, tol=tol)
    if not report.ok:
        logger.info("%s: structure violations %s", acs.name, report.violations)
    return report


def hf_deform(acs: AlmostContactStructure, p: DeformationParams) -> AlmostContactStructure:
    """+-(H, F)-deformation.

    zeta* = zeta/H, eta* = H eta, Phi* = +-Phi, g* = F^2 g + (H^2 - F^2) eta (x) eta,
    a* = +-a H / F^2.
    """
    H, F = float(p.H), float(p.F)
    metric = F * F * acs.metric + (H * H - F * F) * np.outer(acs.eta, acs.eta)
    metric = 0.5 * (metric + metric.T)
    scale = None
    if acs.contact_scale is not None:
        scale = p.sign * acs.contact_scale * H / (F * F)
    return AlmostContactStructure(
        frame=acs.frame.with_metric(metric),
        zeta=acs.zeta / H,
        eta=H * acs.eta,
        phi=p.sign * acs.phi,
        contact_scale=scale,
        name=f"{acs.name}*({'+' if p.sign > 0 else '-'}{H:g},{F:g})",
    )


def a_tensor_on_reeb(acs: AlmostContactStructure) -> ATensorReport:
    """The map X -> A_X zeta on the horizontal sub-bundle.

    A_X zeta is the horizontal part of nabla_X zeta; A_X Y = eta(nabla_X Y) zeta.

    Raises:
        BundleLikeError: If L_zeta g does not vanish on horizontal vectors
    """
    gamma = levi_civita_frame(acs.frame)
    hb = horizontal_basis(acs)
    lie = lie_derivative_metric(acs, gamma)
    horizontal_lie = _sup(hb.T @ lie @ hb)
    if horizontal_lie > KILLING_TOL * max(1.0, _sup(acs.metric)):
        raise BundleLikeError(
            f"{acs.name}: metric is not bundle-like with respect to the Reeb foliation "
            f"((L_zeta g) on horizontal vectors = {horizontal_lie:.3e})"
        )

    g = acs.metric
    proj = horizontal_projection(acs)
    matrix = proj @ reeb_covariant_derivative(acs, gamma) @ proj
    deta_h = hb.T @ d_eta(acs) @ hb

    a_zeta = (matrix @ hb).T @ g @ hb  # [a, b] = g(A_{X_a} zeta, X_b)
    a_xy = np.einsum("k,kij,ia,jb->ab", acs.eta, gamma, hb, hb)  # g(A_{X_a} X_b, zeta)

    minus = _sup(a_xy + deta_h)
    plus = _sup(a_xy - deta_h)
    if _sup(deta_h) <= KILLING_TOL:
        closing = "either"
    else:
        closing = "minus" if minus <= plus else "plus"
    return ATensorReport(
        matrix=matrix,
        reeb_residual=_sup(a_zeta - deta_h),
        a_xy_residuals={"minus": minus, "plus": plus},
        antisymmetry_residual=_sup(a_zeta + a_xy),
        closing_sign=closing,
    )


def geodesic_reeb_checks(acs: AlmostContactStructure, tol: float = REEB_TOL) -> ReebReport:
    """The four equivalent conditions for Reeb orbits to be geodesics.

    (i) nabla_zeta zeta = 0, (ii) L_zeta eta = 0, (iii) (nabla_zeta Phi) zeta = 0,
    (iv) d_eta(zeta, .) = 0.
    """
    gamma = levi_civita_frame(acs.frame)
    zeta = acs.zeta
    c = acs.frame.structure_constants

    nabla_zz = np.einsum("kij,i,j->k", gamma, zeta, zeta)
    lie_eta = -np.einsum("k,kij,i->j", acs.eta, c, zeta)
    dphi = covariant_derivative_endomorphism(acs.frame, gamma, acs.phi)
    dphi_zz = np.einsum("i,ilj,j->l", zeta, dphi, zeta)
    deta_z = zeta @ d_eta(acs)

    g = acs.metric
    ginv = acs.frame.inverse_metric
    residuals = {
        "nabla_zeta_zeta": float(np.sqrt(abs(nabla_zz @ g @ nabla_zz))),
        "lie_zeta_eta": float(np.sqrt(abs(lie_eta @ ginv @ lie_eta))),
        "nabla_zeta_phi_zeta": float(np.sqrt(abs(dphi_zz @ g @ dphi_zz))),
        "d_eta_zeta": float(np.sqrt(abs(deta_z @ ginv @ deta_z))),
    }
    checks = {k: ReebCheck(passed=v <= tol, residual=v) for k, v in residuals.items()}
    report = ReebReport(checks=checks, tol=tol)
    if report.inconclusive:
        logger.warning("%s: Reeb checks disagree %s", acs.name, residuals)
    return report


def classify(acs: AlmostContactStructure, tol: float = CLASSIFY_TOL) -> StructureClass:
    """Fit (nabla_X Phi)(Y) = b (g(X, Y) zeta - eta(Y) X) over all frame pairs.

    Returns DeformedSasakian (b != 0), ProductKahler (b = 0) or Neither.
    """
    gamma = levi_civita_frame(acs.frame)
    dphi = covariant_derivative_endomorphism(acs.frame, gamma, acs.phi)  # [i, l, j]
    n = acs.dim
    model = np.einsum("ij,l->ilj", acs.metric, acs.zeta) - np.einsum(
        "j,il->ilj", acs.eta, np.eye(n)
    )
    denom = float(np.sum(model * model))
    b = float(np.sum(dphi * model) / denom) if denom > 0 else 0.0
    residual = _sup(dphi - b * model)

    if residual < tol and abs(b) > tol:
        result = StructureClass(tag=DEFORMED_SASAKIAN, b=b, residual=residual)
    elif residual < tol:
        result = StructureClass(tag=PRODUCT_KAHLER, b=0.0, residual=residual)
    else:
        result = StructureClass(tag=NEITHER, b=b, residual=residual)
    logger.debug("%s: classified %s (b=%.12g, residual=%.3e)", acs.name, *vars(result).values())
    return result


def phi_sectional(
    acs: AlmostContactStructure,
    x: np.ndarray,
    report: CurvatureReport | None = None,
    tol: float = 1e-8,
) -> float:
    """K(X, Phi X) for a horizontal unit vector X.

    Raises:
        PreconditionError: If X is not horizontal or not unit
        DegeneratePlaneError: If Phi X vanishes
    """
    x = np.asarray(x, dtype=float)
    if abs(float(acs.eta @ x)) > tol:
        raise PreconditionError(f"X is not horizontal (eta(X) = {acs.eta @ x:.3e})")
    if abs(float(x @ acs.metric @ x) - 1.0) > tol:
        raise PreconditionError("X is not a unit vector")
    if report is None:
        report = curvature_frame(acs.frame)
    return sectional_curvature(report.riemann, acs.metric, x, acs.phi @ x)


def _require_k_contact(acs: AlmostContactStructure) -> float:
    lie = _sup(lie_derivative_metric(acs))
    if lie > KILLING_TOL * max(1.0, _sup(acs.metric)):
        raise NotKContactError(
            f"{acs.name}: Reeb field is not Killing (|L_zeta g| = {lie:.3e}); the foliation it "
            "induces is not Riemannian"
        )
    if acs.contact_scale is None:
        raise PreconditionError(f"{acs.name}: contact scale a is not recorded")
    return float(acs.contact_scale)


def deformed_sectional(
    acs: AlmostContactStructure,
    p: DeformationParams,
    x: np.ndarray,
    y: np.ndarray,
    base: CurvatureReport | None = None,
    deformed: CurvatureReport | None = None,
) -> DeformedSectional:
    """Both readings of K*(X, Y) for horizontal X, Y, plus the frame value.

    plane reading:   K⊥(X, Y) / F^2   - 3 a*^2 g*(X^, Phi* Y^)^2
    vector reading:  F^2 K⊥(X, Y)     - 3 a*^2 g*(X^, Phi* Y^)^2
    with X^, Y^ a g*-orthonormal basis of the plane and
    K⊥ = K + 3 a^2 g(X', Phi Y')^2 for g-orthonormal X', Y' of the same plane.
    """
    a = _require_k_contact(acs)
    star = hf_deform(acs, p)
    base = base or curvature_frame(acs.frame)
    deformed = deformed or curvature_frame(star.frame)
    a_star = float(star.contact_scale)

    def orthonormal(metric: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        u = x / np.sqrt(x @ metric @ x)
        w = y - (u @ metric @ y) * u
        return u, w / np.sqrt(w @ metric @ w)

    u, w = orthonormal(acs.metric)
    k_perp = sectional_curvature(base.riemann, acs.metric, u, w) + 3 * a * a * (
        u @ acs.metric @ acs.phi @ w
    ) ** 2
    us, ws = orthonormal(star.metric)
    twist = 3 * a_star * a_star * (us @ star.metric @ star.phi @ ws) ** 2
    F2 = p.F * p.F
    return DeformedSectional(
        plane_reading=float(k_perp / F2 - twist),
        vector_reading=float(F2 * k_perp - twist),
        frame_value=sectional_curvature(deformed.riemann, star.metric, x, y),
    )


def deformed_ricci(acs: AlmostContactStructure, p: DeformationParams) -> CurvatureReport:
    """Closed-form Ricci tensor of the +-(H, F)-deformation of a K-contact structure.

    With Pi the horizontal projection and a the contact scale:

        Rc*  = Pi^T Rc Pi + 2 a^2 (1 - H^2/F^2) Pi^T g Pi
               + a^2 (H^4/F^4)(dim - 1) eta (x) eta

    i.e. Rc*(X, Y) = Rc⊥(X, Y) - 2 a*^2 g*(X, Y) on horizontal vectors,
    Rc*(zeta*, zeta*) = a*^2 (dim - 1), no mixed terms.  The Riemann tensor
    of the report comes from the deformed frame; residual_norms compare the
    closed forms with it.

    Raises:
        NotKContactError: If zeta is not Killing
        PreconditionError: If no contact scale is recorded
    """
    a = _require_k_contact(acs)
    H, F = float(p.H), float(p.F)
    n = acs.dim
    g = acs.metric
    proj = horizontal_projection(acs)
    base = curvature_frame(acs.frame)

    ricci = (
        proj.T @ base.ricci @ proj
        + 2 * a * a * (1 - H * H / (F * F)) * proj.T @ g @ proj
        + a * a * (H**4 / F**4) * (n - 1) * np.outer(acs.eta, acs.eta)
    )
    ricci = 0.5 * (ricci + ricci.T)

    star = hf_deform(acs, p)
    frame_report = curvature_frame(star.frame)
    scale = max(1.0, _sup(frame_report.ricci))
    a_star2 = a * a * H * H / F**4

    residuals: dict[str, float] = {
        "closed_form_vs_frame": _sup(ricci - frame_report.ricci) / scale,
        "reeb_ricci": abs(
            float(star.zeta @ frame_report.ricci @ star.zeta) - a_star2 * (n - 1)
        ),
    }
    hb = horizontal_basis(acs)
    residuals["reeb_sectional"] = max(
        abs(sectional_curvature(frame_report.riemann, star.metric, hb[:, i], star.zeta) - a_star2)
        for i in range(hb.shape[1])
    )
    x = hb[:, 0]
    y = acs.phi @ x if n == 3 else hb[:, 1]
    sect = deformed_sectional(acs, p, x, y, base=base, deformed=frame_report)
    residuals["sectional_plane_reading"] = abs(sect.plane_reading - sect.frame_value)
    residuals["sectional_vector_reading"] = abs(sect.vector_reading - sect.frame_value)

    ginv_star = star.frame.inverse_metric
    return CurvatureReport(
        riemann=frame_report.riemann,
        ricci=ricci,
        scalar=float(np.sum(ginv_star * ricci)),
        metric=np.array(star.metric),
        residual_norms=residuals,
    )


def shape_classify(
    shape: np.ndarray, acs: AlmostContactStructure, tol: float = CLASSIFY_TOL
) -> ShapeClass:
    """Fit L = alpha Id + beta zeta (x) eta on a hypersurface frame.

    Raises:
        SelfAdjointnessError: If g L is not symmetric
    """
    L = np.asarray(shape, dtype=float)
    if L.shape != (acs.dim, acs.dim):
        raise DimensionMismatchError(f"shape operator must be {acs.dim}x{acs.dim}")
    gl = acs.metric @ L
    asym = _sup(gl - gl.T)
    if asym > SELF_ADJOINT_TOL * max(1.0, _sup(gl)):
        raise SelfAdjointnessError(f"shape operator is not self-adjoint ({asym:.3e})")

    basis = np.stack([np.eye(acs.dim).ravel(), np.outer(acs.zeta, acs.eta).ravel()], axis=1)
    (alpha, beta), *_ = np.linalg.lstsq(basis, L.ravel(), rcond=None)
    residual = _sup(L - alpha * np.eye(acs.dim) - beta * np.outer(acs.zeta, acs.eta))

    if residual >= tol:
        return ShapeClass(tag=NEITHER, alpha=float(alpha), beta=float(beta), residual=residual)
    if abs(alpha) > tol:
        return ShapeClass(
            tag=DEFORMED_SASAKIAN, alpha=float(alpha), beta=float(beta), residual=residual
        )
    return ShapeClass(tag=PRODUCT_KAHLER, alpha=0.0, beta=float(beta), residual=residual)


def induce_hypersurface_structure(
    frame: StructureFrame,
    tangent_basis: np.ndarray,
    normal: np.ndarray,
    complex_structure: np.ndarray,
    name: str = "hypersurface",
) -> AlmostContactStructure:
    """Structure induced on a real hypersurface of flat C^m.

    V = unit normal, zeta = -J V, eta = <., zeta>, Phi = -eta(.) V + J(.),
    expressed in the frame whose vectors at the base point are the columns
    of *tangent_basis* (ambient coordinates).
    """
    E = np.asarray(tangent_basis, dtype=float)
    V = np.asarray(normal, dtype=float)
    J = np.asarray(complex_structure, dtype=float)
    zeta_amb = -J @ V
    eta = E.T @ zeta_amb
    phi_amb = J @ E - np.outer(V, eta)

    def coords(vectors: np.ndarray) -> np.ndarray:
        sol, *_ = np.linalg.lstsq(E, vectors, rcond=None)
        return sol

    return AlmostContactStructure(
        frame=frame,
        zeta=coords(zeta_amb),
        eta=eta,
        phi=coords(phi_amb),
        name=name,
    )


@dataclass(frozen=True)
class StructureSummary:
    """Bundle of the standard checks for reporting."""

    validation: ValidationReport
    classification: StructureClass
    reeb: ReebReport
    extras: dict[str, float] = field(default_factory=dict)


def summarize(acs: AlmostContactStructure, tol: float = CLASSIFY_TOL) -> StructureSummary:
    a, contact_residual = contact_scale_of(acs)
    return StructureSummary(
        validation=validate(acs),
        classification=classify(acs, tol),
        reeb=geodesic_reeb_checks(acs),
        extras={"fitted_contact_scale": a, "contact_fit_residual": contact_residual},
    )
