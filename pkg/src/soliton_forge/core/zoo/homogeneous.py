"""
Homogeneous Sasakian models in left-invariant frames.

The three-dimensional family

    [e1,e2] = kappa e3,  [e2,e3] = nu e1,  [e3,e1] = nu e2,   g = Id,

with zeta = e3, Phi e1 = e2, Phi e2 = -e1 contains the round sphere
(nu > 0), the Heisenberg group (nu = 0) and the cover of SL(2,R) (nu < 0).
Frames are rescaled by the fitted contact scale so that d_eta = g(., Phi .)
holds exactly; the Phi-sectional curvature of the normalized frame is then
2 nu' - 3 with nu' = 2 nu / kappa.
"""

from __future__ import annotations

import logging

import numpy as np

from ..almost_contact import AlmostContactStructure, contact_scale_of
from ..frame_geometry import StructureFrame
from .base import ModelId, ModelKind
from .registry import get_model

logger = logging.getLogger(__name__)


def _cyclic_frame(kappa: float, nu: float, reeb_index: int) -> np.ndarray:
    r = reeb_index
    i, j = (r + 1) % 3, (r + 2) % 3
    c = np.zeros((3, 3, 3))
    c[r, i, j], c[r, j, i] = kappa, -kappa
    c[i, j, r], c[i, r, j] = nu, -nu
    c[j, r, i], c[j, i, r] = nu, -nu
    return c


def _cyclic_structure(
    c: np.ndarray, reeb_index: int, name: str, contact_scale: float | None
) -> AlmostContactStructure:
    r = reeb_index
    i, j = (r + 1) % 3, (r + 2) % 3
    phi = np.zeros((3, 3))
    phi[j, i] = 1.0  # Phi e_i = e_j
    phi[i, j] = -1.0  # Phi e_j = -e_i
    unit = np.eye(3)[r]
    return AlmostContactStructure(
        frame=StructureFrame(structure_constants=c, metric=np.eye(3), name=name),
        zeta=unit,
        eta=unit,
        phi=phi,
        contact_scale=contact_scale,
        name=name,
    )


def tanno_model(kind: ModelKind | ModelId | str) -> AlmostContactStructure:
    """Normalized homogeneous Sasakian model (contact scale 1, b = 1).

    Args:
        kind: "Sphere3", "SL2RCover", "Nil3", a ModelId, or any registry alias

    Raises:
        ValueError: If the name does not resolve to a homogeneous model
    """
    name = kind.kind if isinstance(kind, ModelId) else kind
    model = get_model(name)
    raw_c = _cyclic_frame(model.kappa, model.nu, model.reeb_index)
    raw = _cyclic_structure(raw_c, model.reeb_index, model.model_id, None)
    a_raw, misfit = contact_scale_of(raw)
    logger.debug("%s: raw contact scale %.12g (fit residual %.3e)", model.model_id, a_raw, misfit)
    return _cyclic_structure(raw_c / a_raw, model.reeb_index, model.model_id, 1.0)


def calabi_base(n: int, k: float) -> AlmostContactStructure | None:
    """Sasakian frame (contact scale 1) over a Kahler-Einstein base with Rc_N = k g_N.

    n = 1: the three-dimensional family with nu' = k/2.
    n >= 2, k = 0: the Heisenberg frame of dimension 2n + 1.
    Otherwise None; callers use the closed-form Einstein base data.
    """
    if n < 1:
        raise ValueError(f"complex dimension must be positive, got {n}")
    if n == 1:
        return _cyclic_structure(_cyclic_frame(2.0, 0.5 * k, 2), 2, f"calabi_base(1,{k:g})", 1.0)
    if k != 0:
        return None

    dim = 2 * n + 1
    reeb = dim - 1
    c = np.zeros((dim, dim, dim))
    phi = np.zeros((dim, dim))
    for p in range(n):
        a, b = 2 * p, 2 * p + 1
        c[reeb, a, b], c[reeb, b, a] = 2.0, -2.0
        phi[b, a], phi[a, b] = 1.0, -1.0
    unit = np.eye(dim)[reeb]
    name = f"heisenberg{dim}"
    return AlmostContactStructure(
        frame=StructureFrame(structure_constants=c, metric=np.eye(dim), name=name),
        zeta=unit,
        eta=unit,
        phi=phi,
        contact_scale=1.0,
        name=name,
    )
