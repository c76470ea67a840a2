"""
The radius-r sphere in flat C^2 = H as a real hypersurface.

Left-invariant fields X_a(x) = x q_a (q = i, j, k) span the tangent spaces
of every sphere centred at 0 and satisfy [X_a, X_b] = x [q_a, q_b]; the
complex structure is right multiplication by -k, so the Reeb field
zeta = -J V is a multiple of X_k.
"""

from __future__ import annotations

import numpy as np

from ..almost_contact import (
    AlmostContactStructure,
    contact_scale_of,
    induce_hypersurface_structure,
)
from ..frame_geometry import StructureFrame

_UNITS = np.eye(4)  # 1, i, j, k


def quaternion_product(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p0, p1, p2, p3 = p
    q0, q1, q2, q3 = q
    return np.array(
        [
            p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
            p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
            p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
            p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
        ]
    )


def right_multiplication(q: np.ndarray) -> np.ndarray:
    """Matrix of p -> p q on R^4."""
    return np.stack([quaternion_product(e, q) for e in _UNITS], axis=1)


def round_sphere_hypersurface(radius: float) -> tuple[AlmostContactStructure, np.ndarray]:
    """Induced structure and shape operator L X = nabla_X V at x0 = radius * 1.

    Returns:
        (structure, L) with L = Id / radius in frame coordinates

    Raises:
        ValueError: If radius is not positive
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")
    r = float(radius)
    imaginary = _UNITS[1:]

    c = np.zeros((3, 3, 3))
    for a in range(3):
        for b in range(3):
            comm = quaternion_product(imaginary[a], imaginary[b]) - quaternion_product(
                imaginary[b], imaginary[a]
            )
            c[:, a, b] = comm[1:]

    x0 = r * _UNITS[0]
    tangent = np.stack([quaternion_product(x0, q) for q in imaginary], axis=1)
    normal = x0 / r
    complex_structure = right_multiplication(-_UNITS[3])

    frame = StructureFrame(
        structure_constants=c, metric=tangent.T @ tangent, name=f"hopf-hypersurface({r:g})"
    )
    induced = induce_hypersurface_structure(
        frame, tangent, normal, complex_structure, name=frame.name
    )
    a, _ = contact_scale_of(induced)
    acs = AlmostContactStructure(
        frame=frame,
        zeta=induced.zeta,
        eta=induced.eta,
        phi=induced.phi,
        contact_scale=a,
        name=frame.name,
    )

    d_normal = (np.eye(4) - np.outer(normal, normal)) / r
    shape, *_ = np.linalg.lstsq(tangent, d_normal @ tangent, rcond=None)
    return acs, shape
