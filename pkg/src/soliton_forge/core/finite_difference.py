"""
Central finite-difference stencils on vectorized evaluators.

Every evaluator takes an array of points with shape (m, dim) and returns an
array whose leading axis is m.  The helpers stack all stencil points into one
call, so a chart metric written with numpy broadcasting is evaluated once per
derivative level rather than once per point.

Weights (standard central differences):

    order 4, first:   [1/12, -2/3, 0, 2/3, -1/12]
    order 8, first:   [1/280, -4/105, 1/5, -4/5, 0, 4/5, -1/5, 4/105, -1/280]
    order 4, second:  [-1/12, 4/3, -5/2, 4/3, -1/12]
    order 8, second:  [-1/560, 8/315, -1/5, 8/5, -205/72, 8/5, -1/5, 8/315, -1/560]
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

ArrayFn = Callable[[np.ndarray], np.ndarray]

_FIRST: dict[int, tuple[np.ndarray, np.ndarray]] = {
    4: (
        np.array([-2.0, -1.0, 1.0, 2.0]),
        np.array([1.0 / 12.0, -2.0 / 3.0, 2.0 / 3.0, -1.0 / 12.0]),
    ),
    8: (
        np.array([-4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0]),
        np.array(
            [
                1.0 / 280.0,
                -4.0 / 105.0,
                1.0 / 5.0,
                -4.0 / 5.0,
                4.0 / 5.0,
                -1.0 / 5.0,
                4.0 / 105.0,
                -1.0 / 280.0,
            ]
        ),
    ),
}

_SECOND: dict[int, tuple[np.ndarray, np.ndarray]] = {
    4: (
        np.array([-2.0, -1.0, 0.0, 1.0, 2.0]),
        np.array([-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0]),
    ),
    8: (
        np.arange(-4.0, 5.0),
        np.array(
            [
                -1.0 / 560.0,
                8.0 / 315.0,
                -1.0 / 5.0,
                8.0 / 5.0,
                -205.0 / 72.0,
                8.0 / 5.0,
                -1.0 / 5.0,
                8.0 / 315.0,
                -1.0 / 560.0,
            ]
        ),
    ),
}


def first_derivative_stencil(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (offsets, weights) of the central first-derivative stencil.

    Raises:
        ValueError: If order is not 4 or 8
    """
    if order not in _FIRST:
        raise ValueError(f"Unsupported stencil order {order}. Valid orders: 4, 8")
    return _FIRST[order]


def second_derivative_stencil(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Return (offsets, weights) of the central second-derivative stencil."""
    if order not in _SECOND:
        raise ValueError(f"Unsupported stencil order {order}. Valid orders: 4, 8")
    return _SECOND[order]


def stencil_reach(order: int) -> int:
    """Largest offset (in steps) touched by a first-derivative stencil."""
    offsets, _ = first_derivative_stencil(order)
    return int(np.max(np.abs(offsets)))


def gradient(func: ArrayFn, points: np.ndarray, step: float, order: int = 4) -> np.ndarray:
    """Partial derivatives of *func* at every point.

    Args:
        func: Vectorized evaluator, (k, dim) -> (k, *value_shape)
        points: Array of shape (m, dim)
        step: Stencil spacing
        order: 4 or 8

    Returns:
        Array of shape (m, dim, *value_shape); axis 1 is the derivative direction.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    m, dim = pts.shape
    offsets, weights = first_derivative_stencil(order)
    shifts = step * offsets[:, None, None] * np.eye(dim)[None, :, :]
    shifted = pts[:, None, None, :] + shifts[None, :, :, :]
    values = np.asarray(func(shifted.reshape(-1, dim)))
    values = values.reshape(m, len(offsets), dim, *values.shape[1:])
    return np.tensordot(weights, values, axes=([0], [1])) / step


def hessian(func: ArrayFn, points: np.ndarray, step: float, order: int = 4) -> np.ndarray:
    """Second partial derivatives by nested first-derivative stencils.

    Returns:
        Array of shape (m, dim, dim, *value_shape), symmetrized in axes 1, 2.
    """

    def inner(p: np.ndarray) -> np.ndarray:
        return gradient(func, p, step, order)

    raw = gradient(inner, points, step, order)
    return 0.5 * (raw + np.swapaxes(raw, 1, 2))


def derivative_1d(
    func: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray | float,
    step: float,
    order: int = 8,
    nth: int = 1,
) -> np.ndarray:
    """First or second derivative of a scalar function of one variable.

    *func* must accept a 1-D array of abscissae and return values of the same
    shape.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if nth == 1:
        offsets, weights = first_derivative_stencil(order)
        scale = step
    elif nth == 2:
        offsets, weights = second_derivative_stencil(order)
        scale = step * step
    else:
        raise ValueError(f"Unsupported derivative order {nth}. Valid: 1, 2")
    grid = xs[:, None] + step * offsets[None, :]
    values = np.asarray(func(grid.ravel()), dtype=float).reshape(grid.shape)
    return values @ weights / scale


def derivative_on_grid(
    values: np.ndarray,
    index: np.ndarray,
    step: float,
    order: int = 8,
    nth: int = 1,
) -> np.ndarray:
    """First or second derivative of tabulated values on a uniform grid.

    Args:
        values: Samples at equally spaced abscissae
        index: Grid positions to differentiate at; each needs the full stencil
            reach on both sides
        step: Grid spacing
        order: 4 or 8
        nth: 1 or 2

    Raises:
        ValueError: If a stencil leaves the grid
    """
    values = np.asarray(values, dtype=float)
    index = np.atleast_1d(np.asarray(index, dtype=int))
    if nth == 1:
        offsets, weights = first_derivative_stencil(order)
        scale = step
    elif nth == 2:
        offsets, weights = second_derivative_stencil(order)
        scale = step * step
    else:
        raise ValueError(f"Unsupported derivative order {nth}. Valid: 1, 2")
    reach = stencil_reach(order)
    if index.size and (index.min() < reach or index.max() >= len(values) - reach):
        raise ValueError(
            f"stencil of reach {reach} leaves a grid of {len(values)} points at {index}"
        )
    taps = index[:, None] + offsets.astype(int)[None, :]
    return values[taps] @ weights / scale
