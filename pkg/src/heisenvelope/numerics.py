"""Finite differences and quadrature on 1-D grids."""

import numpy as np
from scipy.integrate import cumulative_trapezoid

UNIFORM_RTOL = 1e-9

# fourth-order first-derivative stencils (weights / 12h)
_D1_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0])
_D1_EDGE0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
_D1_EDGE1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0])
# fourth-order second-derivative stencils (weights / 12h^2)
_D2_CENTRAL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0])
_D2_EDGE0 = np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0])
_D2_EDGE1 = np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0])


def uniform_step(grid, rtol=UNIFORM_RTOL):
    """Return the spacing of ``grid`` if it is uniform within ``rtol``, else None."""
    grid = np.asarray(grid, dtype=float)
    steps = np.diff(grid)
    h = (grid[-1] - grid[0]) / (grid.size - 1)
    if np.all(np.abs(steps - h) <= rtol * max(abs(h), 1e-300) + 1e-14 * np.max(np.abs(grid))):
        return float(h)
    return None


def _central(values, weights, wrap):
    n = values.shape[0]
    out = np.zeros_like(values)
    if wrap:
        for k, w in zip(range(-2, 3), weights):
            if w:
                out += w * np.roll(values, -k, axis=0)
        return out
    for k, w in zip(range(-2, 3), weights):
        if w:
            out[2:n - 2] += w * values[2 + k:n - 2 + k]
    return out


def fd_derivatives(values, grid, periodic=False):
    """First and second derivative estimates of node ``values`` along ``grid``.

    Uniform grids use fourth-order central stencils in the interior and
    fourth-order one-sided stencils at the two nodes nearest each end.
    ``periodic`` means the last node repeats the first (value and position
    modulo the period). Non-uniform grids fall back to second-order
    ``numpy.gradient``.
    """
    values = np.asarray(values, dtype=float)
    grid = np.asarray(grid, dtype=float)
    n = values.shape[0]
    h = uniform_step(grid)
    if h is None:
        d1 = np.gradient(values, grid, axis=0, edge_order=2)
        d2 = np.gradient(d1, grid, axis=0, edge_order=2)
        return d1, d2
    if periodic:
        core = values[:-1]
        d1 = _central(core, _D1_CENTRAL, True) / (12 * h)
        d2 = _central(core, _D2_CENTRAL, True) / (12 * h * h)
        return np.concatenate([d1, d1[:1]]), np.concatenate([d2, d2[:1]])
    if n < 6:
        raise ValueError("finite differences need at least 6 nodes")
    d1 = _central(values, _D1_CENTRAL, False)
    d2 = _central(values, _D2_CENTRAL, False)
    d1[0] = np.tensordot(_D1_EDGE0, values[:5], axes=1)
    d1[1] = np.tensordot(_D1_EDGE1, values[:5], axes=1)
    d1[-1] = -np.tensordot(_D1_EDGE0, values[::-1][:5], axes=1)
    d1[-2] = -np.tensordot(_D1_EDGE1, values[::-1][:5], axes=1)
    d2[0] = np.tensordot(_D2_EDGE0, values[:6], axes=1)
    d2[1] = np.tensordot(_D2_EDGE1, values[:6], axes=1)
    d2[-1] = np.tensordot(_D2_EDGE0, values[::-1][:6], axes=1)
    d2[-2] = np.tensordot(_D2_EDGE1, values[::-1][:6], axes=1)
    return d1 / (12 * h), d2 / (12 * h * h)


def cumulative_integral(values, grid):
    """Composite-trapezoid running integral, starting at 0 on the first node."""
    return cumulative_trapezoid(np.asarray(values, dtype=float), np.asarray(grid, dtype=float), initial=0.0)


def cumulative_hermite_integral(values, slopes, grid):
    """Running integral of the cubic Hermite interpolant of (values, slopes).

    Per panel this is the trapezoid rule plus the endpoint correction
    h^2/12 (f'_i - f'_{i+1}); fourth order, and the corrections telescope to
    zero over a full period of a periodic integrand.
    """
    values = np.asarray(values, dtype=float)
    slopes = np.asarray(slopes, dtype=float)
    h = np.diff(np.asarray(grid, dtype=float))
    pieces = 0.5 * h * (values[:-1] + values[1:]) + h**2 / 12.0 * (slopes[:-1] - slopes[1:])
    return np.concatenate([[0.0], np.cumsum(pieces)])


def integral(values, grid):
    return float(np.trapezoid(np.asarray(values, dtype=float), np.asarray(grid, dtype=float)))
