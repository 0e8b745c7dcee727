"""Horizontal envelopes of line families driven by p(theta) and t(theta).

When t' = (p')^2 - p^2 the family theta -> (p, theta, t) has the horizontal
envelope

    x = p cos(theta) - p' sin(theta)
    y = p sin(theta) + p' cos(theta)
    z = t - p' p

with (x', y') = (p + p'')(-sin theta, cos theta) and z' = -p^2 - p p''.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import errors
from .heisenberg import Curve, Point3, contact_normality, horizontality_residual, p_curvature
from .lines import MIN_FAMILY_NODES, FamilySpec
from .numerics import cumulative_hermite_integral, fd_derivatives, integral, uniform_step
from .support import TWO_PI, HeightFunction, SupportFunction
from .tolerances import EPS_REG
from .tolerances import current as current_tolerances

DEFAULT_NODES = 1024


def default_grid(n: int = DEFAULT_NODES) -> np.ndarray:
    """Uniform grid on [0, 2 pi] with both endpoints."""
    return np.linspace(0.0, TWO_PI, int(n))


def _grid(grid):
    return default_grid() if grid is None else np.asarray(grid, dtype=float)


def compat_rhs(p: SupportFunction, theta):
    """(p')^2 - p^2, the slope every compatible height must have."""
    return p.eval_d1(theta) ** 2 - p.eval(theta) ** 2


def compat_rhs_d1(p: SupportFunction, theta):
    """Derivative of (p')^2 - p^2, i.e. 2 p' (p'' - p)."""
    return 2.0 * p.eval_d1(theta) * (p.eval_d2(theta) - p.eval(theta))


def integrate_t(p: SupportFunction, t0: float, grid) -> HeightFunction:
    """Height function t = t0 + int_{grid[0]}^theta ((p')^2 - p^2).

    Node values come from the composite trapezoid rule with endpoint
    corrections (which uses t'' = 2 p'(p'' - p)); between nodes t is the cubic
    Hermite interpolant through those values with the exact slopes, and
    ``eval_d1`` is the exact right-hand side everywhere.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < MIN_FAMILY_NODES:
        raise errors.TooFewSamples(f"integrate_t needs at least {MIN_FAMILY_NODES} nodes")
    if np.any(np.diff(grid) <= 0):
        raise errors.NonMonotonicGrid("integration grid must be strictly increasing")
    if uniform_step(grid) is None:
        raise errors.InvalidParameter("integrate_t needs a uniform grid")
    slopes = compat_rhs(p, grid)
    values = float(t0) + cumulative_hermite_integral(slopes, compat_rhs_d1(p, grid), grid)
    return HeightFunction.from_hermite(grid, values, slopes, df=lambda th: compat_rhs(p, th))


def make_family(p: SupportFunction, t0: float = 0.0, n: int = DEFAULT_NODES, grid=None) -> FamilySpec:
    """Family with the compatible height obtained by :func:`integrate_t`."""
    if grid is None:
        lo, hi = p.domain
        grid = np.linspace(lo, hi, int(n))
    return FamilySpec(p, integrate_t(p, t0, grid), grid)


def envelope_point(p: SupportFunction, t: HeightFunction, theta) -> Point3:
    pv = p.eval(theta)
    dp = p.eval_d1(theta)
    c, s = np.cos(theta), np.sin(theta)
    out = (pv * c - dp * s, pv * s + dp * c, t.eval(theta) - dp * pv)
    if np.ndim(theta) == 0:
        return Point3(*map(float, out))
    return np.column_stack(out)


def generate_envelope(fam: FamilySpec) -> Curve:
    """Sample the envelope of ``fam`` on its grid with closed-form derivatives.

    z' is taken as t' - p p'' - (p')^2 using the family's own t', so the
    horizontality residual measures exactly the compatibility defect.
    Second derivatives use p''' when the support provides it, otherwise
    finite differences of the first derivatives.
    """
    fam.require_compatible()
    sf, th = fam.support, fam.grid
    p = sf.eval(th)
    dp = sf.eval_d1(th)
    d2p = sf.eval_d2(th)
    t = fam.height.eval(th)
    dt = fam.height.eval_d1(th)
    c, s = np.cos(th), np.sin(th)
    rho = p + d2p

    x = p * c - dp * s
    y = p * s + dp * c
    z = t - dp * p
    d1 = np.column_stack([-s * rho, c * rho, dt - p * d2p - dp**2])
    if sf.has_d3:
        drho = dp + sf.eval_d3(th)
        ddx = -c * rho - s * drho
        ddy = -s * rho + c * drho
        d2 = np.column_stack([ddx, ddy, ddx * y - x * ddy])
    else:
        d2, _ = fd_derivatives(d1, th, periodic=False)
    return Curve(th, np.column_stack([x, y, z]), d1, d2, derivative_source="exact")


def degenerate_nodes(p: SupportFunction, grid=None) -> np.ndarray:
    """Mask of nodes where |p + p''| < eps_reg (cusps of the projection)."""
    grid = _grid(grid)
    return np.abs(p.radius_of_curvature(grid)) < EPS_REG


def curvature_closed_form(p: SupportFunction, grid=None, strict: bool = True) -> np.ndarray:
    """k = 1 / (p + p'') on the grid.

    With ``strict=False`` degenerate nodes give NaN instead of raising.
    """
    grid = _grid(grid)
    rho = np.asarray(p.radius_of_curvature(grid), dtype=float)
    bad = np.abs(rho) < EPS_REG
    if np.any(bad):
        if strict:
            i = int(np.argmax(bad))
            raise errors.DegenerateRadius(f"|p + p''| = {abs(rho[i]):.3g} at theta = {grid[i]:.6g}")
        rho = np.where(bad, np.nan, rho)
    return 1.0 / rho


def length_by_curvature(p: SupportFunction, grid=None) -> float:
    """int 1/|k| over the grid; raises DegenerateRadius at cusps."""
    grid = _grid(grid)
    return integral(1.0 / np.abs(curvature_closed_form(p, grid)), grid)


def horizontal_length(p: SupportFunction, grid=None) -> float:
    """Horizontal length int |p + p''| over the grid.

    When k is nowhere degenerate the radius-of-curvature form int 1/|k| is
    evaluated as well and must agree to ``tol_identity``.
    """
    grid = _grid(grid)
    length = integral(np.abs(p.radius_of_curvature(grid)), grid)
    if not np.any(degenerate_nodes(p, grid)):
        other = length_by_curvature(p, grid)
        if abs(other - length) > current_tolerances().tol_identity * (1.0 + length):
            raise ArithmeticError(f"length forms disagree: {length!r} vs {other!r}")
    return length


def santalo_area(p: SupportFunction, grid=None) -> float:
    """F = 1/2 int (p^2 - (p')^2), the signed area enclosed by the projected envelope."""
    if not p.periodic:
        raise errors.NotPeriodic("Santalo area needs a periodic support function")
    grid = _grid(grid)
    return 0.5 * integral(p.eval(grid) ** 2 - p.eval_d1(grid) ** 2, grid)


class Closedness(NamedTuple):
    z_drop: float
    closed: bool


def z_drop_integral(p: SupportFunction, grid=None) -> float:
    """-int (p^2 + p p''), the change of z along the envelope."""
    grid = _grid(grid)
    pv = p.eval(grid)
    return -integral(pv**2 + pv * p.eval_d2(grid), grid)


def closedness_check(p: SupportFunction, t: HeightFunction, grid=None) -> Closedness:
    """z(2 pi) - z(0) of the envelope and whether it closes up.

    The grid defaults to the node grid of ``t`` (or the default grid when t
    is analytic). Closed means |z_drop| <= tol_closed * (1 + |t0|).
    """
    if not p.periodic:
        raise errors.NotPeriodic("closedness check needs a periodic support function")
    if grid is None:
        grid = t.grid if t.grid is not None else default_grid()
    grid = np.asarray(grid, dtype=float)
    z_drop = z_drop_integral(p, grid)
    t0 = float(t.eval(grid[0]))
    tol = current_tolerances().tol_closed * (1.0 + abs(t0))
    return Closedness(z_drop, bool(abs(z_drop) <= tol))


@dataclass(frozen=True)
class InvariantReport:
    k: Optional[list]
    tau_sup: Optional[float]
    length: float
    area_F: Optional[float]
    z_drop: float
    horiz_residual_sup: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "tau_sup": self.tau_sup,
            "length": self.length,
            "area_F": self.area_F,
            "z_drop": self.z_drop,
            "horiz_residual_sup": self.horiz_residual_sup,
        }


def invariant_report(fam: FamilySpec, curve: Optional[Curve] = None) -> InvariantReport:
    """Every invariant of the envelope of ``fam`` in one record.

    k and tau are None when the envelope is not horizontally regular
    (p = 0 gives a point on the z-axis).
    """
    curve = generate_envelope(fam) if curve is None else curve
    try:
        k = [float(v) for v in p_curvature(curve)]
        tau_sup = float(np.max(np.abs(contact_normality(curve))))
    except errors.NotHorizontallyRegular:
        k, tau_sup = None, None
    p = fam.support
    if p.periodic:
        area = santalo_area(p, fam.grid)
        z_drop = closedness_check(p, fam.height, fam.grid).z_drop
    else:
        area = None
        z_drop = float(curve.z[-1] - curve.z[0])
    return InvariantReport(
        k=k,
        tau_sup=tau_sup,
        length=horizontal_length(p, fam.grid),
        area_F=area,
        z_drop=float(z_drop),
        horiz_residual_sup=float(np.max(np.abs(horizontality_residual(curve)))),
    )
