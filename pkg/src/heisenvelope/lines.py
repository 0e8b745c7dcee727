"""Horizontal lines (p, theta, t) and one-parameter families of them.

The line with parameters (p, theta, t) passes through Q' = (p cos theta,
p sin theta, t) with horizontal direction -sin theta e1 + cos theta e2:

    x = p cos(theta) - s sin(theta)
    y = p sin(theta) + s cos(theta)
    z = t - s p

Equivalently it is the intersection of the vertical plane F1 = 0 and the
contact plane at Q', F2 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import errors
from .heisenberg import Point3
from .support import TWO_PI, HeightFunction, SupportFunction
from .tolerances import current as current_tolerances

MIN_FAMILY_NODES = 16


@dataclass(frozen=True)
class HorizontalLine:
    p: float
    theta: float
    t: float

    def __post_init__(self):
        if self.p < 0:
            raise errors.NegativeSupport(f"line parameter p = {self.p} < 0")
        if not (-1e-12 <= self.theta <= TWO_PI + 1e-12):
            raise errors.DomainError(f"theta = {self.theta} outside [0, 2 pi]")

    @property
    def base_point(self) -> Point3:
        return Point3(self.p * np.cos(self.theta), self.p * np.sin(self.theta), self.t)

    @property
    def direction(self):
        """Unit direction of the projected line in the xy-plane."""
        return np.array([-np.sin(self.theta), np.cos(self.theta)])


def line_point(line: HorizontalLine, s):
    """Point at signed horizontal distance ``s`` from Q' along the line.

    Scalar ``s`` gives a Point3; array ``s`` gives an (n, 3) array.
    """
    c, sn = np.cos(line.theta), np.sin(line.theta)
    s_arr = np.asarray(s, dtype=float)
    out = np.stack([line.p * c - s_arr * sn, line.p * sn + s_arr * c, line.t - s_arr * line.p], axis=-1)
    return Point3(*map(float, out)) if out.ndim == 1 else out


def line_velocity(line: HorizontalLine):
    """d/ds of :func:`line_point` (constant along the line)."""
    return np.array([-np.sin(line.theta), np.cos(line.theta), -line.p])


def plane_residuals(line: HorizontalLine, q):
    """(F1, F2) at ``q``; both vanish exactly on the line.

    F1 = cos(theta) x + sin(theta) y - p
    F2 = -p sin(theta) x + p cos(theta) y + z - t
    """
    q = np.asarray(q, dtype=float)
    x, y, z = q[..., 0], q[..., 1], q[..., 2]
    c, sn = np.cos(line.theta), np.sin(line.theta)
    f1 = c * x + sn * y - line.p
    f2 = -line.p * sn * x + line.p * c * y + z - line.t
    if q.ndim == 1:
        return float(f1), float(f2)
    return f1, f2


@dataclass(frozen=True)
class FamilySpec:
    """A family of horizontal lines theta -> (p(theta), theta, t(theta)) sampled on ``grid``."""

    support: SupportFunction
    height: HeightFunction
    grid: np.ndarray

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        object.__setattr__(self, "grid", grid)
        if grid.ndim != 1 or grid.size < MIN_FAMILY_NODES:
            raise errors.TooFewSamples(f"family grid needs at least {MIN_FAMILY_NODES} nodes")
        if np.any(np.diff(grid) <= 0):
            raise errors.NonMonotonicGrid("family grid must be strictly increasing")

    @classmethod
    def checked(cls, support, height, grid) -> "FamilySpec":
        """Construct and insist on compatibility (for families whose height was supplied)."""
        fam = cls(support, height, grid)
        fam.require_compatible()
        return fam

    def line(self, i: int) -> HorizontalLine:
        th = float(self.grid[i])
        return HorizontalLine(float(self.support.eval(th)), th, float(self.height.eval(th)))

    def node_values(self):
        """(p, t) evaluated on the grid."""
        return self.support.eval(self.grid), self.height.eval(self.grid)

    def compatibility_residual(self) -> np.ndarray:
        """t' - ((p')^2 - p^2) at every node."""
        p = self.support.eval(self.grid)
        dp = self.support.eval_d1(self.grid)
        return self.height.eval_d1(self.grid) - (dp**2 - p**2)

    def compatibility_tolerance(self) -> float:
        tol = current_tolerances()
        base = tol.tol_compat_analytic if self.support.kind == "analytic" else tol.tol_compat_sampled
        p = self.support.eval(self.grid)
        dp = self.support.eval_d1(self.grid)
        return base * (1.0 + float(np.max(p**2 + dp**2)))

    def is_compatible(self) -> bool:
        return bool(np.max(np.abs(self.compatibility_residual())) <= self.compatibility_tolerance())

    def require_compatible(self):
        res = np.abs(self.compatibility_residual())
        tol = self.compatibility_tolerance()
        if np.max(res) > tol:
            i = int(np.argmax(res))
            raise errors.CompatibilityViolation(
                f"|t' - ((p')^2 - p^2)| = {res[i]:.3g} > {tol:.3g} at theta = {self.grid[i]:.6g}"
            )


def plane_theta_derivatives(fam: FamilySpec, theta: float, q):
    """(dF1/dtheta, dF2/dtheta) for the family member at ``theta``, evaluated at ``q``."""
    lo, hi = fam.grid[0], fam.grid[-1]
    if not (lo - 1e-12 <= theta <= hi + 1e-12):
        raise errors.DomainError(f"theta = {theta} outside family grid [{lo}, {hi}]")
    q = np.asarray(q, dtype=float)
    x, y = q[..., 0], q[..., 1]
    p = fam.support.eval(theta)
    dp = fam.support.eval_d1(theta)
    dt = fam.height.eval_d1(theta)
    c, sn = np.cos(theta), np.sin(theta)
    df1 = -x * sn + y * c - dp
    df2 = (-dp * sn - p * c) * x + (dp * c - p * sn) * y - dt
    if q.ndim == 1:
        return float(df1), float(df2)
    return df1, df2


def contact_projection(p: float, dp: float, theta: float):
    """Solve F1 = 0 and dF1/dtheta = 0 for (x, y).

    The 2x2 matrix [[cos, sin], [-sin, cos]] has determinant 1, so the
    tangency point of the projected family is unique.
    """
    c, sn = np.cos(theta), np.sin(theta)
    return np.linalg.solve(np.array([[c, sn], [-sn, c]]), np.array([p, dp]))
