"""Primitives of the first Heisenberg group H1.

Group law ``(x,y,z) * (x',y',z') = (x+x', y+y', z+z' + y x' - x y')``, with
left-invariant frame e1 = d/dx + y d/dz, e2 = d/dy - x d/dz, T = d/dz.
A curve is horizontal when z' - x'y + x y' = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import errors
from .numerics import fd_derivatives
from .support import MIN_SAMPLES
from .tolerances import EPS_REG
from .tolerances import current as current_tolerances


class Point3(NamedTuple):
    x: float
    y: float
    z: float


def group_op(a, b):
    """Group product a * b. Accepts Point3/3-sequences or arrays of shape (..., 3)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.stack(
        [
            a[..., 0] + b[..., 0],
            a[..., 1] + b[..., 1],
            a[..., 2] + b[..., 2] + a[..., 1] * b[..., 0] - a[..., 0] * b[..., 1],
        ],
        axis=-1,
    )
    return Point3(*map(float, out)) if out.ndim == 1 else out


def inverse(a):
    a = np.asarray(a, dtype=float)
    return Point3(*map(float, -a)) if a.ndim == 1 else -a


class CurveSample(NamedTuple):
    theta: float
    point: Point3
    d1: Optional[tuple]
    d2: Optional[tuple]


@dataclass(frozen=True)
class Curve:
    """A sampled curve over a strictly increasing parameter grid.

    ``points``, ``d1`` and ``d2`` have shape (N, 3). ``derivative_source`` is
    ``"exact"`` (closed form), ``"supplied"`` (read from a file) or ``"fd"``
    (finite differences of ``points``); it selects the horizontality tolerance.
    ``periodic`` only affects finite-difference stencils.
    """

    theta: np.ndarray
    points: np.ndarray
    d1: Optional[np.ndarray] = None
    d2: Optional[np.ndarray] = None
    derivative_source: str = "exact"
    periodic: bool = False

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        points = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "points", points)
        for name in ("d1", "d2"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, dtype=float)
                if val.shape != points.shape:
                    raise errors.InvalidParameter(f"{name} shape {val.shape} != points shape {points.shape}")
                object.__setattr__(self, name, val)
        if theta.ndim != 1 or points.shape != (theta.size, 3):
            raise errors.InvalidParameter("points must have shape (len(theta), 3)")
        if theta.size < MIN_SAMPLES:
            raise errors.TooFewSamples(f"curve needs at least {MIN_SAMPLES} samples, got {theta.size}")
        if np.any(np.diff(theta) <= 0):
            raise errors.NonMonotonicGrid("curve parameter grid must be strictly increasing")
        if not np.all(np.isfinite(points)):
            raise errors.InvalidParameter("curve points must be finite")

    @classmethod
    def from_points(cls, theta, points, periodic=False) -> "Curve":
        """Curve whose derivatives are finite-difference estimates of the points."""
        theta = np.asarray(theta, dtype=float)
        points = np.asarray(points, dtype=float)
        d1, d2 = fd_derivatives(points, theta, periodic=periodic)
        return cls(theta, points, d1, d2, derivative_source="fd", periodic=periodic)

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]

    @property
    def z(self):
        return self.points[:, 2]

    def __len__(self):
        return self.theta.size

    @property
    def samples(self):
        out = []
        for i, th in enumerate(self.theta):
            d1 = tuple(self.d1[i]) if self.d1 is not None else None
            d2 = tuple(self.d2[i]) if self.d2 is not None else None
            out.append(CurveSample(float(th), Point3(*map(float, self.points[i])), d1, d2))
        return out

    def horizontal_speed(self):
        if self.d1 is None:
            raise errors.MissingDerivatives("curve has no first-derivative estimates")
        return np.hypot(self.d1[:, 0], self.d1[:, 1])


def left_translate(p, c: Curve) -> Curve:
    """Apply L_p(q) = p * q to every sample.

    Derivatives are pushed forward through the differential of L_p,
    (x', y', z') -> (x', y', z' + p_y x' - p_x y'), which is what finite
    differences of the translated points converge to. Curves without
    derivatives get fresh finite-difference estimates.
    """
    p = np.asarray(p, dtype=float)
    pts = group_op(p, c.points)

    def push(d):
        return np.column_stack([d[:, 0], d[:, 1], d[:, 2] + p[1] * d[:, 0] - p[0] * d[:, 1]])

    if c.d1 is None:
        return Curve.from_points(c.theta, pts, periodic=c.periodic)
    d2 = push(c.d2) if c.d2 is not None else None
    return Curve(c.theta, pts, push(c.d1), d2, derivative_source=c.derivative_source, periodic=c.periodic)


def horizontality_residual(c: Curve) -> np.ndarray:
    """z' - x'y + x y' at every sample; zero exactly for horizontal curves."""
    if c.d1 is None:
        raise errors.MissingDerivatives("horizontality residual needs first derivatives")
    x, y = c.x, c.y
    dx, dy, dz = c.d1.T
    return dz - dx * y + x * dy


def horizontal_tolerance(c: Curve) -> float:
    tol = current_tolerances()
    return tol.tol_horiz_fd if c.derivative_source == "fd" else tol.tol_horiz


def is_horizontal(c: Curve, tol: Optional[float] = None) -> bool:
    tol = horizontal_tolerance(c) if tol is None else tol
    return bool(np.max(np.abs(horizontality_residual(c))) <= tol)


def _require_regular(c: Curve):
    speed2 = c.d1[:, 0] ** 2 + c.d1[:, 1] ** 2
    bad = speed2 < EPS_REG
    if np.any(bad):
        i = int(np.argmax(bad))
        raise errors.NotHorizontallyRegular(
            f"projected speed^2 = {speed2[i]:.3g} < {EPS_REG:g} at theta = {c.theta[i]:.6g}"
        )
    return speed2


def p_curvature(c: Curve) -> np.ndarray:
    """(x'y'' - x''y') / ((x')^2 + (y')^2)^(3/2) at every sample."""
    if c.d1 is None or c.d2 is None:
        raise errors.MissingDerivatives("p-curvature needs first and second derivatives")
    speed2 = _require_regular(c)
    dx, dy = c.d1[:, 0], c.d1[:, 1]
    ddx, ddy = c.d2[:, 0], c.d2[:, 1]
    return (dx * ddy - ddx * dy) / speed2**1.5


def contact_normality(c: Curve) -> np.ndarray:
    """T-component of the velocity per unit horizontal arc length."""
    if c.d1 is None:
        raise errors.MissingDerivatives("contact normality needs first derivatives")
    speed2 = _require_regular(c)
    return horizontality_residual(c) / np.sqrt(speed2)
