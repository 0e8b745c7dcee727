"""Recovering the tangent-line family of a horizontal curve, and an
independent envelope oracle built from line intersections alone.

For a curve point (x, y, z) on the line (p, theta, t):

    p = x cos(theta) + y sin(theta)
    s = -x sin(theta) + y cos(theta)
    t = z + s p
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import errors
from .envelope import envelope_point
from .heisenberg import Curve, horizontal_tolerance, horizontality_residual
from .lines import FamilySpec
from .numerics import fd_derivatives
from .support import TWO_PI, HeightFunction, sampled_on_nodes
from .tolerances import EPS_REG
from .tolerances import current as current_tolerances

MIN_ORACLE_NODES = 64
# |p| below this (relative to the curve's scale) leaves the orientation of theta to continuity
_P_AMBIGUOUS = 1e-12


class RecoveredLines(NamedTuple):
    theta: np.ndarray
    p: np.ndarray
    t: np.ndarray
    s: np.ndarray


def recover_lines(c: Curve) -> RecoveredLines:
    """Pointwise tangent-line parameters of a horizontal, horizontally regular curve.

    The projected tangent is parallel to (-sin theta, cos theta); of the two
    angles consistent with it, the one giving p >= 0 is taken, and theta is
    unwrapped to be continuous along the curve.
    """
    if c.d1 is None:
        raise errors.MissingDerivatives("recovery needs first derivatives on the curve")
    dx, dy = c.d1[:, 0], c.d1[:, 1]
    speed2 = dx**2 + dy**2
    if np.any(speed2 < EPS_REG):
        i = int(np.argmax(speed2 < EPS_REG))
        raise errors.NotHorizontallyRegular(f"projected speed vanishes at parameter {c.theta[i]:.6g}")
    res = np.abs(horizontality_residual(c))
    tol = horizontal_tolerance(c)
    if np.max(res) > tol:
        i = int(np.argmax(res))
        raise errors.NotHorizontal(f"horizontality residual {res[i]:.3g} > {tol:.3g} at parameter {c.theta[i]:.6g}")

    x, y, z = c.x, c.y, c.z
    base = np.arctan2(dy, dx) - 0.5 * np.pi
    p_base = x * np.cos(base) + y * np.sin(base)
    scale = _P_AMBIGUOUS * max(1.0, float(np.max(np.hypot(x, y))))

    theta = np.empty_like(base)
    prev = None
    for i, (th, pb) in enumerate(zip(base, p_base)):
        if abs(pb) > scale:
            cand = th if pb > 0 else th + np.pi
            if prev is not None:
                cand += TWO_PI * np.round((prev - cand) / TWO_PI)
        elif prev is None:
            cand = th
        else:
            # p ~ 0: both orientations are admissible; keep the one nearest the previous node
            opts = np.array([th, th + np.pi])
            opts += TWO_PI * np.round((prev - opts) / TWO_PI)
            cand = opts[np.argmin(np.abs(opts - prev))]
        theta[i] = cand
        prev = cand

    jumps = np.abs(np.diff(theta))
    if np.any(jumps > 0.5 * np.pi):
        i = int(np.argmax(jumps))
        raise errors.NegativeSupportUnresolvable(
            f"keeping p >= 0 forces a jump of {jumps[i]:.3g} rad in theta between samples {i} and {i + 1}"
        )
    theta -= TWO_PI * np.floor((theta[0] + 1e-9) / TWO_PI)

    c_, s_ = np.cos(theta), np.sin(theta)
    p = x * c_ + y * s_
    s = -x * s_ + y * c_
    return RecoveredLines(theta, p, z + s * p, s)


def recover_family(c: Curve) -> FamilySpec:
    """Family of tangent lines of ``c`` as splines over the recovered theta nodes.

    p is a spline clamped to the recovered end slopes p' = s (periodic when
    the nodes span [0, 2 pi] and p closes up); t is a not-a-knot spline.
    """
    lines = recover_lines(c)
    theta, p, t, s = lines
    if np.any(np.diff(theta) <= 0):
        raise errors.NonMonotonicGrid(
            "recovered theta is not increasing along the curve; pointwise values are available from recover_lines"
        )
    tol = current_tolerances().tol_period * max(1.0, float(np.max(np.abs(p))))
    periodic = (
        abs(theta[0]) < 1e-9
        and abs(theta[-1] - TWO_PI) < 1e-9
        and abs(p[-1] - p[0]) <= tol
        and abs(s[-1] - s[0]) <= 1e3 * tol
    )
    support = sampled_on_nodes(theta, np.maximum(p, 0.0), dp_ends=(s[0], s[-1]), periodic=periodic, label="recovered")
    height = HeightFunction.from_samples(theta, t)
    return FamilySpec(support, height, theta)


def fd_compatibility_residual(fam: FamilySpec) -> float:
    """sup |t' - ((p')^2 - p^2)| with finite-difference derivatives of the node values."""
    p, t = fam.node_values()
    dp, _ = fd_derivatives(p, fam.grid)
    dt, _ = fd_derivatives(t, fam.grid)
    return float(np.max(np.abs(dt - (dp**2 - p**2))))


def oracle_from_nodes(theta, p, t) -> Curve:
    """Polyline through intersections of consecutive projected lines, lifted to H1.

    Each intersection is lifted to the height of both lines through it and the
    two heights are averaged. Samples sit at the midpoints of the theta grid.
    """
    theta = np.asarray(theta, dtype=float)
    p = np.asarray(p, dtype=float)
    t = np.asarray(t, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    det = np.sin(np.diff(theta))
    if np.any(np.abs(det) < EPS_REG):
        i = int(np.argmax(np.abs(det) < EPS_REG))
        raise errors.ParallelLines(f"lines at theta = {theta[i]:.6g} and {theta[i + 1]:.6g} are parallel")
    x = (p[:-1] * s[1:] - p[1:] * s[:-1]) / det
    y = (p[1:] * c[:-1] - p[:-1] * c[1:]) / det
    s_left = -x * s[:-1] + y * c[:-1]
    s_right = -x * s[1:] + y * c[1:]
    z = 0.5 * ((t[:-1] - s_left * p[:-1]) + (t[1:] - s_right * p[1:]))
    mid = 0.5 * (theta[:-1] + theta[1:])
    return Curve.from_points(mid, np.column_stack([x, y, z]))


def oracle_envelope(fam: FamilySpec) -> Curve:
    """Envelope approximation using only the lines of ``fam`` at its nodes."""
    if fam.grid.size < MIN_ORACLE_NODES:
        raise errors.TooFewSamples(f"oracle needs at least {MIN_ORACLE_NODES} nodes")
    p, t = fam.node_values()
    return oracle_from_nodes(fam.grid, p, t)


def oracle_distance(fam: FamilySpec, oracle: Curve = None) -> float:
    """Max distance between the oracle polyline and the closed-form envelope at the same parameters."""
    oracle = oracle_envelope(fam) if oracle is None else oracle
    exact = envelope_point(fam.support, fam.height, oracle.theta)
    return float(np.max(np.linalg.norm(oracle.points - exact, axis=1)))


def tangency_check(fam: FamilySpec, c: Curve) -> np.ndarray:
    """Per node, the largest of |F1|, |F2| and the misalignment
    1 - |<T, (-sin theta, cos theta)>| / |T| of the projected tangent T.

    Misalignment is reported as 0 where the curve is not horizontally regular.
    """
    if c.theta.shape != fam.grid.shape or not np.allclose(c.theta, fam.grid, rtol=0, atol=1e-9):
        raise errors.GridMismatch("curve and family must share the same theta grid")
    if c.d1 is None:
        raise errors.MissingDerivatives("tangency check needs first derivatives on the curve")
    p, t = fam.node_values()
    th = fam.grid
    cs, sn = np.cos(th), np.sin(th)
    x, y, z = c.x, c.y, c.z
    f1 = cs * x + sn * y - p
    f2 = -p * sn * x + p * cs * y + z - t
    tx, ty = c.d1[:, 0], c.d1[:, 1]
    norm = np.hypot(tx, ty)
    regular = norm**2 >= EPS_REG
    align = np.zeros_like(norm)
    align[regular] = 1.0 - np.abs(-tx * sn + ty * cs)[regular] / norm[regular]
    return np.maximum.reduce([np.abs(f1), np.abs(f2), align])
