"""Combining two envelope-generating families.

If (p1, t1) and (p2, t2) are compatible then (p1 + p2, t1 + t2) is
compatible exactly when p1 p2 = p1' p2', because

    t' - (p')^2 + p^2 = 2 (p1 p2 - p1' p2').

With p2' != 0 the condition integrates to
p1 = p1(a) exp(int_a^theta p2 / p2').
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from . import errors
from .envelope import make_family
from .lines import FamilySpec
from .numerics import cumulative_hermite_integral, uniform_step
from .support import HeightFunction, SupportFunction
from .tolerances import EPS_REG
from .tolerances import current as current_tolerances

CLASSIFY_NODES = 2001

# sign pattern of (p1', p2', p2'') -> (case number, asserted sign of p1'')
CASES = {
    (1, 1, -1): (1, 1),
    (1, 1, 1): (2, 1),
    (-1, -1, -1): (3, 1),
    (-1, -1, 1): (4, -1),
}


def add_supports(p1: SupportFunction, p2: SupportFunction) -> SupportFunction:
    """p1 + p2 on the overlap of the two domains (periodic only if both are, on the same domain)."""
    lo, hi = max(p1.domain[0], p2.domain[0]), min(p1.domain[1], p2.domain[1])
    if not hi > lo:
        raise errors.GridMismatch(f"support domains do not overlap: {p1.domain} vs {p2.domain}")
    same = tuple(p1.domain) == tuple(p2.domain)
    d3 = None
    if p1.has_d3 and p2.has_d3:
        d3 = lambda th: p1.d3f(th) + p2.d3f(th)  # noqa: E731
    kind = "analytic" if p1.kind == p2.kind == "analytic" else "sampled"
    return SupportFunction(
        f=lambda th: p1.f(th) + p2.f(th),
        df=lambda th: p1.df(th) + p2.df(th),
        d2f=lambda th: p1.d2f(th) + p2.d2f(th),
        d3f=d3,
        kind=kind,
        periodic=p1.periodic and p2.periodic and same,
        domain=(lo, hi),
        label=f"({p1.label})+({p2.label})",
        min_value=p1.min_value + p2.min_value,
    )


def add_heights(t1: HeightFunction, t2: HeightFunction) -> HeightFunction:
    values = None
    grid = t1.grid if t1.grid is not None else t2.grid
    if t1.values is not None and t2.values is not None:
        values = t1.values + t2.values
    return HeightFunction(
        f=lambda th: t1.f(th) + t2.f(th),
        df=lambda th: t1.df(th) + t2.df(th),
        grid=grid,
        values=values,
    )


def sum_family(f1: FamilySpec, f2: FamilySpec) -> FamilySpec:
    """The family (p1 + p2, theta, t1 + t2); no compatibility check is made here."""
    if f1.grid.shape != f2.grid.shape or not np.allclose(f1.grid, f2.grid, rtol=0, atol=1e-12):
        raise errors.GridMismatch("families must share the same theta grid")
    return FamilySpec(add_supports(f1.support, f2.support), add_heights(f1.height, f2.height), f1.grid)


@dataclass(frozen=True)
class PairReport:
    residual_sup: float
    admissible: bool
    case_label: Optional[int]
    interval: tuple
    observed_signs: dict = field(default_factory=dict)
    # sup of the compatibility defect of the summed family; should be 2 * residual_sup
    sum_compat_sup: Optional[float] = None
    concluded_sign: Optional[int] = None
    violations: Optional[int] = None
    n_nodes: int = 0

    @property
    def conclusion_holds(self) -> Optional[bool]:
        return None if self.violations is None else self.violations == 0

    def to_dict(self) -> dict:
        return {
            "residual_sup": self.residual_sup,
            "admissible": self.admissible,
            "case_label": self.case_label,
            "interval": list(self.interval),
            "observed_signs": self.observed_signs,
            "sum_compat_sup": self.sum_compat_sup,
            "concluded_sign": self.concluded_sign,
            "violations": self.violations,
            "conclusion_holds": self.conclusion_holds,
            "n_nodes": self.n_nodes,
        }


def pair_tolerance(p1: SupportFunction, p2: SupportFunction, grid) -> float:
    tol = current_tolerances()
    base = tol.tol_pair if p1.kind == p2.kind == "analytic" else tol.tol_pair_sampled
    return base * (1.0 + float(np.max(np.abs(p1.eval(grid)))) * float(np.max(np.abs(p2.eval(grid)))))


def _pair_residual(p1, p2, grid):
    return np.abs(p1.eval(grid) * p2.eval(grid) - p1.eval_d1(grid) * p2.eval_d1(grid))


def check_pair_condition(p1: SupportFunction, p2: SupportFunction, grid) -> PairReport:
    """sup |p1 p2 - p1' p2'| on the grid and the resulting admissibility.

    On uniform grids the summed family is also built from two integrated
    families and its compatibility defect reported as ``sum_compat_sup``.
    """
    grid = np.asarray(grid, dtype=float)
    residual = float(np.max(_pair_residual(p1, p2, grid)))
    sum_compat = None
    if uniform_step(grid) is not None and grid.size >= 16:
        summed = sum_family(make_family(p1, grid=grid), make_family(p2, grid=grid))
        sum_compat = float(np.max(np.abs(summed.compatibility_residual())))
    return PairReport(
        residual_sup=residual,
        admissible=residual <= pair_tolerance(p1, p2, grid),
        case_label=None,
        interval=(float(grid[0]), float(grid[-1])),
        sum_compat_sup=sum_compat,
        n_nodes=int(grid.size),
    )


def _constant_sign(values, name):
    if np.all(values > 0):
        return 1
    if np.all(values < 0):
        return -1
    raise errors.PreconditionNotConstantSign(f"{name} is not of constant nonzero sign on the interval")


def _sign_str(sign):
    return {1: "+", -1: "-"}[sign]


def classify_pair(p1: SupportFunction, p2: SupportFunction, interval, n: int = CLASSIFY_NODES) -> PairReport:
    """Match the signs of (p1', p2', p2'') to one of the four classification
    cases on ``interval`` and check the asserted sign of p1'' at every node.

    Observed signs are reported as found; ``violations`` counts nodes where
    p1'' does not have the asserted sign.
    """
    a, b = map(float, interval)
    if not b > a:
        raise errors.InvalidParameter(f"interval must have a < b, got {interval}")
    th = np.linspace(a, b, int(n))
    if np.any(p1.eval(th) <= 0) or np.any(p2.eval(th) <= 0):
        raise errors.PreconditionNotConstantSign("p1 and p2 must be strictly positive on the interval")
    signs = (
        _constant_sign(p1.eval_d1(th), "p1'"),
        _constant_sign(p2.eval_d1(th), "p2'"),
        _constant_sign(p2.eval_d2(th), "p2''"),
    )
    d2p1 = p1.eval_d2(th)
    n_pos, n_neg = int(np.sum(d2p1 > 0)), int(np.sum(d2p1 < 0))
    observed = {
        "dp1": _sign_str(signs[0]),
        "dp2": _sign_str(signs[1]),
        "d2p2": _sign_str(signs[2]),
        "d2p1": "+" if n_pos == th.size else "-" if n_neg == th.size else "mixed",
        "d2p1_positive_nodes": n_pos,
        "d2p1_negative_nodes": n_neg,
    }
    residual = float(np.max(_pair_residual(p1, p2, th)))
    case, concluded, violations = None, None, None
    if signs in CASES:
        case, concluded = CASES[signs]
        violations = int(np.sum(np.sign(d2p1) != concluded))
    return PairReport(
        residual_sup=residual,
        admissible=residual <= pair_tolerance(p1, p2, th),
        case_label=case,
        interval=(a, b),
        observed_signs=observed,
        concluded_sign=concluded,
        violations=violations,
        n_nodes=int(th.size),
    )


def exponential_partner(p2: SupportFunction, p1_at_a: float, interval, grid=None, n: int = 1025) -> SupportFunction:
    """The p1 with p1(a) = ``p1_at_a`` and p1 p2 = p1' p2' on [a, b].

    log p1 is the running integral of g = p2 / p2' with the endpoint-corrected
    trapezoid rule (fourth order, using g' = 1 - p2 p2'' / p2'^2), interpolated
    by cubic Hermite between nodes. Derivatives follow from p1' = g p1.
    """
    a, b = map(float, interval)
    if not p1_at_a > 0:
        raise errors.InvalidParameter(f"p1(a) must be positive, got {p1_at_a}")
    th = np.linspace(a, b, int(n)) if grid is None else np.asarray(grid, dtype=float)
    if th[0] > a + 1e-12 or th[-1] < b - 1e-12 or np.any(np.diff(th) <= 0):
        raise errors.NonMonotonicGrid("grid must increase strictly and span the interval")
    dp2 = p2.eval_d1(th)
    if np.any(np.abs(dp2) < EPS_REG):
        i = int(np.argmin(np.abs(dp2)))
        raise errors.DerivativeVanishes(f"|p2'| = {abs(dp2[i]):.3g} at theta = {th[i]:.6g}")
    if not (np.all(dp2 > 0) or np.all(dp2 < 0)):
        raise errors.DerivativeVanishes("p2' changes sign on the interval")
    if np.any(p2.eval(th) <= 0):
        raise errors.NegativeSupport("p2 must be positive on the interval")

    def g(x):
        return p2.eval(x) / p2.eval_d1(x)

    def dg(x):
        return 1.0 - p2.eval(x) * p2.eval_d2(x) / p2.eval_d1(x) ** 2

    def d2g(x):
        q, dq, d2q, d3q = p2.eval(x), p2.eval_d1(x), p2.eval_d2(x), p2.eval_d3(x)
        return -((dq * d2q + q * d3q) / dq**2 - 2.0 * q * d2q**2 / dq**3)

    gv = g(th)
    log_nodes = cumulative_hermite_integral(gv, dg(th), th)
    log_interp = CubicHermiteSpline(th, log_nodes, gv, extrapolate=False)
    scale = float(p1_at_a)

    def f(x):
        return scale * np.exp(log_interp(x))

    def df(x):
        return f(x) * g(x)

    def d2f(x):
        gx = g(x)
        return f(x) * (gx**2 + dg(x))

    d3f = None
    if p2.has_d3:
        def d3f(x):
            gx, dgx = g(x), dg(x)
            return f(x) * (gx**3 + 3.0 * gx * dgx + d2g(x))

    values = f(th)
    return SupportFunction(
        f=f, df=df, d2f=d2f, d3f=d3f, kind="sampled", periodic=False,
        domain=(a, b), label=f"partner({p2.label})", min_value=float(np.min(values)),
    )
