"""Support functions p(theta) and height functions t(theta).

A support function carries its value and first three derivatives as vectorised
callables. Analytic presets have closed-form derivatives; sampled ones are
cubic splines through the data, and their derivatives are those of the spline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from . import errors
from .tolerances import current as current_tolerances

TWO_PI = 2.0 * np.pi

# dense grid used to certify p >= 0 for analytic presets
NONNEG_CHECK_NODES = 4096
MIN_SAMPLES = 8

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _slack(domain):
    return 1e-12 * max(1.0, abs(domain[0]), abs(domain[1]))


def _as_output(theta, out):
    if np.ndim(theta) == 0:
        return float(out)
    return np.asarray(out, dtype=float)


@dataclass(frozen=True)
class SupportFunction:
    """p(theta) with derivatives on a closed parameter interval.

    ``kind`` is ``"analytic"`` or ``"sampled"``. When ``periodic`` is set,
    arguments outside the domain are wrapped; otherwise they raise
    :class:`~heisenvelope.errors.DomainError`.
    """

    f: ArrayFn
    df: ArrayFn
    d2f: ArrayFn
    kind: str
    periodic: bool
    d3f: Optional[ArrayFn] = None
    domain: tuple = (0.0, TWO_PI)
    label: str = ""
    min_value: float = float("nan")

    def _arg(self, theta):
        arr = np.asarray(theta, dtype=float)
        lo, hi = self.domain
        slack = _slack(self.domain)
        outside = (arr < lo - slack) | (arr > hi + slack)
        if np.any(outside):
            if not self.periodic:
                bad = arr[outside] if arr.ndim else arr
                raise errors.DomainError(
                    f"theta={np.ravel(bad)[0]!r} outside [{lo}, {hi}] for non-periodic {self.label or 'support'}"
                )
            arr = np.where(outside, lo + np.mod(arr - lo, hi - lo), arr)
        return np.clip(arr, lo, hi)

    def eval(self, theta):
        return _as_output(theta, self.f(self._arg(theta)))

    def eval_d1(self, theta):
        return _as_output(theta, self.df(self._arg(theta)))

    def eval_d2(self, theta):
        return _as_output(theta, self.d2f(self._arg(theta)))

    def eval_d3(self, theta):
        if self.d3f is None:
            raise errors.MissingDerivatives(f"{self.label or 'support'} has no third derivative")
        return _as_output(theta, self.d3f(self._arg(theta)))

    @property
    def has_d3(self) -> bool:
        return self.d3f is not None

    def __call__(self, theta):
        return self.eval(theta)

    def radius_of_curvature(self, theta):
        """p + p'' (signed radius of curvature of the projected envelope)."""
        return self.eval(theta) + self.eval_d2(theta)


@dataclass(frozen=True)
class HeightFunction:
    """t(theta) with its first derivative.

    ``grid``/``values`` hold node data when the function was built from
    samples or by quadrature; they are ``None`` for purely analytic heights.
    """

    f: ArrayFn
    df: ArrayFn
    grid: Optional[np.ndarray] = field(default=None, repr=False)
    values: Optional[np.ndarray] = field(default=None, repr=False)

    def eval(self, theta):
        return _as_output(theta, self.f(np.asarray(theta, dtype=float)))

    def eval_d1(self, theta):
        return _as_output(theta, self.df(np.asarray(theta, dtype=float)))

    def __call__(self, theta):
        return self.eval(theta)

    @classmethod
    def from_callables(cls, f: ArrayFn, df: ArrayFn) -> "HeightFunction":
        return cls(f=f, df=df)

    @classmethod
    def from_hermite(cls, grid, values, slopes, df: ArrayFn) -> "HeightFunction":
        """Cubic Hermite interpolation of node values with exact slopes; ``df`` is exact everywhere."""
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        interp = CubicHermiteSpline(grid, values, np.asarray(slopes, dtype=float), extrapolate=False)
        return cls(f=_checked(interp, grid), df=df, grid=grid, values=values)

    @classmethod
    def from_samples(cls, grid, values) -> "HeightFunction":
        """Not-a-knot cubic spline through node values; t' is the spline derivative."""
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        _check_grid(grid)
        spline = CubicSpline(grid, values, bc_type="not-a-knot", extrapolate=False)
        return cls(f=_checked(spline, grid), df=_checked(spline.derivative(1), grid), grid=grid, values=values)


def _checked(fn, grid):
    lo, hi = float(grid[0]), float(grid[-1])
    slack = _slack((lo, hi))

    def wrapped(theta):
        arr = np.asarray(theta, dtype=float)
        if np.any((arr < lo - slack) | (arr > hi + slack)):
            raise errors.DomainError(f"theta outside node range [{lo}, {hi}]")
        return fn(np.clip(arr, lo, hi))

    return wrapped


def _check_grid(theta):
    if theta.size < MIN_SAMPLES:
        raise errors.TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {theta.size}")
    if not np.all(np.isfinite(theta)):
        raise errors.NonMonotonicGrid("non-finite abscissa")
    steps = np.diff(theta)
    if np.any(steps <= 0):
        i = int(np.argmax(steps <= 0))
        raise errors.NonMonotonicGrid(f"theta not strictly increasing at index {i + 1} ({theta[i]!r} -> {theta[i + 1]!r})")


# ---------------------------------------------------------------------------
# analytic presets


def make_trig_poly(a0: float, coeffs: Sequence = ()) -> SupportFunction:
    """p(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta), k = 1, 2, ...

    Raises NegativeSupport if p is negative anywhere on a dense 4096-point grid.
    """
    a0 = float(a0)
    pairs = [(float(a), float(b)) for a, b in coeffs]
    k = np.arange(1, len(pairs) + 1, dtype=float)
    a = np.array([c[0] for c in pairs], dtype=float)
    b = np.array([c[1] for c in pairs], dtype=float)

    def terms(theta):
        kt = np.multiply.outer(theta, k)
        return np.cos(kt), np.sin(kt)

    def f(theta):
        c, s = terms(theta)
        return a0 + c @ a + s @ b

    def df(theta):
        c, s = terms(theta)
        return c @ (k * b) - s @ (k * a)

    def d2f(theta):
        c, s = terms(theta)
        return -(c @ (k**2 * a) + s @ (k**2 * b))

    def d3f(theta):
        c, s = terms(theta)
        return s @ (k**3 * a) - c @ (k**3 * b)

    dense = np.linspace(0.0, TWO_PI, NONNEG_CHECK_NODES)
    pmin = float(np.min(f(dense)))
    if pmin < 0:
        raise errors.NegativeSupport(f"trig polynomial has min p = {pmin:.6g} < 0")
    label = "trig:" + ",".join(f"{v:g}" for v in [a0] + [x for ab in pairs for x in ab])
    return SupportFunction(f, df, d2f, kind="analytic", periodic=True, d3f=d3f, label=label, min_value=pmin)


def make_constant(c: float) -> SupportFunction:
    """p(theta) = c; the envelope is the helix of radius c."""
    sf = make_trig_poly(c, [])
    return SupportFunction(sf.f, sf.df, sf.d2f, "analytic", True, sf.d3f, label=f"constant:{c:g}", min_value=float(c))


def make_exponential(c: float, a: float) -> SupportFunction:
    """p(theta) = c * exp(a * theta), non-periodic, with p' = a p and p'' = a^2 p."""
    c, a = float(c), float(a)
    if not c > 0:
        raise errors.InvalidParameter(f"exponential preset needs c > 0, got {c}")
    if a == 0:
        raise errors.InvalidParameter("exponential preset needs a != 0 (use constant:c)")

    def f(theta):
        return c * np.exp(a * theta)

    def df(theta):
        return a * f(theta)

    def d2f(theta):
        return a * (a * f(theta))

    def d3f(theta):
        return a * (a * (a * f(theta)))

    return SupportFunction(
        f, df, d2f, kind="analytic", periodic=False, d3f=d3f,
        label=f"exp:{c:g},{a:g}", min_value=min(c, c * np.exp(a * TWO_PI)),
    )


# ---------------------------------------------------------------------------
# sampled data


def make_sampled(grid, periodic: bool = False, p=None) -> SupportFunction:
    """Cubic-spline support function through samples covering [0, 2 pi].

    ``grid`` is either a sequence of ``(theta, p)`` pairs or, if ``p`` is
    given, the theta nodes alone. Periodic data may omit the node at 2 pi;
    it is then appended from the node at 0.
    """
    if p is None:
        pairs = np.asarray(grid, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise errors.InvalidParameter("expected a sequence of (theta, p) pairs")
        theta, values = pairs[:, 0].copy(), pairs[:, 1].copy()
    else:
        theta = np.asarray(grid, dtype=float).copy()
        values = np.asarray(p, dtype=float).copy()
        if theta.shape != values.shape or theta.ndim != 1:
            raise errors.InvalidParameter("theta and p must be 1-D arrays of equal length")
    _check_grid(theta)
    if not np.all(np.isfinite(values)):
        raise errors.InvalidParameter("non-finite support value")
    if np.min(values) < 0:
        i = int(np.argmin(values))
        raise errors.NegativeSupport(f"p = {values[i]:.6g} < 0 at theta = {theta[i]:.6g}")
    slack = 1e-9
    if theta[0] > slack:
        raise errors.DomainError(f"samples must start at theta <= 0, got {theta[0]!r}")
    if periodic:
        if theta[0] < -slack:
            raise errors.DomainError("periodic samples must start at theta = 0")
        theta[0] = 0.0
        if theta[-1] < TWO_PI - slack:
            theta = np.append(theta, TWO_PI)
            values = np.append(values, values[0])
        elif theta[-1] > TWO_PI + slack:
            raise errors.DomainError("periodic samples must end at theta <= 2 pi")
        else:
            theta[-1] = TWO_PI
            gap = abs(values[-1] - values[0])
            if gap > current_tolerances().tol_period * max(1.0, abs(values[0])):
                raise errors.NotPeriodic(f"|p(0) - p(2 pi)| = {gap:.3g} exceeds tol_period")
            values[-1] = values[0]
        spline = CubicSpline(theta, values, bc_type="periodic")
    else:
        if theta[-1] < TWO_PI - slack:
            raise errors.DomainError(f"samples must reach theta >= 2 pi, got {theta[-1]!r}")
        spline = CubicSpline(theta, values, bc_type="not-a-knot")
    return _from_spline(spline, periodic, (0.0, TWO_PI), label="sampled", min_value=float(np.min(values)))


def _from_spline(spline, periodic, domain, label, min_value):
    return SupportFunction(
        f=spline,
        df=spline.derivative(1),
        d2f=spline.derivative(2),
        d3f=spline.derivative(3),
        kind="sampled",
        periodic=periodic,
        domain=(float(domain[0]), float(domain[1])),
        label=label,
        min_value=min_value,
    )


def sampled_on_nodes(theta, p, dp_ends=None, periodic=False, label="sampled") -> SupportFunction:
    """Spline support over its own node range (not necessarily [0, 2 pi]).

    With ``dp_ends=(dp0, dpN)`` the spline is clamped to those end slopes.
    Used for recovered families and constructed partners.
    """
    theta = np.asarray(theta, dtype=float)
    p = np.asarray(p, dtype=float)
    _check_grid(theta)
    if periodic:
        vals = p.copy()
        vals[-1] = vals[0]
        spline = CubicSpline(theta, vals, bc_type="periodic")
    elif dp_ends is not None:
        spline = CubicSpline(theta, p, bc_type=((1, float(dp_ends[0])), (1, float(dp_ends[1]))))
    else:
        spline = CubicSpline(theta, p, bc_type="not-a-knot")
    return _from_spline(spline, periodic, (theta[0], theta[-1]), label=label, min_value=float(np.min(p)))


def parse_preset(text: str) -> SupportFunction:
    """Parse ``constant:c``, ``trig:a0,a1,b1,a2,b2,...`` or ``exp:c,a``."""
    name, _, rest = text.partition(":")
    name = name.strip().lower()
    try:
        nums = [float(v) for v in rest.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise errors.InvalidParameter(f"bad preset numbers in {text!r}") from exc
    if name == "constant":
        if len(nums) != 1:
            raise errors.InvalidParameter("constant preset takes one value: constant:c")
        return make_constant(nums[0])
    if name == "trig":
        if not nums:
            raise errors.InvalidParameter("trig preset needs at least a0")
        tail = nums[1:]
        if len(tail) % 2:
            tail = tail + [0.0]
        return make_trig_poly(nums[0], list(zip(tail[0::2], tail[1::2])))
    if name == "exp":
        if len(nums) != 2:
            raise errors.InvalidParameter("exp preset takes two values: exp:c,a")
        return make_exponential(*nums)
    raise errors.InvalidParameter(f"unknown preset {name!r} (expected constant, trig or exp)")
