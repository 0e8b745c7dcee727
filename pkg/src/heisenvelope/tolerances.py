"""Numerical tolerances.

All ``tol_*`` values are multiplied by the float in ``ENVELOPE_TOL_OVERRIDE``
when that variable is set. The environment is read on every call so the
override can be changed between runs in one process (tests rely on this).
Regularity floors (``eps_reg``) are thresholds rather than tolerances and are
never scaled.
"""

import math
import os
from dataclasses import dataclass, fields

ENV_VAR = "ENVELOPE_TOL_OVERRIDE"

EPS_REG = 1e-12


@dataclass(frozen=True)
class Tolerances:
    tol_period: float = 1e-10
    # horizontality with exact/closed-form derivatives vs finite-difference estimates
    tol_horiz: float = 1e-8
    tol_horiz_fd: float = 1e-6
    # compatibility t' = (p')^2 - p^2, relative to 1 + max(p^2 + p'^2)
    tol_compat_analytic: float = 1e-9
    tol_compat_sampled: float = 1e-5
    # |z_drop| <= tol_closed * (1 + |t0|)
    tol_closed: float = 1e-8
    # |p1 p2 - p1' p2'| <= tol_pair * (1 + sup p1 * sup p2)
    tol_pair: float = 1e-8
    tol_pair_sampled: float = 1e-5
    # Lengths from |p + p''| and 1/|k| must agree to this
    tol_identity: float = 1e-8

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(**{f.name: getattr(self, f.name) * factor for f in fields(self)})


DEFAULTS = Tolerances()


def override_factor() -> float:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return 1.0
    try:
        factor = float(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_VAR} must be a float, got {raw!r}") from exc
    if not math.isfinite(factor) or factor <= 0:
        raise ValueError(f"{ENV_VAR} must be positive and finite, got {raw!r}")
    return factor


def current() -> Tolerances:
    """Tolerances in effect right now (defaults times the override factor)."""
    factor = override_factor()
    return DEFAULTS if factor == 1.0 else DEFAULTS.scaled(factor)
