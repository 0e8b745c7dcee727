"""Horizontal envelopes of families of horizontal lines in the Heisenberg group H1."""

from . import errors
from .construction import (
    PairReport,
    check_pair_condition,
    classify_pair,
    exponential_partner,
    sum_family,
)
from .envelope import (
    InvariantReport,
    closedness_check,
    curvature_closed_form,
    default_grid,
    envelope_point,
    generate_envelope,
    horizontal_length,
    integrate_t,
    invariant_report,
    make_family,
    santalo_area,
)
from .heisenberg import (
    Curve,
    CurveSample,
    Point3,
    contact_normality,
    group_op,
    horizontality_residual,
    inverse,
    left_translate,
    p_curvature,
)
from .lines import FamilySpec, HorizontalLine, line_point, plane_residuals, plane_theta_derivatives
from .recovery import oracle_envelope, recover_family, tangency_check, fd_compatibility_residual
from .support import (
    TWO_PI,
    HeightFunction,
    SupportFunction,
    make_constant,
    make_exponential,
    make_sampled,
    make_trig_poly,
    parse_preset,
)

__version__ = "0.1.0"
