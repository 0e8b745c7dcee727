import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heisenvelope import errors
from heisenvelope.envelope import envelope_point, make_family
from heisenvelope.heisenberg import Curve, horizontality_residual
from heisenvelope.lines import (
    FamilySpec,
    HorizontalLine,
    contact_projection,
    line_point,
    line_velocity,
    plane_residuals,
    plane_theta_derivatives,
)
from heisenvelope.support import TWO_PI, HeightFunction, make_constant, make_trig_poly

lines = st.builds(
    HorizontalLine,
    p=st.floats(0, 10),
    theta=st.floats(0, TWO_PI),
    t=st.floats(-10, 10),
)


@given(lines, st.floats(-20, 20))
def test_line_points_satisfy_both_plane_equations(line, s):
    f1, f2 = plane_residuals(line, line_point(line, s))
    assert abs(f1) < 1e-12 * (1 + abs(s) + line.p)
    assert abs(f2) < 1e-11 * (1 + abs(s) + line.p) ** 2


@given(lines)
def test_lines_are_horizontal(line):
    s = np.linspace(-3, 3, 40)
    pts = line_point(line, s)
    c = Curve(s, pts, np.tile(line_velocity(line), (40, 1)), np.zeros((40, 3)))
    assert np.max(np.abs(horizontality_residual(c))) < 1e-10 * (1 + line.p) ** 2


def test_base_point_and_direction():
    line = HorizontalLine(2.0, np.pi / 2, 5.0)
    assert np.allclose(line.base_point, (0, 2, 5), atol=1e-15)
    assert np.allclose(line.direction, (-1, 0), atol=1e-15)
    assert line_point(line, 0.0) == line.base_point


def test_line_validation():
    with pytest.raises(errors.NegativeSupport):
        HorizontalLine(-0.5, 0.0, 0.0)
    with pytest.raises(errors.DomainError):
        HorizontalLine(1.0, 7.0, 0.0)


def test_point_off_line_has_nonzero_residual():
    line = HorizontalLine(1.0, 0.0, 0.0)
    f1, f2 = plane_residuals(line, (2.0, 0.0, 0.0))
    assert f1 == 1.0 and f2 == 0.0
    assert plane_residuals(line, (1.0, 0.0, 1.0)) == (0.0, 1.0)


@pytest.mark.parametrize("p", [make_constant(2.0), make_trig_poly(2.0, [(1.0, 0.0)])], ids=["c2", "2+cos"])
def test_envelope_solves_plane_system(p):
    fam = make_family(p, 0.3, 256)
    for th in fam.grid[::17]:
        q = envelope_point(p, fam.height, th)
        line = HorizontalLine(float(p.eval(th)), th, float(fam.height.eval(th)))
        assert np.allclose(plane_residuals(line, q), 0, atol=1e-12)
        assert np.allclose(plane_theta_derivatives(fam, th, q), 0, atol=1e-12)
        assert np.allclose(contact_projection(p.eval(th), p.eval_d1(th), th), q[:2], atol=1e-13)


def test_family_validation_and_compatibility():
    p = make_constant(1.0)
    grid = np.linspace(0, TWO_PI, 64)
    flat = HeightFunction.from_callables(lambda th: 0.0 * np.asarray(th), lambda th: 0.0 * np.asarray(th))
    fam = FamilySpec(p, flat, grid)
    assert np.allclose(fam.compatibility_residual(), 1.0)
    assert not fam.is_compatible()
    with pytest.raises(errors.CompatibilityViolation):
        fam.require_compatible()
    with pytest.raises(errors.CompatibilityViolation):
        FamilySpec.checked(p, flat, grid)
    with pytest.raises(errors.TooFewSamples):
        FamilySpec(p, flat, grid[:8])
    with pytest.raises(errors.NonMonotonicGrid):
        FamilySpec(p, flat, grid[::-1])
    good = make_family(p, 0.0, 64)
    assert good.is_compatible()
    assert good.line(0) == HorizontalLine(1.0, 0.0, 0.0)


def test_plane_theta_derivatives_domain():
    fam = make_family(make_constant(1.0), 0.0, 32)
    with pytest.raises(errors.DomainError):
        plane_theta_derivatives(fam, 7.0, (0, 0, 0))
