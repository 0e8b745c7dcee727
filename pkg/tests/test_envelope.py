import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from heisenvelope import errors
from heisenvelope.envelope import (
    closedness_check,
    curvature_closed_form,
    degenerate_nodes,
    envelope_point,
    generate_envelope,
    horizontal_length,
    integrate_t,
    invariant_report,
    length_by_curvature,
    make_family,
    santalo_area,
    z_drop_integral,
)
from heisenvelope.heisenberg import Point3, contact_normality, horizontality_residual, p_curvature
from heisenvelope.lines import FamilySpec
from heisenvelope.support import (
    TWO_PI,
    HeightFunction,
    make_constant,
    make_exponential,
    make_trig_poly,
)

FOUR_PI = 4 * np.pi


def two_plus_cos():
    return make_trig_poly(2.0, [(1.0, 0.0)])


def shoelace(x, y):
    return 0.5 * abs(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


# --- integrate_t -----------------------------------------------------------


def test_integrate_t_constant_is_linear():
    t = integrate_t(make_constant(2.0), 0.0, np.linspace(0, TWO_PI, 257))
    th = np.linspace(0, TWO_PI, 101)
    assert np.max(np.abs(t.eval(th) + 4 * th)) < 1e-12
    assert t.eval(TWO_PI) == pytest.approx(-8 * np.pi, abs=1e-12)
    assert np.all(t.eval_d1(th) == -4.0)


def test_integrate_t_exponential_is_constant():
    t = integrate_t(make_exponential(1.0, 1.0), 0.7, np.linspace(0, TWO_PI, 64))
    th = np.linspace(0, TWO_PI, 50)
    assert np.max(np.abs(t.eval(th) - 0.7)) < 1e-12


def test_integrate_t_matches_antiderivative_between_nodes():
    t = integrate_t(two_plus_cos(), 0.0, np.linspace(0, TWO_PI, 1024))
    th = np.linspace(0, TWO_PI, 3001)
    exact = -4 * th - 4 * np.sin(th) - np.sin(2 * th) / 2
    assert t.eval(np.pi) == pytest.approx(-4 * np.pi, abs=1e-8)
    assert np.max(np.abs(t.eval(th) - exact)) < 1e-8


def test_integrate_t_against_adaptive_quadrature():
    p = make_trig_poly(1.0, [(0.0, 0.0), (0.5, 0.0), (0.0, 0.25)])
    t = integrate_t(p, -1.0, np.linspace(0, TWO_PI, 1024))
    for th in (0.3, 1.7, 4.0, TWO_PI):
        ref, _ = quad(lambda a: float(p.eval_d1(a) ** 2 - p.eval(a) ** 2), 0, th, epsabs=1e-13, limit=200)
        assert t.eval(th) == pytest.approx(-1.0 + ref, abs=1e-8)


def test_integrate_t_convergence_order():
    p = two_plus_cos()
    errs = []
    for k in range(5, 10):
        g = np.linspace(0, TWO_PI, 2**k + 1)
        exact = -4 * g - 4 * np.sin(g) - np.sin(2 * g) / 2
        errs.append(np.max(np.abs(integrate_t(p, 0.0, g).eval(g) - exact)))
    assert all(a / b >= 3.5 for a, b in zip(errs, errs[1:]))


def test_integrate_t_grid_checks():
    p = make_constant(1.0)
    with pytest.raises(errors.TooFewSamples):
        integrate_t(p, 0.0, np.linspace(0, 1, 8))
    with pytest.raises(errors.InvalidParameter):
        integrate_t(p, 0.0, np.linspace(0, 1, 20) ** 2)
    with pytest.raises(errors.NonMonotonicGrid):
        integrate_t(p, 0.0, np.linspace(1, 0, 20))


# --- envelope points and curves ---------------------------------------------


def test_envelope_point_examples():
    p = make_constant(2.0)
    t = integrate_t(p, 0.0, np.linspace(0, TWO_PI, 256))
    q = envelope_point(p, t, np.pi / 2)
    assert isinstance(q, Point3)
    assert np.allclose(q, (0.0, 2.0, -2 * np.pi), atol=1e-12)
    p2 = two_plus_cos()
    assert envelope_point(p2, integrate_t(p2, 0.0, np.linspace(0, TWO_PI, 64)), 0.0) == Point3(3.0, 0.0, 0.0)


def test_zero_support_stays_on_z_axis():
    zero = make_constant(0.0)
    th = np.linspace(0, TWO_PI, 40)
    ramp = HeightFunction.from_callables(lambda a: np.asarray(a, dtype=float), lambda a: np.ones_like(a, dtype=float))
    pts = envelope_point(zero, ramp, th)
    assert np.all(pts[:, :2] == 0.0) and np.allclose(pts[:, 2], th)
    # with the compatible height t' = 0 the segment collapses to the point (0, 0, t0)
    curve = generate_envelope(make_family(zero, 1.5, 64))
    assert np.all(curve.points[:, :2] == 0.0) and np.all(curve.z == 1.5)


def test_helix_exact():
    c = generate_envelope(make_family(make_constant(2.0), 0.0, 1024))
    th = c.theta
    assert np.max(np.abs(c.x - 2 * np.cos(th))) <= 1e-10
    assert np.max(np.abs(c.y - 2 * np.sin(th))) <= 1e-10
    assert np.max(np.abs(c.z + 4 * th)) <= 1e-10
    assert np.max(np.abs(horizontality_residual(c))) <= 1e-10


def test_generated_envelope_is_horizontal(preset):
    _, p = preset
    c = generate_envelope(make_family(p, 0.0, 1024))
    assert np.max(np.abs(horizontality_residual(c))) <= 1e-8
    assert np.max(np.abs(contact_normality(c))) <= 1e-8


def test_envelope_derivatives_match_finite_differences(preset):
    _, p = preset
    fam = make_family(p, 0.0, 4096)
    c = generate_envelope(fam)
    from heisenvelope.numerics import fd_derivatives

    d1, d2 = fd_derivatives(c.points, c.theta)
    assert np.max(np.abs(d1 - c.d1)) < 1e-8
    assert np.max(np.abs(d2 - c.d2)) < 1e-5


def test_curvature_two_plus_cos_is_half():
    c = generate_envelope(make_family(two_plus_cos(), 0.0, 1024))
    assert np.max(np.abs(p_curvature(c) - 0.5)) < 1e-12
    assert np.allclose(curvature_closed_form(two_plus_cos()), 0.5, atol=1e-15)
    assert np.allclose(curvature_closed_form(make_constant(3.0)), 1 / 3)


def test_degenerate_radius():
    p = make_trig_poly(1.0, [(0.0, 0.0), (0.9, 0.0)])
    root = 0.5 * np.arccos(1 / 2.7)
    with pytest.raises(errors.DegenerateRadius):
        curvature_closed_form(p, np.array([0.1, root, 1.0]))
    k = curvature_closed_form(p, np.array([0.1, root, 1.0]), strict=False)
    assert np.isnan(k[1]) and np.isfinite(k[0])
    assert degenerate_nodes(p, np.array([root])).all()
    # the envelope itself is still produced
    c = generate_envelope(make_family(p, 0.0, 512))
    assert np.max(np.abs(horizontality_residual(c))) <= 1e-8


def test_corrupted_height_is_rejected():
    flat = HeightFunction.from_callables(lambda a: 0.0 * np.asarray(a), lambda a: 0.0 * np.asarray(a))
    fam = FamilySpec(make_constant(1.0), flat, np.linspace(0, TWO_PI, 64))
    with pytest.raises(errors.CompatibilityViolation):
        generate_envelope(fam)


# --- length, area, closedness ------------------------------------------------


@pytest.mark.parametrize("p", [make_constant(2.0), two_plus_cos()], ids=["c2", "2+cos"])
def test_length_and_area_are_four_pi(p):
    assert horizontal_length(p) == pytest.approx(FOUR_PI, abs=1e-8)
    assert length_by_curvature(p) == pytest.approx(FOUR_PI, abs=1e-8)
    assert santalo_area(p) == pytest.approx(FOUR_PI, abs=1e-8)


def test_length_and_area_against_polygon_oracles():
    p = two_plus_cos()
    c = generate_envelope(make_family(p, 0.0, 4096))
    chord = np.sum(np.hypot(np.diff(c.x), np.diff(c.y)))
    assert abs(chord / horizontal_length(p, c.theta) - 1) <= 1e-6
    assert abs(shoelace(c.x, c.y) / santalo_area(p, c.theta) - 1) <= 1e-5


def test_santalo_needs_periodic():
    with pytest.raises(errors.NotPeriodic):
        santalo_area(make_exponential(1.0, 1.0))
    with pytest.raises(errors.NotPeriodic):
        closedness_check(make_exponential(1.0, 1.0), integrate_t(make_exponential(1.0, 1.0), 0, np.linspace(0, 1, 20)))


def test_closedness_examples():
    fam = make_family(make_constant(2.0), 0.0, 1024)
    z_drop, closed = closedness_check(fam.support, fam.height)
    assert z_drop == pytest.approx(-8 * np.pi, abs=1e-10) and not closed
    zero = make_family(make_constant(0.0), 3.0, 64)
    assert closedness_check(zero.support, zero.height) == (0.0, True)


@given(
    a0=st.floats(1.5, 4.0),
    coeffs=st.lists(st.tuples(st.floats(-0.3, 0.3), st.floats(-0.3, 0.3)), min_size=1, max_size=4),
)
def test_z_drop_is_minus_twice_area(a0, coeffs):
    p = make_trig_poly(a0, coeffs)
    grid = np.linspace(0, TWO_PI, 1024)
    area = santalo_area(p, grid)
    assert abs(z_drop_integral(p, grid) + 2 * area) <= 1e-8 * (1 + abs(area))
    fam = make_family(p, 0.0, grid=grid)
    c = generate_envelope(fam)
    assert abs((c.z[-1] - c.z[0]) + 2 * area) <= 1e-8 * (1 + abs(area))
    assert area > 0 and not closedness_check(p, fam.height).closed


def test_invariant_report_keys_and_values():
    rep = invariant_report(make_family(make_constant(2.0), 0.0, 1024)).to_dict()
    assert list(rep) == ["k", "tau_sup", "length", "area_F", "z_drop", "horiz_residual_sup"]
    assert rep["length"] == pytest.approx(FOUR_PI) and rep["area_F"] == pytest.approx(FOUR_PI)
    assert rep["z_drop"] == pytest.approx(-8 * np.pi) and rep["tau_sup"] <= 1e-8
    assert np.allclose(rep["k"], 0.5)


def test_invariant_report_degenerate_and_non_periodic():
    rep = invariant_report(make_family(make_constant(0.0), 0.0, 64))
    assert rep.k is None and rep.tau_sup is None and rep.length == 0.0
    rep = invariant_report(make_family(make_exponential(1.0, 1.0), 0.0, 256))
    assert rep.area_F is None
    # exp: z = t - p'p = -e^{2 theta}
    assert rep.z_drop == pytest.approx(-(np.exp(2 * TWO_PI) - 1), rel=1e-12)


def test_curvature_magnitude_on_every_preset(preset):
    # in the theta parametrisation the projected speed is |p + p''|, so the
    # curvature formula returns 1/|p + p''| even where p + p'' < 0
    _, p = preset
    fam = make_family(p, 0.0, 1024)
    keep = ~degenerate_nodes(p, fam.grid)
    k = p_curvature(generate_envelope(fam))
    rho = p.radius_of_curvature(fam.grid)
    assert np.max(np.abs(k - 1 / np.abs(rho))[keep]) <= 1e-6
    assert np.all(k[keep] > 0)


@pytest.mark.parametrize("p", [make_constant(2.0), two_plus_cos()], ids=["c2", "2+cos"])
def test_curvature_from_sampled_points(p):
    from heisenvelope.heisenberg import Curve

    c = generate_envelope(make_family(p, 0.0, 1024))
    k = p_curvature(Curve.from_points(c.theta, c.points, periodic=True))
    assert np.max(np.abs(k - curvature_closed_form(p, c.theta))) < 1e-8
