import json

import numpy as np
import pytest

from heisenvelope import errors
from heisenvelope import io as hio
from heisenvelope.envelope import generate_envelope, make_family
from heisenvelope.heisenberg import Curve, horizontality_residual
from heisenvelope.support import TWO_PI, make_trig_poly
from heisenvelope.tolerances import DEFAULTS, EPS_REG, current


@pytest.fixture
def fam():
    return make_family(make_trig_poly(2.0, [(1.0, 0.0)]), 0.5, 256)


def test_curve_csv_round_trip(tmp_path, fam):
    c = generate_envelope(fam)
    path = tmp_path / "c.csv"
    hio.write_curve_csv(path, c)
    back = hio.read_curve_csv(path)
    assert back.derivative_source == "supplied"
    assert np.array_equal(back.points, c.points) and np.array_equal(back.d1, c.d1)
    assert np.array_equal(back.theta, c.theta)
    hio.write_curve_csv(path, c, with_derivatives=False)
    bare = hio.read_curve_csv(path)
    assert bare.derivative_source == "fd"
    assert np.max(np.abs(horizontality_residual(bare))) <= DEFAULTS.tol_horiz_fd


def test_curve_json_round_trip(tmp_path, fam):
    c = generate_envelope(fam)
    path = tmp_path / "c.json"
    hio.write_curve_json(path, c)
    raw = json.loads(path.read_text())
    assert set(raw) == {"theta", "x", "y", "z", "dx", "dy", "dz"}
    back = hio.read_curve_json(path)
    assert np.array_equal(back.points, c.points)


def test_family_csv_round_trip(tmp_path, fam):
    path = tmp_path / "f.csv"
    hio.write_family_csv(path, fam)
    assert path.read_text().splitlines()[0] == "theta,p,t"
    back = hio.read_family_csv(path)
    assert back.support.periodic
    p0, t0 = fam.node_values()
    p1, t1 = back.node_values()
    assert np.array_equal(p0, p1) and np.array_equal(t0, t1)


def test_incompatible_family_file_rejected(tmp_path):
    th = np.linspace(0, TWO_PI, 64)
    path = tmp_path / "bad.csv"
    path.write_text("theta,p,t\n" + "".join(f"{hio.fmt(a)},1.0,0.0\n" for a in th))
    with pytest.raises(errors.CompatibilityViolation):
        hio.read_family_csv(path)
    assert hio.read_family_csv(path, check=False).grid.size == 64


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("theta,x,y\n0,1,2\n", 1),
        ("theta,x,y,z\n0,1,2,3\n0.1,1,2\n", 3),
        ("theta,x,y,z\n0,1,2,abc\n", 2),
        ("theta,x,y,z\n0,1,2,nan\n", 2),
        ("theta,x,y,z\n", 2),
    ],
)
def test_malformed_csv_reports_line(tmp_path, text, line):
    path = tmp_path / "m.csv"
    path.write_text(text)
    with pytest.raises(errors.CsvFormatError) as exc:
        hio.read_curve_csv(path)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}: ")


def test_missing_file():
    with pytest.raises(errors.CsvFormatError):
        hio.read_curve_csv("/nonexistent/file.csv")


def test_number_format_round_trips():
    for v in (np.pi, 1e-300, -2.5e17, 1 / 3):
        assert float(hio.fmt(v)) == v


def test_json_non_finite_becomes_null():
    assert json.loads(hio.dumps({"a": float("nan"), "b": np.float64(1.5), "c": np.arange(2)})) == {
        "a": None,
        "b": 1.5,
        "c": [0, 1],
    }


def test_svg_written(tmp_path, fam):
    path = tmp_path / "e.svg"
    hio.write_svg(path, generate_envelope(fam), fam)
    text = path.read_text()
    assert text.startswith("<svg") and "<polyline" in text and text.count("<line") == 256 // 8


def test_looks_periodic():
    th = np.linspace(0, TWO_PI, 50)
    assert hio.looks_periodic(th, 2 + np.cos(th))
    assert not hio.looks_periodic(th, np.exp(th))
    assert not hio.looks_periodic(th[:-1], 2 + np.cos(th[:-1]))


# --- tolerance override --------------------------------------------------------


def test_override_scales_tolerances(monkeypatch):
    assert current() == DEFAULTS
    monkeypatch.setenv("ENVELOPE_TOL_OVERRIDE", "100")
    tol = current()
    assert tol.tol_horiz == pytest.approx(1e-6) and tol.tol_closed == pytest.approx(1e-6)
    assert EPS_REG == 1e-12


@pytest.mark.parametrize("value", ["abc", "0", "-1", "inf"])
def test_bad_override_rejected(monkeypatch, value):
    monkeypatch.setenv("ENVELOPE_TOL_OVERRIDE", value)
    with pytest.raises(ValueError):
        current()


def test_override_changes_decisions(monkeypatch):
    th = np.linspace(0, 1, 64)
    c = Curve.from_points(th, np.column_stack([th, 0 * th, 1e-7 * th]))
    from heisenvelope.heisenberg import is_horizontal

    assert is_horizontal(c)
    c_exact = Curve(c.theta, c.points, c.d1, c.d2, derivative_source="supplied")
    assert not is_horizontal(c_exact)
    monkeypatch.setenv("ENVELOPE_TOL_OVERRIDE", "100")
    assert is_horizontal(c_exact)
