"""CSV, JSON and SVG readers/writers.

Numbers are written with 17 significant digits and columns in a fixed order,
so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from . import errors
from .heisenberg import Curve
from .lines import FamilySpec
from .numerics import fd_derivatives
from .support import TWO_PI, HeightFunction, SupportFunction, make_sampled
from .tolerances import current as current_tolerances

CURVE_COLUMNS = ("theta", "x", "y", "z")
DERIV_COLUMNS = ("dx", "dy", "dz")
FAMILY_COLUMNS = ("theta", "p", "t")
SUPPORT_COLUMNS = ("theta", "p")


def fmt(v) -> str:
    return f"{float(v):.17g}"


def _write_rows(path, header, columns):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(fmt(v) for v in row) + "\n")


def read_columns(path, required, optional=()):
    """Parse a numeric CSV with a header row into a dict of float arrays.

    Errors carry 1-based line numbers.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise errors.CsvFormatError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise errors.CsvFormatError("empty file", line=1) from None
        missing = [c for c in required if c not in header]
        if missing:
            raise errors.CsvFormatError(f"missing column(s) {', '.join(missing)} in header {header}", line=1)
        wanted = list(required) + [c for c in optional if c in header]
        index = {c: header.index(c) for c in wanted}
        data = {c: [] for c in wanted}
        for row in reader:
            line = reader.line_num
            if not row or all(cell.strip() == "" for cell in row):
                continue
            if len(row) != len(header):
                raise errors.CsvFormatError(f"expected {len(header)} fields, got {len(row)}", line=line)
            for c, i in index.items():
                cell = row[i].strip()
                try:
                    val = float(cell)
                except ValueError:
                    raise errors.CsvFormatError(f"column {c!r}: {cell!r} is not a number", line=line) from None
                if not math.isfinite(val):
                    raise errors.CsvFormatError(f"column {c!r}: non-finite value {cell!r}", line=line)
                data[c].append(val)
    if not data[required[0]]:
        raise errors.CsvFormatError("no data rows", line=2)
    return {c: np.asarray(v, dtype=float) for c, v in data.items()}


# ---------------------------------------------------------------------------
# curves


def write_curve_csv(path, curve: Curve, with_derivatives: bool = True):
    cols = [curve.theta, curve.x, curve.y, curve.z]
    header = list(CURVE_COLUMNS)
    if with_derivatives and curve.d1 is not None:
        cols += [curve.d1[:, 0], curve.d1[:, 1], curve.d1[:, 2]]
        header += DERIV_COLUMNS
    _write_rows(path, header, cols)


def _curve_from_columns(cols) -> Curve:
    pts = np.column_stack([cols["x"], cols["y"], cols["z"]])
    theta = cols["theta"]
    if all(c in cols for c in DERIV_COLUMNS):
        d1 = np.column_stack([cols[c] for c in DERIV_COLUMNS])
        d2, _ = fd_derivatives(d1, theta)
        return Curve(theta, pts, d1, d2, derivative_source="supplied")
    return Curve.from_points(theta, pts)


def read_curve_csv(path) -> Curve:
    """Curve from ``theta,x,y,z[,dx,dy,dz]``; second derivatives are finite differences."""
    return _curve_from_columns(read_columns(path, CURVE_COLUMNS, DERIV_COLUMNS))


def curve_to_dict(curve: Curve, with_derivatives: bool = True) -> dict:
    out = {"theta": curve.theta.tolist(), "x": curve.x.tolist(), "y": curve.y.tolist(), "z": curve.z.tolist()}
    if with_derivatives and curve.d1 is not None:
        for i, name in enumerate(DERIV_COLUMNS):
            out[name] = curve.d1[:, i].tolist()
    return out


def write_curve_json(path, curve: Curve, with_derivatives: bool = True):
    write_json(path, curve_to_dict(curve, with_derivatives))


def read_curve_json(path) -> Curve:
    with open(path) as fh:
        raw = json.load(fh)
    missing = [c for c in CURVE_COLUMNS if c not in raw]
    if missing:
        raise errors.CsvFormatError(f"curve JSON missing keys {missing}")
    return _curve_from_columns({k: np.asarray(v, dtype=float) for k, v in raw.items() if k in CURVE_COLUMNS + DERIV_COLUMNS})


# ---------------------------------------------------------------------------
# families and support samples


def write_family_csv(path, fam: FamilySpec):
    p, t = fam.node_values()
    _write_rows(path, FAMILY_COLUMNS, [fam.grid, p, t])


def looks_periodic(theta, p) -> bool:
    """True when the nodes span [0, 2 pi] and p closes up within tol_period."""
    tol = current_tolerances().tol_period * max(1.0, abs(float(p[0])))
    return abs(theta[0]) < 1e-9 and abs(theta[-1] - TWO_PI) < 1e-9 and abs(p[-1] - p[0]) <= tol


def support_from_samples(theta, p, periodic="auto") -> SupportFunction:
    if periodic == "auto":
        periodic = looks_periodic(theta, p)
    return make_sampled(theta, periodic=bool(periodic), p=p)


def read_support_csv(path, periodic="auto") -> SupportFunction:
    cols = read_columns(path, SUPPORT_COLUMNS)
    return support_from_samples(cols["theta"], cols["p"], periodic)


def read_family_csv(path, periodic="auto", check: bool = True) -> FamilySpec:
    """Family from ``theta,p,t``; with ``check`` the supplied heights must be compatible."""
    cols = read_columns(path, FAMILY_COLUMNS)
    support = support_from_samples(cols["theta"], cols["p"], periodic)
    height = HeightFunction.from_samples(cols["theta"], cols["t"])
    if check:
        return FamilySpec.checked(support, height, cols["theta"])
    return FamilySpec(support, height, cols["theta"])


# ---------------------------------------------------------------------------
# JSON / SVG


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        return val if math.isfinite(val) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def write_svg(path, curve: Curve, fam: FamilySpec = None, every: int = None, size: int = 600):
    """xy-projection of ``curve``, optionally with every ``every``-th support line of ``fam``."""
    xs, ys = curve.x, curve.y
    lo_x, hi_x, lo_y, hi_y = xs.min(), xs.max(), ys.min(), ys.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    pad = 0.15 * span
    lo_x, hi_x, lo_y, hi_y = lo_x - pad, hi_x + pad, lo_y - pad, hi_y + pad
    scale = size / max(hi_x - lo_x, hi_y - lo_y)

    def sx(v):
        return (v - lo_x) * scale

    def sy(v):
        return (hi_y - v) * scale

    w, h = (hi_x - lo_x) * scale, (hi_y - lo_y) * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" height="{h:.1f}" viewBox="0 0 {w:.1f} {h:.1f}">',
        f'<rect width="{w:.1f}" height="{h:.1f}" fill="white"/>',
    ]
    if fam is not None:
        step = every or max(1, fam.grid.size // 32)
        p, _ = fam.node_values()
        reach = 2.0 * span
        for i in range(0, fam.grid.size, step):
            th = fam.grid[i]
            bx, by = p[i] * np.cos(th), p[i] * np.sin(th)
            dx, dy = -np.sin(th) * reach, np.cos(th) * reach
            parts.append(
                f'<line x1="{sx(bx - dx):.3f}" y1="{sy(by - dy):.3f}" x2="{sx(bx + dx):.3f}" y2="{sy(by + dy):.3f}" '
                'stroke="#9ab" stroke-width="0.6"/>'
            )
    pts = " ".join(f"{sx(a):.3f},{sy(b):.3f}" for a, b in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#c22" stroke-width="1.5"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
