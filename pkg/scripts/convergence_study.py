"""Grid-refinement study: oracle distance, height quadrature and round-trip error.

    python3 scripts/convergence_study.py --out convergence.json
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from heisenvelope import generate_envelope, make_family, parse_preset, recover_family
from heisenvelope.envelope import integrate_t
from heisenvelope.recovery import oracle_distance
from heisenvelope.support import TWO_PI


@dataclass
class StudyConfig:
    presets: list = field(default_factory=lambda: ["constant:2", "trig:2,1,0", "trig:1,0,0,0.5,0,0,0.25"])
    sizes: list = field(default_factory=lambda: [256, 512, 1024, 2048, 4096])
    # powers k for the 2^k + 1 node quadrature sweep on p = 2 + cos
    quad_powers: list = field(default_factory=lambda: list(range(4, 14)))
    t0: float = 0.0


def orders(errors):
    e = np.asarray(errors, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(e[:-1] / e[1:]).tolist()


def oracle_sweep(cfg: StudyConfig):
    out = {}
    for name in cfg.presets:
        p = parse_preset(name)
        dist = [oracle_distance(make_family(p, cfg.t0, n)) for n in cfg.sizes]
        out[name] = {"distance": dist, "order": orders(dist)}
    return out


def round_trip_sweep(cfg: StudyConfig):
    dense = np.linspace(0, TWO_PI, 7777)
    out = {}
    for name in cfg.presets:
        p = parse_preset(name)
        errs = []
        for n in cfg.sizes:
            fam = make_family(p, cfg.t0, n)
            rec = recover_family(generate_envelope(fam))
            errs.append(float(np.max(np.abs(rec.support.eval(dense) - p.eval(dense)))))
        out[name] = {"support_error": errs, "order": orders(errs)}
    return out


def quadrature_sweep(cfg: StudyConfig):
    p = parse_preset("trig:2,1,0")
    nodes, errs = [], []
    for k in cfg.quad_powers:
        g = np.linspace(0, TWO_PI, 2**k + 1)
        exact = -4 * g - 4 * np.sin(g) - np.sin(2 * g) / 2
        nodes.append(g.size)
        errs.append(float(np.max(np.abs(integrate_t(p, 0.0, g).eval(g) - exact))))
    return {"nodes": nodes, "error": errs, "order": orders(errs)}


def run(cfg: StudyConfig) -> dict:
    return {
        "config": asdict(cfg),
        "oracle": oracle_sweep(cfg),
        "round_trip": round_trip_sweep(cfg),
        "quadrature": quadrature_sweep(cfg),
    }


def print_table(title, sizes, rows):
    print(title)
    print("  " + " ".join(f"{n:>10}" for n in ["N"] + list(sizes)))
    for name, vals in rows.items():
        print(f"  {name[:10]:>10} " + " ".join(f"{v:10.2e}" for v in vals))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+")
    ap.add_argument("--presets", nargs="+")
    ap.add_argument("--out", help="write the results as JSON")
    args = ap.parse_args(argv)
    cfg = StudyConfig()
    if args.sizes:
        cfg.sizes = args.sizes
    if args.presets:
        cfg.presets = args.presets
    res = run(cfg)
    print_table("oracle distance", cfg.sizes, {k: v["distance"] for k, v in res["oracle"].items()})
    print_table("recovered support error", cfg.sizes, {k: v["support_error"] for k, v in res["round_trip"].items()})
    q = res["quadrature"]
    print_table("height quadrature error (p = 2 + cos)", q["nodes"], {"sup": q["error"]})
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(res, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
