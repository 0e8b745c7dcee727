"""Survey of the p1'' sign classification on admissible exponential partners.

For each test support p2 and interval, the partner p1 with p1 p2 = p1' p2'
is built and the observed sign of p1'' is compared with the asserted one.
Along a partner, p1''/p1 = (p2'^2 - p2 p2'' + p2^2) / p2'^2, so the sign of
p1'' is that of q = p2'^2 - p2 p2'' + p2^2; the survey reports min/max of q.

    python3 scripts/sign_case_survey.py --out survey.json
"""

from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from heisenvelope import classify_pair, errors, exponential_partner, make_exponential, parse_preset


@dataclass
class SurveyConfig:
    # (label, p2 preset, a, b)
    pairs: list = field(
        default_factory=lambda: [
            ("2+sin", "trig:2,0,1", 0.2, 1.2),
            ("2-cos", "trig:2,-1,0", 0.2, 1.2),
            ("2+cos", "trig:2,1,0", 0.2, 1.2),
            ("1.05-cos", "trig:1.05,-1,0", 0.05, 0.25),
            ("2+cos, p2''>0", "trig:2,1,0", 2.0, 3.0),
            ("e^theta", "exp:1,1", 0.0, 1.0),
            ("e^-theta", "exp:1,-1", 0.0, 1.0),
        ]
    )
    # scan p2 = c - cos(theta) on [a0, a0 + width] for the sign change of q
    scan_c: list = field(default_factory=lambda: [1.02, 1.05, 1.1, 1.2, 1.5, 2.0])
    scan_start: float = 0.05
    scan_width: float = 0.2
    nodes: int = 2001


def q_stats(p2, a, b, n=2001):
    th = np.linspace(a, b, n)
    v, d1, d2 = p2.eval(th), p2.eval_d1(th), p2.eval_d2(th)
    q = d1**2 - v * d2 + v**2
    return float(q.min()), float(q.max())


def survey_pair(label, preset, a, b, nodes):
    p2 = parse_preset(preset)
    row = {"label": label, "p2": preset, "interval": [a, b]}
    try:
        p1 = exponential_partner(p2, 1.0, (a, b))
        rep = classify_pair(p1, p2, (a, b), n=nodes)
    except errors.EnvelopeError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        return row
    row.update(
        case=rep.case_label,
        admissible=rep.admissible,
        signs=rep.observed_signs,
        concluded_sign=rep.concluded_sign,
        violations=rep.violations,
        n=rep.n_nodes,
        q_range=q_stats(p2, a, b, nodes),
    )
    return row


def run(cfg: SurveyConfig) -> dict:
    rows = [survey_pair(*spec, cfg.nodes) for spec in cfg.pairs]
    e = make_exponential(1.0, -1.0)
    self_pair = classify_pair(e, e, (0.0, 1.0), n=cfg.nodes)
    scan = []
    a, b = cfg.scan_start, cfg.scan_start + cfg.scan_width
    for c in cfg.scan_c:
        scan.append(survey_pair(f"{c}-cos", f"trig:{c},-1,0", a, b, cfg.nodes))
    return {
        "config": asdict(cfg),
        "pairs": rows,
        "decaying_self_pair": self_pair.to_dict(),
        "scan": scan,
    }


def describe(row):
    if "error" in row:
        return f"{row['label']:>14} [{row['interval'][0]}, {row['interval'][1]}]  {row['error']}"
    s = row["signs"]
    verdict = "holds" if row["violations"] == 0 else f"fails at {row['violations']}/{row['n']}" if row["violations"] else "n/a"
    return (
        f"{row['label']:>14} [{row['interval'][0]}, {row['interval'][1]}]  case {row['case']}  "
        f"p1' {s['dp1']} p2' {s['dp2']} p2'' {s['d2p2']} p1'' {s['d2p1']}  q in [{row['q_range'][0]:.3g}, "
        f"{row['q_range'][1]:.3g}]  asserted sign {verdict}"
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", help="write the results as JSON")
    args = ap.parse_args(argv)
    res = run(SurveyConfig())
    print("exponential partners:")
    for row in res["pairs"]:
        print("  " + describe(row))
    d = res["decaying_self_pair"]
    print(f"p1 = p2 = e^-theta on [0, 1]: case {d['case_label']}, p1'' {d['observed_signs']['d2p1']}, "
          f"asserted sign fails at {d['violations']}/{d['n_nodes']} nodes")
    print("scan of p2 = c - cos(theta):")
    for row in res["scan"]:
        print("  " + describe(row))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(res, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
