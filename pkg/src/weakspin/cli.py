"""
Command-line front end.

    python -m weakspin --command fig1 --out fig1.csv
    python -m weakspin --command sample --theta-p 60 --coupling 50 --width 1 --samples 100000
    python -m weakspin --command cnl-test --f-family delta --u-dir 0,0 --format json

Angles are in degrees at this interface. Exit status is 0 on success, 2 on a
usage error and 1 on a numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .entangled_cnl import (
    DEFAULT_TOLERANCE,
    NormalizationError,
    SourceDistribution,
    SphereQuadrature,
    cnl_test,
)
from .pointer import WmConfig, f_ratio
from .spin_core import BlochDirection, ket_from_direction
from .weak_measurement import delta_theta, nm_limit_classify_many, post_theta, sample_outcomes

DEFAULT_SEED = 20100817
COMMANDS = ("fig1", "sample", "cnl-test")
FAMILY_NAMES = {
    "uniform": "uniform_anticorrelated",
    "delta": "delta_pair",
    "product": "product_uniform",
}
SIG_DIGITS = 12


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count)


def parse_grid(text: str) -> Grid:
    """Parse ``min:max:count`` (count >= 2, min < max) or a single value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            v = float(parts[0])
            grid = Grid(v, v, 1)
        elif len(parts) == 3:
            grid = Grid(float(parts[0]), float(parts[1]), int(parts[2]))
            if grid.count < 2:
                raise UsageError(f"grid count must be >= 2, got {grid.count}")
            if not grid.lo < grid.hi:
                raise UsageError(f"grid needs min < max, got {text!r}")
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad grid {text!r}; expected min:max:count or a single number") from None
    if not (np.isfinite(grid.lo) and np.isfinite(grid.hi)):
        raise UsageError(f"grid bounds must be finite, got {text!r}")
    return grid


def parse_direction(text: str) -> BlochDirection:
    try:
        theta, phi = (float(p) for p in text.split(","))
        return BlochDirection.from_degrees(theta, phi)
    except ValueError as exc:
        raise UsageError(f"bad direction {text!r}; expected theta,phi in degrees ({exc})") from None


def fmt(x) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def _num(x):
    return float(fmt(x))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weakspin", description="Weak measurements of spin-1/2 systems.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--theta-p", type=float, default=None, help="prior polar angle, degrees")
    p.add_argument("--coupling", type=float, default=1.0, help="pointer shift a")
    p.add_argument("--width", type=float, default=None, help="pointer width (default: equal to --coupling)")
    p.add_argument("--alpha-grid", default="0:180:19", help="min:max:count in degrees")
    p.add_argument("--ql-grid", default=None, help="min:max:count in length units")
    p.add_argument("--f-family", default="uniform", help="uniform | delta | product")
    p.add_argument("--u-dir", default="0,0", help="theta,phi in degrees for the delta family")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--normalized", action="store_true", help="report pointer positions in units of a")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    return p


def _config(args) -> WmConfig:
    width = args.coupling if args.width is None else args.width
    try:
        return WmConfig(args.coupling, width)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def run_fig1(args) -> tuple[list[str], list[list[float]], dict]:
    cfg = _config(args)
    a = cfg.coupling_a
    theta_p = 90.0 if args.theta_p is None else args.theta_p
    if not 0.0 <= theta_p <= 180.0:
        raise UsageError("--theta-p must lie in [0, 180]")
    grid = parse_grid(args.ql_grid) if args.ql_grid else Grid(-3.0 * a, 3.0 * a, 121)
    q = grid.values()
    f = f_ratio(cfg, q)
    dth = np.degrees(delta_theta(np.radians(theta_p), cfg, q))
    scale = 1.0 / a if args.normalized else 1.0
    rows = [[qi * scale, fi, di] for qi, fi, di in zip(q, np.atleast_1d(f), np.atleast_1d(dth))]
    return ["q1", "f", "delta_theta_deg"], rows, {"theta_p_deg": theta_p}


def run_sample(args) -> tuple[list[str], list[list[float]], dict]:
    cfg = _config(args)
    theta_p = 0.0 if args.theta_p is None else args.theta_p
    if not 0.0 <= theta_p <= 180.0:
        raise UsageError("--theta-p must lie in [0, 180]")
    if args.samples <= 0:
        raise UsageError("--samples must be positive")
    if args.seed < 0 or args.seed >= 2 ** 64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    rng = np.random.default_rng(args.seed)
    prior = ket_from_direction(BlochDirection.from_degrees(theta_p))
    q = sample_outcomes(prior, cfg, rng, args.samples)
    f = f_ratio(cfg, q)
    theta_q = np.degrees(post_theta(np.radians(theta_p), cfg, q))
    scale = 1.0 / cfg.coupling_a if args.normalized else 1.0
    rows = [[qi * scale, fi, ti] for qi, fi, ti in zip(q, f, theta_q)]
    summary = {
        "theta_p_deg": theta_p,
        "n_samples": int(args.samples),
        "mean_q1": float(np.mean(q)) * scale,
        "fraction_plus": float(np.mean(nm_limit_classify_many(q) == 1)),
    }
    return ["q1", "f", "theta_q_deg"], rows, summary


def _source(args) -> SourceDistribution:
    name = args.f_family
    if name not in FAMILY_NAMES:
        raise UsageError(f"unknown --f-family {name!r}; valid names: {', '.join(FAMILY_NAMES)}")
    kind = FAMILY_NAMES[name]
    if kind == "delta_pair":
        return SourceDistribution.delta_pair(parse_direction(args.u_dir))
    return SourceDistribution(kind)


def run_cnl_test(args, source: Optional[SourceDistribution] = None):
    cfg = _config(args)
    a = cfg.coupling_a
    source = source or _source(args)
    alphas = parse_grid(args.alpha_grid).values()
    qls = parse_grid(args.ql_grid).values() if args.ql_grid else Grid(-2.0 * a, 2.0 * a, 21).values()
    report = cnl_test(source, cfg, np.radians(alphas), qls, SphereQuadrature.default())
    scale = 1.0 / a if args.normalized else 1.0
    rows = [[np.degrees(r.alpha), r.q_l * scale, r.f, r.lhs, r.rhs, r.abs_diff] for r in report.rows]
    summary = {
        "f_family": args.f_family,
        "max_abs_diff": report.max_abs_diff,
        "argmax_alpha_deg": float(np.degrees(report.argmax_alpha)),
        "argmax_q_l": report.argmax_q_l * scale,
        "tolerance": args.tolerance,
        "verdict": report.verdict(args.tolerance),
    }
    return ["alpha_deg", "q_l", "f", "lhs", "rhs", "abs_diff"], rows, summary


RUNNERS = {"fig1": run_fig1, "sample": run_sample, "cnl-test": run_cnl_test}


def _config_record(args) -> dict:
    rec = {k: v for k, v in sorted(vars(args).items()) if k != "out"}
    return {k: (_num(v) if isinstance(v, float) else v) for k, v in rec.items()}


def render(args, header, rows, summary) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
        return buf.getvalue()
    doc = {
        "config": _config_record(args),
        "rows": [dict(zip(header, (_num(x) for x in row))) for row in rows],
        "summary": {k: (_num(v) if isinstance(v, float) else v) for k, v in summary.items()},
    }
    return json.dumps(doc, indent=2) + "\n"


def summary_lines(summary: dict) -> str:
    return "".join(f"{k}={fmt(v) if isinstance(v, float) else v}\n" for k, v in summary.items())


def main(argv=None, source: Optional[SourceDistribution] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        if args.command == "cnl-test":
            header, rows, summary = run_cnl_test(args, source)
        else:
            header, rows, summary = RUNNERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"weakspin: error: {exc}", file=sys.stderr)
        return 2
    except NormalizationError as exc:
        print(f"weakspin: numerical failure: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # e.g. a malformed WEAKSPIN_QUAD_ORDER
        parser.print_usage(sys.stderr)
        print(f"weakspin: error: {exc}", file=sys.stderr)
        return 2

    text = render(args, header, rows, summary)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.format == "csv":
        stream = sys.stdout if args.out else sys.stderr
        stream.write(summary_lines(summary))
    return 0


if __name__ == "__main__":
    sys.exit(main())
