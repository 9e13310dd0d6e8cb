"""Command-line front end: verification suites and scans with JSON/CSV reports.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .curvature import hsc_scan, ricci_hessian, ricci_scan
from .domains import CartanBase, CartanHartogsDomain, sample_interior, xy_of
from .equivalence import equivalence_scan
from .errors import CartanHartogsError
from .metrics import pullback_metric, t_bergman, t_lambda
from .numerics import rel_max_err, wirtinger_hessian
from .potentials import POWER, bergman_coefficients, bergman_log_kernel_flat, hua_polynomial, log_g_lambda_flat

SCHEMA = 1
ORACLE_X_MAX = 0.9
DEFAULT_HESSIAN_TOL = 1e-5
PULLBACK_TOL = 1e-8
BALL_TOL = 1e-10


@dataclass
class Check:
    name: str
    passed: bool
    samples: int
    max_abs_err: float = 0.0
    max_rel_err: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "samples": int(self.samples),
                "max_abs_err": float(self.max_abs_err), "max_rel_err": float(self.max_rel_err)}


@dataclass
class Report:
    command: str
    domain: dict
    seed: int
    checks: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    table: list = field(default_factory=list)
    wall_time_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "domain": self.domain,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "constants": self.constants,
            "witnesses": self.witnesses,
            "warnings": list(self.warnings),
            "wall_time_ms": self.wall_time_ms,
        }

    def summary(self) -> str:
        bad = [c.name for c in self.checks if not c.passed]
        status = "PASS" if not bad else "FAIL (" + ", ".join(sorted(bad)) + ")"
        dom = " ".join(f"{k}={v}" for k, v in self.domain.items())
        return f"{self.command} [{dom}] {len(self.checks)} checks: {status}"


def _encode(obj, indent: int = 0) -> str:
    """JSON with sorted keys and floats at 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return format(v, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(obj[k], indent + 1)}" for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _encode(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def report_json(report: Report) -> str:
    return _encode(report.to_dict()) + "\n"


def report_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "passed", "samples", "max_abs_err", "max_rel_err"])
    for c in sorted(report.checks, key=lambda c: c.name):
        writer.writerow([c.name, str(c.passed).lower(), c.samples,
                         format(c.max_abs_err, ".17g"), format(c.max_rel_err, ".17g")])
    return buf.getvalue()


# Suites. Each returns a Check; they are shared with the test-suite.

def pullback_check(domain: CartanHartogsDomain, pts, tol: float = PULLBACK_TOL) -> Check:
    """Explicit T_lambda blocks against J T_lambda(0, W*) J*."""
    abs_err, rel_err = 0.0, 0.0
    for pt in pts:
        ref = t_lambda(domain, pt).matrix
        got = pullback_metric(domain, pt, POWER).matrix
        abs_err = max(abs_err, float(np.max(np.abs(got - ref))))
        rel_err = max(rel_err, rel_max_err(got, ref))
    return Check("pullback_invariance", rel_err <= tol, len(pts), abs_err, rel_err)


def hessian_oracle_check(domain: CartanHartogsDomain, pts, metric: str, step: float = 1e-4,
                         tol: float = DEFAULT_HESSIAN_TOL) -> Check:
    """Closed-form metric against the numeric mixed Hessian of its log potential."""
    if metric == "t_lambda":
        closed, pot = t_lambda, log_g_lambda_flat
    elif metric == "t_bergman":
        closed, pot = t_bergman, bergman_log_kernel_flat
    else:
        raise ValueError(f"unknown metric {metric!r}")
    abs_err, rel_err = 0.0, 0.0
    for pt in pts:
        ref = closed(domain, pt).matrix
        num = wirtinger_hessian(lambda zs: pot(domain, zs), pt.flat(domain), step,
                                batched=True, extrapolate=True)
        abs_err = max(abs_err, float(np.max(np.abs(num - ref))))
        rel_err = max(rel_err, rel_max_err(num, ref))
    return Check(f"hessian_oracle_{metric}", rel_err <= tol, len(pts), abs_err, rel_err)


def positivity_check(name: str, mats) -> Check:
    """Smallest eigenvalue over a list of Hermitian matrices must be > 0.

    ``max_abs_err`` carries the negated minimum eigenvalue (so <= 0 means pass).
    """
    lo = math.inf
    for mat in mats:
        h = 0.5 * (mat + mat.conj().T)
        lo = min(lo, float(np.linalg.eigvalsh(h)[0]))
    return Check(name, lo > 0, len(mats), -lo, 0.0)


def g_lambda_hessians(domain: CartanHartogsDomain, pts, step: float = 1e-4):
    return [wirtinger_hessian(lambda zs: log_g_lambda_flat(domain, zs), pt.flat(domain), step,
                              batched=True, extrapolate=True) for pt in pts]


def ball_identity_check(domain: CartanHartogsDomain, pts, tol: float = BALL_TOL) -> Check:
    abs_err = 0.0
    for pt in pts:
        abs_err = max(abs_err, float(np.max(np.abs(t_lambda(domain, pt).matrix - t_bergman(domain, pt).matrix))))
    return Check("ball_identity", abs_err <= tol, len(pts), abs_err, abs_err)


def is_ball(domain: CartanHartogsDomain) -> bool:
    return (domain.base.kind == "I" and domain.m == domain.n == domain.N == 1
            and domain.K == 1 and domain.lam == 3)


def containment_check(name: str, samples: dict, lower: float, upper: float) -> Check:
    """Distance by which the sampled extremes leave [lower, upper]."""
    over = 0.0
    if math.isfinite(lower):
        over = max(over, lower - samples["min"])
    if math.isfinite(upper):
        over = max(over, samples["max"] - upper)
    scale = max(abs(v) for v in (lower, upper) if math.isfinite(v))
    return Check(name, bool(samples["within"]), samples["count"], max(over, 0.0), max(over, 0.0) / scale)


# Argument handling.

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cartan-hartogs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "coeffs": "Bergman kernel coefficients b_j and roots of P(x)",
        "verify-metric": "closed-form metrics against pullback and Hessian oracles",
        "curvature": "Ricci and holomorphic sectional curvature bounds scan",
        "equivalence": "Bergman versus G_lambda metric ratio scan",
    }
    for name, helptext in specs.items():
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--type", dest="kind", choices=("I", "II", "III", "IV"), default="I")
        for dim in ("m", "n", "p", "q"):
            p.add_argument(f"--{dim}", type=int)
        p.add_argument("--bign", type=int, default=1, help="fiber dimension N")
        p.add_argument("--bigk", type=float, default=1.0, help="exponent K")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--samples", type=int, default=50)
        p.add_argument("--directions", type=int, default=8)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--xmax", type=float, default=None)
        p.add_argument("--ymax", type=float, default=1e4)
        p.add_argument("--step", type=float, default=1e-4)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


_DIMS = {"I": ("m", "n"), "II": ("p",), "III": ("q",), "IV": ("n",)}


def _domain_from(args, parser) -> CartanHartogsDomain:
    need = _DIMS[args.kind]
    missing = [d for d in need if getattr(args, d) is None]
    if missing:
        parser.error(f"type {args.kind} needs " + ", ".join("--" + d for d in missing))
    extra = [d for d in ("m", "n", "p", "q") if d not in need and getattr(args, d) is not None]
    if extra:
        parser.error(f"type {args.kind} does not take " + ", ".join("--" + d for d in extra))
    dims = [getattr(args, d) for d in need]
    base = {"I": CartanBase.type_i, "II": CartanBase.type_ii,
            "III": CartanBase.type_iii, "IV": CartanBase.type_iv}[args.kind](*dims)
    return CartanHartogsDomain(base, args.bign, args.bigk, args.lam)


def _require_type_i(args, parser) -> None:
    if args.kind != "I":
        parser.error(f"{args.command} is only available for type I")


def _x_max(args, default: float) -> float:
    return default if args.xmax is None else args.xmax


def cmd_coeffs(args, domain: CartanHartogsDomain) -> Report:
    coeffs = bergman_coefficients(domain.m, domain.n, domain.K, domain.N)
    poly = hua_polynomial(domain.m, domain.n, domain.K)
    report = Report("coeffs", domain.describe(), args.seed)
    report.checks.append(Check("b0_zero", coeffs.exact[0] == 0, 1, abs(float(coeffs.exact[0])), 0.0))
    report.constants = {"b": [float(v) for v in coeffs.exact], "roots": poly.roots}
    report.table = [f"b_{j} = {float(b):.17g}" for j, b in enumerate(coeffs.exact)]
    report.table.append("roots of P: " + ", ".join(f"{r:.17g}" for r in poly.roots))
    return report


def cmd_verify_metric(args, domain: CartanHartogsDomain) -> Report:
    report = Report("verify-metric", domain.describe(), args.seed)
    rng = np.random.default_rng(args.seed)
    x_max = _x_max(args, ORACLE_X_MAX)
    pts = [sample_interior(domain, rng, x_max) for _ in range(args.samples)]
    if domain.base.kind != "I":
        report.checks.append(positivity_check("positivity_g_lambda_hessian",
                                              g_lambda_hessians(domain, pts, args.step)))
        return report
    tol = DEFAULT_HESSIAN_TOL if args.tol is None else args.tol
    oracle_pts = [pt for pt in pts if xy_of(domain, pt).X <= ORACLE_X_MAX]
    skipped = len(pts) - len(oracle_pts)
    if skipped:
        report.warnings.append(f"conditioning: {skipped} points with X > {ORACLE_X_MAX} "
                               "excluded from the Hessian oracle")
    report.checks.append(pullback_check(domain, pts))
    if oracle_pts:
        for metric in ("t_lambda", "t_bergman"):
            report.checks.append(hessian_oracle_check(domain, oracle_pts, metric, args.step, tol))
    report.checks.append(positivity_check("positivity_t_lambda", [t_lambda(domain, p).matrix for p in pts]))
    report.checks.append(positivity_check("positivity_t_bergman", [t_bergman(domain, p).matrix for p in pts]))
    report.checks.append(positivity_check("positivity_ricci_hessian",
                                          [ricci_hessian(domain, p).matrix for p in pts]))
    if is_ball(domain):
        report.checks.append(ball_identity_check(domain, pts))
    return report


def cmd_curvature(args, domain: CartanHartogsDomain) -> Report:
    report = Report("curvature", domain.describe(), args.seed)
    x_max = _x_max(args, 0.99)
    ric = ricci_scan(domain, args.samples, args.directions, x_max, args.seed)
    hsc = hsc_scan(domain, args.samples, args.directions, x_max, args.seed, args.ymax)
    report.checks += [
        containment_check("ricci_within_bounds", ric.samples, ric.lower, ric.upper),
        containment_check("hsc_within_bounds", hsc.samples, hsc.lower, hsc.upper),
        Check("ricci_negative", ric.samples["negative"], ric.samples["count"], max(ric.samples["max"], 0.0)),
        Check("hsc_negative", hsc.samples["negative"], hsc.samples["count"], max(hsc.samples["max"], 0.0)),
    ]
    consts = {"ricci_a": ric.constants["a"], "ricci_b": ric.constants["b"],
              "hsc_a": hsc.constants["a"], "hsc_C": hsc.constants["C"]}
    report.checks.append(Check("constants_positive", all(v > 0 for v in consts.values()), len(consts),
                               max(0.0, -min(consts.values()))))
    report.constants = {
        **consts,
        "hsc_a_relaxed": hsc.constants["a_relaxed"],
        "hsc_limit": hsc.constants["limit"],
        "ricci_limit": ric.constants["limit"],
        "ricci_samples": ric.samples,
        "hsc_samples": hsc.samples,
    }
    report.witnesses = {"ricci_" + k: v for k, v in ric.witnesses.items()}
    report.witnesses.update({"hsc_" + k: v for k, v in hsc.witnesses.items()})
    return report


def cmd_equivalence(args, domain: CartanHartogsDomain) -> Report:
    report = Report("equivalence", domain.describe(), args.seed)
    eq = equivalence_scan(domain, args.samples, args.directions, _x_max(args, 0.99), args.seed)
    report.checks += [
        containment_check("ratio_within_bounds", eq.samples, eq.lower, eq.upper),
        Check("ratio_positive", eq.samples["positive"], eq.samples["count"]),
    ]
    report.constants = {**eq.constants, "empirical_b": eq.samples["min"], "empirical_a": eq.samples["max"],
                        "samples": eq.samples}
    report.witnesses = eq.witnesses
    return report


_COMMANDS = {
    "coeffs": cmd_coeffs,
    "verify-metric": cmd_verify_metric,
    "curvature": cmd_curvature,
    "equivalence": cmd_equivalence,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        domain = _domain_from(args, parser)
    except CartanHartogsError as exc:
        parser.error(str(exc))
    if args.command != "verify-metric":
        _require_type_i(args, parser)
    if args.samples < 1 or args.directions < 1:
        parser.error("--samples and --directions must be at least 1")
    if args.xmax is not None and not 0 < args.xmax < 1:
        parser.error("--xmax must lie in (0, 1)")

    start = time.perf_counter()
    try:
        report = _COMMANDS[args.command](args, domain)
    except CartanHartogsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report.wall_time_ms = (time.perf_counter() - start) * 1000.0

    for line in report.table:
        print(line)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(report.summary())
    if args.out:
        text = report_json(report) if args.format == "json" else report_csv(report)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
