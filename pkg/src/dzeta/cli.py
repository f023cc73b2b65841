"""Command-line front end: point evaluation, error-decay sweeps with slope
fits, and the verification suite, with CSV/JSON emission.

Exit codes: 0 success, 2 domain error, 3 precision or quadrature failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import subprocess
import sys

import mpmath as mp

from .asymptotic import RegionParams, approx_ratio, region_check
from .errors import (
    DomainError,
    DZetaError,
    InsufficientData,
    PoleError,
    PrecisionError,
    QuadratureError,
    SingularityError,
    SweepAborted,
)
from .kernel import PrecisionContext, f_factor
from .oracle import double_zeta_direct, double_zeta_em, double_zeta_fe
from .sweep import SweepConfig, fit_slope, sweep_error_decay, verify_suite

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_VERIFY = 4

DEFAULT_BITS = 192
DEFAULT_EPSILON = 0.05


def _default_bits() -> int:
    env = os.environ.get("DZ_BITS")
    if env:
        try:
            return max(64, int(env))
        except ValueError as exc:
            raise DomainError(f"DZ_BITS must be an integer, got {env!r}") from exc
    return DEFAULT_BITS


def parse_complex(text: str) -> mp.mpc:
    """Parse 'RE' or 'RE,IM' into a complex scalar."""
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise DomainError(f"cannot parse complex number from {text!r}")
    try:
        re = mp.mpf(parts[0].strip())
        im = mp.mpf(parts[1].strip()) if len(parts) == 2 else mp.mpf(0)
    except ValueError as exc:
        raise DomainError(f"cannot parse complex number from {text!r}") from exc
    return mp.mpc(re, im)


def _nstr(z, digits: int = 20) -> str:
    return mp.nstr(mp.mpc(z), digits, strip_zeros=False)


def _cplx_fields(z) -> dict:
    z = mp.mpc(z)
    return {"re": float(z.real), "im": float(z.imag)}


def _eval_point(args) -> dict:
    bits = args.bits or _default_bits()
    ctx = PrecisionContext(bits=bits)
    s1 = parse_complex(args.s1)
    s2 = parse_complex(args.s2)
    verdict = region_check(s1, s2, RegionParams(epsilon=DEFAULT_EPSILON, N=args.N))
    report: dict = {
        "s1": _nstr(s1),
        "s2": _nstr(s2),
        "method": args.method,
        "bits": bits,
        "region": {
            "im1_ok": verdict.im1_ok,
            "im2_ok": verdict.im2_ok,
            "ratio_ok": verdict.ratio_ok,
            "even_gap_ok": verdict.even_gap_ok,
            "even_gap": verdict.even_gap,
        },
    }
    if args.method == "direct":
        value = double_zeta_direct(ctx, s1, s2)
    elif args.method == "em":
        value = double_zeta_em(ctx, s1, s2)
    elif args.method == "fe":
        bd = double_zeta_fe(ctx, s1, s2)
        with ctx.wp():
            ratio = bd.total
            value = ratio * f_factor(ctx, s1 + s2)
        report["terms"] = {
            f"t{i}": _nstr(t)
            for i, t in enumerate((bd.t1, bd.t2, bd.t3, bd.t4, bd.t5, bd.t6), start=1)
        }
        report["quadrature_error"] = float(bd.error_estimate)
        report["value"] = _nstr(value)
        report["ratio"] = _nstr(ratio)
        return report
    else:  # asym
        res = approx_ratio(
            ctx,
            s1,
            s2,
            N=args.N,
            include_correction=args.correction,
            epsilon=DEFAULT_EPSILON,
        )
        report["value"] = _nstr(res.zeta_approx)
        report["ratio"] = _nstr(res.ratio_approx)
        report["terms"] = {f"j{j}": _nstr(t) for j, t in enumerate(res.terms)}
        if res.correction is not None:
            report["correction"] = _nstr(res.correction)
        report["claimed_error_order"] = res.claimed_error_order
        return report
    report["value"] = _nstr(value)
    try:
        with ctx.wp():
            report["ratio"] = _nstr(value / f_factor(ctx, s1 + s2))
    except PoleError:
        report["ratio"] = None
    return report


def _print_report(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    for key in ("s1", "s2", "method", "bits", "value", "ratio"):
        if key in report:
            print(f"{key:>8}: {report[key]}")
    if "terms" in report:
        for name, val in report["terms"].items():
            print(f"{name:>8}: {val}")
    if "correction" in report:
        print(f"{'corr':>8}: {report['correction']}")
    region = report.get("region")
    if region:
        flags = ", ".join(f"{k}={v}" for k, v in region.items())
        print(f"{'region':>8}: {flags}")


def _m_grid(start: float, end: float, points: int) -> tuple[float, ...]:
    if points < 1 or end < start or start <= 0:
        raise DomainError("need points >= 1 and 0 < M-start <= M-end")
    if points == 1:
        return (start,)
    ratio = (end / start) ** (1.0 / (points - 1))
    return tuple(start * ratio**i for i in range(points))


def _git_describe() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=5,
            cwd=os.path.dirname(os.path.abspath(__file__)),
            check=False,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return "unknown"


def _run_sweep(args) -> dict:
    n_list = []
    for chunk in args.N:
        n_list.extend(int(p) for p in str(chunk).split(",") if p != "")
    cfg = SweepConfig(
        r2=args.r2,
        M_list=_m_grid(args.M_start, args.M_end, args.points),
        N_list=tuple(n_list),
        epsilon=args.epsilon,
        gap_offset=args.gap,
        method=args.method,
        include_correction=args.correction,
        bits=args.bits or (int(os.environ["DZ_BITS"]) if os.environ.get("DZ_BITS") else None),
    )
    records = sweep_error_decay(cfg)
    slopes = []
    for N in cfg.N_list:
        try:
            fit = fit_slope(records, N)
        except InsufficientData:
            continue
        slopes.append(
            {"N": fit.N, "slope": fit.slope, "intercept": fit.intercept,
             "r_squared": fit.r_squared}
        )
    rows = [
        {
            "M": rec.M_eff,
            "N": rec.N,
            "method": rec.method,
            "re_oracle": rec.oracle_ratio.real,
            "im_oracle": rec.oracle_ratio.imag,
            "re_asym": rec.asym_ratio.real,
            "im_asym": rec.asym_ratio.imag,
            "abs_err": rec.abs_err,
            "rel_err": rec.rel_err,
        }
        for rec in records
    ]
    payload = {
        "metadata": {
            "bits": cfg.bits,
            "epsilon": cfg.epsilon,
            "r2": cfg.r2,
            "gap_offset": cfg.gap_offset,
            "method": cfg.method,
            "git_describe": _git_describe(),
        },
        "records": rows,
        "slopes": slopes,
    }
    out = args.out
    if out.endswith(".csv"):
        with open(out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
            writer.writeheader()
            writer.writerows(rows)
    elif out.endswith(".json"):
        with open(out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise DomainError(f"output path must end in .csv or .json, got {out!r}")
    return payload


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dzeta",
        description="Double zeta values at large negative arguments: "
        "oracles, asymptotics, decay sweeps and verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one point")
    p_eval.add_argument("--s1", required=True, metavar="RE[,IM]")
    p_eval.add_argument("--s2", required=True, metavar="RE[,IM]")
    p_eval.add_argument(
        "--method", required=True, choices=("direct", "em", "fe", "asym")
    )
    p_eval.add_argument("--N", type=int, default=2)
    p_eval.add_argument("--correction", action="store_true")
    p_eval.add_argument("--bits", type=int, default=None)
    p_eval.add_argument("--json", action="store_true")

    p_sweep = sub.add_parser("sweep", help="error-decay sweep along a ray")
    p_sweep.add_argument("--r2", type=float, required=True)
    p_sweep.add_argument("--M-start", dest="M_start", type=float, required=True)
    p_sweep.add_argument("--M-end", dest="M_end", type=float, required=True)
    p_sweep.add_argument("--points", type=int, required=True)
    p_sweep.add_argument("--N", nargs="+", required=True, metavar="LIST")
    p_sweep.add_argument("--epsilon", type=float, required=True)
    p_sweep.add_argument("--gap", type=float, default=0.5)
    p_sweep.add_argument("--method", choices=("em", "fe", "auto"), default="auto")
    p_sweep.add_argument("--correction", action="store_true")
    p_sweep.add_argument("--bits", type=int, default=None)
    p_sweep.add_argument("--out", required=True)

    p_verify = sub.add_parser("verify", help="run the verification suite")
    p_verify.add_argument("--level", choices=("quick", "full"), default="quick")
    p_verify.add_argument("--json", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            _print_report(_eval_point(args), args.json)
            return EXIT_OK
        if args.command == "sweep":
            payload = _run_sweep(args)
            for fit in payload["slopes"]:
                print(
                    f"N={fit['N']}: slope={fit['slope']:.4f} "
                    f"r_squared={fit['r_squared']:.6f}"
                )
            print(f"wrote {len(payload['records'])} records to {args.out}")
            return EXIT_OK
        if args.command == "verify":
            report = verify_suite(args.level)
            if args.json:
                print(json.dumps(report, indent=2, sort_keys=True))
            else:
                for check in report["checks"]:
                    tag = "PASS" if check["ok"] else "FAIL"
                    print(f"{tag} {check['name']}: {check['detail']}")
                print("result:", "ok" if report["ok"] else "FAILED")
            return EXIT_OK if report["ok"] else EXIT_VERIFY
    except (DomainError, SingularityError, PoleError) as exc:
        _emit_error(args, "domain", exc)
        return EXIT_DOMAIN
    except (PrecisionError, QuadratureError, SweepAborted, InsufficientData) as exc:
        _emit_error(args, "precision", exc)
        return EXIT_PRECISION
    except DZetaError as exc:
        _emit_error(args, "error", exc)
        return EXIT_DOMAIN
    raise AssertionError("unreachable")


def _emit_error(args, kind: str, exc: Exception) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"error": {"kind": kind, "message": str(exc)}}))
    else:
        print(f"error ({kind}): {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
