"""Error-decay sweeps along admissible rays, log-log slope fitting, and the
self-contained verification suite aggregating every module's invariants."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from . import coefficients
from .asymptotic import RegionParams, approx_ratio, region_check
from .coefficients import (
    a_coeff,
    a_coeff_series,
    c_coeff_partition,
    c_coeff_taylor,
    ratios,
)
from .errors import DZetaError, InsufficientData, SweepAborted
from .kernel import PrecisionContext, f_factor, ipow, riemann_zeta
from .oracle import (
    beta_contour,
    double_zeta_direct,
    double_zeta_em,
    double_zeta_fe,
    e1_residual,
)
from .quadrature import ContourSpec

EM_ORACLE_MAX_M = 60.0  # above this the six-term assembly is the ground truth


@dataclass(frozen=True)
class SweepConfig:
    """One decay experiment: a ray direction r2 and the M, N grids."""

    r2: float
    M_list: tuple[float, ...]
    N_list: tuple[int, ...] = (0, 1, 2)
    epsilon: float = 0.05
    gap_offset: float = 0.5
    method: str = "auto"  # em | fe | auto (em for M' <= 60, fe above)
    include_correction: bool = False
    bits: int | None = None

    def __post_init__(self):
        if not self.epsilon < self.r2 < 1 - self.epsilon:
            raise ValueError("r2 must lie in (epsilon, 1-epsilon)")
        if not 0 < self.gap_offset < 2:
            raise ValueError("gap_offset must lie in (0, 2)")
        if self.method not in ("em", "fe", "auto"):
            raise ValueError(f"unknown oracle method {self.method!r}")
        if any(m < 4 for m in self.M_list):
            raise ValueError("M values must be >= 4")

    def m_effective(self, M: float) -> float:
        """s1+s2 = -m_effective(M): even integer plus the configured gap."""
        return 2 * math.ceil(M / 2) + self.gap_offset

    def point(self, M: float) -> tuple[mp.mpf, mp.mpf]:
        mp_eff = mp.mpf(2 * math.ceil(M / 2)) + mp.mpf(self.gap_offset)
        r2 = mp.mpf(self.r2)
        return -(1 - r2) * mp_eff, -r2 * mp_eff


@dataclass(frozen=True)
class SweepRecord:
    M: float
    M_eff: float
    N: int
    method: str
    oracle_ratio: complex
    asym_ratio: complex
    abs_err: float
    rel_err: float
    breakdown: tuple[float, ...] | None = None  # |t1|..|t6| for the fe oracle


@dataclass(frozen=True)
class SlopeFit:
    N: int
    slope: float
    intercept: float
    r_squared: float


def _context_for(cfg: SweepConfig, m_eff: float) -> PrecisionContext:
    bits = max(cfg.bits or 0, 64 + 4 * int(math.ceil(m_eff)))
    # Truncation tolerance well below any decay error we intend to measure,
    # but far looser than the cancellation-driven bit count.
    tol = max(1e-30, 2.0 ** -(bits - 32))
    return PrecisionContext(bits=bits, target_tol=tol)


def oracle_ratio(cfg: SweepConfig, M: float):
    """Ground-truth zeta(s1,s2)/f(s1+s2) for one sweep abscissa.

    Returns (ratio, method tag, |t1|..|t6| or None).
    """
    s1, s2 = cfg.point(M)
    m_eff = cfg.m_effective(M)
    ctx = _context_for(cfg, m_eff)
    method = cfg.method
    if method == "auto":
        method = "em" if m_eff <= EM_ORACLE_MAX_M else "fe"
    if method == "em":
        with ctx.wp():
            val = double_zeta_em(ctx, s1, s2) / f_factor(ctx, s1 + s2)
        return val, "em", None
    bd = double_zeta_fe(ctx, s1, s2)
    with ctx.wp():
        total = bd.total
    mags = tuple(float(abs(t)) for t in (bd.t1, bd.t2, bd.t3, bd.t4, bd.t5, bd.t6))
    return total, "fe", mags


def sweep_error_decay(cfg: SweepConfig) -> list[SweepRecord]:
    """Oracle-vs-approximation errors over the (M, N) grid of cfg.

    Points where an evaluator raises are skipped and flagged; the sweep
    aborts if more than 20% of the grid is skipped.
    """
    params = RegionParams(epsilon=cfg.epsilon, N=max(cfg.N_list))
    records: list[SweepRecord] = []
    skipped: list[tuple[float, str]] = []
    for M in cfg.M_list:
        s1, s2 = cfg.point(M)
        m_eff = cfg.m_effective(M)
        verdict = region_check(s1, s2, params)
        if not verdict.ok:
            raise SweepAborted(
                f"sweep point M={M} (s1={s1}, s2={s2}) fails the region check"
            )
        ctx = _context_for(cfg, m_eff)
        try:
            oracle, method, mags = oracle_ratio(cfg, M)
        except DZetaError as exc:
            skipped.append((M, f"oracle: {exc}"))
            continue
        for N in cfg.N_list:
            try:
                approx = approx_ratio(
                    ctx, s1, s2, N=N, include_correction=cfg.include_correction
                )
            except DZetaError as exc:
                skipped.append((M, f"N={N}: {exc}"))
                continue
            with ctx.wp():
                abs_err = float(abs(approx.ratio_approx - oracle))
                rel_err = float(abs_err / abs(oracle)) if abs(oracle) > 0 else math.inf
            records.append(
                SweepRecord(
                    M=float(M),
                    M_eff=float(m_eff),
                    N=N,
                    method=method,
                    oracle_ratio=complex(oracle),
                    asym_ratio=complex(approx.ratio_approx),
                    abs_err=abs_err,
                    rel_err=rel_err,
                    breakdown=mags,
                )
            )
    grid = len(cfg.M_list) * len(cfg.N_list)
    if skipped and len(skipped) * len(cfg.N_list) > 0.2 * grid:
        detail = "; ".join(f"M={m}: {why}" for m, why in skipped[:4])
        raise SweepAborted(f"{len(skipped)} sweep points skipped ({detail})")
    records.sort(key=lambda r: (r.N, r.M))
    return records


def fit_slope(records: list[SweepRecord], N: int) -> SlopeFit:
    """Least-squares slope of log abs_err against log M_eff for one N."""
    pts = sorted(
        {(r.M_eff, r.abs_err) for r in records if r.N == N and r.abs_err > 0}
    )
    if len(pts) < 4:
        raise InsufficientData(f"need >= 4 usable records for N={N}, got {len(pts)}")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return SlopeFit(N=N, slope=float(slope), intercept=float(intercept), r_squared=r2)


# ---------------------------------------------------------------------------
# Verification suite

def _check(report, name, fn):
    t0 = time.time()
    try:
        ok, detail = fn()
    except Exception as exc:  # noqa: BLE001 - failures become report entries
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    report["checks"].append(
        {"name": name, "ok": bool(ok), "detail": detail, "seconds": round(time.time() - t0, 3)}
    )


def verify_suite(level: str = "quick") -> dict:
    """Cross-module invariant checks; returns a JSON-ready report."""
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    report: dict = {"level": level, "checks": []}
    rng = random.Random(20260823)
    ctx = PrecisionContext(bits=192)
    lo = PrecisionContext(bits=64, target_tol=1e-12)

    def chk_riemann_fe():
        worst = mp.mpf(0)
        for _ in range(5 if level == "quick" else 12):
            s = mp.mpc(rng.uniform(-40, -2), rng.uniform(-3, 3))
            with ctx.wp():
                lhs = riemann_zeta(ctx, s)
                rhs = f_factor(ctx, s) * mp.sin(mp.pi * s / 2) * riemann_zeta(ctx, 1 - s)
                worst = max(worst, abs(lhs - rhs) / abs(lhs))
        return worst < mp.mpf("1e-30"), f"worst relative residual {mp.nstr(worst, 3)}"

    def chk_hurwitz_half():
        # zeta_H(2, 1/2) = pi^2/2
        from .kernel import hurwitz_zeta

        with ctx.wp():
            d = abs(hurwitz_zeta(ctx, 2, mp.mpf(1) / 2) - mp.pi**2 / 2)
        return d < mp.mpf("1e-40"), f"|zeta_H(2,1/2) - pi^2/2| = {mp.nstr(d, 3)}"

    def chk_coeff_duality():
        worst = mp.mpf(0)
        pts = 6 if level == "quick" else 20
        for _ in range(pts):
            m_eff = rng.uniform(10, 120)
            r2 = rng.uniform(0.15, 0.85)
            pt = ratios(ctx, -(1 - r2) * m_eff, -r2 * m_eff)
            for j in range(0, 9):
                a = c_coeff_partition(ctx, j, pt)
                b = c_coeff_taylor(ctx, j, pt)
                scale = max(mp.mpf(1), abs(a))
                worst = max(worst, abs(a - b) / scale)
        return worst < mp.mpf("1e-30"), f"worst c_j mismatch {mp.nstr(worst, 3)}"

    def chk_a_series():
        worst = mp.mpf(0)
        for r2 in (0.2, 0.35, 0.5, 0.65):
            for j in range(0, 9):
                worst = max(
                    worst, abs(a_coeff(ctx, j, r2) - a_coeff_series(ctx, j, r2))
                )
        return worst < mp.mpf("1e-25"), f"worst a_j mismatch {mp.nstr(worst, 3)}"

    def chk_a_closed():
        with ctx.wp():
            d1 = abs(a_coeff(ctx, 0, 0.5) + mp.mpf(1) / 2)
            d2 = abs(a_coeff(ctx, 1, 0.5) + mp.mpc(0, 1) * mp.pi / 2)
        return max(d1, d2) < mp.mpf("1e-40"), (
            f"|a_0(1/2)+1/2| = {mp.nstr(d1, 3)}, |a_1(1/2)+i pi/2| = {mp.nstr(d2, 3)}"
        )

    def chk_beta():
        worst = mp.mpf(0)
        n = 4 if level == "quick" else 10
        c = PrecisionContext(bits=128)
        for _ in range(n):
            s1 = mp.mpc(rng.uniform(-8, 0.4), rng.uniform(-1, 1))
            s2 = mp.mpc(rng.uniform(-8, 0.4), rng.uniform(-1, 1))
            r = beta_contour(c, s1, s2)
            worst = max(worst, r.residual / abs(r.closed_form))
        return worst < mp.mpf("1e-10"), f"worst beta residual {mp.nstr(worst, 3)}"

    def chk_beta_p_independence():
        c = PrecisionContext(bits=128)
        ps = (0.25, 0.5, 0.75)
        vals = [
            beta_contour(c, -3.3, -4.7, ContourSpec(p=p)).quadrature for p in ps
        ]
        spread = max(abs(v - vals[0]) for v in vals) / abs(vals[0])
        return spread < mp.mpf("1e-10"), f"p-spread {mp.nstr(spread, 3)} across {ps}"

    def chk_stuffle_direct():
        with lo.wp():
            lhs = riemann_zeta(lo, 4) * riemann_zeta(lo, 5)
            rhs = (
                double_zeta_direct(lo, 4, 5)
                + double_zeta_direct(lo, 5, 4)
                + riemann_zeta(lo, 9)
            )
            d = abs(lhs - rhs) / abs(lhs)
        return d < mp.mpf("1e-11"), f"stuffle residual {mp.nstr(d, 3)}"

    def chk_stuffle_em():
        c = PrecisionContext(bits=160)
        worst = mp.mpf(0)
        pairs = [(-10.3, -9.4), (-6.7, 3.3)] if level == "quick" else [
            (-10.3, -9.4), (-6.7, 3.3), (-3.6, -8.1), (2.4, -5.9), (-15.2, -11.5),
        ]
        for s1, s2 in pairs:
            with mp.workprec(260):
                a = double_zeta_em(c, s1, s2) + double_zeta_em(c, s2, s1)
                b = riemann_zeta(c, s1) * riemann_zeta(c, s2) - riemann_zeta(
                    c, mp.mpf(s1) + mp.mpf(s2)
                )
                worst = max(worst, abs(a - b) / max(1, abs(b)))
        return worst < mp.mpf("1e-15"), f"worst stuffle residual {mp.nstr(worst, 3)}"

    def chk_em_direct_overlap():
        # Direct summation converges like K^(1-Re s2), so the shallow point
        # gets a matching tolerance and the deep point a tight one.
        c1 = PrecisionContext(bits=64, target_tol=1e-12)
        c2 = PrecisionContext(bits=160, target_tol=1e-21)
        with mp.workprec(240):
            d1 = abs(
                double_zeta_direct(c1, 2.5, 3.5) - double_zeta_em(c1, 2.5, 3.5)
            ) / abs(double_zeta_em(c1, 2.5, 3.5))
            d2 = abs(
                double_zeta_direct(c2, 6.5, 7.5) - double_zeta_em(c2, 6.5, 7.5)
            ) / abs(double_zeta_em(c2, 6.5, 7.5))
        ok = d1 < mp.mpf("1e-11") and d2 < mp.mpf("1e-20")
        return ok, f"overlap mismatch {mp.nstr(d1, 3)} (shallow), {mp.nstr(d2, 3)} (deep)"

    def chk_route_agreement():
        s1, s2 = -10.3, -9.4
        c = PrecisionContext(bits=160, target_tol=1e-30)
        ze = double_zeta_em(c, s1, s2)
        bd = double_zeta_fe(c, s1, s2)
        with mp.workprec(260):
            zf = bd.total * f_factor(c, mp.mpf(s1) + mp.mpf(s2))
            d = abs(ze - zf) / abs(ze)
        return d < mp.mpf("1e-15"), f"em/fe mismatch {mp.nstr(d, 3)}"

    def chk_e1_series():
        c = PrecisionContext(bits=96, target_tol=1e-16)
        r = e1_residual(c, -9.3, 9.7)
        return r < mp.mpf("1e-12"), f"series-region residual {mp.nstr(r, 3)}"

    def chk_slope_sanity():
        recs = [
            SweepRecord(M=m, M_eff=m, N=0, method="syn", oracle_ratio=0, asym_ratio=0,
                        abs_err=m**-2.0, rel_err=0.0)
            for m in (10, 20, 40, 80, 160)
        ]
        f = fit_slope(recs, 0)
        return abs(f.slope + 2) < 1e-6, f"synthetic slope {f.slope:.8f}"

    def chk_mutation_sensitivity():
        pt = ratios(ctx, -13.0, -7.5)
        coefficients._C_PERTURBATIONS[2] = 1e-6
        try:
            a = c_coeff_partition(ctx, 2, pt)
            b = c_coeff_taylor(ctx, 2, pt)
            detected = abs(a - b) > mp.mpf("1e-7")
        finally:
            coefficients._C_PERTURBATIONS.pop(2, None)
        return detected, "perturbing c_2 by 1e-6 makes the duality check fail"

    _check(report, "riemann-functional-equation", chk_riemann_fe)
    _check(report, "hurwitz-closed-form", chk_hurwitz_half)
    _check(report, "coefficient-duality", chk_coeff_duality)
    _check(report, "a-vs-series-inversion", chk_a_series)
    _check(report, "a-closed-values", chk_a_closed)
    _check(report, "beta-contour-closed-form", chk_beta)
    _check(report, "beta-contour-p-independence", chk_beta_p_independence)
    _check(report, "stuffle-direct", chk_stuffle_direct)
    _check(report, "stuffle-continued", chk_stuffle_em)
    _check(report, "em-direct-overlap", chk_em_direct_overlap)
    _check(report, "em-fe-route-agreement", chk_route_agreement)
    _check(report, "e1-residual-series-region", chk_e1_series)
    _check(report, "slope-fit-sanity", chk_slope_sanity)
    _check(report, "mutation-sensitivity", chk_mutation_sensitivity)

    if level == "full":

        def chk_e1_contour():
            # The identity's sides reach ~1e30 here while the residual is
            # absolute, so the truncation tolerance must cover that scale.
            c = PrecisionContext(bits=228)
            r = e1_residual(c, -15.3, -22.4)
            return r < mp.mpf("1e-12"), f"contour-region residual {mp.nstr(r, 3)}"

        def chk_fe_p_independence():
            s1, s2 = -10.3, -9.4
            c = PrecisionContext(bits=160, target_tol=1e-30)
            vals = [
                double_zeta_fe(c, s1, s2, ContourSpec(p=p)).total
                for p in (0.25, 0.5, 0.75)
            ]
            with mp.workprec(240):
                spread = max(abs(v - vals[0]) for v in vals) / abs(vals[0])
            return spread < mp.mpf("1e-12"), f"fe total p-spread {mp.nstr(spread, 3)}"

        def chk_negligible_terms():
            cfg = SweepConfig(r2=0.4, M_list=(30.0, 60.0), N_list=(0,), method="fe")
            _, _, m30 = oracle_ratio(cfg, 30.0)
            _, _, m60 = oracle_ratio(cfg, 60.0)
            ratios_ = [m30[i] / m60[i] for i in (1, 3, 4)]
            return all(r >= 2**10 for r in ratios_), (
                f"|t2|,|t4|,|t5| shrink factors {[f'{r:.3g}' for r in ratios_]}"
            )

        _check(report, "e1-residual-contour-region", chk_e1_contour)
        _check(report, "fe-p-independence", chk_fe_p_independence)
        _check(report, "negligible-term-decay", chk_negligible_terms)

    report["ok"] = all(c["ok"] for c in report["checks"])
    return report
