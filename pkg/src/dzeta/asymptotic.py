"""Large-negative-index approximations of zeta(s1,s2)/f(s1+s2): the truncated
main-term series, the Gamma correction term, their composition, and the
validity-region checker."""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass

import mpmath as mp

from .coefficients import CoeffTable, ExpansionPoint, cot_derivative, ratios
from .errors import DomainError, PoleError
from .kernel import CNum, PrecisionContext, f_factor

N_MAX = 12  # cot-derivative order 2N stays cheap with exact integer polynomials


@dataclass(frozen=True)
class RegionParams:
    epsilon: float
    N: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon < 0.5:
            raise ValueError("epsilon must lie in (0, 1/2)")
        if not 0 <= self.N <= N_MAX:
            raise ValueError(f"N must lie in [0, {N_MAX}]")


@dataclass(frozen=True)
class RegionVerdict:
    im1_ok: bool
    im2_ok: bool
    ratio_ok: bool
    even_gap_ok: bool
    even_gap: float

    @property
    def ok(self) -> bool:
        return self.im1_ok and self.im2_ok and self.ratio_ok and self.even_gap_ok


@dataclass(frozen=True)
class AsymptoticResult:
    ratio_approx: CNum
    zeta_approx: CNum
    terms: tuple[CNum, ...]
    correction: CNum | None
    claimed_error_order: float
    region: RegionVerdict | None = None


def region_check(s1, s2, params: RegionParams) -> RegionVerdict:
    """Literal evaluation of the four admissibility hypotheses."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    rho = s1 + s2
    if rho == 0:
        raise DomainError("s1 + s2 = 0")
    inv_eps = 1 / mp.mpf(params.epsilon)
    im1_ok = abs(s1.imag) < inv_eps
    im2_ok = abs(s2.imag) < inv_eps
    ratio = s1.real / rho.real if rho.real != 0 else mp.inf
    ratio_ok = params.epsilon < ratio < 1 - params.epsilon
    k = mp.nint(rho.real / 2)
    gap = min(abs(rho - 2 * (k + d)) for d in (-1, 0, 1))
    even_gap_ok = gap > abs(rho) ** (-inv_eps)
    return RegionVerdict(
        im1_ok=bool(im1_ok),
        im2_ok=bool(im2_ok),
        ratio_ok=bool(ratio_ok),
        even_gap_ok=bool(even_gap_ok),
        even_gap=float(gap),
    )


def _series_terms(ctx: PrecisionContext, point: ExpansionPoint, N: int) -> tuple[CNum, ...]:
    """Summands pi^j cot^{(j)}(pi r2) c_j / (rho)_j for j = 0..2N."""
    if not 0 <= N <= N_MAX:
        raise ValueError(f"N must lie in [0, {N_MAX}]")
    with ctx.wp():
        rho = point.rho
        table = CoeffTable.build(ctx, point, 2 * N)
        terms = []
        poch = mp.mpc(1)
        pij = mp.mpc(1)
        for j in range(2 * N + 1):
            if j > 0:
                poch *= rho + j - 1
                pij *= mp.pi
                if abs(poch) < 10 * ctx.tol * max(1, abs(rho)) ** j:
                    raise PoleError(f"(s1+s2)_{j} vanishes at s1+s2 = {rho}")
            terms.append(pij * cot_derivative(ctx, j, mp.pi * point.r2) * table.c[j] / poch)
        return tuple(terms)


def main_term_series(ctx: PrecisionContext, point: ExpansionPoint, N: int) -> AsymptoticResult:
    """-1/2 sin(pi rho/2) + 1/2 cos(pi rho/2) * sum of the 2N+1 summands."""
    terms = _series_terms(ctx, point, N)
    with ctx.wp():
        rho = point.rho
        ratio = -mp.sin(mp.pi * rho / 2) / 2 + mp.cos(mp.pi * rho / 2) / 2 * mp.fsum(
            terms, absolute=False
        )
        return AsymptoticResult(
            ratio_approx=ratio,
            zeta_approx=ratio * f_factor(ctx, rho),
            terms=terms,
            correction=None,
            claimed_error_order=float(point.M ** -(N + 1)),
        )


def gamma_correction_term(ctx: PrecisionContext, s1, s2) -> CNum:
    """sin(pi s2) Gamma(1-s1) Gamma(1-s2) zeta(2-s1-s2)
    / (4 pi Gamma(1-s1-s2) sin(pi (s1+s2)/2)), via log-Gamma differences."""
    from .kernel import loggamma, riemann_zeta

    with ctx.wp():
        s1 = mp.mpc(s1)
        s2 = mp.mpc(s2)
        rho = s1 + s2
        half = rho / 2
        if abs(half - mp.nint(half.real)) < 10 * ctx.tol * max(1, abs(rho)):
            raise PoleError(f"correction pole at even integer s1+s2 = {rho}")
        lg = loggamma(ctx, 1 - s1) + loggamma(ctx, 1 - s2) - loggamma(ctx, 1 - rho)
        return (
            mp.sin(mp.pi * s2)
            * mp.exp(lg)
            * riemann_zeta(ctx, 2 - rho)
            / (4 * mp.pi * mp.sin(mp.pi * half))
        )


def approx_ratio(
    ctx: PrecisionContext,
    s1,
    s2,
    N: int,
    include_correction: bool = False,
    epsilon: float | None = None,
) -> AsymptoticResult:
    """Main-term series, optionally plus the Gamma correction term."""
    point = ratios(ctx, s1, s2)
    base = main_term_series(ctx, point, N)
    verdict = None
    if epsilon is not None:
        verdict = region_check(s1, s2, RegionParams(epsilon=epsilon, N=N))
        if not verdict.ok and not include_correction:
            warnings.warn(
                f"({s1}, {s2}) fails the admissibility hypotheses; "
                "the claimed error order does not apply",
                stacklevel=2,
            )
    if not include_correction:
        if verdict is None:
            return base
        return dataclasses.replace(base, region=verdict)
    with ctx.wp():
        corr = gamma_correction_term(ctx, s1, s2)
        ratio = base.ratio_approx + corr
        return AsymptoticResult(
            ratio_approx=ratio,
            zeta_approx=ratio * f_factor(ctx, point.rho),
            terms=base.terms,
            correction=corr,
            claimed_error_order=base.claimed_error_order,
            region=verdict,
        )


def approx_zeta_half(ctx: PrecisionContext, s1, s2, N: int) -> CNum:
    """Approximation of (zeta(s1,s2) + zeta(s1+s2)/2)/f(s1+s2):
    1/2 cos(pi rho/2) * sum_{j<=2N} pi^j cot^{(j)}(pi r2) c_j / (rho)_j."""
    point = ratios(ctx, s1, s2)
    terms = _series_terms(ctx, point, N)
    with ctx.wp():
        return mp.cos(mp.pi * point.rho / 2) / 2 * mp.fsum(terms, absolute=False)
