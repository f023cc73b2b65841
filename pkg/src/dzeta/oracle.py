"""Ground-truth evaluation of the double zeta function: direct summation,
Euler-Maclaurin continuation, the exact functional-equation assembly with
contour quadrature, the divisor-sum series form of the hypergeometric-type
series F_plus, and residual checks of the underlying functional equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

from .errors import (
    DomainError,
    PoleError,
    PrecisionError,
    QuadratureError,
    SingularityError,
)
from .kernel import (
    CNum,
    PrecisionContext,
    _bern_over_fact,
    f_factor,
    hurwitz_zeta,
    ipow,
    loggamma,
    riemann_zeta,
)
from .quadrature import ContourSpec, vertical_line_integral

EM_DEPTH_LIMIT = 40.0  # Re s_i floor for the Euler-Maclaurin oracle at desk scale

_DIRECT_CAP = 10 ** 7


@dataclass(frozen=True)
class Eq2Breakdown:
    """The six additive terms of zeta(s1,s2)/f(s1+s2), kept separate so the
    negligibility of terms 2, 4, 5 can be checked individually."""

    t1: CNum
    t2: CNum
    t3: CNum
    t4: CNum
    t5: CNum
    t6: CNum
    error_estimate: mp.mpf

    @property
    def total(self) -> CNum:
        return self.t1 + self.t2 + self.t3 + self.t4 + self.t5 + self.t6


@dataclass(frozen=True)
class FPlusValue:
    value: CNum
    route: str  # "series" | "contour"
    error_estimate: float


@dataclass(frozen=True)
class BetaContourResult:
    quadrature: CNum
    closed_form: CNum
    error_estimate: float

    @property
    def residual(self) -> mp.mpf:
        return abs(self.quadrature - self.closed_form)


def _eff_extra(ctx: PrecisionContext, s1, s2) -> int:
    """Extra working bits for the O(2^M) cancellation between e2-scale terms."""
    M = float(-mp.re(mp.mpc(s1) + mp.mpc(s2)))
    if M <= 0:
        return 48
    return 48 + max(0, 64 + 4 * int(math.ceil(M)) - ctx.bits)


# ---------------------------------------------------------------------------
# Direct summation

def double_zeta_direct(ctx: PrecisionContext, s1, s2) -> CNum:
    """Truncated sum over 0 < m1 < m2 with a rigorous tail bound."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    sig1 = float(mp.re(s1))
    sig2 = float(mp.re(s2))
    if not (sig2 > 1 and sig1 + sig2 > 2):
        raise DomainError("direct summation needs Re s2 > 1 and Re(s1+s2) > 2")
    with ctx.wp(32):
        tol = ctx.tol
        # Tail over m2 > K is bounded by c * K^(-decay) with the inner sum
        # over m1 < m2 bounded by c1 * m2^max(0, 1-sig1).
        if sig1 > 1.001:
            c1 = float(mp.zeta(sig1))
            decay = sig2 - 1
        else:
            e = max(0.0, 1 - sig1)
            c1 = 1 + (1 / (1 - sig1) if sig1 < 0.999 else 40.0)
            decay = sig2 - 1 - e
        if decay <= 0.05:
            raise DomainError("double sum too close to the convergence boundary")
        need = (c1 / (decay * float(tol))) ** (1 / decay)
        if need > _DIRECT_CAP:
            raise PrecisionError(
                f"direct double sum needs ~{need:.3g} terms for tol {ctx.target_tol}"
            )
        inner = mp.mpc(0)  # sum_{m1 < m2} m1^{-s1}
        acc = mp.mpc(0)
        m2 = 1
        while m2 <= _DIRECT_CAP:
            inner += mp.mpf(m2) ** (-s1)
            m2 += 1
            acc += inner * mp.mpf(m2) ** (-s2)
            if m2 < 8:
                continue
            tail = c1 * mp.mpf(m2) ** (-decay) / decay
            if tail < tol * max(abs(acc), mp.mpf(2) ** (-mp.mp.prec)):
                return acc
        raise PrecisionError("direct double sum exceeded the term budget")


# ---------------------------------------------------------------------------
# Euler-Maclaurin continuation

def _singular_rho_check(ctx: PrecisionContext, rho) -> None:
    # singular set: s1+s2 in {2, 1, 0, -2, -4, ...}
    n = mp.nint(mp.re(rho))
    thresh = 10 * ctx.tol * max(1, abs(rho))
    if abs(rho - n) < thresh and (n in (1, 2) or (n <= 0 and n % 2 == 0)):
        raise SingularityError(f"s1+s2 = {rho} lies on the singular set")


def double_zeta_em(ctx: PrecisionContext, s1, s2) -> CNum:
    """Analytic continuation via the Hurwitz-zeta resummation of
    sum_m m^{-s1} zeta_H(s2, m+1), with the outer tail replaced by its
    Bernoulli expansion so every piece reduces to Hurwitz zeta values."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    rho = s1 + s2
    if abs(s2 - 1) < 10 * ctx.tol:
        raise SingularityError("s2 = 1 is singular")
    _singular_rho_check(ctx, rho)
    if mp.re(s1) < -EM_DEPTH_LIMIT or mp.re(s2) < -EM_DEPTH_LIMIT:
        raise DomainError(
            f"Euler-Maclaurin oracle limited to Re s_i >= -{EM_DEPTH_LIMIT}"
        )
    sig1 = float(mp.re(s1))
    sig2 = float(mp.re(s2))
    neg = max(0.0, -sig1) + max(0.0, -sig2)
    m0 = max(16, int(math.ceil(0.4 * float(abs(s1) + abs(s2)))))
    for _ in range(5):
        # Head terms grow like m0^(1+neg) while the result stays O(1), so
        # both the working precision and the truncation tolerance of every
        # sub-evaluation must absorb that cancellation.
        cancel = int((neg + 2) * math.log2(m0 + 2)) + 16 if neg > 0 else 0
        sub = PrecisionContext(
            bits=ctx.bits + cancel + 32,
            target_tol=mp.mpf(ctx.target_tol) * mp.mpf(2) ** (-cancel),
        )
        with sub.wp():
            # The head uses (s1, s2) and the tail uses their sum; the sum
            # must be formed at working precision or the cancellation
            # between head and tail breaks.
            res = _em_attempt(sub, s1, s2, s1 + s2, m0, sub.tol)
        if res is not None:
            return res
        m0 *= 2
    raise PrecisionError(
        "Bernoulli tail of the double-zeta continuation stalls; raise bits"
    )


def _em_attempt(ctx, s1, s2, rho, m0, tol):
    head = mp.mpc(0)
    for m in range(1, m0 + 1):
        head += mp.mpf(m) ** (-s1) * hurwitz_zeta(ctx, s2, m + 1)
    a = mp.mpf(m0 + 1)
    res = head + hurwitz_zeta(ctx, rho - 1, a) / (s2 - 1) - hurwitz_zeta(ctx, rho, a) / 2
    poch = s2  # (s2)_{2k-1}
    prev = mp.inf
    sig_rho = mp.re(rho)
    for k in range(1, 2 * max(ctx.bits, 64)):
        term = _bern_over_fact(ctx, 2 * k) * poch * hurwitz_zeta(ctx, rho + 2 * k - 1, a)
        res += term
        mag = abs(term)
        # The swap of summations is safe only once the remainder sum
        # converges absolutely: Re(rho) + 2k - 1 > 2.
        if sig_rho + 2 * k - 1 > 2 and mag <= tol * max(abs(res), mp.mpf(2) ** (-mp.mp.prec)):
            return res
        if mag > prev and sig_rho + 2 * k - 1 > 2:
            return None
        prev = mag
        poch *= (s2 + 2 * k - 1) * (s2 + 2 * k)
    return None


# ---------------------------------------------------------------------------
# Divisor sums and the series route for F_plus

@lru_cache(maxsize=20000)
def _divisors(k: int) -> tuple[int, ...]:
    out = []
    d = 1
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            if d * d != k:
                out.append(k // d)
        d += 1
    return tuple(sorted(out))


def sigma_power(s, k: int) -> CNum:
    """sigma_s(k) = sum over divisors m of k of m^s."""
    if k < 1:
        raise DomainError("divisor sum needs k >= 1")
    s = mp.mpc(s)
    return mp.fsum(mp.mpf(m) ** s for m in _divisors(k))


def psi_quadrature(ctx: PrecisionContext, s1, s2, k: int):
    """Psi(s2, s1+s2; 2*pi*i*k) by tanh-sinh quadrature along the rotated ray
    y = -i*u, u in (0, inf).  Returns (value, error estimate)."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    twopik = 2 * mp.pi * k

    def f(u):
        return mp.exp(-twopik * u) * u ** (s2 - 1) * (1 - mp.mpc(0, 1) * u) ** (s1 - 1)

    val, err = mp.quad(f, [0, mp.inf], method="tanh-sinh", error=True)
    pref = mp.exp(-mp.mpc(0, 1) * mp.pi * s2 / 2) / mp.gamma(s2)
    return pref * val, abs(pref) * err


def fplus_series(ctx: PrecisionContext, s1, s2, k_cap: int = 100000) -> FPlusValue:
    """sum_k sigma_{s1+s2-1}(k) Psi(s2, s1+s2; 2*pi*i*k) in its convergence
    region Re s1 < 0, Re s2 > 1."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    sig1 = float(mp.re(s1))
    sig2 = float(mp.re(s2))
    if not (sig1 < 0 and sig2 > 1):
        raise DomainError("series route needs Re s1 < 0, Re s2 > 1")
    with ctx.wp(32):
        tol = ctx.tol
        decay = sig2 - max(0.0, sig1 + sig2 - 1)  # term ~ k^(-decay), up to d(k)
        acc = mp.mpc(0)
        qerr = mp.mpf(0)
        k = 0
        while k < k_cap:
            k += 1
            psi, e = psi_quadrature(ctx, s1, s2, k)
            term = sigma_power(s1 + s2 - 1, k) * psi
            acc += term
            qerr += abs(sigma_power(s1 + s2 - 1, k)) * e
            if k < 8:
                continue
            tail = abs(term) * k * math.log(k + 2) / (decay - 1)
            if tail < tol * max(abs(acc), mp.mpf(2) ** (-mp.mp.prec)):
                err = float(qerr + tail)
                if err > 1e3 * float(tol * max(abs(acc), mp.mpf(1))):
                    raise QuadratureError("Psi quadrature error dominates tolerance")
                return FPlusValue(value=acc, route="series", error_estimate=err)
        raise PrecisionError("F_plus series did not reach tolerance")


# ---------------------------------------------------------------------------
# Contour route for F_plus

def _kernel(z) -> CNum:
    return 1 / mp.expm1(mp.mpc(0, -2) * mp.pi * z)


def _default_spec(ctx: PrecisionContext) -> ContourSpec:
    """Node budget grows with the bit count: sharply peaked integrands at
    very large |s| need a deeper refinement ladder than the base 128."""
    return ContourSpec(nodes=128 * 2 ** min(4, ctx.bits // 512))


def fplus_contour(
    ctx: PrecisionContext, s1, s2, spec: ContourSpec | None = None
) -> FPlusValue:
    """F_plus continued to large negative real parts: a convergent
    zeta(1-s2,1-s1) term plus a vertical-line integral."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    sig1 = float(mp.re(s1))
    sig2 = float(mp.re(s2))
    if not (sig1 <= -2 and sig2 <= -2):
        raise DomainError("contour route needs Re s1 <= -2 and Re s2 <= -2")
    spec = spec or _default_spec(ctx)
    M = -(sig1 + sig2)
    with ctx.wp(_eff_extra(ctx, s1, s2)):
        zz = double_zeta_direct(ctx, 1 - s2, 1 - s1)
        g2 = mp.gamma(1 - s2)
        twopii = 2 * mp.pi * mp.mpc(0, 1)
        first = -g2 * zz / (twopii * mp.exp(mp.mpc(0, 1) * mp.pi * s2))

        def f(z):
            return _kernel(z) * z ** (s2 - 1) * hurwitz_zeta(ctx, 1 - s1, 1 - z)

        integral, qerr = vertical_line_integral(
            ctx, f, spec, cluster=M, tail_power=sig1 + sig2 - 2
        )
        second = -g2 / twopii * integral
        return FPlusValue(
            value=first + second,
            route="contour",
            error_estimate=float(abs(g2) / (2 * mp.pi) * qerr),
        )


# ---------------------------------------------------------------------------
# Beta-type contour integral (quadrature vs closed form)

def beta_contour(
    ctx: PrecisionContext, s1, s2, spec: ContourSpec | None = None
) -> BetaContourResult:
    """integral_{p+i inf}^{p-i inf} z^{s2-1} (1-z)^{s1-1} dz, together with
    its closed form -2*pi*i*Gamma(1-s1-s2)/(Gamma(1-s1)Gamma(1-s2))."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    if mp.re(s1 + s2) >= 1:
        raise DomainError("beta contour needs Re(s1+s2) < 1")
    spec = spec or ContourSpec()
    with ctx.wp(32):

        def f(z):
            return z ** (s2 - 1) * (1 - z) ** (s1 - 1)

        val, err = vertical_line_integral(
            ctx, f, spec, tail_power=float(mp.re(s1 + s2)) - 2
        )
        closed = (
            -2 * mp.pi * mp.mpc(0, 1)
            * mp.exp(loggamma(ctx, 1 - s1 - s2) - loggamma(ctx, 1 - s1) - loggamma(ctx, 1 - s2))
        )
        return BetaContourResult(
            quadrature=val, closed_form=closed, error_estimate=float(err)
        )


# ---------------------------------------------------------------------------
# Exact functional-equation assembly (six-term decomposition)

def double_zeta_fe(
    ctx: PrecisionContext, s1, s2, spec: ContourSpec | None = None
) -> Eq2Breakdown:
    """zeta(s1,s2)/f(s1+s2) assembled from its six-term exact decomposition;
    valid for Re s_i <= -2 with s1+s2 off the even integers."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    rho = s1 + s2
    sig1 = float(mp.re(s1))
    sig2 = float(mp.re(s2))
    if not (sig1 <= -2 and sig2 <= -2):
        raise DomainError("functional-equation route needs Re s_i <= -2")
    half = rho / 2
    if abs(half - mp.nint(mp.re(half))) < 10 * ctx.tol * max(1, abs(rho)):
        raise SingularityError(f"s1+s2 = {rho} too close to an even integer")
    spec = spec or _default_spec(ctx)
    M = -(sig1 + sig2)
    with ctx.wp(_eff_extra(ctx, s1, s2)):
        rho = s1 + s2
        half = rho / 2
        pref = mp.exp(
            loggamma(ctx, 1 - s1) + loggamma(ctx, 1 - s2) - loggamma(ctx, 1 - rho)
        )
        # The double sum enters only through terms with coefficient ~kappa,
        # which is exponentially small in M; loosen its tolerance accordingly.
        kappa = float(abs(pref) * (abs(mp.sin(mp.pi * s2)) + 1) / (2 * mp.pi))
        tol_zz = mp.mpf(ctx.target_tol)
        if 0 < kappa < 1:
            tol_zz = max(tol_zz, min(mp.mpf("1e-8"), tol_zz / kappa))
        sub = PrecisionContext(bits=ctx.bits, target_tol=tol_zz)
        zz = double_zeta_direct(sub, 1 - s2, 1 - s1)
        sin_half = mp.sin(mp.pi * half)
        cos_half = mp.cos(mp.pi * half)
        i1 = ipow(1 - rho)

        t1 = mp.sin(mp.pi * s2) * pref * riemann_zeta(ctx, 2 - rho) / (4 * mp.pi * sin_half)
        t2 = i1 * pref * mp.sin(mp.pi * s2) * zz / (2 * mp.pi)
        t3 = -i1 * riemann_zeta(ctx, 1 - rho) / 2
        t4 = pref * cos_half * zz * mp.exp(-mp.mpc(0, 1) * mp.pi * s2) / (2 * mp.pi)

        def f5(z):
            return _kernel(z) * z ** (s2 - 1) * hurwitz_zeta(ctx, 1 - s1, 2 - z)

        def f6(z):
            return _kernel(z) * z ** (s2 - 1) * (1 - z) ** (s1 - 1)

        tail = sig1 + sig2 - 2
        i5, e5 = vertical_line_integral(ctx, f5, spec, cluster=M, tail_power=tail)
        i6, e6 = vertical_line_integral(ctx, f6, spec, cluster=M, tail_power=tail)
        c56 = pref * cos_half / (2 * mp.pi)
        return Eq2Breakdown(
            t1=t1,
            t2=t2,
            t3=t3,
            t4=t4,
            t5=c56 * i5,
            t6=c56 * i6,
            error_estimate=abs(c56) * (e5 + e6),
        )


# ---------------------------------------------------------------------------
# Residual of the underlying functional equation

def _dz_any(ctx: PrecisionContext, s1, s2) -> CNum:
    sig1 = float(mp.re(mp.mpc(s1)))
    sig2 = float(mp.re(mp.mpc(s2)))
    if sig2 > 1 and sig1 + sig2 > 2:
        return double_zeta_direct(ctx, s1, s2)
    return double_zeta_em(ctx, s1, s2)


def e1_residual(ctx: PrecisionContext, s1, s2) -> mp.mpf:
    """Absolute residual |LHS - RHS| of the functional equation relating
    zeta(s1,s2), zeta(1-s2,1-s1) and F_plus."""
    s1 = mp.mpc(s1)
    s2 = mp.mpc(s2)
    sig1 = float(mp.re(s1))
    sig2 = float(mp.re(s2))
    rho = s1 + s2
    if sig1 < 0 and sig2 > 1:
        route = "series"
    elif sig1 <= -2 and sig2 <= -2:
        route = "contour"
    else:
        raise DomainError("no evaluable route for the functional-equation residual")
    with ctx.wp(_eff_extra(ctx, s1, s2)):
        rho = s1 + s2
        fplus = (
            fplus_series(ctx, s1, s2)
            if route == "series"
            else fplus_contour(ctx, s1, s2)
        )
        g1 = mp.gamma(1 - s1)
        g2 = mp.gamma(s2)
        lhs = (
            _dz_any(ctx, s1, s2)
            - g1 * mp.gamma(rho - 1) * riemann_zeta(ctx, rho - 1) / g2
        ) / ((2 * mp.pi) ** (rho - 1) * g1)
        rhs = (
            _dz_any(ctx, 1 - s2, 1 - s1)
            - g2 * mp.gamma(1 - rho) * riemann_zeta(ctx, 1 - rho) / g1
        ) / (ipow(rho - 1) * g2) + 2 * mp.mpc(0, 1) * mp.sin(
            mp.pi * (rho - 1) / 2
        ) * fplus.value
        return abs(lhs - rhs)
