"""Arbitrary-precision scalar kernel: precision policy, Gamma, zeta functions,
Bernoulli numbers and the normalizer f(s) = 2^s pi^(s-1) Gamma(1-s).

All operations are pure given (ctx, args).  Complex scalars are mpmath ``mpc``
values; working precision is set per call from the context, with guard bits
added internally so returned values meet the context tolerance.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import DomainError, PoleError, PrecisionError

CNum = mp.mpc

_GUARD_BITS = 16


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (binary digits) and truncation tolerance policy."""

    bits: int = 192
    target_tol: float | None = None

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("bits must be >= 64")
        if self.target_tol is None:
            object.__setattr__(self, "target_tol", 2.0 ** -(self.bits - 32))
        if not 0 < self.target_tol < 1:
            raise ValueError("target_tol must lie in (0, 1)")
        if self.target_tol < 2.0 ** -(self.bits - 16):
            raise ValueError("target_tol below the guard-digit floor 2^(16-bits)")

    @property
    def tol(self):
        return mp.mpf(self.target_tol)

    def wp(self, extra: int = 0):
        """Context manager setting the working precision for one operation."""
        return mp.workprec(self.bits + _GUARD_BITS + extra)


def ipow(t) -> CNum:
    """i^t with the convention i^t = exp(pi*i*t/2)."""
    return mp.exp(mp.mpc(0, 1) * mp.pi * mp.mpc(t) / 2)


# ---------------------------------------------------------------------------
# Bernoulli numbers (exact rationals, B_1 = -1/2)

_bern_cache: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_bern_lock = threading.Lock()


def bernoulli(ctx: PrecisionContext, n: int) -> Fraction:
    """Exact rational Bernoulli number B_n (convention B_1 = -1/2)."""
    if n < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if n >= len(_bern_cache):
        with _bern_lock:
            while len(_bern_cache) <= n:
                m = len(_bern_cache)
                if m % 2 == 1:
                    _bern_cache.append(Fraction(0))
                    continue
                # sum_{k=0}^{m} C(m+1,k) B_k = 0
                acc = Fraction(0)
                for k in range(m):
                    acc += math.comb(m + 1, k) * _bern_cache[k]
                _bern_cache.append(-acc / (m + 1))
    return _bern_cache[n]


_bern_fact_cache: dict[tuple[int, int], mp.mpf] = {}


def _bern_over_fact(ctx: PrecisionContext, two_k: int) -> mp.mpf:
    """B_{2k}/(2k)! rounded at the current working precision."""
    key = (two_k, mp.mp.prec)
    val = _bern_fact_cache.get(key)
    if val is None:
        b = bernoulli(ctx, two_k)
        val = mp.mpf(b.numerator) / (mp.mpf(b.denominator) * mp.factorial(two_k))
        _bern_fact_cache[key] = val
    return val


# ---------------------------------------------------------------------------
# Gamma

def _near_nonpositive_integer(z, tol) -> bool:
    z = mp.mpc(z)
    n = mp.nint(z.real)
    return n <= 0 and abs(z - n) < 10 * tol * max(1, abs(z))


def gamma(ctx: PrecisionContext, z) -> CNum:
    """Gamma(z).  Backed by mpmath (Stirling plus reflection internally)."""
    with ctx.wp():
        z = mp.mpc(z)
        if _near_nonpositive_integer(z, ctx.tol):
            raise PoleError(f"Gamma pole at z = {z}")
        return mp.gamma(z)


def loggamma(ctx: PrecisionContext, z) -> CNum:
    """Principal branch of log Gamma(z), for overflow-free Gamma ratios."""
    with ctx.wp():
        z = mp.mpc(z)
        if _near_nonpositive_integer(z, ctx.tol):
            raise PoleError(f"logGamma pole at z = {z}")
        return mp.loggamma(z)


# ---------------------------------------------------------------------------
# Hurwitz / Riemann zeta via Euler-Maclaurin

def _em_shift(s) -> int:
    s = mp.mpc(s)
    return int(max(math.ceil(2 * abs(s.imag)), math.ceil(2 * abs(s) / math.pi), 16))


def _hurwitz_em_once(ctx, s, a, m0, tol):
    """One Euler-Maclaurin attempt; None when the Bernoulli tail stalls."""
    acc = mp.mpc(0)
    n = 0
    sigma = mp.re(s)
    while n < m0:
        t = (a + n) ** (-s)
        acc += t
        n += 1
        # With fast-decaying terms the Bernoulli tail below is immediately
        # negligible, so the head may stop well before m0.
        if n >= 4 and sigma > 1.5 and abs(t) < tol * abs(acc) / 4:
            break
    x = a + n
    res = acc + x ** (1 - s) / (s - 1) + x ** (-s) / 2
    poch = s  # (s)_{2k-1}
    cur = x ** (-s - 1)  # x^{-s-2k+1}
    x2 = x ** -2
    prev = mp.inf
    for k in range(1, max(ctx.bits, 16) + 1):
        term = _bern_over_fact(ctx, 2 * k) * poch * cur
        res += term
        mag = abs(term)
        if mag <= tol * max(abs(res), mp.mpf(2) ** (-mp.mp.prec)):
            return res
        if mag > prev:
            return None
        prev = mag
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        cur *= x2
    return None


def hurwitz_zeta(ctx: PrecisionContext, s, a) -> CNum:
    """Analytic continuation of sum_{n>=0} (n+a)^(-s), Re a > 0."""
    s = mp.mpc(s)
    a = mp.mpc(a)
    if abs(s - 1) < 10 * ctx.tol:
        raise PoleError("Hurwitz zeta pole at s = 1")
    if mp.re(a) <= 0:
        raise DomainError("Hurwitz zeta requires Re a > 0")
    sigma = float(mp.re(s))
    m0 = _em_shift(s)
    extra = 32
    if sigma < 0:
        # Head terms reach (m0+|a|)^(-sigma) while the result may be O(1):
        # budget the cancellation explicitly.
        extra += int(-sigma * math.log2(m0 + float(abs(a)) + 2)) + 16
    with ctx.wp(extra):
        tol = ctx.tol
        for _ in range(7):
            res = _hurwitz_em_once(ctx, s, a, m0, tol)
            if res is not None:
                return res
            m0 *= 2
    raise PrecisionError(
        f"Euler-Maclaurin tail for zeta_H({s}, {a}) stalls above tol={ctx.target_tol}; "
        "raise bits"
    )


def riemann_zeta(ctx: PrecisionContext, s) -> CNum:
    """zeta(s) on the whole plane (Euler-Maclaurin continuation)."""
    s = mp.mpc(s)
    if abs(s - 1) < 10 * ctx.tol:
        raise PoleError("zeta pole at s = 1")
    return hurwitz_zeta(ctx, s, 1)


# ---------------------------------------------------------------------------
# Normalizer f(s) = 2^s pi^(s-1) Gamma(1-s)

def f_factor(ctx: PrecisionContext, s) -> CNum:
    """2^s * pi^(s-1) * Gamma(1-s), principal branches; poles at s = 1,2,3,..."""
    with ctx.wp():
        s = mp.mpc(s)
        n = mp.nint(s.real)
        if n >= 1 and abs(s - n) < 10 * ctx.tol * max(1, abs(s)):
            raise PoleError(f"f(s) pole at s = {s}")
        return mp.power(2, s) * mp.power(mp.pi, s - 1) * mp.gamma(1 - s)
