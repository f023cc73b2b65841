"""Finite coefficient machinery for the expansion: argument ratios, Pochhammer
symbols, exact cotangent-derivative polynomials, the series coefficients c_j
(two independent algorithms) and the Taylor coefficients a_j of the kernel
1/(e^{-2 pi i (x+r2)} - 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import mpmath as mp

from .errors import DomainError, PoleError
from .kernel import CNum, PrecisionContext

# Test hook: additive perturbations applied to c_coeff_partition results,
# keyed by j.  Used by the verification suite's mutation-sensitivity check.
_C_PERTURBATIONS: dict[int, complex] = {}


@dataclass(frozen=True)
class ExpansionPoint:
    """Argument bundle (s1, s2) with r_j = s_j/(s1+s2) and M = Re(-s1-s2)."""

    s1: CNum
    s2: CNum
    r1: CNum
    r2: CNum
    M: mp.mpf

    @property
    def rho(self) -> CNum:
        return self.s1 + self.s2


def ratios(ctx: PrecisionContext, s1, s2) -> ExpansionPoint:
    with ctx.wp():
        s1 = mp.mpc(s1)
        s2 = mp.mpc(s2)
        rho = s1 + s2
        if abs(rho) < 10 * ctx.tol * max(1, abs(s1), abs(s2)):
            raise DomainError("s1 + s2 = 0: ratios undefined")
        return ExpansionPoint(s1=s1, s2=s2, r1=s1 / rho, r2=s2 / rho, M=-mp.re(rho))


def pochhammer(s, j: int) -> CNum:
    """Rising factorial (s)_j = s (s+1) ... (s+j-1); (s)_0 = 1."""
    if j < 0:
        raise DomainError("Pochhammer order must be nonnegative")
    acc = mp.mpc(1)
    s = mp.mpc(s)
    for i in range(j):
        acc *= s + i
    return acc


# ---------------------------------------------------------------------------
# cot^{(j)} as exact integer polynomials in c = cot

@lru_cache(maxsize=None)
def cot_poly(j: int) -> tuple[int, ...]:
    """Coefficients (ascending) of P_j with cot^{(j)}(w) = P_j(cot w).

    P_0(c) = c and P_{j+1}(c) = -(1 + c^2) P_j'(c); deg P_j = j + 1.
    """
    if j == 0:
        return (0, 1)
    prev = cot_poly(j - 1)
    deriv = tuple((i + 1) * prev[i + 1] for i in range(len(prev) - 1))
    out = [0] * (j + 2)
    for i, d in enumerate(deriv):
        out[i] -= d
        out[i + 2] -= d
    return tuple(out)


def cot_derivative(ctx: PrecisionContext, j: int, w) -> CNum:
    """cot^{(j)}(w) evaluated through the exact polynomial P_j."""
    with ctx.wp():
        w = mp.mpc(w)
        k = mp.nint(mp.re(w) / mp.pi)
        if abs(w - k * mp.pi) < 10 * ctx.tol * max(1, abs(w)):
            raise PoleError(f"cot pole at w = {w}")
        c = mp.cot(w)
        acc = mp.mpc(0)
        for coef in reversed(cot_poly(j)):
            acc = acc * c + coef
        return acc


# ---------------------------------------------------------------------------
# c_j coefficients

def _g(point: ExpansionPoint, k: int) -> CNum:
    r1, r2 = point.r1, point.r2
    return (r1 * (-r2) ** k + r2 * r1 ** k) / k


def _partitions(j: int, kmin: int = 2):
    """Multiplicity tuples ((k, l_k), ...) with sum k*l_k = j, parts >= 2,
    iterated lexicographically in (l_2, l_3, ...)."""
    if j == 0:
        yield ()
        return
    if kmin > j:
        return
    for l in range(j // kmin + 1):
        for rest in _partitions(j - kmin * l, kmin + 1):
            yield ((kmin, l),) + rest if l else rest


def c_coeff_partition(ctx: PrecisionContext, j: int, point: ExpansionPoint) -> CNum:
    """c_j as the exact finite sum over partitions of j into parts >= 2."""
    with ctx.wp():
        rho = point.rho
        total = mp.mpc(0)
        for part in _partitions(j):
            lsum = sum(l for _, l in part)
            term = rho ** lsum
            for k, l in part:
                term *= _g(point, k) ** l / mp.factorial(l)
            total += term
        if j in _C_PERTURBATIONS:
            total += mp.mpc(_C_PERTURBATIONS[j])
        return total


def c_coeff_taylor(ctx: PrecisionContext, j: int, point: ExpansionPoint) -> CNum:
    """c_j as Coeff((1+x r2)^{-s1} (1-x r1)^{-s2}, x^j), via exp of the
    log-series (s1+s2) * sum_{k>=2} g_k x^k truncated at degree j."""
    return _c_taylor_list(ctx, j, point)[j]


def _c_taylor_list(ctx: PrecisionContext, j: int, point: ExpansionPoint) -> list[CNum]:
    with ctx.wp():
        rho = point.rho
        lcoef = [mp.mpc(0)] * (j + 1)
        for k in range(2, j + 1):
            lcoef[k] = rho * _g(point, k)
        e = [mp.mpc(1)] + [mp.mpc(0)] * j
        for n in range(1, j + 1):
            acc = mp.mpc(0)
            for k in range(2, n + 1):
                acc += k * lcoef[k] * e[n - k]
            e[n] = acc / n
        return e


# ---------------------------------------------------------------------------
# a_j coefficients

def a_coeff(ctx: PrecisionContext, j: int, r2) -> CNum:
    """j-th Taylor coefficient of 1/(e^{-2 pi i (x+r2)} - 1) at x = 0,
    through the identity -i*a_j = (i/2) delta_{j,0} + pi^j cot^{(j)}(pi r2)/(2 j!)."""
    with ctx.wp():
        r2 = mp.mpc(r2)
        if abs(r2 - mp.nint(mp.re(r2))) < 10 * ctx.tol * max(1, abs(r2)):
            raise PoleError(f"a_j pole at integer r2 = {r2}")
        val = mp.pi ** j * cot_derivative(ctx, j, mp.pi * r2) / (2 * mp.factorial(j))
        if j == 0:
            val += mp.mpc(0, "0.5")
        return mp.mpc(0, 1) * val


def a_coeff_series(ctx: PrecisionContext, j: int, r2) -> CNum:
    """Independent route: numeric reciprocal-series inversion of
    e^{-2 pi i (x+r2)} - 1 truncated at degree j."""
    with ctx.wp(64):
        r2 = mp.mpc(r2)
        w = mp.mpc(0, -2) * mp.pi  # -2*pi*i
        e0 = mp.exp(w * r2)
        g = [e0 * w ** n / mp.factorial(n) for n in range(j + 1)]
        g[0] -= 1
        h = [mp.mpc(0)] * (j + 1)
        h[0] = 1 / g[0]
        for n in range(1, j + 1):
            acc = mp.mpc(0)
            for k in range(1, n + 1):
                acc += g[k] * h[n - k]
            h[n] = -acc / g[0]
        return h[j]


# ---------------------------------------------------------------------------
# Coefficient table

@dataclass(frozen=True)
class CoeffTable:
    """Immutable per-point table of c_0..c_J and a_0..a_J."""

    point: ExpansionPoint
    c: tuple[CNum, ...]
    a: tuple[CNum, ...]

    @classmethod
    def build(cls, ctx: PrecisionContext, point: ExpansionPoint, J: int) -> "CoeffTable":
        c = tuple(_c_taylor_list(ctx, J, point)) if J >= 0 else ()
        a = tuple(a_coeff(ctx, j, point.r2) for j in range(J + 1))
        return cls(point=point, c=c, a=a)
