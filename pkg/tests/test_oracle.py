"""Oracles: direct summation, Euler-Maclaurin continuation, contour
quadrature, F_plus routes and the functional-equation residual."""

import random

import mpmath as mp
import pytest

from dzeta.errors import DomainError, PrecisionError, SingularityError
from dzeta.kernel import PrecisionContext, f_factor, riemann_zeta
from dzeta.oracle import (
    beta_contour,
    double_zeta_direct,
    double_zeta_em,
    double_zeta_fe,
    e1_residual,
    fplus_contour,
    fplus_series,
    sigma_power,
)
from dzeta.quadrature import ContourSpec

LO = PrecisionContext(bits=64, target_tol=1e-12)


def test_direct_stuffle():
    with mp.workprec(120):
        lhs = riemann_zeta(LO, 4) * riemann_zeta(LO, 5)
        rhs = (
            double_zeta_direct(LO, 4, 5)
            + double_zeta_direct(LO, 5, 4)
            + riemann_zeta(LO, 9)
        )
        assert abs(lhs - rhs) / abs(lhs) < mp.mpf("1e-11")


def test_direct_domain_and_budget():
    with pytest.raises(DomainError):
        double_zeta_direct(LO, 3, 0.5)
    tight = PrecisionContext(bits=256)
    with pytest.raises(PrecisionError):
        double_zeta_direct(tight, 2, 3)  # would need ~1e40 terms


def test_em_matches_direct_overlap():
    c = PrecisionContext(bits=160, target_tol=1e-21)
    with mp.workprec(240):
        a = double_zeta_direct(c, 6.5, 7.5)
        b = double_zeta_em(c, 6.5, 7.5)
        assert abs(a - b) / abs(a) < mp.mpf("1e-20")


def test_em_guards():
    with pytest.raises(SingularityError):
        double_zeta_em(LO, 3, 1)  # s2 = 1
    with pytest.raises(SingularityError):
        double_zeta_em(LO, -4, -6)  # sum on the singular set
    with pytest.raises(DomainError):
        double_zeta_em(LO, -45, -3.3)  # beyond the continuation depth limit


def test_em_stuffle_continued_seeded():
    rng = random.Random(11)
    c = PrecisionContext(bits=160)
    with mp.workprec(260):
        for _ in range(4):
            s1 = mp.mpf(rng.uniform(-16, -3)) + mp.mpf("0.3")
            s2 = mp.mpf(rng.uniform(-16, -3)) + mp.mpf("0.4")
            lhs = double_zeta_em(c, s1, s2) + double_zeta_em(c, s2, s1)
            rhs = riemann_zeta(c, s1) * riemann_zeta(c, s2) - riemann_zeta(
                c, s1 + s2
            )
            assert abs(lhs - rhs) <= mp.mpf("1e-20") * max(1, abs(rhs))


def test_sigma_power_divisor_sums():
    assert sigma_power(0, 6) == 4
    assert sigma_power(1, 6) == 12
    assert sigma_power(2, 4) == 1 + 4 + 16
    with pytest.raises(DomainError):
        sigma_power(1, 0)


def test_beta_contour_closed_forms():
    c = PrecisionContext(bits=128)
    r = beta_contour(c, -1, -1)
    with mp.workprec(180):
        assert abs(r.closed_form + 4 * mp.pi * mp.mpc(0, 1)) < mp.mpf("1e-30")
        assert r.residual < mp.mpf("1e-20")
    r2 = beta_contour(c, 0.3, 0.4)
    assert r2.residual / abs(r2.closed_form) < mp.mpf("1e-12")
    with pytest.raises(DomainError):
        beta_contour(c, 0.6, 0.7)


def test_beta_contour_p_independence():
    c = PrecisionContext(bits=128)
    vals = [
        beta_contour(c, -3.3, -4.7, ContourSpec(p=p)).quadrature
        for p in (0.25, 0.5, 0.75)
    ]
    with mp.workprec(180):
        assert max(abs(v - vals[0]) for v in vals) / abs(vals[0]) < mp.mpf("1e-12")


def test_fplus_series_region_guard():
    with pytest.raises(DomainError):
        fplus_series(LO, 2, 3)
    with pytest.raises(DomainError):
        fplus_contour(LO, -1, -9)


def test_fplus_contour_p_independence():
    c = PrecisionContext(bits=160, target_tol=1e-25)
    a = fplus_contour(c, -6.3, -7.4, ContourSpec(p=0.3)).value
    b = fplus_contour(c, -6.3, -7.4, ContourSpec(p=0.7)).value
    with mp.workprec(220):
        assert abs(a - b) <= mp.mpf("1e-12") * max(1, abs(a))


def test_fe_breakdown_and_guards():
    c = PrecisionContext(bits=160, target_tol=1e-30)
    bd = double_zeta_fe(c, -10.3, -9.4)
    with mp.workprec(220):
        total = bd.t1 + bd.t2 + bd.t3 + bd.t4 + bd.t5 + bd.t6
        assert abs(bd.total - total) == 0
    with pytest.raises(DomainError):
        double_zeta_fe(c, -1.5, -9)
    with pytest.raises(SingularityError):
        double_zeta_fe(c, -5, -7)  # sum is an even integer


def test_fe_agrees_with_em():
    for s1, s2 in [(-10.3, -9.4), (-12.6, -18.9)]:
        m = -(s1 + s2)
        c = PrecisionContext(bits=64 + 4 * int(m) + 8, target_tol=1e-25)
        ze = double_zeta_em(c, s1, s2)
        bd = double_zeta_fe(c, s1, s2)
        with mp.workprec(c.bits + 64):
            zf = bd.total * f_factor(c, mp.mpf(s1) + mp.mpf(s2))
            assert abs(ze - zf) / abs(ze) < mp.mpf("1e-15")


def test_e1_residual_both_routes():
    series_ctx = PrecisionContext(bits=96, target_tol=1e-16)
    assert e1_residual(series_ctx, -9.3, 9.7) < mp.mpf("1e-12")
    contour_ctx = PrecisionContext(bits=228)
    assert e1_residual(contour_ctx, -15.3, -22.4) < mp.mpf("1e-12")
    with pytest.raises(DomainError):
        e1_residual(series_ctx, 2, 3)
