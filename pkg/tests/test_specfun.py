import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morsescat.errors import KummerConvergenceError, PoleError
from morsescat.precision import DEFAULT
from morsescat.specfun import (
    EULER_GAMMA,
    ZETA3,
    ScaledComplex,
    constants,
    digamma,
    kummer_m,
    kummer_m_batch,
    kummer_split,
    laguerre,
    log_gamma,
    polygamma2,
)

mpmath.mp.dps = 40


def mp_kummer(p, q, z):
    return complex(mpmath.hyp1f1(mpmath.mpc(p), mpmath.mpc(q), mpmath.mpf(z)))


def rel(a, b):
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------- constants


def test_constants_against_limits():
    c = constants()
    n = 10**6
    # harmonic sum minus log with the 1/(2n) - 1/(12n^2) correction
    h = math.fsum(1.0 / k for k in range(1, n + 1))
    assert abs(h - math.log(n) - 1 / (2 * n) + 1 / (12 * n * n) - c["euler_gamma"]) < 1e-13
    z3 = math.fsum(1.0 / k**3 for k in range(1, n + 1)) + 1 / (2 * n * n)
    assert abs(z3 - c["zeta3"]) < 1e-15
    assert c["euler_gamma"] == pytest.approx(0.5772156649015329, abs=1e-16)
    assert c["zeta3"] == pytest.approx(1.2020569031595943, abs=1e-16)


def test_digamma_one_plus_gamma_is_zero():
    assert abs(digamma(1.0) + EULER_GAMMA) < 1e-14


# ---------------------------------------------------------------- log_gamma


def test_log_gamma_simple_values():
    assert abs(log_gamma(1.0)) < 1e-14
    assert log_gamma(0.5).real == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
    assert log_gamma(0.5).real == pytest.approx(0.5723649429247001, abs=1e-14)


def test_log_gamma_one_plus_i_vs_mpmath():
    ref = complex(mpmath.gamma(mpmath.mpc(1, 1)))
    assert rel(cmath.exp(log_gamma(1 + 1j)), ref) < 1e-13


@pytest.mark.parametrize("z", [0.3 - 40j, -3.7 + 0.2j, 25 + 25j, 1e-3 + 0j, -0.5 - 1e-6j, 120.0 + 3j])
def test_log_gamma_principal_branch(z):
    ref = complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))
    got = log_gamma(z)
    assert abs(got - ref) < 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("z", [0, -1, -7, complex(-3, 0)])
def test_log_gamma_poles(z):
    with pytest.raises(PoleError):
        log_gamma(z)


@settings(max_examples=1000, deadline=None)
@given(st.floats(0.1, 50), st.floats(-50, 50))
def test_gamma_recurrence(x, y):
    z = complex(x, y)
    ratio = cmath.exp(log_gamma(z + 1) - log_gamma(z))
    assert abs(ratio - z) <= 1e-12 * abs(z)


@pytest.mark.parametrize(
    "path",
    [
        [complex(-2.3, y) for y in np.linspace(0.01, 30, 3000)],
        [complex(x, 0.5) for x in np.linspace(-10, 10, 3000)],
        [complex(x, -0.05) for x in np.linspace(-6, 6, 3000)],
    ],
)
def test_log_gamma_imag_continuous_off_the_cut(path):
    # principal branch: continuous on paths that avoid the cut along (-inf, 0]
    im = [log_gamma(z).imag for z in path]
    assert np.max(np.abs(np.diff(im))) < 0.2


# ---------------------------------------------------------------- digamma / polygamma


def test_digamma_examples():
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-14)
    assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-13)
    assert digamma(-0.5) == pytest.approx(2 - EULER_GAMMA - 2 * math.log(2), abs=1e-13)
    assert digamma(-0.5) == pytest.approx(0.03648997397857652, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -4.0])
def test_digamma_polygamma_poles(x):
    with pytest.raises(PoleError):
        digamma(x)
    with pytest.raises(PoleError):
        polygamma2(x)


@settings(max_examples=300, deadline=None)
@given(st.floats(-30, 30).filter(lambda x: abs(x - round(x)) > 1e-3))
def test_digamma_recurrence_and_mpmath(x):
    assert abs(digamma(x + 1) - digamma(x) - 1 / x) <= 1e-12 * max(1.0, abs(1 / x))
    assert abs(digamma(x) - float(mpmath.digamma(x))) <= 1e-12 * max(1.0, abs(digamma(x)))


@settings(max_examples=300, deadline=None)
@given(st.floats(0.001, 0.999).filter(lambda x: abs(x - 0.5) > 1e-3))
def test_digamma_reflection(x):
    assert abs(digamma(1 - x) - digamma(x) - math.pi / math.tan(math.pi * x)) < 1e-10


def test_polygamma2_examples():
    assert polygamma2(0.5) == pytest.approx(-14 * ZETA3, rel=1e-12)
    assert polygamma2(0.5) == pytest.approx(-16.8287966, abs=1e-7)
    assert polygamma2(-0.5) == pytest.approx(16 - 14 * ZETA3, rel=1e-12)
    assert polygamma2(1.0) == pytest.approx(-2 * ZETA3, rel=1e-12)


@settings(max_examples=300, deadline=None)
@given(st.floats(-20, 30).filter(lambda x: abs(x - round(x)) > 1e-3))
def test_polygamma2_recurrence_and_mpmath(x):
    ref = float(mpmath.psi(2, x))
    assert abs(polygamma2(x) - ref) <= 1e-10 * abs(ref)
    lhs, rhs = polygamma2(x + 1), polygamma2(x) + 2 / x**3
    assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(2 / x**3))


# ---------------------------------------------------------------- laguerre


def test_laguerre_base_cases():
    for a in (0.0, 0.7, 4.4):
        for z in (0.0, 1.3, 9.0):
            assert laguerre(0, a, z) == 1.0
            assert laguerre(1, a, z) == pytest.approx(1 + a - z, abs=1e-15)


def test_laguerre_kummer_identity():
    # L_n^(a)(z) = binom(n + a, n) M(-n, a + 1, z)
    n, a, z = 3, 2.0, 1.5
    binom = math.gamma(n + a + 1) / (math.gamma(n + 1) * math.gamma(a + 1))
    assert laguerre(n, a, z) == pytest.approx(binom * mp_kummer(-n, a + 1, z).real, rel=1e-13)
    assert laguerre(n, a, z) == pytest.approx(float(mpmath.laguerre(n, a, z)), rel=1e-13)


def test_laguerre_vectorized():
    z = np.linspace(0, 20, 7)
    v = laguerre(4, 1.5, z)
    assert v.shape == z.shape
    assert np.allclose(v, [float(mpmath.laguerre(4, 1.5, t)) for t in z], rtol=1e-12, atol=1e-12)


# ---------------------------------------------------------------- ScaledComplex


@settings(max_examples=300, deadline=None)
@given(st.floats(-600, 600), st.floats(-math.pi, math.pi), st.floats(0.01, 100))
def test_scaled_complex_round_trip(log_mag, phase, m):
    x = ScaledComplex(cmath.rect(m, phase), log_mag).normalize()
    assert 1.0 <= abs(x.mantissa) < math.e
    assert x.log_abs() == pytest.approx(math.log(m) + log_mag, abs=1e-12)
    assert abs(cmath.exp(1j * (x.arg() - phase)) - 1) < 1e-12


def test_scaled_complex_arithmetic():
    a = ScaledComplex.from_complex(3 + 4j)
    b = ScaledComplex(2.0, 700.0).normalize()
    assert (a * b).log_abs() == pytest.approx(math.log(10) + 700, abs=1e-12)
    assert a / b == 0j or abs(a / b) < 1e-300
    assert (a + ScaledComplex.from_complex(-3 - 4j)).is_zero
    assert (-a).to_complex() == pytest.approx(-3 - 4j)
    with pytest.raises(OverflowError):
        ScaledComplex(1.0, 800.0).to_complex()


# ---------------------------------------------------------------- Kummer


def test_kummer_z_zero_is_one():
    for p, q in [(0.3, 1.7), (-2.5 + 0.7j, 1 + 1.4j), (4.0, 0.5)]:
        assert kummer_m(p, q, 0.0).to_complex() == 1


def test_kummer_closed_form():
    assert kummer_m(1, 2, 2.0).to_complex().real == pytest.approx((math.e**2 - 1) / 2, rel=1e-14)
    assert kummer_m(1, 2, 2.0).to_complex().real == pytest.approx(3.194528, abs=1e-6)


def test_kummer_complex_parameters_vs_mpmath():
    p, q, z = 0.5 + 0.7j - 2.5, 1 + 1.4j, 50.0
    assert rel(kummer_m(p, q, z).to_complex(), mp_kummer(p, q, z)) < 1e-10


@pytest.mark.parametrize(
    "p,q,z",
    [
        (0.5 - 0.3j - 7.6, 1 - 0.6j, 968.0),
        (0.5 - 0.01j - 1.0, 1 - 0.02j, 127.0),
        (-4.2, 1.6, 400.0),
        (0.5 + 2.0 - 6.0, 5.0, 761.0),
        (-30.5 + 1j, 2 + 2j, 5000.0),
    ],
)
def test_kummer_large_z_vs_mpmath(p, q, z):
    got = kummer_m(p, q, z)
    ref = mpmath.hyp1f1(mpmath.mpc(p), mpmath.mpc(q), z)
    log_ref = complex(mpmath.log(ref))
    assert abs(got.log_abs() - log_ref.real) < 1e-10
    assert abs(cmath.exp(1j * (got.arg() - log_ref.imag)) - 1) < 1e-10


@settings(max_examples=60, deadline=None)
@given(
    # the coefficients are formed in plain doubles, where subnormals carry no relative accuracy
    *(st.floats(lo, hi, allow_subnormal=False) for lo, hi in [(-6, 6), (-3, 3), (0.2, 6), (-3, 3), (0, 60)])
)
def test_kummer_contiguous_relation(pr, pi_, qr, qi, z):
    # a dyadic p makes p - 1 and p + 1 exact; near p = -1, dM/dp ~ 1e11 would amplify rounding
    pr = round(pr * 2**30) / 2**30
    p, q = complex(pr, pi_), complex(qr, qi)
    mm = kummer_m(p - 1, q, z)
    m0 = kummer_m(p, q, z)
    mp_ = kummer_m(p + 1, q, z)
    terms = [(q - p) * mm, (2 * p - q + z) * m0, -p * mp_]
    scale = max(math.exp(t.log_abs()) if not t.is_zero else 0.0 for t in terms)
    if scale == 0:
        return
    total = sum(t.to_complex() for t in terms)
    assert abs(total) <= 1e-8 * scale


def test_scaled_complex_subnormal():
    s = ScaledComplex.from_complex(2.2e-311 + 5e-311j)
    assert 1.0 <= abs(s.mantissa) < math.e
    assert s.log_abs() == pytest.approx(math.log(abs(2.2e-311 + 5e-311j)), abs=1e-9)


@pytest.mark.parametrize("p", [complex(-1, 3.1e-225), complex(-1, 1e-30), complex(-3 + 1e-15, 0)])
def test_kummer_beside_polynomial_root(p):
    # beside a non-positive integer p the series cancels down to O(p + n)
    q = 1.0 if p.real == -1 else 0.5
    z = q if p.real == -1 else 7.0
    ref = mpmath.hyp1f1(mpmath.mpc(p.real, p.imag), q, z, maxprec=20000)
    got = kummer_m(p, q, z)
    log_ref = complex(mpmath.log(ref))
    assert abs(got.log_abs() - log_ref.real) < 1e-10
    assert abs(cmath.exp(1j * (got.arg() - log_ref.imag)) - 1) < 1e-10


def test_kummer_exact_zero_of_polynomial():
    # M(-1, q, z) = 1 - z / q vanishes exactly at z = q
    assert kummer_m(-1.0, 1.0, 1.0).is_zero
    assert kummer_m(-1.0, 2.0, 2.0).is_zero


def test_kummer_asymptotic_form():
    p, q, z = 0.5 - 0.4j - 1.3, 1 - 0.8j, 200.0
    m = kummer_m(p, q, z)
    log_asym = log_gamma(q) - log_gamma(p) + z + (p - q) * math.log(z)
    assert abs(math.exp(m.log_abs() - log_asym.real) - 1) < 0.05


def test_kummer_pole_in_q():
    with pytest.raises(PoleError):
        kummer_m(0.5, -2.0, 1.0)


def test_kummer_escalation_failure_raises():
    tight = DEFAULT.with_overrides(kummer_escalation=())
    # massive cancellation: double precision alone cannot certify
    with pytest.raises(KummerConvergenceError):
        kummer_m(-60.5, 1.2, 300.0, tight)
    ok = kummer_m(-60.5, 1.2, 300.0)
    ref = mpmath.hyp1f1(-60.5, 1.2, 300)
    assert abs(ok.log_abs() - float(mpmath.log(abs(ref)))) < 1e-9


def test_kummer_split_matches_direct():
    n, eps, q, z = 3, 1e-40, 2.4 + 0.0j, 80.0
    P, R = kummer_split(n, eps, q, z)
    mpmath.mp.dps = 80
    ref = mpmath.hyp1f1(-n + mpmath.mpf(eps), q.real, z)
    mpmath.mp.dps = 40
    got = P.to_complex() + eps * R.to_complex()
    assert abs(got.real - float(ref)) <= 1e-12 * abs(float(ref))


def test_kummer_batch_matches_scalar():
    p = np.linspace(-5.3, 1.2, 17)
    q = np.linspace(0.4, 9.0, 17)
    out = kummer_m_batch(p, q, 300.0)
    for pi_, qi, v in zip(p, q, out):
        ref = kummer_m(pi_, qi, 300.0)
        assert abs(v.log_abs() - ref.log_abs()) < 1e-10
        assert np.sign(v.mantissa.real) == np.sign(ref.mantissa.real)
