from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tribrep.errors import PrecisionError
from tribrep.realfield import (
    CertifiedReal,
    binet_error_check,
    binet_first_failure,
    compute_constants,
    growth_check,
    height_eta1,
    isolate_alpha,
    minimal_poly_check_c_alpha,
    sci,
)

ORACLE_DIGITS = 120
with mpmath.workdps(ORACLE_DIGITS):
    ALPHA = mpmath.findroot(lambda x: x**3 - x**2 - x - 1, mpmath.mpf("1.84"))
    C_ALPHA = 1 / (3 * ALPHA**2 - 2 * ALPHA - 1)


def encloses(real, value):
    with mpmath.workdps(ORACLE_DIGITS):
        lo = mpmath.mpf(real.lower.numerator) / real.lower.denominator
        hi = mpmath.mpf(real.upper.numerator) / real.upper.denominator
        return lo <= value <= hi


@pytest.fixture(autouse=True)
def oracle_precision():
    with mpmath.workdps(ORACLE_DIGITS):
        yield


def test_constants_match_independent_root():
    k = compute_constants(100)
    assert encloses(k.alpha, ALPHA)
    assert encloses(k.c_alpha, C_ALPHA)
    assert encloses(k.log_alpha, mpmath.log(ALPHA))
    assert encloses(k.beta_abs, 1 / mpmath.sqrt(ALPHA))
    assert k.alpha.radius < Fraction(1, 10**100)


def test_invariants_and_ranges():
    k = compute_constants(60)
    assert all(k.invariants().values())
    assert k.alpha.within("1.83", "1.84")
    assert k.c_alpha.within("0.18", "0.19")


def test_precision_floor():
    with pytest.raises(PrecisionError):
        compute_constants(40)


def test_isolated_ball_is_tight():
    ball = isolate_alpha(80)
    assert ball.radius <= Fraction(1, 10**84)


def test_binet_literal_and_shifted():
    assert binet_first_failure(1000) == 3
    assert not binet_error_check(1000)
    assert binet_error_check(1000, index_shift=1)


def test_growth_bounds():
    assert growth_check(1000, compute_constants(400))


def test_minimal_polynomial_audit():
    audit = minimal_poly_check_c_alpha(compute_constants(200))
    assert audit.annihilating == "44x^3+4x-1"
    assert not audit.published_sign_correct
    assert abs(audit.residual_plus).upper < Fraction(1, 10**140)
    assert not audit.residual_minus.contains(0)
    assert audit.conjugate_modulus.is_lt(1)
    assert encloses(audit.height, mpmath.log(44) / 3)
    with pytest.raises(PrecisionError):
        minimal_poly_check_c_alpha(compute_constants(60))


def test_height_bound():
    h = height_eta1(9, 7)
    assert encloses(h, 2 * mpmath.log(9) + 7 * mpmath.log(44) / 3)
    with pytest.raises(ValueError):
        height_eta1(0, 1)


fractions = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**6)


@given(fractions, fractions)
def test_arithmetic_encloses_exact_result(a, b):
    x, y = CertifiedReal.of(a, 50), CertifiedReal.of(b, 50)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if b != 0:
        assert (x / y).contains(a / b)


@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000))
def test_log_exp_roundtrip(a):
    x = CertifiedReal.of(a, 50)
    assert x.log().exp().contains(a)


def test_comparisons_are_certified():
    third = CertifiedReal.of(1, 50) / 3
    assert third.is_lt(Fraction(1, 3) + Fraction(1, 10**40))
    assert not third.is_lt(Fraction(1, 3))
    assert not third.is_gt(Fraction(1, 3))


def test_scientific_notation():
    assert sci(Fraction(24, 1) * 10**15, 2) == "2.4e16"
    assert sci(Fraction(1, 3), 3, "up") == "3.34e-1"
    assert sci(Fraction(-1, 3), 3, "down") == "-3.33e-1"


def test_json_radius_covers_printing():
    k = compute_constants(60)
    out = k.alpha.to_json(10)
    mid = Fraction(out["mid"].split("e")[0]) * Fraction(10) ** int(out["mid"].split("e")[1])
    rad = Fraction(out["rad"].split("e")[0]) * Fraction(10) ** int(out["rad"].split("e")[1])
    assert mid - rad <= k.alpha.lower and k.alpha.upper <= mid + rad
