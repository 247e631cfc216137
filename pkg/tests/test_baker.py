from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tribrep.baker import (
    A1,
    AUDITED,
    EXPANSION,
    alpha_exponent,
    audited_gamma_bound,
    exponent_bound,
    gamma_audit,
    gamma_bound,
    initial_bound,
    m_upper,
    matveev_constant,
    matveev_instance,
    max_exponent,
)
from tribrep.equations import Equation, patterns
from tribrep.realfield import compute_constants
from tribrep.search import product_of_block

SHIFTED = [Equation.EQ1, Equation.EQ2, Equation.EQ3, Equation.EQ4]
CAPS = {Equation.EQ1: (0, 7), Equation.EQ2: (0, 6), Equation.EQ3: (6, 7), Equation.EQ4: (7, 6)}


def oracle_c(s, d):
    with mpmath.workdps(40):
        return mpmath.mpf("1.4") * 30 ** (s + 3) * mpmath.mpf(s) ** 4.5 * d**2 * (1 + mpmath.log(d))


def test_matveev_constant():
    c = matveev_constant(3, 3)
    assert abs(float(c) - float(oracle_c(3, 3))) < 1e-3
    assert abs(float(c) / 2.7044e12 - 1) < 1e-4
    assert abs(float(matveev_constant(2, 1)) - float(oracle_c(2, 1))) < 1e-6
    with pytest.raises(ValueError):
        matveev_constant(0, 3)


def test_matveev_products():
    eq1 = matveev_instance(Equation.EQ1)
    eq3 = matveev_instance(Equation.EQ3)
    assert abs(float(eq1.product) / 5.31e14 - 1) < 0.005
    assert abs(float(eq3.product) / 8.27e14 - 1) < 0.005
    assert eq1.A == (Fraction(40), Fraction(7, 10), Fraction(7))
    assert all(eq1.admissibility.values()) and all(eq3.admissibility.values())


def test_m_upper_examples():
    assert m_upper(Equation.EQ1, 24 * 10**15, 0, 7) == 168 * 10**15 + 28
    assert m_upper(Equation.EQ1, 103, 0, 7) == 749
    assert m_upper(Equation.EQ2, 102, 0, 6) == 621
    assert m_upper(Equation.EQ3, 123, 6, 7) == 1678
    with pytest.raises(ValueError):
        m_upper(Equation.EQ1, 10, 0, 8)
    with pytest.raises(ValueError):
        m_upper(Equation.EQ3, 10, 0, 3)


@pytest.mark.parametrize("eq", SHIFTED)
def test_m_upper_bounds_actual_repdigit_length(eq):
    # a repdigit equal to the product has exactly len(str(product)) digits
    for n in range(1, 60):
        for p in patterns(eq, *CAPS[eq]):
            value = product_of_block(n, p)
            if value > 0:
                assert len(str(value)) <= m_upper(eq, n, p.k, p.l)


@given(st.sampled_from(SHIFTED), st.integers(min_value=1, max_value=10**6))
def test_exponent_bound_dominates(eq, n):
    a, b = exponent_bound(eq)
    assert max_exponent(eq, n) <= a * n + b


def test_exponent_bounds():
    assert exponent_bound(Equation.EQ1) == (7, 28)
    assert exponent_bound(Equation.EQ2) == (6, 21)
    assert exponent_bound(Equation.EQ3) == (13, 91)
    assert exponent_bound(Equation.EQ4) == (13, 91)
    assert alpha_exponent(10, 3) == 36


def test_gamma_bound_examples():
    g1 = gamma_bound(Equation.EQ1)
    g2 = gamma_bound(Equation.EQ2)
    g3 = gamma_bound(Equation.EQ3)
    assert (g1.remainder_terms, g1.coefficient) == (2186, 11964)
    assert (g2.remainder_terms, g2.coefficient) == (728, 3988)
    assert g3.remainder_terms == 1594322 and abs(g3.coefficient - 8721506) <= 10
    assert g1.decay_rate == Fraction(3, 2) and g1.derivation == EXPANSION


@pytest.mark.parametrize("f", range(1, 14))
def test_gamma_coefficient_certifies(f):
    k = compute_constants(60)
    g = gamma_bound(Equation.EQ3, f)
    assert (3**f * k.inv_c_alpha).is_le(g.coefficient)


def test_gamma_bound_audit():
    expansion = gamma_audit(gamma_bound(Equation.EQ1), 40)
    audited = gamma_audit(audited_gamma_bound(Equation.EQ1), 40)
    assert not expansion.holds and expansion.first_failure == 25
    assert audited.holds and audited.largest_scaled < audited_gamma_bound(Equation.EQ1).coefficient


def test_audited_gamma_bound():
    g = audited_gamma_bound(Equation.EQ3)
    assert g.derivation == AUDITED and g.decay_rate == 1 and g.valid_from == 25
    assert 6 < g.coefficient <= 12


@pytest.mark.parametrize(
    "eq,printed", [(Equation.EQ1, 2.4e16), (Equation.EQ2, 2.4e16), (Equation.EQ3, 3.8e16)]
)
def test_initial_bounds(eq, printed):
    result = initial_bound(eq)
    assert result.bound <= printed
    assert abs(result.bound / printed - 1) < 0.05


@pytest.mark.parametrize("eq", SHIFTED)
def test_fixed_point_soundness(eq):
    k = compute_constants(60)
    result = initial_bound(eq)
    a, b = result.B

    def rhs(x):
        return result.K * (1 + k.real(a * x + b).log()) + result.correction

    assert rhs(result.bound).is_le(result.bound)
    assert not rhs(result.bound - 2).is_le(result.bound - 2)
    assert result.iterations == sorted(result.iterations, reverse=True)


def test_a1_choices_are_tight_but_valid():
    assert A1[Equation.EQ3] == Fraction(624, 10)
    assert all(matveev_instance(Equation.EQ4).admissibility.values())
