import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tribrep.baker import AUDITED, EXPANSION
from tribrep.equations import Equation
from tribrep.errors import PrecisionError, ReductionError
from tribrep.realfield import CertifiedReal, compute_constants
from tribrep.reduction import (
    ReductionProblem,
    cf_expand,
    convergents_of,
    distance_to_integer,
    lambda_coefficient,
    reduce_homogeneous,
    reduce_inhomogeneous,
    theta_source,
    tribonacci_problem,
    two_stage_reduce,
)

CF = cf_expand(theta_source(), 60)


def oracle_denominators(count):
    with mpmath.workdps(300):
        alpha = mpmath.findroot(lambda x: x**3 - x**2 - x - 1, mpmath.mpf("1.84"))
        x = mpmath.log(alpha) / mpmath.log(10)
        qs, q0, q1 = [], 0, 1
        for _ in range(count):
            a = int(mpmath.floor(x))
            q0, q1 = a * q0 + q1, q0
            qs.append(q0)
            x = 1 / (x - a)
    return qs


def golden(precision):
    five = CertifiedReal.of(5, precision).sqrt()
    return (1 + five) / 2


def test_lambda_coefficients():
    assert lambda_coefficient(11964, "0.02") == 12086
    assert lambda_coefficient(3988, "0.005") == 3999
    assert lambda_coefficient(8721506, "0.002") == 8730240
    with pytest.raises(ValueError):
        lambda_coefficient(10, 1)


def test_published_denominators():
    assert CF.q(12) == 686323
    assert CF.q(14) == 9120227
    assert CF.q(42) == 152414933276058910307
    assert CF.q(43) == 3468665590923027810230


def test_denominators_match_independent_expansion():
    assert [q for _, q in CF.convergents[:50]] == oracle_denominators(50)


def test_golden_ratio():
    cf = cf_expand(golden(60), 10)
    assert cf.partial_quotients == (1,) * 10
    assert [q for _, q in cf.convergents] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_convergent_identities():
    theta = CF.value
    for k in range(1, CF.depth - 1):
        (p0, q0), (p1, q1) = CF.convergents[k - 1], CF.convergents[k]
        assert p1 * q0 - p0 * q1 == (-1) ** (k - 1)
        q_next = CF.convergents[k + 1][1]
        assert abs(theta - Fraction(p1, q1)).is_lt(Fraction(1, q1 * q_next))


def test_precision_doubling_and_ceiling():
    fixed = theta_source()(60)
    with pytest.raises(PrecisionError):
        cf_expand(fixed, 150)
    grown = cf_expand(theta_source(), 150, precision=60)
    assert grown.value.precision > 60
    with pytest.raises(ValueError):
        cf_expand(fixed, 201)


def test_quotients_stable_under_doubling():
    a = cf_expand(theta_source(), 80, precision=200)
    b = cf_expand(theta_source(), 80, precision=400)
    assert a.partial_quotients == b.partial_quotients


@given(st.lists(st.integers(1, 50), min_size=1, max_size=20).map(lambda qs: qs[:-1] + [qs[-1] + 1]))
def test_expansion_of_rational(quotients):
    quotients = [3] + quotients
    p, q = convergents_of(quotients)[-1]
    # a ball around p/q also holds reals ending [..., a_n - 1, 1, ...], so the
    # last quotient is never certified
    cf = cf_expand(CertifiedReal.of(Fraction(p, q), 50), len(quotients) - 1)
    assert list(cf.partial_quotients) == quotients[:-1]


def homogeneous_problem(X0=10, c=1, delta=1):
    return ReductionProblem(
        CertifiedReal.of(-1, 60), CertifiedReal.of(10, 60).log(), Fraction(c), Fraction(delta), X0
    )


def test_homogeneous_example():
    cf = cf_expand(golden(60), 20)
    out = reduce_homogeneous(homogeneous_problem(), cf)
    assert out.A == 1
    assert abs(float(out.upper) - math.log(30 / math.log(10))) < 1e-12
    assert out.max_y == 2


def test_homogeneous_scaling():
    cf = cf_expand(golden(60), 40)
    base = reduce_homogeneous(homogeneous_problem(X0=10), cf)
    bigger = reduce_homogeneous(homogeneous_problem(X0=100), cf)
    assert abs(float(bigger.upper - base.upper) - math.log(10)) < 1e-12
    with pytest.raises(ReductionError):
        reduce_homogeneous(homogeneous_problem(X0=10**12), cf_expand(golden(60), 5))


def test_homogeneous_monotone_in_A():
    cf_small = cf_expand(golden(60), 20)
    cf_big = cf_expand(CertifiedReal.of(2, 60).sqrt(), 20)
    small = reduce_homogeneous(homogeneous_problem(), cf_small)
    big = reduce_homogeneous(homogeneous_problem(), cf_big)
    assert big.A == 2 and small.A == 1
    assert float(big.upper - small.upper) <= math.log(4 / 3) + 1e-12


def test_distance_to_integer():
    lo, hi = distance_to_integer(CertifiedReal.of(Fraction(27, 10), 50))
    assert lo <= Fraction(3, 10) <= hi
    assert distance_to_integer(CertifiedReal.of(3, 50)) is None


@pytest.mark.parametrize(
    "X0,c,index,bound",
    [(168 * 10**15 + 28, 12086, 42, 104), (749, 12086, 12, 49)],
)
def test_inhomogeneous_examples(X0, c, index, bound):
    out = reduce_inhomogeneous(tribonacci_problem(c, X0), CF, range(1, 10), range(1, 8))
    assert out.convergent_index == index and out.new_bound_Y == bound
    assert out.q > X0
    assert len(out.checked_cases) == 63


def test_inhomogeneous_failure_lists_cases():
    shallow = cf_expand(theta_source(), 38)
    with pytest.raises(ReductionError, match=r"failing cases at the last one tried: \[\(\d"):
        reduce_inhomogeneous(tribonacci_problem(12086, 168 * 10**15), shallow, range(1, 10), range(1, 8))


@pytest.mark.parametrize(
    "eq,stage1,stage2",
    [(Equation.EQ1, 104, 49), (Equation.EQ2, 102, 47), (Equation.EQ3, 123, 67), (Equation.EQ4, 123, 67)],
)
def test_two_stage_chain(eq, stage1, stage2):
    result = two_stage_reduce(eq, EXPANSION)
    assert (result.stage1.new_bound_Y, result.stage2.new_bound_Y) == (stage1, stage2)
    assert result.self_consistent()
    assert all(result.admissibility.values())


@pytest.mark.parametrize("eq", [Equation.EQ1, Equation.EQ2, Equation.EQ3, Equation.EQ4])
def test_audited_chain_is_below_published_ceiling(eq):
    result = two_stage_reduce(eq, AUDITED)
    assert result.self_consistent()
    assert result.final_bound <= {Equation.EQ1: 49, Equation.EQ2: 47}.get(eq, 67)


def test_reduction_precision_robust():
    a = two_stage_reduce(Equation.EQ3, EXPANSION, precision=200)
    b = two_stage_reduce(Equation.EQ3, EXPANSION, precision=400)
    assert a.chain == b.chain
    assert (a.stage1.q, a.stage2.q) == (b.stage1.q, b.stage2.q)


def test_theta_ratio_of_logs():
    k = compute_constants(60)
    assert (theta_source()(60) * k.log_10 - k.log_alpha).contains(0)
