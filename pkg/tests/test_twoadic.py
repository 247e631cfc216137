import pytest
from hypothesis import given, settings, strategies as st

from tribrep.equations import Equation, pattern
from tribrep.errors import OutOfDomainError
from tribrep.seq import nu2, trib
from tribrep.twoadic import (
    block_cap,
    class_bound,
    direct_valuations,
    max_block_lengths,
    nu2_product,
    nu2_shift,
    nu2_shift_minus,
    nu2_shift_plus,
    nu2_shift_plus_as_printed,
    plus_root,
    table_summary,
    verify_valuation_tables,
)

N = 20000
PLUS = direct_valuations(N, 1)
MINUS = direct_valuations(N, -1)


def test_direct_valuations_match_big_integers():
    for n in range(1, 400):
        assert PLUS[n] == nu2(trib(n) + 1)
        assert MINUS[n] == nu2(trib(n) - 1)


def test_closed_forms_small_examples():
    assert nu2_shift_plus(61) == 15
    assert nu2_shift_plus(5) == 3
    assert nu2_shift_minus(9) == 4
    assert nu2_shift_minus(7) == 0


def test_closed_forms_match_direct():
    assert all(nu2_shift_plus(n) == PLUS[n] for n in range(5, N + 1))
    assert all(nu2_shift_minus(n) == MINUS[n] for n in range(5, N + 1))


def test_printed_factor_fails_and_typo_reading_fails_later():
    assert nu2_shift_plus_as_printed(125) != PLUS[125]
    assert all(nu2_shift_plus_as_printed(n, 3) == PLUS[n] for n in range(5, 4157))
    assert nu2_shift_plus_as_printed(4157, 3) != PLUS[4157]


def test_two_adic_root_lifts_consistently():
    z = plus_root(64)
    assert z % 64 == 61 and z % 2**12 == 61 and z % 2**13 != 61
    assert plus_root(40) == z % 2**40
    # v2(T_z' + 1) grows with the agreement between z' and the root
    for bits in (14, 16, 18):
        n = z % 2**bits
        assert nu2(trib(n) + 1) >= bits + 3


def test_closed_form_domain():
    with pytest.raises(OutOfDomainError):
        nu2_shift_plus(4)
    with pytest.raises(OutOfDomainError):
        nu2_shift_minus(3)
    assert nu2_shift(2, -1) == float("inf")


@settings(max_examples=200)
@given(st.integers(min_value=5, max_value=N), st.sampled_from([1, -1]))
def test_class_bound_is_a_lower_bound(n, sign):
    bound, exact = class_bound(n % 64, sign)
    direct = (PLUS if sign > 0 else MINUS)[n]
    assert direct >= bound
    if exact:
        assert direct == bound


@settings(max_examples=100)
@given(st.integers(min_value=5, max_value=300), st.integers(1, 6), st.integers(1, 6))
def test_product_order_is_additive(n, k, l):
    p = pattern(Equation.EQ3, k, l)
    value = 1
    for i, s in enumerate(p.shifts()):
        value *= trib(n + i) + s
    assert nu2_product(n, p) == nu2(value)


def test_tables_reproduced():
    rows = verify_valuation_tables(20000)
    summary = table_summary(rows)
    assert summary["rows"] == summary["consistent_rows"] == 72
    assert summary["plus_table_covers_all_residues"]


def test_small_range_rejected():
    with pytest.raises(ValueError):
        verify_valuation_tables(100)


def test_block_caps():
    assert block_cap(1) == 7 and block_cap(-1) == 6
    expected = {Equation.EQ1: (0, 7), Equation.EQ2: (0, 6), Equation.EQ3: (6, 7), Equation.EQ4: (7, 6)}
    for eq, caps in expected.items():
        result = max_block_lengths(eq, 20000)
        assert (result.k_max, result.l_max) == caps
        assert result.certified and not result.scan_violations
