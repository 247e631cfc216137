import math

import pytest
from hypothesis import given, strategies as st

from tribrep.seq import (
    CACHE_LIMIT,
    RepdigitForm,
    TribTerm,
    as_repdigit,
    nu,
    nu2,
    trib,
    trib_fresh,
    trib_list,
    trib_mod,
    trib_mod_pow,
    trib_residues,
)


def unrolled(n):
    a, b, c = 0, 1, 1
    for _ in range(n):
        a, b, c = b, c, a + b + c
    return a


def test_small_values():
    assert [trib(n) for n in range(11)] == [0, 1, 1, 2, 4, 7, 13, 24, 44, 81, 149]
    assert trib(8) == 44
    assert TribTerm.of(10) == (10, 149)


def test_beyond_cache_matches_fresh():
    n = CACHE_LIMIT + 57
    assert trib(n) == trib_fresh(n) == unrolled(n)
    assert trib_list(30) == [unrolled(k) for k in range(31)]


@given(st.integers(min_value=3, max_value=600))
def test_recurrence(n):
    assert trib(n) == trib(n - 1) + trib(n - 2) + trib(n - 3)


@given(st.integers(min_value=0, max_value=400), st.integers(min_value=2, max_value=10**12))
def test_modular_agrees(n, modulus):
    assert trib_mod(n, modulus) == trib(n) % modulus == trib_mod_pow(n, modulus)


def test_residue_list():
    assert trib_residues(50, 64) == [trib(n) % 64 for n in range(51)]


def test_bad_modulus():
    with pytest.raises(ValueError):
        trib_mod(5, 1)
    with pytest.raises(ValueError):
        trib_mod_pow(5, 0)


@given(st.integers(min_value=1, max_value=9), st.integers(min_value=1, max_value=60))
def test_repdigit_roundtrip(d, m):
    form = RepdigitForm(d, m)
    assert set(str(form.value)) == {str(d)} and len(str(form.value)) == m
    assert as_repdigit(form.value) == form


def test_not_repdigit():
    assert as_repdigit(45) is None
    assert as_repdigit(7) == (7, 1)
    with pytest.raises(ValueError):
        as_repdigit(0)


@given(st.integers().filter(lambda v: v != 0))
def test_valuation_definition(v):
    k = nu2(v)
    assert v % 2**k == 0 and v % 2 ** (k + 1) != 0
    assert nu(2, v) == (2, k)


def test_valuation_of_zero_and_other_primes():
    assert nu2(0) == math.inf
    assert nu(3, 162).order == 4
    with pytest.raises(ValueError):
        nu(1, 5)
