from hypothesis import given, strategies as st

from tribrep.equations import Equation, pattern
from tribrep.seq import RepdigitForm, as_repdigit, trib
from tribrep.search import (
    SearchSpace,
    exhaustive_search,
    passes_filters,
    product_of_block,
    search_space,
    verify_solution,
)


def test_product_examples():
    assert product_of_block(8, pattern(Equation.EQ1, 0, 1)) == 45
    assert product_of_block(5, pattern(Equation.EQ3, 1, 1)) == 84
    assert product_of_block(1, pattern(Equation.EQ2, 0, 1)) == 0
    assert product_of_block(10, pattern(Equation.EQ3, 1, 1)) == 148 * 275


def test_verify_solution_examples():
    assert verify_solution(8, 0, 1, 2, 4, Equation.BGL)
    assert not verify_solution(8, 0, 1, 2, 5, Equation.BGL)
    assert not any(verify_solution(10, 1, 1, m, d, Equation.EQ3) for m in range(1, 8) for d in range(1, 10))
    assert not verify_solution(8, 1, 1, 2, 4, Equation.BGL)


@given(st.integers(1, 9), st.integers(1, 400))
def test_filters_never_reject_a_repdigit(d, m):
    assert passes_filters(RepdigitForm(d, m).value)


@given(st.integers(1, 300), st.integers(1, 8))
def test_filtered_products_are_not_repdigits(n, l):
    value = product_of_block(n, pattern(Equation.BGL, 0, l))
    if not passes_filters(value):
        assert as_repdigit(value) is None


def test_published_spaces_are_empty():
    assert exhaustive_search(SearchSpace(Equation.EQ1, 48, 0, 7)).solutions == []
    assert exhaustive_search(SearchSpace(Equation.EQ2, 46, 0, 6)).solutions == []
    assert exhaustive_search(SearchSpace(Equation.EQ3, 68, 6, 7)).solutions == []
    assert exhaustive_search(SearchSpace(Equation.EQ4, 68, 7, 6)).solutions == []


def test_unshifted_products():
    report = exhaustive_search(search_space(Equation.BGL))
    assert [(s.n, s.l, s.m, s.d) for s in report.solutions] == [(8, 1, 2, 4)]
    assert report.short_repdigits > 0  # 1, 2, 4, 7, ... are one-digit repdigits


def test_single_digit_products_excluded():
    report = exhaustive_search(SearchSpace(Equation.EQ1, 5, 0, 2))
    assert trib(1) + 1 == 2 and report.solutions == []


def test_parallel_schedule_does_not_matter():
    space = search_space(Equation.EQ3)
    assert exhaustive_search(space, jobs=3).to_json() == exhaustive_search(space, jobs=1).to_json()


def test_space_dominates_bounds():
    space = search_space(Equation.EQ3, certified_bound=67)
    assert space.n_max == 68
    assert search_space(Equation.EQ1, certified_bound=80).n_max == 79
    assert search_space(Equation.EQ1, n_max_override=100).n_max == 100
    assert search_space(Equation.EQ4).n_max == 68
