"""Exhaustive search for repdigits among products of consecutive (shifted) terms."""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .equations import Equation, ShiftPattern, pattern, patterns
from .errors import VerificationError
from .published import BGL_RANGE, BGL_SOLUTION, CAPS, SEARCH_RANGE, for_equation
from .seq import RepdigitForm, as_repdigit, nu2, trib, trib_fresh

#: a repdigit is odd up to the factor d, so its 2-adic order is at most v2(8)
MAX_REPDIGIT_NU2 = 3
RESIDUE_MODULUS = 10**4
#: residues mod 10^4 that a repdigit can have
REPDIGIT_RESIDUES = frozenset(
    RepdigitForm(d, m).value % RESIDUE_MODULUS for d in range(1, 10) for m in range(1, 5)
)
AUDIT_RATE = 0.01


def product_of_block(n: int, p: ShiftPattern, *, fresh: bool = False) -> int:
    """Exact product of T_(n+i) + shift_i over the pattern; zero factors give 0."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    term = trib_fresh if fresh else trib
    out = 1
    for offset, shift in enumerate(p.shifts()):
        out *= term(n + offset) + shift
    return out


def passes_filters(value: int) -> bool:
    """Necessary conditions for a positive value to be a repdigit."""
    return nu2(value) <= MAX_REPDIGIT_NU2 and value % RESIDUE_MODULUS in REPDIGIT_RESIDUES


@dataclass(frozen=True)
class SearchSpace:
    """n in 1..n_max, patterns within (k_max, l_max), repdigits with m >= m_min."""

    equation: Equation
    n_max: int
    k_max: int
    l_max: int
    m_min: int = 2

    def __post_init__(self):
        if self.n_max < 1 or self.l_max < 1 or self.m_min < 1:
            raise ValueError("empty search space")

    def patterns(self) -> list[ShiftPattern]:
        return list(patterns(self.equation, self.k_max, self.l_max))

    def to_json(self) -> dict:
        return {
            "equation": self.equation.value,
            "n_range": [1, self.n_max],
            "k_max": self.k_max,
            "l_max": self.l_max,
            "m_min": self.m_min,
            "d_range": [1, 9],
        }


def search_space(
    equation: Equation,
    certified_bound: int | None = None,
    caps: tuple[int, int] | None = None,
    n_max_override: int | None = None,
) -> SearchSpace:
    """The space covering both the certified bound (n < certified_bound) and
    the printed search ceiling; the fourth equation mirrors the third's."""
    if equation is Equation.BGL:
        n_max, l_max = BGL_RANGE
        return SearchSpace(equation, n_max_override or n_max, 0, l_max)
    k_max, l_max = caps if caps is not None else CAPS[equation]
    printed = for_equation(SEARCH_RANGE, equation)[0]
    n_max = max(printed, (certified_bound or 1) - 1)
    if n_max_override is not None:
        n_max = max(n_max, n_max_override)
    return SearchSpace(equation, n_max, k_max, l_max)


@dataclass(frozen=True)
class Solution:
    n: int
    k: int
    l: int  # noqa: E741
    m: int
    d: int

    def key(self) -> tuple[int, int, int]:
        return self.n, self.k, self.l

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "l": self.l, "m": self.m, "d": self.d}


@dataclass
class SearchReport:
    space: SearchSpace
    solutions: list[Solution] = field(default_factory=list)
    candidates_scanned: int = 0
    zero_products: int = 0
    passed_filters: int = 0
    short_repdigits: int = 0
    audited: int = 0

    @property
    def filters(self) -> list[str]:
        return [
            f"v2(product) <= {MAX_REPDIGIT_NU2}",
            f"product mod {RESIDUE_MODULUS} is the residue of a repdigit",
            f"{AUDIT_RATE:.0%} deterministic audit of filtered candidates",
        ]

    def merge(self, other: SearchReport) -> None:
        self.solutions.extend(other.solutions)
        self.candidates_scanned += other.candidates_scanned
        self.zero_products += other.zero_products
        self.passed_filters += other.passed_filters
        self.short_repdigits += other.short_repdigits
        self.audited += other.audited

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "filters": self.filters,
            "candidates_scanned": self.candidates_scanned,
            "zero_products": self.zero_products,
            "passed_filters": self.passed_filters,
            "repdigits_below_m_min": self.short_repdigits,
            "audited_filtered": self.audited,
            "solutions": [s.to_json() for s in self.solutions],
        }


def _scan(space: SearchSpace, n_values: list[int]) -> SearchReport:
    report = SearchReport(space)
    for n in n_values:
        for p in space.patterns():
            report.candidates_scanned += 1
            value = product_of_block(n, p)
            if value == 0:
                report.zero_products += 1
                continue
            if not passes_filters(value):
                if random.Random(f"{n}:{p.k}:{p.l}").random() < AUDIT_RATE:
                    report.audited += 1
                    if as_repdigit(value) is not None:
                        raise VerificationError(f"filter removed the repdigit {value} at n={n}, {p}")
                continue
            report.passed_filters += 1
            form = as_repdigit(value)
            if form is None:
                continue
            d, m = form
            if m < space.m_min:
                report.short_repdigits += 1
                continue
            report.solutions.append(Solution(n, p.k, p.l, m, d))
    return report


def exhaustive_search(space: SearchSpace, jobs: int = 1) -> SearchReport:
    """Scan every (n, pattern); independent of ``jobs`` in its result."""
    n_values = list(range(1, space.n_max + 1))
    report = SearchReport(space)
    if jobs <= 1:
        report.merge(_scan(space, n_values))
    else:
        chunks = [n_values[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_scan, [space] * jobs, chunks):
                report.merge(part)
    report.solutions.sort(key=Solution.key)
    for s in report.solutions:
        if not verify_solution(s.n, s.k, s.l, s.m, s.d, space.equation):
            raise VerificationError(f"reported solution {s} does not re-verify")
    return report


def verify_solution(n: int, k: int, l: int, m: int, d: int, equation: Equation) -> bool:  # noqa: E741
    """Recompute both sides from scratch and compare exactly."""
    equation = Equation.parse(equation)
    if not (1 <= d <= 9 and m >= 1 and n >= 1):
        return False
    try:
        p = pattern(equation, k, l)
    except ValueError:
        return False
    return product_of_block(n, p, fresh=True) == d * (10**m - 1) // 9


def expected_solutions(equation: Equation) -> list[Solution]:
    if equation is Equation.BGL:
        n, l, m, d = BGL_SOLUTION
        return [Solution(n, 0, l, m, d)]
    return []
