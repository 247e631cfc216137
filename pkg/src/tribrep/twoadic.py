"""2-adic orders of T_n +- 1 and of products of consecutive shifted terms.

The closed forms for v2(T_n + 1) and v2(T_n - 1) are valid for n >= 5.  On a
residue class n = x (mod 64) every term they involve is v2 of a linear
function of n, which is either a known constant or at least 6; summing those
gives a lower bound (exact when every term is constant) for a whole class,
which is how block-length caps are certified for all n rather than a sample.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterable

from . import published
from .equations import Equation, Order, ShiftPattern
from .errors import OutOfDomainError
from .seq import nu2, trib, trib_mod_pow, trib_residues

CLASS_MODULUS = 64
#: a product whose 2-adic order reaches this cannot equal d(10^m - 1)/9
EXCLUDING_ORDER = 4
DEFAULT_RANGE = 70000
_RESIDUE_MODULUS = 2**128


def _v2(x: int) -> int:
    return nu2(x)  # type: ignore[return-value]


@functools.lru_cache(maxsize=None)
def plus_root(bits: int = 256) -> int:
    """The 2-adic zero z = 61 (mod 64) of n -> T_n + 1, reduced mod 2^bits.

    On n = 61 (mod 64), v2(T_n + 1) = v2(n + 3) + v2(n - z) - 3; the other
    zero, -3, is exact since T_{-3} = -1.  For n = 61 (mod 128) the n + 3
    factor contributes exactly 6, so the correct lift c of z mod 2^(k+1)
    is the one with v2(T_c + 1) >= k + 4, the wrong one giving k + 3.
    """
    z = 61
    modulus = 2 ** (bits + 8)
    for k in range(7, bits):
        if nu2(trib_mod_pow(z, modulus) + 1) < k + 4:
            z += 2**k
    return z


def _nu2_minus_root(n: int) -> int:
    bits = 256
    while True:
        z = plus_root(bits)
        if (n - z) % 2**bits:
            return _v2((n - z) % 2**bits)
        bits *= 2


def nu2_shift_plus(n: int) -> int:
    """v2(T_n + 1) for n >= 5."""
    if n < 5:
        raise OutOfDomainError(f"closed form needs n >= 5, got {n}")
    if n % 4 in (0, 3):
        return 0
    if n % 8 in (1, 2, 6):
        return 1
    if n % 16 == 5:
        return 3
    if n % 64 in (13, 29, 45):
        return _v2((n + 3) ** 2) - 3
    # n = 61 (mod 64); covers n = 61 itself (order 15)
    return _v2(n + 3) + _nu2_minus_root(n) - 3


def nu2_shift_plus_as_printed(n: int, factor: int = 7) -> int:
    """The n = 61 (mod 64) case in its published shape: 15 at n = 61 and
    v2((n - 61)(n + factor)) - 3 above.  With the printed factor 7 it first
    disagrees with the direct order at n = 125; with factor 3 at n = 4157."""
    if n % 64 == 61:
        return 15 if n == 61 else _v2((n - 61) * (n + factor)) - 3
    return nu2_shift_plus(n)


def nu2_shift_minus_as_printed(n: int) -> int:
    """The published closed form of v2(T_n - 1), identical to :func:`nu2_shift_minus`."""
    return nu2_shift_minus(n)


def nu2_shift_minus(n: int) -> int:
    """v2(T_n - 1) for n >= 5."""
    if n < 5:
        raise OutOfDomainError(f"closed form needs n >= 5, got {n}")
    if n % 4 in (0, 3):
        return 0
    r = n % 8
    if r == 5:
        return 1
    if r == 6:
        return _v2(n + 2) - 1
    if r == 2:
        return _v2(n - 2) - 1
    return _v2((n - 1) * (n + 7)) - 3


def nu2_shift(n: int, sign: int) -> int | float:
    """v2(T_n + sign); closed form from n = 5 on, direct computation below."""
    if n >= 5:
        return nu2_shift_plus(n) if sign > 0 else nu2_shift_minus(n)
    return nu2(trib(n) + sign)


def nu2_product(n: int, pattern: ShiftPattern) -> int:
    """v2 of the shifted block product starting at T_n, n >= 5."""
    if n < 5:
        raise OutOfDomainError(f"closed form needs n >= 5, got {n}")
    if pattern.order is Order.UNSHIFTED:
        raise ValueError("unshifted products have no closed form here")
    return sum(
        nu2_shift_plus(n + i) if s > 0 else nu2_shift_minus(n + i)
        for i, s in enumerate(pattern.shifts())
    )


def direct_valuations(n_max: int, sign: int) -> list[int | float]:
    """[v2(T_n + sign) for n in 0..n_max] from residues mod 2^128.

    Residues that vanish fall back to the exact integer (only T_1 - 1 and
    T_2 - 1 are actually zero).
    """
    residues = trib_residues(n_max, _RESIDUE_MODULUS)
    out: list[int | float] = []
    for n, r in enumerate(residues):
        s = (r + sign) % _RESIDUE_MODULUS
        out.append(nu2(s) if s else nu2(trib(n) + sign))
    return out


# -- symbolic bounds over residue classes --------------------------------


def _v2_linear(x: int, c: int, modulus: int = CLASS_MODULUS) -> tuple[int, bool]:
    """(lower bound, exact) for v2(n + c) over n = x (mod modulus), modulus a power of 2."""
    r = (x + c) % modulus
    if r == 0:
        return modulus.bit_length() - 1, False
    return _v2(r), True


def class_bound(x: int, sign: int) -> tuple[int, bool]:
    """(lower bound, exact) for v2(T_n + sign) over all n >= 5 with n = x (mod 64)."""
    x %= CLASS_MODULUS
    if sign > 0:
        if x % 4 in (0, 3):
            return 0, True
        if x % 8 in (1, 2, 6):
            return 1, True
        if x % 16 == 5:
            return 3, True
        if x in (13, 29, 45):
            v, exact = _v2_linear(x, 3)
            return 2 * v - 3, exact
        # x = 61: v2(n + 3) + v2(n - z) - 3 with z = 61 (mod 64)
        a, _ = _v2_linear(x, -61)
        b, _ = _v2_linear(x, 3)
        return min(a + b - 3, 15), False
    if x % 4 in (0, 3):
        return 0, True
    if x % 8 == 5:
        return 1, True
    if x % 8 == 6:
        v, exact = _v2_linear(x, 2)
        return v - 1, exact
    if x % 8 == 2:
        v, exact = _v2_linear(x, -2)
        return v - 1, exact
    a, ea = _v2_linear(x, -1)
    b, eb = _v2_linear(x, 7)
    return a + b - 3, ea and eb


def block_class_bound(x: int, shifts: Iterable[int]) -> tuple[int, bool]:
    """(lower bound, exact) for v2 of the shifted block starting at n = x (mod 64), n >= 5."""
    total, exact = 0, True
    for i, s in enumerate(shifts):
        v, e = class_bound(x + i, s)
        total += v
        exact = exact and e
    return total, exact


# -- table verification ----------------------------------------------------


@dataclass(frozen=True)
class ValuationTableRow:
    table: str  # "plus" or "minus"
    block_length: int
    residue: int
    modulus: int
    verdict: str  # "Exact" or "AtLeast"
    value: int
    samples: int
    sample_min: int
    sample_max: int
    class_bound: int
    class_exact: bool
    published_relation: str
    published_value: int

    @property
    def consistent(self) -> bool:
        if self.published_relation == "=":
            return (
                self.verdict == "Exact"
                and self.value == self.published_value
                and self.class_exact
                and self.class_bound == self.published_value
            )
        return self.sample_min >= self.published_value and self.class_bound >= self.published_value

    def to_json(self) -> dict:
        return {
            "table": self.table,
            "block_length": self.block_length,
            "residue": self.residue,
            "modulus": self.modulus,
            "verdict": self.verdict,
            "value": self.value,
            "samples": self.samples,
            "sample_min": self.sample_min,
            "sample_max": self.sample_max,
            "class_bound": self.class_bound,
            "class_exact": self.class_exact,
            "published": f"{self.published_relation} {self.published_value}",
            "consistent": self.consistent,
        }


def _block_sum(vals: list, start: int, length: int):
    return sum(vals[start : start + length])


def _row(table, l, x, modulus, relation, pvalue, vals, sign, range_max) -> ValuationTableRow:  # noqa: E741
    start = x if x >= 5 else x + modulus * math.ceil((5 - x) / modulus)
    observed = [_block_sum(vals, n, l) for n in range(start, range_max + 1, modulus)]
    lo, hi = min(observed), max(observed)
    # the class bound of a mod-8 row is the weakest over its mod-64 lifts
    lifts = [y for y in range(CLASS_MODULUS) if y % modulus == x]
    bounds = [block_class_bound(y, [sign] * l) for y in lifts]
    cb = min(b for b, _ in bounds)
    ce = all(e for _, e in bounds) and len({b for b, _ in bounds}) == 1
    return ValuationTableRow(
        table=table,
        block_length=l,
        residue=x,
        modulus=modulus,
        verdict="Exact" if lo == hi else "AtLeast",
        value=lo,
        samples=len(observed),
        sample_min=lo,
        sample_max=hi,
        class_bound=cb,
        class_exact=ce,
        published_relation=relation,
        published_value=pvalue,
    )


def verify_valuation_tables(range_max: int = DEFAULT_RANGE) -> list[ValuationTableRow]:
    """Recompute every tabulated 2-adic order over 5 <= n <= range_max."""
    if range_max < 64 * 16 + 69:
        raise ValueError(f"range_max must be at least {64 * 16 + 69}")
    plus = direct_valuations(range_max + 16, 1)
    minus = direct_valuations(range_max + 16, -1)
    rows = [
        _row("plus", l, x, published.PLUS_TABLE_MODULUS, rel, v, plus, 1, range_max)
        for l, x, rel, v in published.PLUS_TABLE  # noqa: E741
    ]
    rows += [
        _row("minus", l, x, published.MINUS_TABLE_MODULUS, rel, v, minus, -1, range_max)
        for l, x, rel, v in published.MINUS_TABLE  # noqa: E741
    ]
    return rows


def table_summary(rows: list[ValuationTableRow]) -> dict:
    plus_residues = sorted(r.residue for r in rows if r.table == "plus")
    return {
        "rows": len(rows),
        "consistent_rows": sum(r.consistent for r in rows),
        "inconsistent": [r.to_json() for r in rows if not r.consistent],
        "plus_table_covers_all_residues": plus_residues == list(range(CLASS_MODULUS)),
        "transcription_notes": list(published.TABLE_TRANSCRIPTION_NOTES),
    }


# -- block-length caps -------------------------------------------------------


def first_excluding_length(x: int, sign: int, limit: int = 32) -> int:
    """Shortest block starting at n = x (mod 64), n >= 5, whose product certainly has v2 >= 4."""
    for length in range(1, limit + 1):
        bound, _ = block_class_bound(x, [sign] * length)
        if bound >= EXCLUDING_ORDER:
            return length
    raise ValueError(f"no excluding block of length <= {limit} for residue {x}")


def _small_n_excluding_length(n: int, sign: int, limit: int = 32) -> int:
    total = 0
    for length in range(1, limit + 1):
        total += nu2(trib(n + length - 1) + sign)
        if total >= EXCLUDING_ORDER:  # includes a zero factor (order inf)
            return length
    raise ValueError(f"no excluding block of length <= {limit} at n={n}")


def block_cap(sign: int) -> int:
    """Largest single-block length that can avoid v2 >= 4 for some n >= 1."""
    longest = max(first_excluding_length(x, sign) for x in range(CLASS_MODULUS))
    longest = max([longest] + [_small_n_excluding_length(n, sign) for n in range(1, 5)])
    return longest - 1


@dataclass(frozen=True)
class BlockCaps:
    equation: Equation
    k_max: int
    l_max: int
    plus_cap: int
    minus_cap: int
    scan_range: int
    scan_violations: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.scan_violations

    @property
    def published(self) -> tuple[int, int] | None:
        return published.CAPS.get(self.equation)

    def to_json(self) -> dict:
        return {
            "equation": self.equation.value,
            "k_max": self.k_max,
            "l_max": self.l_max,
            "plus_block_cap": self.plus_cap,
            "minus_block_cap": self.minus_cap,
            "scan_range": [1, self.scan_range],
            "certified": self.certified,
            "scan_violations": self.scan_violations[:20],
            "published": list(self.published) if self.published else None,
        }


def _exceeding_patterns(equation: Equation, k_max: int, l_max: int) -> list[ShiftPattern]:
    """Minimal patterns just beyond the caps; every longer pattern contains one."""
    order = equation.order
    if not equation.mixed:
        return [ShiftPattern(order, 0, l_max + 1)]
    out = [ShiftPattern(order, k_max + 1, l) for l in range(1, l_max + 2)]  # noqa: E741
    out += [ShiftPattern(order, k, l_max + 1) for k in range(1, k_max + 1)]
    return out


def _prefix(vals: list) -> list:
    # zero factors (order inf) count as "large"; only ">= 4" is ever asked
    out = [0]
    for v in vals:
        out.append(out[-1] + (1000 if v == math.inf else v))
    return out


def max_block_lengths(equation: Equation | str, range_max: int = DEFAULT_RANGE) -> BlockCaps:
    """Caps (k_max, l_max) on block lengths that still allow v2(product) <= 3.

    Caps come from the residue-class bounds (all n >= 5) plus direct checks of
    n = 1..4, then every minimal pattern beyond the caps is re-scanned directly
    over 1 <= n <= range_max.
    """
    equation = Equation.parse(equation)
    if equation is Equation.BGL:
        raise ValueError("unshifted products carry no 2-adic cap")
    plus_cap, minus_cap = block_cap(1), block_cap(-1)
    caps = {
        Equation.EQ1: (0, plus_cap),
        Equation.EQ2: (0, minus_cap),
        Equation.EQ3: (minus_cap, plus_cap),
        Equation.EQ4: (plus_cap, minus_cap),
    }[equation]
    k_max, l_max = caps
    longest = k_max + l_max + 2
    prefix = {
        1: _prefix(direct_valuations(range_max + longest, 1)),
        -1: _prefix(direct_valuations(range_max + longest, -1)),
    }
    violations = []
    for pat in _exceeding_patterns(equation, k_max, l_max):
        shifts = pat.shifts()
        runs = []  # (offset, length, sign) of constant-sign runs
        i = 0
        while i < len(shifts):
            j = i
            while j < len(shifts) and shifts[j] == shifts[i]:
                j += 1
            runs.append((i, j - i, shifts[i]))
            i = j
        for n in range(1, range_max + 1):
            total = sum(
                prefix[s][n + off + ln] - prefix[s][n + off] for off, ln, s in runs
            )
            if total < EXCLUDING_ORDER:
                violations.append({"n": n, "pattern": pat.to_json(), "order": total})
    return BlockCaps(equation, k_max, l_max, plus_cap, minus_cap, range_max, violations)
