"""Tribonacci numbers, repdigits and p-adic valuations of integers."""

from __future__ import annotations

import math
import threading
from typing import NamedTuple

#: indices up to this bound are memoised by :func:`trib`
CACHE_LIMIT = 200

_cache: list[int] = [0, 1, 1]
_cache_lock = threading.Lock()


class TribTerm(NamedTuple):
    index: int
    value: int

    @classmethod
    def of(cls, n: int) -> TribTerm:
        return cls(n, trib(n))


class RepdigitForm(NamedTuple):
    digit: int
    length: int

    @property
    def value(self) -> int:
        return self.digit * (10**self.length - 1) // 9


class Valuation(NamedTuple):
    prime: int
    order: int | float  # math.inf for the input 0


def _extend_cache(n: int) -> None:
    with _cache_lock:
        values = list(_cache)
        while len(values) <= n:
            values.append(values[-1] + values[-2] + values[-3])
        # publish the longer list in one assignment
        _cache[:] = values


def trib(n: int) -> int:
    """Return T_n with T_0 = 0, T_1 = T_2 = 1."""
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    if n < len(_cache):
        return _cache[n]
    _extend_cache(min(n, CACHE_LIMIT))
    if n <= CACHE_LIMIT:
        return _cache[n]
    a, b, c = _cache[CACHE_LIMIT - 2], _cache[CACHE_LIMIT - 1], _cache[CACHE_LIMIT]
    for _ in range(n - CACHE_LIMIT):
        a, b, c = b, c, a + b + c
    return c


def trib_fresh(n: int) -> int:
    """T_n by a cache-free iteration, for independent re-checks."""
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    a, b, c = 0, 1, 1
    for _ in range(n):
        a, b, c = b, c, a + b + c
    return a


def trib_list(n_max: int) -> list[int]:
    """Return [T_0, ..., T_n_max]."""
    if n_max <= CACHE_LIMIT:
        _extend_cache(n_max)
        return _cache[: n_max + 1]
    out = [0, 1, 1]
    while len(out) <= n_max:
        out.append(out[-1] + out[-2] + out[-3])
    return out[: n_max + 1]


def trib_mod(n: int, modulus: int) -> int:
    """T_n reduced modulo ``modulus`` without forming the full integer."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")
    a, b, c = 0, 1 % modulus, 1 % modulus
    for _ in range(n):
        a, b, c = b, c, (a + b + c) % modulus
    return a


def trib_mod_pow(n: int, modulus: int) -> int:
    """T_n mod ``modulus`` by squaring the companion matrix; O(log n) steps."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    if n < 0:
        raise ValueError(f"index must be non-negative, got {n}")

    def mul(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(3)) % modulus for j in range(3)]
            for i in range(3)
        ]

    result = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    base = [[1, 1, 1], [1, 0, 0], [0, 1, 0]]
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    # result = M^n; (T_{n+2}, T_{n+1}, T_n) = M^n (T_2, T_1, T_0)
    return (result[2][0] + result[2][1]) % modulus


def trib_residues(n_max: int, modulus: int) -> list[int]:
    """Return [T_0 mod M, ..., T_n_max mod M]."""
    if modulus < 2:
        raise ValueError(f"modulus must be at least 2, got {modulus}")
    out = [0, 1 % modulus, 1 % modulus]
    for _ in range(3, n_max + 1):
        out.append((out[-1] + out[-2] + out[-3]) % modulus)
    return out[: n_max + 1]


def as_repdigit(v: int) -> RepdigitForm | None:
    """Return (d, m) with v = d(10^m - 1)/9 when all decimal digits of v agree."""
    if v <= 0:
        raise ValueError(f"repdigits are positive, got {v}")
    s = str(v)
    if s.count(s[0]) != len(s):
        return None
    return RepdigitForm(int(s[0]), len(s))


def nu2(v: int) -> int | float:
    """2-adic order of v via the trailing-zero count of |v|."""
    if v == 0:
        return math.inf
    v = abs(v)
    return (v & -v).bit_length() - 1


def nu(p: int, v: int) -> Valuation:
    """Exact p-adic order of v; the order of 0 is ``math.inf``."""
    if p < 2:
        raise ValueError(f"p must be at least 2, got {p}")
    if v == 0:
        return Valuation(p, math.inf)
    if p == 2:
        return Valuation(2, nu2(v))
    v = abs(v)
    k = 0
    while v % p == 0:
        v //= p
        k += 1
    return Valuation(p, k)
