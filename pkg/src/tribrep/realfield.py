"""Certified real arithmetic and the algebraic constants of the Tribonacci recurrence.

Every real is a ball (midpoint, radius) from python-flint's ``arb`` type; the
exact value is guaranteed to lie inside the ball and arithmetic propagates the
radius rigorously.  Certified comparisons only return ``True`` when the
relation holds for every point of both balls.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from flint import arb, ctx

from .errors import PrecisionError, VerificationError
from .seq import trib_list

#: extra decimal digits carried internally beyond the requested precision
GUARD_DIGITS = 15
MIN_PRECISION = 50

Number = Union[int, str, Fraction, "CertifiedReal"]


def _fraction(x: arb) -> Fraction:
    """Exact value of an exact (zero-radius) arb."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def _to_arb(value, digits: int) -> arb:
    if isinstance(value, CertifiedReal):
        return value.ball
    if isinstance(value, arb):
        return value
    with ctx.workdps(digits + GUARD_DIGITS):
        if isinstance(value, Fraction):
            return arb(value.numerator) / arb(value.denominator)
        if isinstance(value, int):
            return arb(value)
        if isinstance(value, str):
            return arb(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a certified real")


def sci(x: Fraction, digits: int, rounding: str = "nearest") -> str:
    """Decimal scientific notation of an exact rational with ``digits`` significant digits.

    ``rounding`` is "nearest", "up" (away from zero) or "down" (toward zero).
    """
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    e10 = len(str(x.numerator // x.denominator)) - 1 if x >= 1 else -1
    while x < Fraction(10) ** e10:
        e10 -= 1
    scaled = x * Fraction(10) ** (digits - 1 - e10)
    if rounding == "up":
        mant = -((-scaled.numerator) // scaled.denominator)
    elif rounding == "down":
        mant = scaled.numerator // scaled.denominator
    else:
        mant = round(scaled)
    if mant >= 10**digits:
        mant //= 10
        e10 += 1
    s = str(mant)
    body = s[0] + ("." + s[1:] if len(s) > 1 else "")
    return f"{sign}{body}e{e10}"


@dataclass(frozen=True)
class CertifiedReal:
    """A real number known to lie in ``[midpoint - radius, midpoint + radius]``."""

    ball: arb
    precision: int

    @classmethod
    def of(cls, value: Number, precision: int) -> CertifiedReal:
        if isinstance(value, CertifiedReal):
            return value
        return cls(_to_arb(value, precision), precision)

    # -- inspection -------------------------------------------------------
    @property
    def midpoint(self) -> Fraction:
        return _fraction(self.ball.mid())

    @property
    def radius(self) -> Fraction:
        return _fraction(self.ball.rad())

    @property
    def lower(self) -> Fraction:
        return self.midpoint - self.radius

    @property
    def upper(self) -> Fraction:
        return self.midpoint + self.radius

    def contains(self, value: Number) -> bool:
        """Exact membership for rationals; ball inclusion for certified reals."""
        if isinstance(value, (int, Fraction)) or (isinstance(value, str) and "e" not in value.lower()):
            return self.lower <= Fraction(value) <= self.upper
        return bool(self.ball.contains(_to_arb(value, self.precision)))

    def is_lt(self, other: Number) -> bool:
        """True iff every point of this ball is below every point of ``other``."""
        return bool(self.ball < _to_arb(other, self.precision))

    def is_gt(self, other: Number) -> bool:
        return bool(self.ball > _to_arb(other, self.precision))

    def is_le(self, other: Number) -> bool:
        return bool(self.ball <= _to_arb(other, self.precision))

    def within(self, low: Number, high: Number) -> bool:
        """Certified ``low < x < high``."""
        return self.is_gt(low) and self.is_lt(high)

    def __float__(self) -> float:
        return float(self.midpoint)

    def __str__(self) -> str:
        return self.ball.str(min(self.precision, 30), radius=True)

    def __repr__(self) -> str:
        return f"CertifiedReal({self}, precision={self.precision})"

    # -- arithmetic -------------------------------------------------------
    def _binary(self, other: Number, op) -> CertifiedReal:
        digits = max(self.precision, getattr(other, "precision", 0))
        b = _to_arb(other, digits)
        with ctx.workdps(digits + GUARD_DIGITS):
            return CertifiedReal(op(self.ball, b), digits)

    def _unary(self, op) -> CertifiedReal:
        with ctx.workdps(self.precision + GUARD_DIGITS):
            return CertifiedReal(op(self.ball), self.precision)

    def __add__(self, other: Number) -> CertifiedReal:
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other: Number) -> CertifiedReal:
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other: Number) -> CertifiedReal:
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other: Number) -> CertifiedReal:
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> CertifiedReal:
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other: Number) -> CertifiedReal:
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self) -> CertifiedReal:
        return self._unary(lambda a: -a)

    def __abs__(self) -> CertifiedReal:
        return self._unary(abs)

    def __pow__(self, exponent: int | CertifiedReal) -> CertifiedReal:
        if isinstance(exponent, int):
            return self._unary(lambda a: a**exponent)
        return self._binary(exponent, lambda a, b: a**b)

    def log(self) -> CertifiedReal:
        return self._unary(lambda a: a.log())

    def exp(self) -> CertifiedReal:
        return self._unary(lambda a: a.exp())

    def sqrt(self) -> CertifiedReal:
        return self._unary(lambda a: a.sqrt())

    def to_json(self, digits: int | None = None) -> dict:
        """Midpoint rounded to ``digits`` significant digits and a radius rounded
        up so that the printed ball still encloses the value."""
        digits = digits or min(self.precision, 60)
        mid = self.midpoint
        if mid == 0:
            printed, slack = "0", Fraction(0)
        else:
            printed = sci(mid, digits)
            slack = abs(mid - _parse_sci(printed))
        return {"mid": printed, "rad": sci(self.radius + slack, 3, "up") if self.radius + slack else "0"}


def _parse_sci(text: str) -> Fraction:
    mant, _, exp = text.partition("e")
    value = Fraction(mant)
    e = int(exp or 0)
    return value * Fraction(10) ** e


def _poly(z: arb) -> arb:
    return z * z * z - z * z - z - 1


def _dpoly(z: arb) -> arb:
    return 3 * z * z - 2 * z - 1


@dataclass(frozen=True)
class TribConstants:
    """Enclosures of the dominant root and its companions.

    ``beta_abs`` is the common modulus of the two complex roots, obtained as
    alpha^(-1/2) from the product of the three roots being 1.
    """

    precision: int
    alpha: CertifiedReal
    c_alpha: CertifiedReal
    log_alpha: CertifiedReal
    log_10: CertifiedReal
    beta_abs: CertifiedReal

    def real(self, value: Number) -> CertifiedReal:
        return CertifiedReal.of(value, self.precision)

    @property
    def inv_c_alpha(self) -> CertifiedReal:
        a = self.alpha
        return 3 * a * a - 2 * a - 1

    @property
    def log_c_alpha(self) -> CertifiedReal:
        return self.c_alpha.log()

    def log_eta1(self, d: int, f: int) -> CertifiedReal:
        """log(d / (9 c_alpha^f))."""
        return self.real(Fraction(d, 9)).log() - f * self.log_c_alpha

    def invariants(self) -> dict[str, bool]:
        a = self.alpha
        return {
            "alpha in (1.83, 1.84)": a.within("1.83", "1.84"),
            "|beta| in (0.73, 0.74)": self.beta_abs.within("0.73", "0.74"),
            "c_alpha in (0.18, 0.19)": self.c_alpha.within("0.18", "0.19"),
            "alpha^3 - alpha^2 - alpha - 1 contains 0": (a * a * a - a * a - a - 1).contains(0),
            "|beta|^2 alpha contains 1": (self.beta_abs * self.beta_abs * a).contains(1),
            "c_alpha (3 alpha^2 - 2 alpha - 1) contains 1": (self.c_alpha * self.inv_c_alpha).contains(1),
        }

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "alpha": self.alpha.to_json(),
            "c_alpha": self.c_alpha.to_json(),
            "log_alpha": self.log_alpha.to_json(),
            "log_10": self.log_10.to_json(),
            "beta_abs": self.beta_abs.to_json(),
        }


def isolate_alpha(precision: int) -> CertifiedReal:
    """Enclose the real root of z^3 - z^2 - z - 1 to about ``precision`` digits.

    The bracket [1.8, 1.9] has a sign change and the derivative is positive on
    it, so it holds exactly one root.  Newton iterates on exact midpoints, and
    the final ball is certified by a sign change at its two endpoints.
    """
    digits = precision + GUARD_DIGITS
    with ctx.workdps(digits):
        lo, hi = arb("1.8"), arb("1.9")
        bracket = arb("1.85", "0.05")
        if not (_poly(lo) < 0 and _poly(hi) > 0 and _dpoly(bracket) > 0):
            raise VerificationError("no isolated root of z^3 - z^2 - z - 1 in [1.8, 1.9]")
        x = arb("1.839")
        eps = arb(10) ** (-(precision + 5))
        for _ in range(4 * int(math.log2(digits)) + 8):
            x = (x - _poly(x) / _dpoly(x)).mid()
            if abs(_poly(x)) < eps / 100:
                break
        left, right = x - eps, x + eps
        if not (_poly(left) < 0 and _poly(right) > 0):
            raise PrecisionError(f"root isolation did not converge at {precision} digits")
        return CertifiedReal(arb(x, eps), precision)


@functools.lru_cache(maxsize=16)
def compute_constants(precision: int = 60) -> TribConstants:
    """Certified alpha, c_alpha, log alpha, log 10 and |beta| at ``precision`` digits."""
    if precision < MIN_PRECISION:
        raise PrecisionError(f"precision must be at least {MIN_PRECISION} digits, got {precision}")
    alpha = isolate_alpha(precision)
    c_alpha = 1 / (3 * alpha * alpha - 2 * alpha - 1)
    consts = TribConstants(
        precision=precision,
        alpha=alpha,
        c_alpha=c_alpha,
        log_alpha=alpha.log(),
        log_10=CertifiedReal.of(10, precision).log(),
        beta_abs=1 / alpha.sqrt(),
    )
    limit = Fraction(10) ** (2 - precision)
    for name in ("alpha", "c_alpha", "log_alpha", "log_10", "beta_abs"):
        if getattr(consts, name).radius > limit:
            raise PrecisionError(f"{name} radius exceeds 1e{2 - precision}")
    failed = [k for k, ok in consts.invariants().items() if not ok]
    if failed:
        raise VerificationError(f"constant invariants failed: {failed}")
    return consts


def binet_precision(n_max: int) -> int:
    """Digits needed to resolve |T_s - c_alpha alpha^s| against alpha^(-s/2) up to n_max."""
    return max(MIN_PRECISION, math.ceil(1.5 * n_max * math.log10(1.8393)) + 30)


def binet_error_check(
    n_max: int, constants: TribConstants | None = None, *, index_shift: int = 0
) -> bool:
    """Check |T_s - c_alpha alpha^(s + index_shift)| < alpha^(-s/2) for 1 <= s <= n_max.

    With c_alpha = 1/(3 alpha^2 - 2 alpha - 1) the dominant term of T_s is
    c_alpha alpha^(s+1), so only ``index_shift=1`` makes the bound hold for
    every s; the unshifted form already fails at s = 3.  Returns False on the
    first s that certainly violates the bound (see :func:`binet_first_failure`)
    and raises :class:`PrecisionError` naming s if the balls are too wide.
    """
    return binet_first_failure(n_max, constants, index_shift=index_shift) is None


def binet_first_failure(
    n_max: int, constants: TribConstants | None = None, *, index_shift: int = 0
) -> int | None:
    """Smallest s in 1..n_max violating the Binet error bound, or None."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if constants is None:
        constants = compute_constants(binet_precision(n_max + index_shift))
    terms = trib_list(n_max)
    with ctx.workdps(constants.precision + GUARD_DIGITS):
        alpha = constants.alpha.ball
        c = constants.c_alpha.ball * alpha**index_shift
        power = arb(1)
        for s in range(1, n_max + 1):
            power = power * alpha
            err = abs(terms[s] - c * power)
            bound = 1 / power.sqrt()
            if err < bound:
                continue
            if err >= bound:
                return s
            raise PrecisionError(f"cannot decide the Binet error bound at s={s}")
    return None


def growth_check(n_max: int, constants: TribConstants) -> bool:
    """Check alpha^(n-2) <= T_n <= alpha^(n-1) for 1 <= n <= n_max."""
    terms = trib_list(n_max)
    with ctx.workdps(constants.precision + GUARD_DIGITS):
        alpha = constants.alpha.ball
        powers = [1 / alpha, arb(1)]  # alpha^-1, alpha^0 exactly
        while len(powers) < n_max + 1:
            powers.append(powers[-1] * alpha)
        for n in range(1, n_max + 1):
            t = arb(terms[n])
            below, above = powers[n - 1], powers[n]
            if below <= t and t <= above:
                continue
            if below > t or t > above:
                return False
            raise PrecisionError(f"cannot decide the growth bound at n={n}")
    return True


@dataclass(frozen=True)
class MinimalPolyAudit:
    annihilating: str
    published: str
    published_sign_correct: bool
    residual_plus: CertifiedReal
    residual_minus: CertifiedReal
    conjugate_modulus: CertifiedReal
    height: CertifiedReal

    def to_json(self) -> dict:
        return {
            "annihilating_polynomial": self.annihilating,
            "published_polynomial": self.published,
            "published_sign_correct": self.published_sign_correct,
            "residual_44x3+4x-1": self.residual_plus.to_json(5),
            "residual_44x3-4x-1": self.residual_minus.to_json(5),
            "conjugate_modulus": self.conjugate_modulus.to_json(20),
            "height_c_alpha": self.height.to_json(30),
            "height_formula": "log(44)/3",
        }


#: the residual of the annihilating polynomial must be below this
MINPOLY_TOLERANCE = Fraction(1, 10**140)
MINPOLY_MIN_PRECISION = 150


def minimal_poly_check_c_alpha(constants: TribConstants) -> MinimalPolyAudit:
    """Decide which of 44x^3 +- 4x - 1 vanishes at c_alpha.

    Either polynomial has leading coefficient 44 and root product 1/44, so the
    two conjugates of c_alpha have modulus (44 c_alpha)^(-1/2) < 1 and the
    height is log(44)/3 in both readings.
    """
    if constants.precision < MINPOLY_MIN_PRECISION:
        raise PrecisionError(
            f"minimal-polynomial audit needs at least {MINPOLY_MIN_PRECISION} digits, "
            f"got {constants.precision}"
        )
    c = constants.c_alpha
    plus = 44 * c * c * c + 4 * c - 1
    minus = 44 * c * c * c - 4 * c - 1

    def vanishes(r: CertifiedReal) -> bool:
        return abs(r).upper <= MINPOLY_TOLERANCE

    def nonzero(r: CertifiedReal) -> bool:
        return not r.contains(0)

    if vanishes(plus) and nonzero(minus):
        annihilating = "44x^3+4x-1"
    elif vanishes(minus) and nonzero(plus):
        annihilating = "44x^3-4x-1"
    elif not (nonzero(plus) and nonzero(minus)):
        raise PrecisionError("cannot separate the two candidate polynomials at this precision")
    else:
        raise VerificationError("neither 44x^3 + 4x - 1 nor 44x^3 - 4x - 1 annihilates c_alpha")

    modulus = (1 / (44 * c)).sqrt()
    if not modulus.is_lt(1):
        raise VerificationError("conjugates of c_alpha are not inside the unit disc")
    height = constants.real(44).log() / 3
    return MinimalPolyAudit(
        annihilating=annihilating,
        published="44x^3-4x-1",
        published_sign_correct=annihilating == "44x^3-4x-1",
        residual_plus=plus,
        residual_minus=minus,
        conjugate_modulus=modulus,
        height=height,
    )


def height_eta1(d: int, f: int, precision: int = 60) -> CertifiedReal:
    """Upper bound 2 log 9 + f log(44)/3 on the height of d / (9 c_alpha^f)."""
    if not 1 <= d <= 9:
        raise ValueError(f"digit must be in 1..9, got {d}")
    if f < 0:
        raise ValueError(f"exponent must be non-negative, got {f}")
    nine = CertifiedReal.of(9, precision).log()
    return 2 * nine + f * CertifiedReal.of(44, precision).log() / 3
