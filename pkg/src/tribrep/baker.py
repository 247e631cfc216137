"""Linear forms in three logarithms and the initial bound on n.

Each equation is recast as
    Gamma = d / (9 c_alpha^f) * alpha^(-b) * 10^m - 1,
where f is the number of shifted factors and b their summed alpha-exponent.
Matveev's theorem bounds |Gamma| from below, an expansion of the product
bounds it from above, and comparing the two caps n.

Two upper bounds on |Gamma| are carried.  The expansion bound
ceil(3^f / c_alpha) * alpha^(-3n/2) is the one the published figures rest
on; the audited bound C * alpha^(-n) is derived from the Binet error term
and checked against actual products.  Both feed the same machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .equations import Equation, ShiftPattern, pattern, patterns
from .errors import VerificationError
from .published import A1 as PUBLISHED_A1
from .published import CAPS, GAMMA_COEFFICIENT, GAMMA_THRESHOLD, INITIAL_BOUND, for_equation
from .realfield import CertifiedReal, TribConstants, compute_constants, height_eta1, sci
from .seq import trib

LOG_COUNT = 3
FIELD_DEGREE = 3
#: A_2 bounds 3 h(alpha) = log alpha, A_3 bounds 3 h(10) = 3 log 10
A2 = Fraction(7, 10)
A3 = Fraction(7)
A1 = {
    Equation.EQ1: Fraction(40),
    Equation.EQ2: Fraction(40),
    Equation.EQ3: Fraction(624, 10),
    Equation.EQ4: Fraction(624, 10),
}
#: start of the decreasing fixed-point iteration; far above any bound in play
ITERATION_START = 10**40

EXPANSION = "expansion"
AUDITED = "audited"


def _caps(equation: Equation, caps: tuple[int, int] | None) -> tuple[int, int]:
    if equation is Equation.BGL:
        raise ValueError("the unshifted products have no linear form")
    return caps if caps is not None else CAPS[equation]


def matveev_constant(s: int = LOG_COUNT, degree: int = FIELD_DEGREE, precision: int = 60) -> CertifiedReal:
    """C(s, D) = 1.4 * 30^(s+3) * s^4.5 * D^2 * (1 + log D)."""
    if s < 1 or degree < 1:
        raise ValueError(f"s and D must be positive, got s={s}, D={degree}")
    r = lambda v: CertifiedReal.of(v, precision)  # noqa: E731
    return (
        r(Fraction(14, 10))
        * r(30 ** (s + 3))
        * r(s**4) * r(s).sqrt()
        * r(degree**2)
        * (1 + r(degree).log())
    )


# -- exponents --------------------------------------------------------------
def _m_upper_parts(equation: Equation, k: int, l: int) -> tuple[int, Fraction]:
    if equation is Equation.EQ1:
        return l, Fraction(l * (l + 1), 2)
    if equation is Equation.EQ2:
        return l, Fraction(l * (l - 3), 2)
    if equation is Equation.EQ3:
        return k + l, Fraction(k * (k - 3), 2) + Fraction(l * (2 * k + l + 1), 2)
    if equation is Equation.EQ4:
        return k + l, Fraction(k * (k + 1), 2) + Fraction(l * (2 * k + l - 3), 2)
    raise ValueError(f"no digit-count bound for {equation}")


def m_upper(equation: Equation, n: int, k: int, l: int, caps: tuple[int, int] | None = None) -> int:
    """Upper bound on the number of digits m of a repdigit equal to the product
    at (n, k, l).  Each plus factor is below alpha^(s+1) and each minus factor
    below alpha^(s-1), and 10^(m-1) is below the product."""
    k_max, l_max = _caps(equation, caps)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    pattern(equation, k, l)
    if k > k_max or l > l_max:
        raise ValueError(f"(k, l) = ({k}, {l}) exceeds the caps ({k_max}, {l_max})")
    a, b = _m_upper_parts(equation, k, l)
    return math.floor(a * n + b)


def alpha_exponent(n: int, f: int) -> int:
    """Summed alpha-exponent f n + f(f+1)/2 of the leading term of a product of
    f consecutive shifted terms starting at T_n, each T_s close to c_alpha alpha^(s+1)."""
    return f * n + f * (f + 1) // 2


def _exponent_parts(p: ShiftPattern, equation: Equation) -> tuple[int, Fraction]:
    """Coefficients (a, b) with max(m, |b_2|) <= a n + b for this pattern."""
    f = p.length
    a, b = _m_upper_parts(equation, p.k, p.l)
    return f, max(b, Fraction(f * (f + 1), 2))


def exponent_bound(equation: Equation, caps: tuple[int, int] | None = None) -> tuple[int, int]:
    """(a, b) with max(m, |b_2|) <= a n + b for every n >= 1 and every pattern
    within the caps; this is Matveev's B."""
    k_max, l_max = _caps(equation, caps)
    parts = [_exponent_parts(p, equation) for p in patterns(equation, k_max, l_max)]
    a = max(pa for pa, _ in parts)
    b = max(pb - (a - pa) for pa, pb in parts)
    return a, math.ceil(b)


def max_exponent(equation: Equation, n: int, caps: tuple[int, int] | None = None) -> int:
    """Largest of m_upper and the alpha-exponent over all patterns at this n."""
    k_max, l_max = _caps(equation, caps)
    return max(
        max(m_upper(equation, n, p.k, p.l, (k_max, l_max)), alpha_exponent(n, p.length))
        for p in patterns(equation, k_max, l_max)
    )


def max_factor_count(equation: Equation, caps: tuple[int, int] | None = None) -> int:
    k_max, l_max = _caps(equation, caps)
    return k_max + l_max


# -- Matveev instance ---------------------------------------------------------
@dataclass(frozen=True)
class MatveevInstance:
    """Data of one application of Matveev's theorem and its admissibility checks."""

    equation: Equation
    s: int
    degree: int
    A: tuple[Fraction, Fraction, Fraction]
    B: tuple[int, int]
    C: CertifiedReal
    admissibility: dict[str, bool]

    @property
    def product(self) -> CertifiedReal:
        a1, a2, a3 = self.A
        return self.C * a1 * a2 * a3

    def to_json(self) -> dict:
        return {
            "equation": self.equation.value,
            "s": self.s,
            "D": self.degree,
            "A": [str(a) for a in self.A],
            "B": {"a": self.B[0], "b": self.B[1], "expression": f"{self.B[0]}n+{self.B[1]}"},
            "C": self.C.to_json(20),
            "C_times_A": self.product.to_json(20),
            "admissibility": dict(sorted(self.admissibility.items())),
            "assumption": "Gamma != 0 (conjugation argument, not re-verified)",
        }


def matveev_instance(
    equation: Equation,
    constants: TribConstants | None = None,
    caps: tuple[int, int] | None = None,
) -> MatveevInstance:
    """Instantiate Matveev's theorem with eta = (d/(9 c_alpha^f), alpha, 10).

    A_1 must dominate 3 h(eta_1) and |log eta_1| for every digit d and every
    factor count f within the caps.
    """
    constants = constants or compute_constants()
    caps = _caps(equation, caps)
    precision = constants.precision
    a1 = A1[equation]
    f_max = max_factor_count(equation, caps)
    checks: dict[str, bool] = {}
    checks["3 h(eta_1) <= A_1"] = all(
        (3 * height_eta1(d, f, precision)).is_le(a1) for d in range(1, 10) for f in range(1, f_max + 1)
    )
    checks["|log eta_1| <= A_1"] = all(
        abs(constants.log_eta1(d, f)).is_le(a1) for d in range(1, 10) for f in range(1, f_max + 1)
    )
    checks["log alpha <= A_2"] = constants.log_alpha.is_le(A2)
    checks["3 log 10 <= A_3"] = (3 * constants.log_10).is_le(A3)
    checks["0.16 <= A_j"] = min(a1, A2, A3) >= Fraction(16, 100)
    if not all(checks.values()):
        failed = sorted(k for k, v in checks.items() if not v)
        raise VerificationError(f"{equation.name}: inadmissible Matveev parameters: {failed}")
    return MatveevInstance(
        equation=equation,
        s=LOG_COUNT,
        degree=FIELD_DEGREE,
        A=(a1, A2, A3),
        B=exponent_bound(equation, caps),
        C=matveev_constant(LOG_COUNT, FIELD_DEGREE, precision),
        admissibility=checks,
    )


# -- upper bounds on |Gamma| ---------------------------------------------------
@dataclass(frozen=True)
class GammaBound:
    """|Gamma| < coefficient * alpha^(-decay_rate * n) for n >= valid_from."""

    equation: Equation
    factor_count: int
    remainder_terms: int
    coefficient: int
    decay_rate: Fraction
    valid_from: int
    derivation: str
    published_coefficient: int | None = None

    def value(self, n: int, constants: TribConstants) -> CertifiedReal:
        exponent = self.decay_rate * n
        return self.coefficient * (-exponent * constants.log_alpha).exp()

    def to_json(self) -> dict:
        return {
            "equation": self.equation.value,
            "factor_count": self.factor_count,
            "remainder_terms": self.remainder_terms,
            "coefficient": self.coefficient,
            "decay_rate": str(self.decay_rate),
            "valid_from": self.valid_from,
            "derivation": self.derivation,
            "published_coefficient": self.published_coefficient,
        }


def _threshold(equation: Equation) -> tuple[Fraction, int]:
    a, n0 = for_equation(GAMMA_THRESHOLD, equation)
    return Fraction(a), n0


def gamma_bound(
    equation: Equation,
    f: int | None = None,
    constants: TribConstants | None = None,
    caps: tuple[int, int] | None = None,
) -> GammaBound:
    """Expansion bound: 3^f - 1 remainder terms, coefficient ceil(3^f / c_alpha)
    from the certified upper end of 1/c_alpha, decay alpha^(-3n/2)."""
    constants = constants or compute_constants()
    f = f if f is not None else max_factor_count(equation, caps)
    if not 1 <= f <= max_factor_count(equation, caps):
        raise ValueError(f"factor count {f} outside 1..{max_factor_count(equation, caps)}")
    coefficient = math.ceil((3**f * constants.inv_c_alpha).upper)
    return GammaBound(
        equation=equation,
        factor_count=f,
        remainder_terms=3**f - 1,
        coefficient=coefficient,
        decay_rate=Fraction(3, 2),
        valid_from=_threshold(equation)[1],
        derivation=EXPANSION,
        published_coefficient=for_equation(GAMMA_COEFFICIENT, equation),
    )


def audited_gamma_bound(
    equation: Equation,
    constants: TribConstants | None = None,
    caps: tuple[int, int] | None = None,
    valid_from: int | None = None,
) -> GammaBound:
    """Bound |Gamma| < C alpha^(-n) valid for n >= valid_from.

    Write T_s = c_alpha alpha^(s+1) + e_s with |e_s| <= 2 |c_beta| alpha^(-(s+1)/2),
    where |c_beta| = (44 c_alpha)^(-1/2).  Each factor is c_alpha alpha^(s+1)(1 + eps_s)
    with |eps_s| <= x alpha^(-(s-n)) alpha^(-n), so the product of the (1 + eps_s)
    is within S e^(S alpha^(-n0)) alpha^(-n) of 1 with S = x alpha / (alpha - 1).
    The d/9 term adds at most c_alpha^(-f) alpha^(-b_2).
    """
    constants = constants or compute_constants()
    f_max = max_factor_count(equation, caps)
    n0 = valid_from if valid_from is not None else _threshold(equation)[1]
    alpha, c, log_alpha = constants.alpha, constants.c_alpha, constants.log_alpha

    def alpha_pow(e: Fraction) -> CertifiedReal:
        return (e * log_alpha).exp()

    c_beta = (1 / (44 * c)).sqrt()
    x = (1 + 2 * c_beta / alpha_pow(Fraction(n0 + 1, 2))) / (c * alpha)
    s = x * alpha / (alpha - 1)
    main = s * (s / alpha_pow(Fraction(n0))).exp()
    tail = [
        1 / (c**g * alpha_pow(Fraction((g - 1) * n0 + g * (g + 1) // 2))) for g in range(1, f_max + 1)
    ]
    coefficient = math.ceil(max((main + t).upper for t in tail))
    return GammaBound(
        equation=equation,
        factor_count=f_max,
        remainder_terms=3**f_max - 1,
        coefficient=coefficient,
        decay_rate=Fraction(1),
        valid_from=n0,
        derivation=AUDITED,
        published_coefficient=for_equation(GAMMA_COEFFICIENT, equation),
    )


def _product(n: int, p: ShiftPattern) -> int:
    out = 1
    for offset, sign in enumerate(p.shifts()):
        out *= trib(n + offset) + sign
    return out


@dataclass(frozen=True)
class GammaAudit:
    """Comparison of a Gamma bound with |Gamma| evaluated on actual products."""

    derivation: str
    n_range: tuple[int, int]
    cases: int
    first_failure: int | None
    largest_scaled: Fraction

    @property
    def holds(self) -> bool:
        return self.first_failure is None

    def to_json(self) -> dict:
        return {
            "derivation": self.derivation,
            "n_range": list(self.n_range),
            "cases": self.cases,
            "holds": self.holds,
            "first_failure": self.first_failure,
            "largest_gamma_times_alpha_power": sci(self.largest_scaled, 6, "up"),
        }


def gamma_audit(
    bound: GammaBound,
    n_max: int = 150,
    caps: tuple[int, int] | None = None,
) -> GammaAudit:
    """Evaluate Gamma = (P + d/9) / (c_alpha^f alpha^b_2) - 1 for every pattern,
    digit and n in [valid_from, n_max] and compare with the bound.

    Gamma depends on m only through the equation itself, so no m is needed.
    ``largest_scaled`` is the largest certified upper end of
    |Gamma| alpha^(rate n), which the coefficient must exceed.
    """
    equation = bound.equation
    k_max, l_max = _caps(equation, caps)
    f_max = k_max + l_max
    precision = max(60, math.ceil(n_max * (f_max + 2) * 0.27) + 40)
    constants = compute_constants(precision)
    log_alpha, c = constants.log_alpha, constants.c_alpha
    first_failure = None
    largest = Fraction(0)
    cases = 0
    for n in range(bound.valid_from, n_max + 1):
        scale = (bound.decay_rate * n * log_alpha).exp()
        for p in patterns(equation, k_max, l_max):
            product = _product(n, p)
            main = c**p.length * (alpha_exponent(n, p.length) * log_alpha).exp()
            for d in range(1, 10):
                cases += 1
                gamma = abs((product + Fraction(d, 9)) / main - 1) * scale
                largest = max(largest, gamma.upper)
                if first_failure is None and not gamma.is_lt(bound.coefficient):
                    first_failure = n
    return GammaAudit(bound.derivation, (bound.valid_from, n_max), cases, first_failure, largest)


# -- initial bound --------------------------------------------------------------
@dataclass(frozen=True)
class InitialBound:
    """n < bound for every solution with n >= valid_from.

    The bound N satisfies N >= K (1 + log(a N + b)) + correction, where
    K = C A_1 A_2 A_3 / (rate log alpha) and the correction is
    log(coefficient) / (rate log alpha).
    """

    equation: Equation
    derivation: str
    K: CertifiedReal
    correction: CertifiedReal
    B: tuple[int, int]
    bound: int
    iterations: list[int] = field(default_factory=list)
    published_bound: str | None = None

    def to_json(self) -> dict:
        return {
            "equation": self.equation.value,
            "derivation": self.derivation,
            "K": self.K.to_json(12),
            "log_coefficient_correction": self.correction.to_json(12),
            "B": f"{self.B[0]}n+{self.B[1]}",
            "bound": str(self.bound),
            "bound_sci": sci(Fraction(self.bound), 4, "up"),
            "iterations": [str(x) for x in self.iterations],
            "published_bound": self.published_bound,
        }


def initial_bound(
    equation: Equation,
    gamma: GammaBound | None = None,
    constants: TribConstants | None = None,
    caps: tuple[int, int] | None = None,
) -> InitialBound:
    """Solve n < K (1 + log(a n + b)) + correction by decreasing fixed-point iteration.

    Starting far above the fixed point, each step takes the ceiling of the
    certified upper end of the right-hand side; since the right-hand side is
    increasing and concave every iterate stays a valid bound.
    """
    constants = constants or compute_constants()
    gamma = gamma or gamma_bound(equation, constants=constants, caps=caps)
    instance = matveev_instance(equation, constants, caps)
    a, b = instance.B
    rate_log = gamma.decay_rate * constants.log_alpha
    K = instance.product / rate_log
    correction = constants.real(gamma.coefficient).log() / rate_log

    def rhs(x: int) -> CertifiedReal:
        return K * (1 + constants.real(a * x + b).log()) + correction

    x = ITERATION_START
    if not rhs(x).is_le(x):
        raise VerificationError(f"{equation.name}: iteration start is below the fixed point")
    iterations = [x]
    while True:
        nxt = math.ceil(rhs(x).upper)
        if nxt >= x:
            break
        x = nxt
        iterations.append(x)
        if len(iterations) > 200:
            raise VerificationError(f"{equation.name}: fixed-point iteration did not settle")
    if not K.is_lt(x):
        raise VerificationError(f"{equation.name}: bound {x} lies in the convex range of the iteration")
    return InitialBound(
        equation=equation,
        derivation=gamma.derivation,
        K=K,
        correction=correction,
        B=(a, b),
        bound=x,
        iterations=iterations,
        published_bound=for_equation(INITIAL_BOUND, equation),
    )


def published_a1(equation: Equation) -> str:
    return for_equation(PUBLISHED_A1, equation)
