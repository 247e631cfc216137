"""Continued fractions and the two de Weger reductions.

The linear form is Lambda = beta + x1 theta1 + x2 theta2 with
theta1 = -log alpha, theta2 = log 10, beta = log(d / (9 c_alpha^f)), x1 the
alpha-exponent and x2 = m.  With theta = -theta1/theta2 and psi = beta/theta2,
a convergent p/q of theta with q > X0 and ||q psi|| > 2 X0 / q turns
|Lambda| < c exp(-delta n) into n < log(q^2 c / (theta2 X0)) / delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Union

from . import baker
from .equations import Equation, patterns
from .errors import PrecisionError, ReductionError, VerificationError
from .published import (
    STAGE1_BOUND,
    STAGE1_Q,
    STAGE1_X0,
    STAGE2_BOUND,
    STAGE2_Q,
    STAGE2_X0,
    for_equation,
)
from .realfield import CertifiedReal, TribConstants, compute_constants, sci

REDUCTION_PRECISION = 200
MAX_PRECISION = 1600
MAX_DEPTH = 200
DEFAULT_DEPTH = 80
DELTA = Fraction(6, 10)

RealSource = Union[CertifiedReal, Callable[[int], CertifiedReal]]


def lambda_coefficient(c_gamma: int | Fraction, a: Fraction | str, precision: int = 60) -> int:
    """Ceiling of c_gamma * (-log(1 - a)) / a.

    If |e^Lambda - 1| < a < 1 then |Lambda| < (-log(1 - a) / a) |e^Lambda - 1|.
    """
    a = Fraction(a)
    if not 0 < a < 1:
        raise ValueError(f"a must lie strictly between 0 and 1, got {a}")
    one_minus = CertifiedReal.of(1 - a, precision)
    value = CertifiedReal.of(Fraction(c_gamma), precision) * (-one_minus.log()) / a
    return math.ceil(value.upper)


# -- continued fractions ------------------------------------------------------
@dataclass(frozen=True)
class ContinuedFraction:
    """Certified partial quotients a_0, a_1, ... and convergents p_k / q_k."""

    value: CertifiedReal
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    @property
    def depth(self) -> int:
        return len(self.partial_quotients)

    def q(self, k: int) -> int:
        return self.convergents[k][1]

    def to_json(self, limit: int | None = None) -> dict:
        quotients = self.partial_quotients[:limit]
        return {
            "precision": self.value.precision,
            "partial_quotients": [str(a) for a in quotients],
            "denominators": [str(q) for _, q in self.convergents[: len(quotients)]],
        }


def _certified_quotients(lo: Fraction, hi: Fraction, depth: int) -> list[int]:
    """Partial quotients shared by every real in [lo, hi]."""
    out: list[int] = []
    while len(out) < depth:
        a = math.floor(lo)
        if math.floor(hi) != a:
            break
        lo, hi = lo - a, hi - a
        out.append(a)
        if lo <= 0:
            break
        lo, hi = 1 / hi, 1 / lo
    return out


def convergents_of(quotients: Iterable[int]) -> list[tuple[int, int]]:
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in quotients:
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        out.append((p0, q0))
    return out


def _resolve(source: RealSource, precision: int) -> CertifiedReal:
    return source(precision) if callable(source) else source


def cf_expand(theta: RealSource, depth: int, *, precision: int | None = None) -> ContinuedFraction:
    """Expand ``theta`` into ``depth`` certified partial quotients.

    ``theta`` is either a certified real or a function giving one at a
    requested precision; in the latter case the precision doubles (up to
    1600 digits) until ``depth`` quotients are certified.
    """
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in 1..{MAX_DEPTH}, got {depth}")
    digits = precision or (theta.precision if isinstance(theta, CertifiedReal) else REDUCTION_PRECISION)
    while True:
        value = _resolve(theta, digits)
        quotients = _certified_quotients(value.lower, value.upper, depth)
        if len(quotients) == depth:
            break
        if not callable(theta) or digits >= MAX_PRECISION:
            raise PrecisionError(
                f"partial quotient a_{len(quotients)} is not certified at {value.precision} digits"
            )
        digits = min(2 * digits, MAX_PRECISION)
    if any(a <= 0 for a in quotients[1:]):
        raise VerificationError("non-positive partial quotient")
    return ContinuedFraction(value, tuple(quotients), tuple(convergents_of(quotients)))


def theta_source(constants_for: Callable[[int], TribConstants] = compute_constants) -> Callable[[int], CertifiedReal]:
    """log alpha / log 10 at any precision."""

    def source(precision: int) -> CertifiedReal:
        c = constants_for(precision)
        return c.log_alpha / c.log_10

    return source


# -- reduction problems -------------------------------------------------------
@dataclass(frozen=True)
class ReductionProblem:
    """|beta + x1 theta1 + x2 theta2| < c exp(-delta Y) with max(|x1|, |x2|) <= X0."""

    theta1: CertifiedReal
    theta2: CertifiedReal
    c: Fraction
    delta: Fraction
    X0: int

    def __post_init__(self):
        if self.c <= 0 or self.delta <= 0 or self.X0 < 1:
            raise ValueError(f"need c > 0, delta > 0, X0 >= 1; got {self.c}, {self.delta}, {self.X0}")

    def to_json(self) -> dict:
        return {
            "theta1": self.theta1.to_json(30),
            "theta2": self.theta2.to_json(30),
            "c": str(self.c),
            "delta": str(self.delta),
            "X0": str(self.X0),
        }


def tribonacci_problem(c: int | Fraction, X0: int, precision: int = REDUCTION_PRECISION, delta=DELTA) -> ReductionProblem:
    k = compute_constants(precision)
    return ReductionProblem(-k.log_alpha, k.log_10, Fraction(c), Fraction(delta), X0)


@dataclass(frozen=True)
class HomogeneousOutcome:
    Y0: CertifiedReal
    A: int
    upper: CertifiedReal
    max_y: int


def reduce_homogeneous(problem: ReductionProblem, cf: ContinuedFraction, X0: int | None = None) -> HomogeneousOutcome:
    """Bound Y when beta = 0, given the expansion of -theta1/theta2.

    With Y0 = -1 + log(sqrt5 X0 + 1) / log((1 + sqrt5)/2) and A the largest
    a_(k+1) for 0 <= k <= Y0, every solution has
    Y < log(c (A + 2) X0 / |theta2|) / delta.
    """
    X0 = X0 if X0 is not None else problem.X0
    p = max(problem.theta2.precision, 60)
    five = CertifiedReal.of(5, p).sqrt()
    y0 = -1 + (five * X0 + 1).log() / ((1 + five) / 2).log()
    last = math.floor(y0.upper) + 1
    if last >= cf.depth:
        raise ReductionError(f"expansion depth {cf.depth} does not reach index {last}")
    A = max(cf.partial_quotients[1 : last + 1])
    upper = (problem.c * (A + 2) * X0 / abs(problem.theta2)).log() / problem.delta
    return HomogeneousOutcome(y0, A, upper, math.ceil(upper.upper) - 1)


def distance_to_integer(x: CertifiedReal) -> tuple[Fraction, Fraction] | None:
    """Certified (lower, upper) enclosure of ||x||, or None if the ball meets an integer."""
    lo, hi = x.lower, x.upper
    k = math.floor(lo)
    if math.floor(hi) != k or lo == k:
        return None
    ends = [min(t - k, k + 1 - t) for t in (lo, hi)]
    top = Fraction(1, 2) if lo <= k + Fraction(1, 2) <= hi else max(ends)
    return min(ends), top


@dataclass(frozen=True)
class ReductionOutcome:
    """The convergent used and the reduced bound n < new_bound_Y."""

    convergent_index: int
    q: int
    X0: int
    c: Fraction
    delta: Fraction
    upper: CertifiedReal
    new_bound_Y: int
    checked_cases: tuple[tuple[int, int], ...]
    rejected: tuple[tuple[int, tuple[tuple[int, int], ...]], ...] = ()
    norm_precision: int = REDUCTION_PRECISION

    @property
    def max_n(self) -> int:
        return self.new_bound_Y - 1

    def to_json(self) -> dict:
        return {
            "convergent_index": self.convergent_index,
            "q": str(self.q),
            "X0": str(self.X0),
            "c": str(self.c),
            "delta": str(self.delta),
            "upper": self.upper.to_json(12),
            "new_bound": self.new_bound_Y,
            "checked_cases": [list(p) for p in self.checked_cases],
            "rejected_convergents": [
                {"index": i, "failing_cases": [list(p) for p in cases]} for i, cases in self.rejected
            ],
            "norm_precision": self.norm_precision,
        }


def psi_value(d: int, f: int, precision: int) -> CertifiedReal:
    """log(d / (9 c_alpha^f)) / log 10."""
    k = compute_constants(precision)
    return k.log_eta1(d, f) / k.log_10


def _norm_checks(q: int, X0: int, cases, precision: int) -> tuple[list, int]:
    """Failing cases for one q, doubling precision on undecided comparisons."""
    threshold = Fraction(2 * X0, q)
    failing = []
    for d, f in cases:
        digits = precision
        while True:
            enclosure = distance_to_integer(q * psi_value(d, f, digits))
            if enclosure is not None and (enclosure[0] > threshold or enclosure[1] < threshold):
                break
            if digits >= MAX_PRECISION:
                raise PrecisionError(f"||q psi|| for q={q}, (d, f) = ({d}, {f}) undecided at {digits} digits")
            digits = min(2 * digits, MAX_PRECISION)
        precision = max(precision, digits)
        if enclosure[1] < threshold:
            failing.append((d, f))
    return failing, precision


def reduce_inhomogeneous(
    problem: ReductionProblem,
    cf: ContinuedFraction,
    d_range: Iterable[int],
    f_range: Iterable[int],
) -> ReductionOutcome:
    """Use the first convergent q > X0 with ||q psi|| > 2 X0 / q for every (d, f)."""
    cases = tuple((d, f) for f in f_range for d in d_range)
    precision = problem.theta2.precision
    rejected = []
    for index, (_, q) in enumerate(cf.convergents):
        if q <= problem.X0:
            continue
        failing, precision = _norm_checks(q, problem.X0, cases, precision)
        if failing:
            rejected.append((index, tuple(failing)))
            continue
        upper = (
            CertifiedReal.of(q * q, precision) * problem.c / (problem.theta2 * problem.X0)
        ).log() / problem.delta
        return ReductionOutcome(
            convergent_index=index,
            q=q,
            X0=problem.X0,
            c=problem.c,
            delta=problem.delta,
            upper=upper,
            new_bound_Y=math.ceil(upper.upper),
            checked_cases=cases,
            rejected=tuple(rejected),
            norm_precision=precision,
        )
    last = rejected[-1][1] if rejected else ()
    raise ReductionError(
        f"no convergent among {cf.depth} passes the norm condition for X0={problem.X0}; "
        f"failing cases at the last one tried: {list(last)}"
    )


# -- the two-stage chain -------------------------------------------------------
def factor_counts(equation: Equation, caps: tuple[int, int] | None = None) -> list[int]:
    k_max, l_max = baker._caps(equation, caps)
    return sorted({p.length for p in patterns(equation, k_max, l_max)})


@dataclass(frozen=True)
class ChainResult:
    """Initial bound and both reductions for one equation and one Gamma bound."""

    equation: Equation
    gamma: baker.GammaBound
    initial: baker.InitialBound
    threshold_a: Fraction
    lambda_c: int
    admissibility: dict[str, bool]
    stage1: ReductionOutcome
    stage2: ReductionOutcome
    precision: int
    cf: ContinuedFraction = field(repr=False)

    @property
    def final_bound(self) -> int:
        return self.stage2.new_bound_Y

    @property
    def chain(self) -> list[int]:
        return [self.initial.bound, self.stage1.new_bound_Y, self.stage2.new_bound_Y]

    def self_consistent(self, caps: tuple[int, int] | None = None) -> bool:
        return (
            self.stage1.X0 == baker.max_exponent(self.equation, self.initial.bound - 1, caps)
            and self.stage2.X0 == baker.max_exponent(self.equation, self.stage1.new_bound_Y - 1, caps)
            and self.stage2.new_bound_Y <= self.stage1.new_bound_Y <= self.initial.bound
        )

    def published(self) -> dict:
        eq = self.equation
        q1, q2 = for_equation(STAGE1_Q, eq), for_equation(STAGE2_Q, eq)
        return {
            "stage1_X0": for_equation(STAGE1_X0, eq),
            "stage1_q": {"index": q1[0], "q": str(q1[1])},
            "stage1_bound": for_equation(STAGE1_BOUND, eq),
            "stage2_X0": for_equation(STAGE2_X0, eq),
            "stage2_q": {"index": q2[0], "q": str(q2[1])},
            "stage2_bound": for_equation(STAGE2_BOUND, eq),
        }

    def to_json(self) -> dict:
        return {
            "equation": self.equation.value,
            "gamma_bound": self.gamma.to_json(),
            "initial_bound": self.initial.to_json(),
            "gamma_threshold": {"a": str(self.threshold_a), "n_from": self.gamma.valid_from},
            "lambda_coefficient": self.lambda_c,
            "admissibility": dict(sorted(self.admissibility.items())),
            "stage1": self.stage1.to_json(),
            "stage2": self.stage2.to_json(),
            "chain": [str(b) for b in self.chain],
            "final_bound": self.final_bound,
            "precision": self.precision,
        }


def two_stage_reduce(
    equation: Equation,
    derivation: str = baker.EXPANSION,
    precision: int = REDUCTION_PRECISION,
    caps: tuple[int, int] | None = None,
    depth: int = DEFAULT_DEPTH,
) -> ChainResult:
    """Matveev bound, then two inhomogeneous reductions with delta = 0.6.

    Stage one takes X0 = max(m, alpha-exponent) at n = initial bound - 1,
    stage two the same at n = stage-one bound - 1.
    """
    constants = compute_constants(precision)
    if derivation == baker.EXPANSION:
        gamma = baker.gamma_bound(equation, constants=constants, caps=caps)
    elif derivation == baker.AUDITED:
        gamma = baker.audited_gamma_bound(equation, constants=constants, caps=caps)
    else:
        raise ValueError(f"unknown Gamma bound derivation {derivation!r}")
    initial = baker.initial_bound(equation, gamma, constants, caps)
    a, n0 = baker._threshold(equation)
    lam = lambda_coefficient(gamma.coefficient, a, precision)
    checks = {
        "|Gamma| < a from the threshold on": gamma.value(n0, constants).is_lt(a),
        "rate log alpha > delta": (gamma.decay_rate * constants.log_alpha).is_gt(DELTA),
    }
    if not all(checks.values()):
        failed = sorted(k for k, v in checks.items() if not v)
        raise VerificationError(f"{equation.name}: reduction hypotheses fail: {failed}")
    cf = cf_expand(theta_source(), depth, precision=precision)
    d_range = range(1, 10)
    f_range = factor_counts(equation, caps)

    def stage(n_cap: int) -> ReductionOutcome:
        X0 = baker.max_exponent(equation, n_cap, caps)
        problem = tribonacci_problem(lam, X0, precision)
        return reduce_inhomogeneous(problem, cf, d_range, f_range)

    stage1 = stage(initial.bound - 1)
    stage2 = stage(stage1.new_bound_Y - 1)
    if not stage2.new_bound_Y <= stage1.new_bound_Y <= initial.bound:
        raise VerificationError(f"{equation.name}: reductions did not decrease the bound")
    return ChainResult(
        equation=equation,
        gamma=gamma,
        initial=initial,
        threshold_a=a,
        lambda_c=lam,
        admissibility=checks,
        stage1=stage1,
        stage2=stage2,
        precision=precision,
        cf=cf,
    )


def x0_note(value: int) -> str:
    return sci(Fraction(value), 4, "up")
