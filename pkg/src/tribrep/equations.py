"""Equation identifiers and shift patterns of consecutive-term products."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator


class Equation(str, enum.Enum):
    EQ1 = "1"  # (T_n+1)...(T_{n+l-1}+1)
    EQ2 = "2"  # (T_n-1)...(T_{n+l-1}-1)
    EQ3 = "3"  # k terms T-1, then l terms T+1
    EQ4 = "4"  # k terms T+1, then l terms T-1
    BGL = "bgl"  # unshifted T_n...T_{n+l-1}

    @classmethod
    def parse(cls, text: str | Equation) -> Equation:
        if isinstance(text, Equation):
            return text
        key = str(text).strip().lower()
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise ValueError(f"unknown equation {text!r}")

    @property
    def mixed(self) -> bool:
        return self in (Equation.EQ3, Equation.EQ4)

    @property
    def order(self) -> Order:
        return _ORDERS[self]


class Order(str, enum.Enum):
    PLUS_ONLY = "PlusOnly"
    MINUS_ONLY = "MinusOnly"
    MINUS_THEN_PLUS = "MinusThenPlus"
    PLUS_THEN_MINUS = "PlusThenMinus"
    UNSHIFTED = "Unshifted"


_ORDERS = {
    Equation.EQ1: Order.PLUS_ONLY,
    Equation.EQ2: Order.MINUS_ONLY,
    Equation.EQ3: Order.MINUS_THEN_PLUS,
    Equation.EQ4: Order.PLUS_THEN_MINUS,
    Equation.BGL: Order.UNSHIFTED,
}


@dataclass(frozen=True)
class ShiftPattern:
    """Signs of the shifts applied to consecutive terms T_n, T_{n+1}, ...

    ``k`` is the length of the leading block of a mixed pattern and ``l`` the
    length of the trailing block; single-block patterns use ``k = 0`` and put
    the block length in ``l``, matching the theorem statements.
    """

    order: Order
    k: int
    l: int  # noqa: E741

    def __post_init__(self) -> None:
        if self.k < 0 or self.l < 0 or self.k + self.l < 1:
            raise ValueError(f"empty or negative block lengths: k={self.k}, l={self.l}")
        mixed = self.order in (Order.MINUS_THEN_PLUS, Order.PLUS_THEN_MINUS)
        if mixed and (self.k < 1 or self.l < 1):
            raise ValueError(f"{self.order.value} needs k >= 1 and l >= 1")
        if not mixed and self.k != 0:
            raise ValueError(f"{self.order.value} is a single block; use k=0")

    @property
    def length(self) -> int:
        return self.k + self.l

    @property
    def plus_count(self) -> int:
        return sum(1 for s in self.shifts() if s > 0)

    @property
    def minus_count(self) -> int:
        return sum(1 for s in self.shifts() if s < 0)

    def shifts(self) -> tuple[int, ...]:
        """Per-factor shift (+1, -1 or 0) in index order."""
        if self.order is Order.PLUS_ONLY:
            return (1,) * self.l
        if self.order is Order.MINUS_ONLY:
            return (-1,) * self.l
        if self.order is Order.UNSHIFTED:
            return (0,) * self.l
        if self.order is Order.MINUS_THEN_PLUS:
            return (-1,) * self.k + (1,) * self.l
        return (1,) * self.k + (-1,) * self.l

    def to_json(self) -> dict:
        return {"order": self.order.value, "k": self.k, "l": self.l}


def pattern(equation: Equation, k: int, l: int) -> ShiftPattern:  # noqa: E741
    return ShiftPattern(Equation.parse(equation).order, k, l)


def patterns(equation: Equation, k_max: int, l_max: int) -> Iterator[ShiftPattern]:
    """All patterns of an equation with 1 <= k <= k_max (mixed only) and 1 <= l <= l_max."""
    equation = Equation.parse(equation)
    if equation.mixed:
        for k in range(1, k_max + 1):
            for l in range(1, l_max + 1):  # noqa: E741
                yield ShiftPattern(equation.order, k, l)
    else:
        for l in range(1, l_max + 1):  # noqa: E741
            yield ShiftPattern(equation.order, 0, l)
