"""
Level model: the scalar κ, either an exact nonzero rational or formal-generic.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

import sympy

from app.exceptions import CriticalLevelError, InvalidLevelError
from app.models.weight_model import RATIONAL_TEXT

# Formal level symbol used for every generic-level expression.
KAPPA = sympy.Symbol("κ")


class LevelKind(str, Enum):
    RATIONAL = "rational"
    GENERIC = "generic"


@dataclass(frozen=True)
class Level:
    """
    The level κ.

    A generic level is treated as transcendental over ℚ, so r + sκ is an
    integer only when s = 0 and r is an integer.
    """

    kind: LevelKind
    value: Optional[Fraction] = None

    def __post_init__(self):
        if self.kind == LevelKind.GENERIC:
            if self.value is not None:
                raise InvalidLevelError("A generic level carries no value")
            return
        if self.value is None:
            raise InvalidLevelError("A rational level needs a value")
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", Fraction(self.value))
        if self.value == 0:
            raise CriticalLevelError("Critical level κ = 0 is excluded")

    @classmethod
    def generic(cls) -> "Level":
        return cls(LevelKind.GENERIC)

    @classmethod
    def rational(cls, value) -> "Level":
        return cls(LevelKind.RATIONAL, Fraction(value))

    @classmethod
    def parse(cls, text: str) -> "Level":
        """Parse "p/q", an integer, or "generic"; decimals are rejected."""
        raw = "" if text is None else str(text).strip()
        if raw.lower() == "generic":
            return cls.generic()
        if not RATIONAL_TEXT.fullmatch(raw):
            raise InvalidLevelError(f"Not a level: {text!r}")
        try:
            value = Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidLevelError(f"Not a level: {text!r}") from exc
        return cls.rational(value)

    @property
    def is_generic(self) -> bool:
        return self.kind == LevelKind.GENERIC

    @property
    def is_rational(self) -> bool:
        return self.kind == LevelKind.RATIONAL

    @property
    def p(self) -> int:
        self._require_rational()
        return self.value.numerator

    @property
    def q(self) -> int:
        self._require_rational()
        return self.value.denominator

    def _require_rational(self) -> None:
        if not self.is_rational:
            raise InvalidLevelError("Operation needs a rational level")

    def as_expr(self) -> sympy.Expr:
        if self.is_generic:
            return KAPPA
        return sympy.Rational(self.value.numerator, self.value.denominator)

    def integer_value(self, r: Fraction, s: Fraction) -> Optional[int]:
        """The integer r + sκ, or None when it is not an integer."""
        if self.is_generic:
            if s != 0 or r.denominator != 1:
                return None
            return int(r)
        total = r + s * self.value
        if total.denominator != 1:
            return None
        return int(total)

    def is_finite_length_regime(self) -> bool:
        """κ ∉ ℚ≥0."""
        return self.is_generic or self.value < 0

    def to_json(self) -> str:
        if self.is_generic:
            return "generic"
        return f"{self.value.numerator}/{self.value.denominator}"

    def __str__(self) -> str:
        return self.to_json()
