"""
Weight model: a point of h* in fundamental-weight coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple, Union
import re

from app.exceptions import DimensionMismatchError, InvalidWeightError

RationalLike = Union[int, Fraction, str]

# integers and "p/q" only; decimals and exponents are not exact inputs
RATIONAL_TEXT = re.compile(r"[+-]?\d+(/\d+)?")


def to_fraction(value: RationalLike) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InvalidWeightError(f"Floats are not exact: {value!r}")
    text = str(value).strip()
    if not RATIONAL_TEXT.fullmatch(text):
        raise InvalidWeightError(f"Not an exact rational: {value!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidWeightError(f"Not an exact rational: {value!r}") from exc


def format_fraction(value: Fraction) -> str:
    """Canonical lowest-terms "p/q"; zero prints as "0"."""
    value = Fraction(value)
    if not value:
        return "0"
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Weight:
    """
    Exact rational coordinates in the fundamental-weight basis.

    Ordering is lexicographic on the coordinates, which is the canonical
    sort order for every emitted weight list.
    """

    coords: Tuple[Fraction, ...]

    @classmethod
    def of(cls, values: Iterable[RationalLike]) -> "Weight":
        return cls(tuple(to_fraction(v) for v in values))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((Fraction(0),) * rank)

    @classmethod
    def parse(cls, text: str) -> "Weight":
        """Parse comma-separated rationals, e.g. "3/1" or "1/2,-1"."""
        if text is None or not str(text).strip():
            raise InvalidWeightError("Empty weight")
        return cls.of(part for part in str(text).split(","))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def _check(self, other: "Weight") -> None:
        if self.rank != other.rank:
            raise DimensionMismatchError(
                f"Weights of length {self.rank} and {other.rank} cannot be combined"
            )

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def scale(self, factor: RationalLike) -> "Weight":
        c = to_fraction(factor)
        return Weight(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coords)

    def to_json(self) -> List[str]:
        return [format_fraction(a) for a in self.coords]

    def to_text(self) -> str:
        return ",".join(self.to_json())

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_json()) + ")"
