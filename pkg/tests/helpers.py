"""
Small constructors shared by the test modules.
"""
from fractions import Fraction
import random

from app.models.level_model import Level
from app.models.weight_model import Weight


def w(*coords) -> Weight:
    """Weight from ints, Fractions or "p/q" strings."""
    return Weight.of(coords)


def level(text: str) -> Level:
    return Level.parse(text)


def random_weight(rng: random.Random, rank: int, spread: int = 8, denominators=(1, 2, 3)) -> Weight:
    return Weight.of(Fraction(rng.randint(-spread, spread), rng.choice(denominators)) for _ in range(rank))


def random_integral_weight(rng: random.Random, rank: int, spread: int = 6) -> Weight:
    return Weight.of(rng.randint(-spread, spread) for _ in range(rank))
