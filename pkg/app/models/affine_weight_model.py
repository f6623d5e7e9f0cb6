"""
Affine weight model: λ + (level coefficient)Λ₀ + (delta coefficient)δ.
"""
from dataclasses import dataclass

import sympy

from app.models.weight_model import Weight


@dataclass(frozen=True)
class AffineWeight:
    finite_part: Weight
    level_coeff: sympy.Expr
    delta_coeff: sympy.Expr

    def to_json(self) -> dict:
        return {
            "finite": self.finite_part.to_json(),
            "level": str(self.level_coeff),
            "delta": str(self.delta_coeff),
        }
