"""
Pydantic schemas for charge quantities.
"""
from typing import Optional

from pydantic import BaseModel, Field

from app.models.affine_weight_model import AffineWeight
from app.schemas.common_schemas import WeightJSON, weight_json


class ChargeRequest(BaseModel):
    root_system: str = Field(..., description="Dynkin code")
    level: str = Field("generic", description='Level as "p/q" or "generic"')
    weight: WeightJSON = Field(..., description="Weight λ (or χ for L₀ predictions)")
    depth: int = Field(0, ge=0, description="Grading level N for L₀ predictions")
    convention: Optional[str] = Field(None, description='L₀ convention, "aw" or "ph"')


class ScalarResponse(BaseModel):
    """One exact value: a rational, or an expression in κ at the generic level."""
    quantity: str
    root_system: str
    level: Optional[str] = None
    weight: WeightJSON
    value: str


class AffineWeightResponse(BaseModel):
    finite: WeightJSON
    level: str = Field(..., description="Coefficient of Λ₀, κ − h∨")
    delta: str = Field(..., description="Coefficient of δ")

    @classmethod
    def from_affine_weight(cls, weight: AffineWeight) -> "AffineWeightResponse":
        return cls(
            finite=weight_json(weight.finite_part),
            level=str(weight.level_coeff),
            delta=str(weight.delta_coeff),
        )


class L0Response(BaseModel):
    root_system: str
    level: str
    weight: WeightJSON
    depth: int
    convention: str
    predicted: str = Field(..., description="Predicted eigenvalue from the charge formulas")
    oracle: Optional[str] = Field(None, description="Sugawara L₀ on the highest-weight vector, plus depth")
