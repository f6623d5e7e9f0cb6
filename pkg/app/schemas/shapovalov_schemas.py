"""
Pydantic schemas for oracle reports.
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from app.models.verma_model import GradedPiece, KKComparison, ShapovalovReport, SingularVector
from app.models.weight_model import Weight
from app.schemas.common_schemas import HorizonSchema, WeightJSON, format_scalar, weight_json


class OracleRequest(BaseModel):
    root_system: str = Field(..., description="Dynkin code, rank ≤ 3")
    level: str = Field("generic", description='Level as "p/q" or "generic"')
    highest_weight: WeightJSON = Field(..., description="Highest weight λ")
    depth_cap: Optional[int] = Field(None, ge=0, description="Loop depth horizon")
    height_cap: Optional[int] = Field(None, ge=0, description="Finite height horizon")
    convention: str = Field("reflection", description="Step convention of the linkage side")


class TermSchema(BaseModel):
    monomial: str
    coefficient: str


class SingularVectorSchema(BaseModel):
    depth: int
    weight: WeightJSON
    kernel_dim: int
    vectors: List[List[TermSchema]]

    @classmethod
    def from_singular(cls, sv: SingularVector) -> "SingularVectorSchema":
        return cls(
            depth=sv.depth,
            weight=weight_json(sv.weight),
            kernel_dim=sv.kernel_dim,
            vectors=[
                [
                    TermSchema(monomial=str(mono), coefficient=format_scalar(value))
                    for mono, value in sorted(vector.items(), key=lambda item: str(item[0]))
                ]
                for vector in sv.vectors
            ],
        )


class SingularVectorsResponse(BaseModel):
    root_system: str
    level: str
    highest_weight: WeightJSON
    horizon: HorizonSchema
    singular: List[SingularVectorSchema]


class GradedPieceSchema(BaseModel):
    depth: int
    weight: WeightJSON
    basis: List[str]
    matrix: List[List[str]] = Field(..., description="Contravariant form on the PBW basis")
    determinant: str
    kernel_dim: int
    kernel_basis: List[List[str]]

    @classmethod
    def from_piece(cls, piece: GradedPiece) -> "GradedPieceSchema":
        return cls(
            depth=piece.depth,
            weight=weight_json(piece.weight),
            basis=[str(mono) for mono in piece.basis],
            matrix=[[format_scalar(x) for x in row] for row in piece.matrix],
            determinant=format_scalar(piece.determinant),
            kernel_dim=piece.kernel_dim,
            kernel_basis=[[format_scalar(x) for x in row] for row in piece.kernel_basis],
        )


class ShapovalovReportResponse(BaseModel):
    root_system: str
    level: str
    highest_weight: WeightJSON
    horizon: HorizonSchema
    pieces: List[GradedPieceSchema]
    singular: List[SingularVectorSchema]
    l0_by_depth: Dict[str, str]

    @classmethod
    def from_report(cls, code: str, level: str, report: ShapovalovReport) -> "ShapovalovReportResponse":
        return cls(
            root_system=code,
            level=level,
            highest_weight=weight_json(report.highest_weight),
            horizon=HorizonSchema(
                depth_cap=report.horizon.depth_cap, height_cap=report.horizon.height_cap
            ),
            pieces=[GradedPieceSchema.from_piece(piece) for piece in report.pieces],
            singular=[SingularVectorSchema.from_singular(sv) for sv in report.singular],
            l0_by_depth={str(d): format_scalar(v) for d, v in sorted(report.l0_by_depth.items())},
        )


class KeyedWeightSchema(BaseModel):
    """An affine weight identified by (finite weight, loop depth)."""
    weight: WeightJSON
    depth: int


def _keyed(items: List[Tuple[Weight, int]]) -> List[KeyedWeightSchema]:
    return [KeyedWeightSchema(weight=weight_json(w), depth=d) for w, d in items]


class VerifyKKResponse(BaseModel):
    root_system: str
    level: str
    highest_weight: WeightJSON
    singular: List[KeyedWeightSchema]
    predicted: List[KeyedWeightSchema]
    missing: List[KeyedWeightSchema] = Field(..., description="Predicted but not found by the oracle")
    extra: List[KeyedWeightSchema] = Field(..., description="Found by the oracle but not predicted")
    horizon: HorizonSchema
    l0_convention: str
    agrees: bool

    @classmethod
    def from_comparison(cls, code: str, level: str, report: KKComparison) -> "VerifyKKResponse":
        return cls(
            root_system=code,
            level=level,
            highest_weight=weight_json(report.highest_weight),
            singular=_keyed(report.singular),
            predicted=_keyed(report.predicted),
            missing=_keyed(report.missing),
            extra=_keyed(report.extra),
            horizon=HorizonSchema(
                depth_cap=report.horizon.depth_cap, height_cap=report.horizon.height_cap
            ),
            l0_convention=report.l0_convention,
            agrees=report.agrees,
        )
