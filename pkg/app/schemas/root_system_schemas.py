"""
Pydantic schema describing a root system.
"""
from typing import Dict, List

from pydantic import BaseModel, Field

from app.models.root_system_model import RootSystem
from app.schemas.common_schemas import WeightJSON, weight_json
from app.services.root_system_service import root_length_counts


class RootSystemResponse(BaseModel):
    """Root system summary in fundamental-weight coordinates."""
    code: str = Field(..., description="Dynkin code")
    rank: int
    cartan_matrix: List[List[int]]
    simple_roots: List[WeightJSON]
    positive_roots: List[WeightJSON]
    rho: WeightJSON
    highest_root: WeightJSON
    coxeter_number: int
    dual_coxeter_number: int
    weyl_order: int
    root_lengths: Dict[str, int] = Field(..., description="Number of roots per squared length")

    @classmethod
    def from_root_system(cls, rs: RootSystem) -> "RootSystemResponse":
        return cls(
            code=rs.code,
            rank=rs.rank,
            cartan_matrix=[list(row) for row in rs.cartan_matrix],
            simple_roots=[weight_json(a) for a in rs.simple_roots],
            positive_roots=[weight_json(b) for b in rs.positive_roots],
            rho=weight_json(rs.rho),
            highest_root=weight_json(rs.highest_root),
            coxeter_number=rs.coxeter_number,
            dual_coxeter_number=rs.dual_coxeter,
            weyl_order=rs.weyl_order,
            root_lengths=root_length_counts(rs),
        )
