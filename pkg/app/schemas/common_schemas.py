"""
Shared pydantic pieces: weights, levels, exact scalars and bounded queries.
"""
from fractions import Fraction
from typing import Any, List, Optional

import sympy
from pydantic import BaseModel, Field

from app.models.chain_model import BlockQuery, StepConvention
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight
from app.services.linkage_service import default_query

# Weights travel as lists of canonical rational strings, e.g. ["1/2", "-1"].
WeightJSON = List[str]


def weight_json(weight: Weight) -> WeightJSON:
    return weight.to_json()


def parse_weight_json(values: WeightJSON) -> Weight:
    return Weight.of(values)


def format_scalar(value: Any) -> str:
    """Exact text for a Fraction, a sympy expression or a QQ(κ) element."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, sympy.Basic):
        return str(sympy.factor(value))
    if hasattr(value, "as_expr"):
        return str(sympy.factor(value.as_expr()))
    return str(value)


class HorizonSchema(BaseModel):
    depth_cap: int = Field(..., description="Largest loop depth d compared")
    height_cap: int = Field(..., description="Largest ht(λ − ν) compared")


class QueryParams(BaseModel):
    """Search bounds shared by every bounded linkage request."""
    root_system: str = Field(..., description="Dynkin code such as A1 or B2")
    level: str = Field(..., description='Level as "p/q" or "generic"')
    max_chain_len: Optional[int] = Field(None, ge=0, description="Longest chain or trail searched")
    max_m: Optional[int] = Field(None, ge=0, description="Largest loop index m of a step")
    weight_box: Optional[int] = Field(None, ge=0, description="Bound on |coordinate| of visited weights")
    max_loop_depth: Optional[int] = Field(None, ge=0, description="Bound on the loop depth of a chain")
    convention: StepConvention = Field(StepConvention.REFLECTION, description="Target of an affine step")
    allow_empty_chain: Optional[bool] = Field(None, description="Let [λ, λ] satisfy (⋆) by the empty chain")

    def build_query(self, rs: RootSystem, level: Level) -> BlockQuery:
        return default_query(
            rs,
            level,
            max_chain_len=self.max_chain_len,
            max_m=self.max_m,
            weight_box=self.weight_box,
            max_loop_depth=self.max_loop_depth,
            allow_empty_chain=self.allow_empty_chain,
            step_convention=self.convention,
        )
