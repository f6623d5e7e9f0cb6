"""
Pydantic schemas for (⋆)-certificates, linkage results and block partitions.
"""
from typing import List, Optional

from pydantic import BaseModel, Field

from app.models.chain_model import (
    Block,
    LinkageClass,
    LinkMove,
    LinkResult,
    MoveKind,
    StarChain,
    StarStep,
    StepConvention,
    SubquotientCandidate,
)
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.schemas.common_schemas import QueryParams, WeightJSON, parse_weight_json, weight_json
from app.services.linkage_service import verify_chain


class StarStepSchema(BaseModel):
    beta: WeightJSON = Field(..., description="Root β of the step")
    m: int = Field(..., ge=0, description="Loop index m")
    n: int = Field(..., gt=0, description="Realised positive integer n")
    to: WeightJSON = Field(..., description="Weight reached by the step")


class StarChainSchema(BaseModel):
    """Certificate JSON: {"source": w, "steps": [{"beta", "m", "n", "to"}]}."""
    source: WeightJSON
    steps: List[StarStepSchema] = Field(default_factory=list)

    @classmethod
    def from_chain(cls, chain: StarChain) -> "StarChainSchema":
        return cls(
            source=weight_json(chain.source),
            steps=[
                StarStepSchema(beta=weight_json(s.beta), m=s.m, n=s.n, to=weight_json(s.target))
                for s in chain.steps
            ],
        )

    def to_chain(self) -> StarChain:
        source = parse_weight_json(self.source)
        point = source
        steps = []
        for item in self.steps:
            target = parse_weight_json(item.to)
            steps.append(StarStep(
                beta=parse_weight_json(item.beta), m=item.m, n=item.n, source=point, target=target,
            ))
            point = target
        return StarChain(source=source, target=point, steps=tuple(steps))

    def verify(self, rs: RootSystem, level: Level, convention: StepConvention) -> bool:
        """Re-run the independent verifier on the parsed certificate."""
        return verify_chain(rs, level, self.to_chain(), convention)


class StarPairRequest(QueryParams):
    source: WeightJSON = Field(..., description="Weight λ")
    target: WeightJSON = Field(..., description="Weight μ")


class CheckStarResponse(BaseModel):
    root_system: str
    level: str
    convention: StepConvention
    found: bool = Field(..., description="Whether a certificate exists within the bounds")
    certificate: Optional[StarChainSchema] = None
    loop_depth: Optional[int] = Field(None, description="Loop depth of the certificate")


class LinkMoveSchema(BaseModel):
    kind: MoveKind
    source: WeightJSON
    target: WeightJSON
    weyl_index: Optional[int] = None
    step: Optional[StarStepSchema] = None

    @classmethod
    def from_move(cls, move: LinkMove) -> "LinkMoveSchema":
        step = None
        if move.step is not None:
            step = StarStepSchema(
                beta=weight_json(move.step.beta),
                m=move.step.m,
                n=move.step.n,
                to=weight_json(move.step.target),
            )
        return cls(
            kind=move.kind,
            source=weight_json(move.source),
            target=weight_json(move.target),
            weyl_index=move.weyl_index,
            step=step,
        )


class LinkResponse(BaseModel):
    root_system: str
    level: str
    linked: bool
    trail: List[LinkMoveSchema] = Field(default_factory=list)

    @classmethod
    def from_result(cls, rs: RootSystem, level: Level, result: LinkResult) -> "LinkResponse":
        return cls(
            root_system=rs.code,
            level=level.to_json(),
            linked=result.linked,
            trail=[LinkMoveSchema.from_move(move) for move in result.trail],
        )


class WeightRequest(QueryParams):
    weight: WeightJSON = Field(..., description="Weight λ")


class LinkageClassResponse(BaseModel):
    root_system: str
    level: str
    weights: List[WeightJSON]
    truncated: bool = Field(..., description="True when the move bound cut the closure off")
    finite_length_regime: bool

    @classmethod
    def from_class(cls, rs: RootSystem, level: Level, result: LinkageClass) -> "LinkageClassResponse":
        return cls(
            root_system=rs.code,
            level=level.to_json(),
            weights=[weight_json(w) for w in result.weights],
            truncated=result.truncated,
            finite_length_regime=result.finite_length_regime,
        )


class SubquotientSchema(BaseModel):
    weight: WeightJSON
    loop_depth: int
    certificate: StarChainSchema

    @classmethod
    def from_candidate(cls, candidate: SubquotientCandidate) -> "SubquotientSchema":
        return cls(
            weight=weight_json(candidate.weight),
            loop_depth=candidate.loop_depth,
            certificate=StarChainSchema.from_chain(candidate.chain),
        )


class SubquotientsResponse(BaseModel):
    root_system: str
    level: str
    highest_weight: WeightJSON
    candidates: List[SubquotientSchema]


class BlockSchema(BaseModel):
    representative: WeightJSON
    members: List[WeightJSON]

    @classmethod
    def from_block(cls, block: Block) -> "BlockSchema":
        return cls(
            representative=weight_json(block.representative),
            members=[weight_json(w) for w in block.members],
        )


class BlockPartitionRequest(QueryParams):
    weights: List[WeightJSON] = Field(default_factory=list, description="Weights to partition")
    box: Optional[int] = Field(None, ge=0, description="Use every integral weight with |coordinate| ≤ box")
    relation: str = Field("linked", description="linked, coarse or rational")
    p: Optional[int] = None
    q: Optional[int] = None
    scale: int = Field(1, gt=0, description="Coroot lattice scale for the coarse relation")


class BlockPartitionResponse(BaseModel):
    root_system: str
    relation: str
    blocks: List[BlockSchema]
