"""
Chain models: single (⋆)-steps, certificates, search bounds and search results.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from app.exceptions import LinkageToolkitError
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight


class StepConvention(str, Enum):
    """
    Target of a (⋆)-step (β, m) with realised integer n.

    REFLECTION: λ − nβ, the finite part of the affine reflection in β + mδ.
    LITERAL: r_β(λ) + κmβ∨. The two agree when m = 0.
    """

    REFLECTION = "reflection"
    LITERAL = "literal"


@dataclass(frozen=True)
class StarStep:
    beta: Weight
    m: int
    n: int
    source: Weight
    target: Weight

    @property
    def loop_depth(self) -> int:
        return self.n * self.m


@dataclass(frozen=True)
class StarChain:
    """A certificate for (⋆): composable steps from source to target."""

    source: Weight
    target: Weight
    steps: Tuple[StarStep, ...] = ()

    def __post_init__(self):
        point = self.source
        for step in self.steps:
            if step.source != point:
                raise LinkageToolkitError("Chain steps do not compose")
            point = step.target
        if point != self.target:
            raise LinkageToolkitError("Chain does not end at its target")

    @classmethod
    def empty(cls, weight: Weight) -> "StarChain":
        return cls(weight, weight, ())

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def loop_depth(self) -> int:
        return sum(step.loop_depth for step in self.steps)

    def points(self) -> List[Weight]:
        return [self.source] + [step.target for step in self.steps]


@dataclass(frozen=True)
class BlockQuery:
    """Search bounds for every bounded linkage computation."""

    rs: RootSystem
    level: Level
    max_chain_len: int
    max_m: int
    weight_box: Optional[int] = None
    max_loop_depth: Optional[int] = None
    max_height: Optional[int] = None
    allow_empty_chain: bool = False
    step_convention: StepConvention = StepConvention.REFLECTION

    def __post_init__(self):
        if self.max_chain_len < 0:
            raise LinkageToolkitError("max_chain_len must be nonnegative")
        if self.max_m < 0:
            raise LinkageToolkitError("max_m must be nonnegative")
        for name in ("weight_box", "max_loop_depth", "max_height"):
            bound = getattr(self, name)
            if bound is not None and bound < 0:
                raise LinkageToolkitError(f"{name} must be nonnegative")

    @property
    def effective_max_m(self) -> int:
        """Generic levels admit only m = 0."""
        return 0 if self.level.is_generic else self.max_m

    def in_box(self, x: Weight) -> bool:
        if self.weight_box is None:
            return True
        return all(abs(c) <= self.weight_box for c in x.coords)


class MoveKind(str, Enum):
    WEYL = "weyl"
    FORWARD = "forward"
    REVERSE = "reverse"


@dataclass(frozen=True)
class LinkMove:
    """One elementary move of a linkage trail."""

    kind: MoveKind
    source: Weight
    target: Weight
    weyl_index: Optional[int] = None
    step: Optional[StarStep] = None


@dataclass(frozen=True)
class LinkResult:
    linked: bool
    trail: Tuple[LinkMove, ...] = ()


@dataclass(frozen=True)
class LinkageClass:
    weights: Tuple[Weight, ...]
    truncated: bool
    finite_length_regime: bool = True


@dataclass(frozen=True)
class SubquotientCandidate:
    """μ with [λ + ρ, μ + ρ] satisfying (⋆), keyed by (μ, loop depth)."""

    weight: Weight
    chain: StarChain = field(compare=False)

    @property
    def loop_depth(self) -> int:
        return self.chain.loop_depth


@dataclass(frozen=True)
class Block:
    representative: Weight
    members: Tuple[Weight, ...]
