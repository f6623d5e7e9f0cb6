"""
Verma-side models: affine generators, PBW monomials, states and oracle reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from app.models.weight_model import Weight


@dataclass(frozen=True, order=True)
class AffineBasisElement:
    """
    x t^n for a basis element x of g, or the central element K.

    Ordering is the global PBW order: loop degree first, then the basis
    index of g (positive roots by height, Cartan, negative roots by height).
    """

    degree: int
    index: Optional[int]
    label: str = field(default="", compare=False)

    @classmethod
    def central(cls) -> "AffineBasisElement":
        return cls(degree=0, index=None, label="K")

    @property
    def is_central(self) -> bool:
        return self.index is None

    @property
    def grading(self) -> int:
        return -self.degree

    def __str__(self) -> str:
        if self.is_central:
            return "K"
        if self.degree == 0:
            return self.label
        return f"{self.label}t^{self.degree}"


@dataclass(frozen=True)
class PBWMonomial:
    """Ordered product of lowering generators applied to the highest-weight vector."""

    factors: Tuple[AffineBasisElement, ...]
    depth: int
    weight: Weight

    def __str__(self) -> str:
        if not self.factors:
            return "v"
        return "·".join(str(f) for f in self.factors) + "·v"


@dataclass
class VermaState:
    """A vector of one graded piece, as coefficients on PBW monomials."""

    highest_weight: Weight
    coefficients: Dict[PBWMonomial, Any]


@dataclass
class GradedPiece:
    depth: int
    weight: Weight
    basis: List[PBWMonomial]
    matrix: List[List[Any]]
    determinant: Any
    kernel_dim: int
    kernel_basis: List[List[Any]]


@dataclass
class SingularVector:
    depth: int
    weight: Weight
    vectors: List[Dict[PBWMonomial, Any]]

    @property
    def kernel_dim(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class Horizon:
    depth_cap: int
    height_cap: int


@dataclass
class ShapovalovReport:
    highest_weight: Weight
    horizon: Horizon
    pieces: List[GradedPiece]
    singular: List[SingularVector]
    l0_by_depth: Dict[int, Any]


@dataclass
class KKComparison:
    """Oracle versus linkage, keyed by (weight, loop depth)."""

    highest_weight: Weight
    horizon: Horizon
    singular: List[Tuple[Weight, int]]
    predicted: List[Tuple[Weight, int]]
    missing: List[Tuple[Weight, int]]
    extra: List[Tuple[Weight, int]]
    l0_convention: str

    @property
    def agrees(self) -> bool:
        return not self.missing and not self.extra
