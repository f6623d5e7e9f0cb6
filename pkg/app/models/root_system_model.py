"""
Root system model: Cartan data, roots, invariant form and Weyl group of a
finite irreducible root system.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Tuple

from app.models.weight_model import Weight

Matrix = Tuple[Tuple[int, ...], ...]
RationalMatrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    Immutable root-system data in fundamental-weight coordinates.

    The Cartan matrix follows cartan_matrix[i][j] = (α_i, α_j∨), so simple
    root i is row i. Weyl elements are integer matrices acting on row
    vectors of fundamental-weight coordinates. Two instances compare equal
    iff they describe the same Dynkin type.
    """

    series: str
    rank: int
    cartan_matrix: Matrix
    simple_roots: Tuple[Weight, ...]
    roots: Tuple[Weight, ...]
    positive_roots: Tuple[Weight, ...]
    form_gram: RationalMatrix
    rho: Weight
    dual_coxeter: int
    weyl_elements: Tuple[Matrix, ...] = field(repr=False)
    # derived data
    inverse_cartan: RationalMatrix = field(repr=False)
    weight_gram: RationalMatrix = field(repr=False)
    highest_root: Weight = field(repr=False)
    root_set: FrozenSet[Weight] = field(repr=False)
    positive_set: FrozenSet[Weight] = field(repr=False)
    root_norms: Dict[Weight, Fraction] = field(repr=False)
    coroot_coordinates: Dict[Weight, Tuple[int, ...]] = field(repr=False)

    @property
    def code(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def weyl_order(self) -> int:
        return len(self.weyl_elements)

    @property
    def coxeter_number(self) -> int:
        return len(self.roots) // self.rank

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and other.code == self.code

    def __hash__(self) -> int:
        return hash(self.code)

    def is_root(self, x: Weight) -> bool:
        return x in self.root_set

    def root_index(self, beta: Weight) -> int:
        return self.roots.index(beta)

    def is_positive(self, beta: Weight) -> bool:
        return beta in self.positive_set

    def root_coordinates(self, x: Weight) -> Tuple[Fraction, ...]:
        """Coordinates of x in the simple-root basis (x · A⁻¹)."""
        n = self.rank
        return tuple(
            sum((x.coords[k] * self.inverse_cartan[k][j] for k in range(n)), Fraction(0))
            for j in range(n)
        )

    def height(self, x: Weight) -> Fraction:
        return sum(self.root_coordinates(x), Fraction(0))

    def simple_norm(self, i: int) -> Fraction:
        return self.form_gram[i][i]
