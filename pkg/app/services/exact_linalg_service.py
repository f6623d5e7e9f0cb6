"""
Exact linear algebra over ℚ (rational levels) or ℚ(κ) (generic level),
backed by sympy DomainMatrix.
"""
from fractions import Fraction
from typing import Any, List, Sequence
import logging

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from app.models.level_model import KAPPA, Level

logger = logging.getLogger(__name__)


class ScalarField:
    """
    Coefficient arithmetic for one level.

    Rational levels compute with Fraction and convert to QQ only for matrix
    work; the generic level computes in the fraction field QQ(κ) throughout.
    """

    def __init__(self, level: Level):
        self.level = level
        if level.is_generic:
            self.domain = QQ.frac_field(KAPPA)
            self.kappa = self.domain.from_sympy(KAPPA)
            self.zero = self.domain.zero
            self.one = self.domain.one
        else:
            self.domain = QQ
            self.kappa = level.value
            self.zero = Fraction(0)
            self.one = Fraction(1)

    @property
    def is_generic(self) -> bool:
        return self.level.is_generic

    def scalar(self, value) -> Any:
        """Embed an int or Fraction."""
        value = Fraction(value)
        if self.is_generic:
            return self.domain.from_sympy(sympy.Rational(value.numerator, value.denominator))
        return value

    def coerce(self, value) -> Any:
        """Embed a Fraction, int, sympy number or (generic) sympy expression."""
        if isinstance(value, sympy.Basic):
            if self.is_generic:
                return self.domain.from_sympy(value)
            rational = sympy.Rational(value)
            return Fraction(int(rational.p), int(rational.q))
        if self.is_generic and not isinstance(value, (int, Fraction)):
            return value
        return self.scalar(value)

    def to_domain(self, value) -> Any:
        if self.is_generic:
            return value
        return QQ(value.numerator, value.denominator)

    def from_domain(self, value) -> Any:
        if self.is_generic:
            return value
        return Fraction(int(value.numerator), int(value.denominator))

    def to_sympy(self, value) -> sympy.Expr:
        if self.is_generic:
            return sympy.factor(self.domain.to_sympy(value))
        return sympy.Rational(value.numerator, value.denominator)

    def format(self, value) -> str:
        if self.is_generic:
            return str(self.to_sympy(value))
        return str(value)


def _domain_matrix(rows: Sequence[Sequence[Any]], ncols: int, field: ScalarField) -> DomainMatrix:
    data = [[field.to_domain(x) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), field.domain)


def kernel_basis(rows: Sequence[Sequence[Any]], ncols: int, field: ScalarField) -> List[List[Any]]:
    """
    Basis of {x : Mx = 0} for the matrix with the given rows.

    Args:
        rows: Matrix rows with entries in the field
        ncols: Number of columns (needed when there are no rows)
        field: Coefficient field

    Returns:
        Basis vectors as lists of field elements
    """
    if ncols == 0:
        return []
    if not rows:
        return [[field.one if i == j else field.zero for j in range(ncols)] for i in range(ncols)]
    null = _domain_matrix(rows, ncols, field).nullspace()
    return _rows(null, field)


def _rows(matrix: DomainMatrix, field: ScalarField) -> List[List[Any]]:
    nrows, ncols = matrix.shape
    if nrows == 0 or ncols == 0:
        return []
    return [[field.from_domain(x) for x in row] for row in matrix.to_list()]


def determinant(rows: Sequence[Sequence[Any]], field: ScalarField) -> Any:
    size = len(rows)
    if size == 0:
        return field.one
    return field.from_domain(_domain_matrix(rows, size, field).det())


def matrix_rank(rows: Sequence[Sequence[Any]], ncols: int, field: ScalarField) -> int:
    if not rows or ncols == 0:
        return 0
    return _domain_matrix(rows, ncols, field).rank()
