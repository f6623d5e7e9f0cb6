"""
Charge service layer.
Casimir eigenvalues, the conformal weight φ, affine highest weights and
L₀-grading predictions for induced modules.

Values at a rational level are Fractions; at the generic level they are
sympy expressions in κ.
"""
from fractions import Fraction
from typing import List, Optional, Union
import logging

import sympy

from app.config import settings
from app.exceptions import LinkageToolkitError
from app.models.affine_weight_model import AffineWeight
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight
from app.services.root_system_service import inner

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, sympy.Expr]

L0_CONVENTIONS = ("aw", "ph")


def _sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def over_level(value: Fraction, level: Level, factor: int = 1) -> Scalar:
    """value / (factor·κ), exact at rational levels and formal otherwise."""
    if level.is_generic:
        return sympy.simplify(_sympy(value) / (factor * level.as_expr()))
    return value / (factor * level.value)


def casimir_eigenvalue(rs: RootSystem, lam: Weight) -> Fraction:
    """|λ|² − |ρ|²."""
    return inner(rs, lam, lam) - inner(rs, rs.rho, rs.rho)


def phi(rs: RootSystem, level: Level, lam: Weight) -> Scalar:
    """φ(λ) = (|λ|² − |ρ|²)/κ."""
    return over_level(casimir_eigenvalue(rs, lam), level)


def conformal_weight(rs: RootSystem, level: Level, lam_hw: Weight) -> Scalar:
    """(λ, λ + 2ρ)/2κ, the L₀ eigenvalue on the highest-weight vector."""
    value = inner(rs, lam_hw, lam_hw + rs.rho.scale(2))
    return over_level(value, level, factor=2)


def affine_highest_weight(rs: RootSystem, level: Level, lam: Weight) -> AffineWeight:
    """λ + (κ − h∨)Λ₀ − ((λ, λ + 2ρ)/2κ)δ."""
    delta = conformal_weight(rs, level, lam)
    if isinstance(delta, Fraction):
        delta = _sympy(delta)
    return AffineWeight(
        finite_part=lam,
        level_coeff=level.as_expr() - rs.dual_coxeter,
        delta_coeff=-delta,
    )


def l0_eigenvalue_prediction(
    rs: RootSystem,
    level: Level,
    chi_lam: Weight,
    depth: int,
    convention: Optional[str] = None,
) -> Scalar:
    """
    Predicted L₀ eigenvalue on the depth-N piece of an induced module.

    Args:
        rs: Root system
        level: Noncritical level
        chi_lam: Harish-Chandra parameter of the inducing infinitesimal character
        depth: Grading level N ≥ 0
        convention: "ph" for φ(χ) + N, "aw" for φ(χ)/2 + N

    Returns:
        The predicted eigenvalue
    """
    if depth < 0:
        raise LinkageToolkitError("depth must be nonnegative")
    convention = convention or settings.l0_convention
    if convention not in L0_CONVENTIONS:
        raise LinkageToolkitError(f"Unknown L0 convention {convention!r}")
    base = casimir_eigenvalue(rs, chi_lam)
    value = over_level(base, level, factor=2 if convention == "aw" else 1)
    return value + depth


def matching_l0_conventions(
    rs: RootSystem, level: Level, lam_hw: Weight, observed: Scalar
) -> List[str]:
    """
    Which conventions reproduce an observed highest-weight L₀ eigenvalue.

    "aw" is (λ, λ + 2ρ)/2κ; "ph" is φ evaluated at the same λ.
    """
    candidates = {
        "aw": conformal_weight(rs, level, lam_hw),
        "ph": phi(rs, level, lam_hw),
    }
    matches = []
    for name, value in candidates.items():
        if sympy.simplify(_as_expr(value) - _as_expr(observed)) == 0:
            matches.append(name)
    return matches


def _as_expr(value: Scalar) -> sympy.Expr:
    if isinstance(value, Fraction):
        return _sympy(value)
    return value
