"""
API routes for charge quantities: Casimir, φ, affine weights and L₀.
"""
from fastapi import APIRouter, Depends, HTTPException
import logging

from app.config import settings
from app.exceptions import LinkageToolkitError
from app.models.level_model import Level
from app.repositories.root_system_repository import RootSystemRepository
from app.routes.root_system_routes import get_root_system_repository
from app.schemas.charge_schemas import AffineWeightResponse, ChargeRequest, L0Response, ScalarResponse
from app.schemas.common_schemas import format_scalar, parse_weight_json, weight_json
from app.services.charge_service import (
    affine_highest_weight,
    casimir_eigenvalue,
    l0_eigenvalue_prediction,
    phi,
)

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/charge", tags=["Charge"])


@router.post("/casimir", response_model=ScalarResponse)
async def get_casimir(
    request: ChargeRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """|λ|² − |ρ|²."""
    try:
        rs = repository.find_by_code(request.root_system)
        lam = parse_weight_json(request.weight)
        return ScalarResponse(
            quantity="casimir",
            root_system=rs.code,
            weight=weight_json(lam),
            value=format_scalar(casimir_eigenvalue(rs, lam)),
        )
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/phi", response_model=ScalarResponse)
async def get_phi(
    request: ChargeRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """φ(λ) = (|λ|² − |ρ|²)/κ; an expression in κ at the generic level."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        lam = parse_weight_json(request.weight)
        return ScalarResponse(
            quantity="phi",
            root_system=rs.code,
            level=level.to_json(),
            weight=weight_json(lam),
            value=format_scalar(phi(rs, level, lam)),
        )
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/affine-weight", response_model=AffineWeightResponse)
async def get_affine_weight(
    request: ChargeRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """λ + (κ − h∨)Λ₀ − ((λ, λ + 2ρ)/2κ)δ."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        weight = affine_highest_weight(rs, level, parse_weight_json(request.weight))
        return AffineWeightResponse.from_affine_weight(weight)
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("/l0", response_model=L0Response)
async def get_l0_prediction(
    request: ChargeRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """
    Predicted L₀ eigenvalue on the depth-N piece induced from χ = `weight`.

    Args:
        request: Root system, level, χ, depth and optional convention
        repository: Injected RootSystemRepository

    Returns:
        L0Response without the oracle value (see the oracle routes)
    """
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        chi = parse_weight_json(request.weight)
        convention = request.convention or settings.l0_convention
        predicted = l0_eigenvalue_prediction(rs, level, chi, request.depth, convention)
        return L0Response(
            root_system=rs.code,
            level=level.to_json(),
            weight=weight_json(chi),
            depth=request.depth,
            convention=convention,
            predicted=format_scalar(predicted),
        )
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
