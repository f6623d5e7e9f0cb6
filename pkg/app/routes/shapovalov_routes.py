"""
API routes for the Shapovalov oracle.
Handlers are synchronous; FastAPI runs them in its thread pool.
"""
from fastapi import APIRouter, Depends, HTTPException
import logging

from app.exceptions import LinkageToolkitError
from app.models.chain_model import StepConvention
from app.models.level_model import Level
from app.repositories.root_system_repository import RootSystemRepository
from app.routes.root_system_routes import get_root_system_repository
from app.schemas.common_schemas import HorizonSchema, parse_weight_json, weight_json
from app.schemas.shapovalov_schemas import (
    OracleRequest,
    ShapovalovReportResponse,
    SingularVectorSchema,
    SingularVectorsResponse,
    VerifyKKResponse,
)
from app.services.linkage_service import default_query
from app.services.shapovalov_service import ShapovalovService, get_shapovalov_service

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/oracle", tags=["Shapovalov Oracle"])


@router.post("/singular-vectors", response_model=SingularVectorsResponse)
def find_singular_vectors(
    request: OracleRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
    service: ShapovalovService = Depends(get_shapovalov_service),
):
    """
    Singular vectors of a truncated affine Verma module.

    Raises:
        HTTPException: 400 for unsupported types or invalid input
    """
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        lam = parse_weight_json(request.highest_weight)
        depth_cap = service.config.depth_cap if request.depth_cap is None else request.depth_cap
        height_cap = service.config.height_cap if request.height_cap is None else request.height_cap
        found = service.singular_vectors(rs, level, lam, depth_cap, height_cap)
        return SingularVectorsResponse(
            root_system=rs.code,
            level=level.to_json(),
            highest_weight=weight_json(lam),
            horizon=HorizonSchema(depth_cap=depth_cap, height_cap=height_cap),
            singular=[SingularVectorSchema.from_singular(sv) for sv in found],
        )
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error computing singular vectors: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/shapovalov", response_model=ShapovalovReportResponse)
def get_shapovalov_report(
    request: OracleRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
    service: ShapovalovService = Depends(get_shapovalov_service),
):
    """Forms, determinants and kernels per graded piece, with L₀ per depth."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        report = service.shapovalov_report(
            rs, level, parse_weight_json(request.highest_weight), request.depth_cap, request.height_cap
        )
        return ShapovalovReportResponse.from_report(rs.code, level.to_json(), report)
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error computing Shapovalov report: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/verify-kk", response_model=VerifyKKResponse)
def verify_kk(
    request: OracleRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
    service: ShapovalovService = Depends(get_shapovalov_service),
):
    """Compare oracle singular vectors with linkage predictions over one horizon."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        query = default_query(rs, level, step_convention=StepConvention(request.convention))
        report = service.verify_kk(
            rs,
            level,
            parse_weight_json(request.highest_weight),
            depth_cap=request.depth_cap,
            query=query,
            height_cap=request.height_cap,
        )
        return VerifyKKResponse.from_comparison(rs.code, level.to_json(), report)
    except (LinkageToolkitError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error verifying linkage against the oracle: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
