"""
API routes for root-system descriptions.
"""
from typing import List

from fastapi import APIRouter, Depends, HTTPException
import logging

from app.exceptions import LinkageToolkitError
from app.repositories.root_system_repository import RootSystemRepository, root_system_repository
from app.schemas.root_system_schemas import RootSystemResponse

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/root-systems", tags=["Root Systems"])


def get_root_system_repository() -> RootSystemRepository:
    """
    Dependency injection for RootSystemRepository.

    Returns:
        The shared, caching repository instance
    """
    return root_system_repository


@router.get("", response_model=List[str])
async def list_cached_root_systems(
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """Codes of the root systems built so far."""
    return [rs.code for rs in repository.find_all_cached()]


@router.get("/{code}", response_model=RootSystemResponse)
async def describe_root_system(
    code: str,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """
    Describe a root system: Cartan matrix, positive roots, ρ, θ, h, h∨ and |W|.

    Args:
        code: Dynkin code such as A2 or G2
        repository: Injected RootSystemRepository

    Returns:
        RootSystemResponse

    Raises:
        HTTPException: 400 for unknown or oversized types
    """
    try:
        return RootSystemResponse.from_root_system(repository.find_by_code(code))
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error describing root system %s: %s", code, e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
