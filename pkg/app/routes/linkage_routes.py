"""
API routes for the (⋆) condition, linkage and blocks.
"""
from fastapi import APIRouter, Depends, HTTPException
import logging

from app.exceptions import LinkageToolkitError
from app.models.level_model import Level
from app.repositories.root_system_repository import RootSystemRepository
from app.routes.root_system_routes import get_root_system_repository
from app.schemas.common_schemas import parse_weight_json, weight_json
from app.schemas.linkage_schemas import (
    BlockPartitionRequest,
    BlockPartitionResponse,
    BlockSchema,
    CheckStarResponse,
    LinkageClassResponse,
    LinkResponse,
    StarChainSchema,
    StarPairRequest,
    SubquotientSchema,
    SubquotientsResponse,
    WeightRequest,
)
from app.services.block_service import BlockRelation, block_partition, box_weights
from app.services.linkage_service import linkage_class, linked, satisfies_star, subquotient_candidates

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1/linkage", tags=["Linkage"])


@router.post("/check-star", response_model=CheckStarResponse)
def check_star(
    request: StarPairRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """
    Search for a (⋆)-certificate from `source` to `target`.

    Returns:
        CheckStarResponse; `found` is false when no chain exists within bounds

    Raises:
        HTTPException: 400 for invalid input, 500 for unexpected failures
    """
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        query = request.build_query(rs, level)
        chain = satisfies_star(
            rs, level, parse_weight_json(request.source), parse_weight_json(request.target), query
        )
        return CheckStarResponse(
            root_system=rs.code,
            level=level.to_json(),
            convention=query.step_convention,
            found=chain is not None,
            certificate=StarChainSchema.from_chain(chain) if chain is not None else None,
            loop_depth=chain.loop_depth if chain is not None else None,
        )
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error checking (⋆): %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/linked", response_model=LinkResponse)
def check_linked(
    request: StarPairRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """Bounded linkage test with a trail of Weyl and (⋆) moves."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        result = linked(
            rs,
            level,
            parse_weight_json(request.source),
            parse_weight_json(request.target),
            request.build_query(rs, level),
        )
        return LinkResponse.from_result(rs, level, result)
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error checking linkage: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/class", response_model=LinkageClassResponse)
def get_linkage_class(
    request: WeightRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """Weights reachable within the move bound."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        result = linkage_class(rs, level, parse_weight_json(request.weight), request.build_query(rs, level))
        return LinkageClassResponse.from_class(rs, level, result)
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error computing linkage class: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/subquotients", response_model=SubquotientsResponse)
def get_subquotients(
    request: WeightRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """Subquotient candidates μ of the Verma module with highest weight `weight`."""
    try:
        rs = repository.find_by_code(request.root_system)
        level = Level.parse(request.level)
        lam = parse_weight_json(request.weight)
        candidates = subquotient_candidates(rs, level, lam, request.build_query(rs, level))
        return SubquotientsResponse(
            root_system=rs.code,
            level=level.to_json(),
            highest_weight=weight_json(lam),
            candidates=[SubquotientSchema.from_candidate(c) for c in candidates],
        )
    except LinkageToolkitError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error computing subquotients: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")


@router.post("/blocks", response_model=BlockPartitionResponse)
def partition_blocks(
    request: BlockPartitionRequest,
    repository: RootSystemRepository = Depends(get_root_system_repository),
):
    """
    Partition weights into blocks under the linked, coarse or rational relation.

    Raises:
        HTTPException: 400 when no weights are given or preconditions fail
    """
    try:
        rs = repository.find_by_code(request.root_system)
        relation = BlockRelation(request.relation)
        if request.weights:
            weights = [parse_weight_json(w) for w in request.weights]
        elif request.box is not None:
            weights = box_weights(rs.rank, request.box)
        else:
            raise HTTPException(status_code=400, detail="Provide weights or a box")
        level = Level.parse(request.level)
        query = request.build_query(rs, level) if relation == BlockRelation.LINKED else None
        blocks = block_partition(
            rs, weights, relation, level=level, query=query, p=request.p, q=request.q, scale=request.scale
        )
        return BlockPartitionResponse(
            root_system=rs.code,
            relation=relation.value,
            blocks=[BlockSchema.from_block(b) for b in blocks],
        )
    except HTTPException:
        raise
    except (LinkageToolkitError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error("Error partitioning blocks: %s", e, exc_info=True)
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
