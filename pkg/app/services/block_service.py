"""
Block service layer.
Lattice-orbit block relations and partitions of weight lists into blocks.
"""
from enum import Enum
from itertools import product
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence
import logging

from app.exceptions import BlockPreconditionError
from app.models.chain_model import Block, BlockQuery
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight
from app.services.linkage_service import linked
from app.services.root_system_service import (
    check_weight,
    in_coroot_lattice,
    in_root_lattice,
    weyl_orbit,
)

logger = logging.getLogger(__name__)


class BlockRelation(str, Enum):
    LINKED = "linked"
    COARSE = "coarse"
    RATIONAL = "rational"


def coarse_block_equal(rs: RootSystem, lam: Weight, mu: Weight, scale: int = 1) -> bool:
    """μ ∈ Wλ + scale·Q∨ and μ − λ ∈ Q."""
    check_weight(rs, lam)
    check_weight(rs, mu)
    if not in_root_lattice(rs, mu - lam):
        return False
    return any(in_coroot_lattice(rs, mu - nu, scale) for nu in weyl_orbit(rs, lam))


def _check_rational_preconditions(p: int, q: int, weights: Sequence[Weight]) -> None:
    if p == 0 or q == 0:
        raise BlockPreconditionError("p and q must be nonzero")
    if gcd(p, q) != 1:
        raise BlockPreconditionError(f"p = {p} and q = {q} are not coprime")
    for weight in weights:
        if not weight.is_integral():
            raise BlockPreconditionError(f"Weight {weight} is not integral")


def rational_block_equal(rs: RootSystem, p: int, q: int, lam: Weight, mu: Weight) -> bool:
    """
    Orbit test for W ⋉ pQ∨ at κ = p/q.

    Args:
        rs: Root system
        p: Numerator of the level
        q: Denominator of the level
        lam: Integral weight
        mu: Integral weight

    Returns:
        True iff μ − wλ ∈ pQ∨ for some w ∈ W
    """
    check_weight(rs, lam)
    check_weight(rs, mu)
    _check_rational_preconditions(p, q, [lam, mu])
    return any(in_coroot_lattice(rs, mu - nu, abs(p)) for nu in weyl_orbit(rs, lam))


def box_weights(rank: int, bound: int) -> List[Weight]:
    """All integral weights with |coordinate| ≤ bound, in canonical order."""
    axis = range(-bound, bound + 1)
    return [Weight.of(coords) for coords in product(axis, repeat=rank)]


class _Partition:
    """Union-find over weight indices."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def block_partition(
    rs: RootSystem,
    weights: Sequence[Weight],
    relation: BlockRelation,
    level: Optional[Level] = None,
    query: Optional[BlockQuery] = None,
    p: Optional[int] = None,
    q: Optional[int] = None,
    scale: int = 1,
) -> List[Block]:
    """
    Partition weights into blocks under the chosen relation.

    The linked relation is bounded, so blocks are the transitive closure of
    the pairs found linked within the query. Each block is represented by
    its lexicographically smallest member; blocks are sorted by representative.
    """
    unique = sorted(set(check_weight(rs, w) for w in weights))
    test: Callable[[Weight, Weight], bool]
    if relation == BlockRelation.LINKED:
        if level is None:
            raise BlockPreconditionError("The linked relation needs a level")
        test = lambda a, b: linked(rs, level, a, b, query).linked  # noqa: E731
    elif relation == BlockRelation.COARSE:
        test = lambda a, b: coarse_block_equal(rs, a, b, scale)  # noqa: E731
    else:
        if p is None or q is None:
            if level is None or not level.is_rational:
                raise BlockPreconditionError("The rational relation needs p and q")
            p, q = level.p, level.q
        _check_rational_preconditions(p, q, unique)
        test = lambda a, b: rational_block_equal(rs, p, q, a, b)  # noqa: E731

    partition = _Partition(len(unique))
    for i in range(len(unique)):
        for j in range(i + 1, len(unique)):
            if partition.find(i) == partition.find(j):
                continue
            if test(unique[i], unique[j]):
                partition.union(i, j)

    groups: Dict[int, List[Weight]] = {}
    for i, weight in enumerate(unique):
        groups.setdefault(partition.find(i), []).append(weight)
    blocks = [Block(representative=members[0], members=tuple(members)) for members in groups.values()]
    blocks.sort(key=lambda block: block.representative)
    logger.info(
        "Partitioned %d weights into %d blocks under %s", len(unique), len(blocks), relation.value
    )
    return blocks
