"""
Root system service layer.
Builds finite root systems from Dynkin data and answers the elementary
questions every other service asks: inner products, coroots, reflections,
lattice membership and Weyl orbits.
"""
from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple
import logging
import re

import numpy as np
from sympy import Matrix

from app.config import settings
from app.exceptions import (
    DimensionMismatchError,
    InvalidRootSystemError,
    NotARootError,
    WeylGroupTooLargeError,
)
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight

logger = logging.getLogger(__name__)

_CODE_PATTERN = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")

# Bourbaki numbering; E-type edges use 0-based node labels.
_E_EDGES = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]


def parse_code(code: str) -> Tuple[str, int]:
    """Split a code like "B2" into ("B", 2)."""
    match = _CODE_PATTERN.match(code or "")
    if not match:
        raise InvalidRootSystemError(f"Malformed root system code: {code!r}")
    return match.group(1).upper(), int(match.group(2))


def _validate_type(series: str, rank: int, max_rank: int) -> None:
    valid = {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 4,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }
    if series not in valid:
        raise InvalidRootSystemError(f"Unknown Dynkin series {series!r}")
    if not valid[series]:
        raise InvalidRootSystemError(f"{series}{rank} is not an irreducible Dynkin type")
    if rank > max_rank:
        raise InvalidRootSystemError(
            f"Rank {rank} exceeds the configured cap of {max_rank}"
        )


def _simple_root_gram(series: str, rank: int) -> List[List[Fraction]]:
    """Gram matrix of (.,.) on simple roots, long roots of norm 2."""
    n = rank
    gram = [[Fraction(0)] * n for _ in range(n)]

    def edge(i: int, j: int, value: Fraction) -> None:
        gram[i][j] = value
        gram[j][i] = value

    if series in ("A", "B", "C", "D", "E"):
        for i in range(n):
            gram[i][i] = Fraction(2)
    if series == "A":
        for i in range(n - 1):
            edge(i, i + 1, Fraction(-1))
    elif series == "B":
        for i in range(n - 1):
            edge(i, i + 1, Fraction(-1))
        gram[n - 1][n - 1] = Fraction(1)
    elif series == "C":
        for i in range(n - 1):
            gram[i][i] = Fraction(1)
        for i in range(n - 2):
            edge(i, i + 1, Fraction(-1, 2))
        edge(n - 2, n - 1, Fraction(-1))
    elif series == "D":
        for i in range(n - 2):
            edge(i, i + 1, Fraction(-1))
        edge(n - 3, n - 1, Fraction(-1))
    elif series == "E":
        for i, j in _E_EDGES:
            if i < n and j < n:
                edge(i, j, Fraction(-1))
    elif series == "F":
        for i, norm in enumerate((2, 2, 1, 1)):
            gram[i][i] = Fraction(norm)
        edge(0, 1, Fraction(-1))
        edge(1, 2, Fraction(-1))
        edge(2, 3, Fraction(-1, 2))
    elif series == "G":
        gram[0][0] = Fraction(2, 3)
        gram[1][1] = Fraction(2)
        edge(0, 1, Fraction(-1))
    return gram


def _rational(entry) -> Fraction:
    return Fraction(int(entry.p), int(entry.q))


def _close_roots(simple_roots: Sequence[Weight]) -> Set[Weight]:
    roots: Set[Weight] = set(simple_roots)
    queue = deque(simple_roots)
    while queue:
        x = queue.popleft()
        for index, alpha in enumerate(simple_roots):
            y = x - alpha.scale(x.coords[index])
            if y not in roots:
                roots.add(y)
                queue.append(y)
    return roots


def _close_weyl_group(cartan: List[List[int]], cap: int) -> List[Tuple[Tuple[int, ...], ...]]:
    """Enumerate W as integer matrices by closure under simple reflections."""
    n = len(cartan)
    generators = []
    for i in range(n):
        s = np.eye(n, dtype=np.int64)
        s[i, :] -= np.array(cartan[i], dtype=np.int64)
        generators.append(s)

    identity = np.eye(n, dtype=np.int64)
    seen = {identity.tobytes()}
    elements = [identity]
    frontier = [identity]
    while frontier:
        next_frontier = []
        for g in frontier:
            for s in generators:
                h = g @ s
                key = h.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                elements.append(h)
                next_frontier.append(h)
                if len(elements) > cap:
                    raise WeylGroupTooLargeError(
                        f"Weyl group order exceeds the configured cap of {cap}"
                    )
        frontier = next_frontier
    return [tuple(tuple(int(v) for v in row) for row in m) for m in elements]


def build_root_system(
    series: str,
    rank: int,
    max_rank: Optional[int] = None,
    max_weyl_order: Optional[int] = None,
) -> RootSystem:
    """
    Build the root system of an irreducible Dynkin type.

    Args:
        series: Dynkin letter A-G
        rank: Rank of the root system
        max_rank: Rank cap (defaults to settings.max_rank)
        max_weyl_order: Weyl group order cap (defaults to settings.max_weyl_order)

    Returns:
        Fully populated RootSystem
    """
    series = (series or "").upper()
    max_rank = settings.max_rank if max_rank is None else max_rank
    max_weyl_order = settings.max_weyl_order if max_weyl_order is None else max_weyl_order
    _validate_type(series, rank, max_rank)

    gram = _simple_root_gram(series, rank)
    cartan = [[int(2 * gram[i][j] / gram[j][j]) for j in range(rank)] for i in range(rank)]
    inverse = Matrix(cartan).inv()
    inverse_cartan = tuple(
        tuple(_rational(inverse[i, j]) for j in range(rank)) for i in range(rank)
    )
    weight_gram = tuple(
        tuple(
            sum(
                (
                    inverse_cartan[i][k] * gram[k][l] * inverse_cartan[j][l]
                    for k in range(rank)
                    for l in range(rank)
                ),
                Fraction(0),
            )
            for j in range(rank)
        )
        for i in range(rank)
    )

    simple_roots = tuple(Weight.of(row) for row in cartan)
    all_roots = _close_roots(list(simple_roots))

    def root_coords(x: Weight) -> Tuple[Fraction, ...]:
        return tuple(
            sum((x.coords[k] * inverse_cartan[k][j] for k in range(rank)), Fraction(0))
            for j in range(rank)
        )

    positive = [beta for beta in all_roots if all(c >= 0 for c in root_coords(beta))]
    positive.sort(key=lambda beta: (sum(root_coords(beta)), tuple(-c for c in root_coords(beta))))
    roots = tuple(positive) + tuple(-beta for beta in positive)

    norms: Dict[Weight, Fraction] = {}
    coroot_coordinates: Dict[Weight, Tuple[int, ...]] = {}
    for beta in roots:
        c = root_coords(beta)
        norm = sum(
            (c[i] * gram[i][j] * c[j] for i in range(rank) for j in range(rank)), Fraction(0)
        )
        norms[beta] = norm
        coroot_coordinates[beta] = tuple(int(c[i] * gram[i][i] / norm) for i in range(rank))

    highest_root = max(positive, key=lambda beta: sum(root_coords(beta)))
    rho = Weight.of([1] * rank)
    rho_theta = sum(coroot_coordinates[highest_root])
    weyl_elements = _close_weyl_group(cartan, max_weyl_order)

    rs = RootSystem(
        series=series,
        rank=rank,
        cartan_matrix=tuple(tuple(row) for row in cartan),
        simple_roots=simple_roots,
        roots=roots,
        positive_roots=tuple(positive),
        form_gram=tuple(tuple(row) for row in gram),
        rho=rho,
        dual_coxeter=1 + rho_theta,
        weyl_elements=tuple(weyl_elements),
        inverse_cartan=inverse_cartan,
        weight_gram=weight_gram,
        highest_root=highest_root,
        root_set=frozenset(roots),
        positive_set=frozenset(positive),
        root_norms=norms,
        coroot_coordinates=coroot_coordinates,
    )
    logger.info(
        "Built root system %s: %d roots, |W| = %d, h∨ = %d",
        rs.code, len(roots), rs.weyl_order, rs.dual_coxeter,
    )
    return rs


def check_weight(rs: RootSystem, x: Weight) -> Weight:
    if x.rank != rs.rank:
        raise DimensionMismatchError(
            f"Weight {x} has {x.rank} coordinates, {rs.code} needs {rs.rank}"
        )
    return x


def check_root(rs: RootSystem, beta: Weight) -> Weight:
    check_weight(rs, beta)
    if not rs.is_root(beta):
        raise NotARootError(f"{beta} is not a root of {rs.code}")
    return beta


def inner(rs: RootSystem, x: Weight, y: Weight) -> Fraction:
    """Invariant form (x, y), normalised so long roots have norm 2."""
    check_weight(rs, x)
    check_weight(rs, y)
    n = rs.rank
    total = Fraction(0)
    for i in range(n):
        if x.coords[i] == 0:
            continue
        row = rs.weight_gram[i]
        total += x.coords[i] * sum((row[j] * y.coords[j] for j in range(n)), Fraction(0))
    return total


def norm(rs: RootSystem, x: Weight) -> Fraction:
    return inner(rs, x, x)


def coroot(rs: RootSystem, beta: Weight) -> Weight:
    """Return β∨ = 2β/(β, β)."""
    check_root(rs, beta)
    return beta.scale(Fraction(2) / rs.root_norms[beta])


def pairing(rs: RootSystem, lam: Weight, beta: Weight) -> Fraction:
    """(λ, β∨) computed from the coroot coordinates of β."""
    check_root(rs, beta)
    check_weight(rs, lam)
    return sum(
        (c * lam.coords[i] for i, c in enumerate(rs.coroot_coordinates[beta]) if c),
        Fraction(0),
    )


def reflect(rs: RootSystem, lam: Weight, beta: Weight) -> Weight:
    """r_β(λ) = λ − (λ, β∨)β."""
    return lam - beta.scale(pairing(rs, lam, beta))


def simple_reflection(rs: RootSystem, lam: Weight, i: int) -> Weight:
    return lam - rs.simple_roots[i].scale(lam.coords[i])


def in_root_lattice(rs: RootSystem, x: Weight) -> bool:
    check_weight(rs, x)
    return all(c.denominator == 1 for c in rs.root_coordinates(x))


def in_coroot_lattice(rs: RootSystem, x: Weight, scale: int = 1) -> bool:
    """
    Membership in scale·Q∨.

    The coroot coordinate along α_i∨ is (root coordinate)·|α_i|²/2.
    """
    check_weight(rs, x)
    if scale == 0:
        return x.is_zero()
    coords = rs.root_coordinates(x)
    for i, c in enumerate(coords):
        value = c * rs.simple_norm(i) / 2 / scale
        if value.denominator != 1:
            return False
    return True


def is_integral(rs: RootSystem, x: Weight) -> bool:
    check_weight(rs, x)
    return x.is_integral()


def apply_weyl(rs: RootSystem, index: int, lam: Weight) -> Weight:
    """Act with the stored Weyl element `index` on λ."""
    check_weight(rs, lam)
    matrix = rs.weyl_elements[index]
    n = rs.rank
    return Weight(
        tuple(
            sum((lam.coords[j] * matrix[j][k] for j in range(n) if lam.coords[j]), Fraction(0))
            for k in range(n)
        )
    )


def weyl_orbit(rs: RootSystem, lam: Weight) -> Set[Weight]:
    """Orbit {wλ} by breadth-first closure under simple reflections."""
    check_weight(rs, lam)
    orbit = {lam}
    queue = deque([lam])
    while queue:
        x = queue.popleft()
        for i in range(rs.rank):
            if x.coords[i] == 0:
                continue
            y = simple_reflection(rs, x, i)
            if y not in orbit:
                orbit.add(y)
                queue.append(y)
    return orbit


def find_weyl_element(rs: RootSystem, lam: Weight, mu: Weight) -> Optional[int]:
    """Index of the first stored w with wλ = μ, or None."""
    if lam == mu:
        return 0
    for index in range(rs.weyl_order):
        if apply_weyl(rs, index, lam) == mu:
            return index
    return None


def root_length_counts(rs: RootSystem) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for beta in rs.roots:
        key = str(rs.root_norms[beta])
        counts[key] = counts.get(key, 0) + 1
    return counts
