"""
Linkage service layer.
Decides and certifies the Kac-Kazhdan chain condition (⋆), the bounded
linkage relation it generates together with Weyl orbits, and the
subquotient candidates of induced modules.

All searches are breadth first over an ordered frontier, so the returned
certificate is the shortest one and, among those, the first in the order
(root index, m) of its steps.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Set, Tuple
import logging

from app.config import settings
from app.exceptions import LinkageToolkitError
from app.models.chain_model import (
    BlockQuery,
    LinkageClass,
    LinkMove,
    LinkResult,
    MoveKind,
    StarChain,
    StarStep,
    StepConvention,
    SubquotientCandidate,
)
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.weight_model import Weight
from app.services.root_system_service import (
    check_weight,
    coroot,
    find_weyl_element,
    in_root_lattice,
    inner,
    pairing,
    reflect,
    weyl_orbit,
)

logger = logging.getLogger(__name__)

State = Tuple[Weight, int]


def default_query(rs: RootSystem, level: Level, **overrides) -> BlockQuery:
    """BlockQuery with the configured defaults, overridden by keyword."""
    values = dict(
        rs=rs,
        level=level,
        max_chain_len=settings.default_max_chain_len,
        max_m=settings.default_max_m,
        allow_empty_chain=settings.allow_empty_chain,
        step_convention=StepConvention(settings.step_convention),
    )
    values.update({k: v for k, v in overrides.items() if v is not None})
    return BlockQuery(**values)


def _resolve_query(rs: RootSystem, level: Level, query: Optional[BlockQuery]) -> BlockQuery:
    if query is None:
        return default_query(rs, level)
    if query.rs != rs or query.level != level:
        raise LinkageToolkitError(
            f"Query built for {query.rs.code} at level {query.level} "
            f"used with {rs.code} at level {level}"
        )
    return query


def is_finite_length_regime(level: Level) -> bool:
    return level.is_finite_length_regime()


def _step_target(
    rs: RootSystem, level: Level, lam: Weight, beta: Weight, m: int, n: int,
    convention: StepConvention,
) -> Weight:
    if convention == StepConvention.REFLECTION or m == 0:
        return lam - beta.scale(n)
    return reflect(rs, lam, beta) + coroot(rs, beta).scale(level.value * m)


def _make_step(
    rs: RootSystem, level: Level, lam: Weight, beta: Weight, m: int,
    convention: StepConvention,
) -> Optional[StarStep]:
    """The (⋆)-step (β, m) from λ, or None when it is not admissible."""
    if m == 0 and not rs.is_positive(beta):
        return None
    if m > 0 and level.is_generic:
        return None
    shift = Fraction(2 * m) / rs.root_norms[beta]
    n = level.integer_value(pairing(rs, lam, beta), shift)
    if n is None or n <= 0:
        return None
    target = _step_target(rs, level, lam, beta, m, n, convention)
    return StarStep(beta=beta, m=m, n=n, source=lam, target=target)


@lru_cache(maxsize=65536)
def _cached_steps(
    rs: RootSystem, level: Level, lam: Weight, max_m: int, convention: StepConvention
) -> Tuple[StarStep, ...]:
    top = max_m if level.is_rational else 0
    steps = []
    for beta in rs.roots:
        for m in range(top + 1):
            step = _make_step(rs, level, lam, beta, m, convention)
            if step is not None:
                steps.append(step)
    return tuple(steps)


def star_step_candidates(
    rs: RootSystem,
    level: Level,
    lam: Weight,
    max_m: int,
    convention: StepConvention = StepConvention.REFLECTION,
) -> List[StarStep]:
    """
    All admissible single (⋆)-steps from λ with m ≤ max_m.

    Args:
        rs: Root system
        level: Noncritical level; generic levels only admit m = 0
        lam: Starting weight
        max_m: Largest loop index scanned
        convention: Where an admissible step lands

    Returns:
        Steps ordered by root index, then m
    """
    check_weight(rs, lam)
    return list(_cached_steps(rs, level, lam, max_m, convention))


def _reverse_steps(
    rs: RootSystem, level: Level, t: Weight, max_m: int, convention: StepConvention
) -> List[StarStep]:
    """Steps s → t; every predecessor is re-checked by the forward rule."""
    top = max_m if level.is_rational else 0
    found = []
    for beta in rs.roots:
        for m in range(top + 1):
            if m == 0 and not rs.is_positive(beta):
                continue
            shift = Fraction(2 * m) / rs.root_norms[beta]
            if convention == StepConvention.REFLECTION or m == 0:
                n = level.integer_value(-pairing(rs, t, beta), -shift)
                if n is None or n <= 0:
                    continue
                source = t + beta.scale(n)
            else:
                source = reflect(rs, t, beta) + coroot(rs, beta).scale(level.value * m)
            step = _make_step(rs, level, source, beta, m, convention)
            if step is not None and step.target == t:
                found.append(step)
    return found


def verify_chain(
    rs: RootSystem,
    level: Level,
    chain: StarChain,
    convention: StepConvention = StepConvention.REFLECTION,
) -> bool:
    """
    Re-check a certificate from the defining formulas.

    Uses the invariant form directly rather than the cached coroot
    coordinates the search relies on.
    """
    point = chain.source
    for step in chain.steps:
        if step.source != point or not rs.is_root(step.beta) or step.m < 0:
            return False
        if step.m == 0 and not rs.is_positive(step.beta):
            return False
        if step.m > 0 and level.is_generic:
            return False
        beta_check = coroot(rs, step.beta)
        value = inner(rs, point, beta_check)
        if step.m:
            value += 2 * level.value * step.m / inner(rs, step.beta, step.beta)
        if value.denominator != 1 or value <= 0 or value != step.n:
            return False
        if convention == StepConvention.REFLECTION or step.m == 0:
            expected = point - step.beta.scale(step.n)
        else:
            expected = reflect(rs, point, step.beta) + beta_check.scale(level.value * step.m)
        if expected != step.target:
            return False
        point = step.target
    return point == chain.target


def generic_candidates(rs: RootSystem, lam: Weight) -> Set[Weight]:
    """
    Weights reachable from λ at a generic level: {wλ : wλ − λ ∈ Q}.

    λ + α = wλ + κβ with α, β ∈ Q forces β = 0 when κ is transcendental.
    """
    return {mu for mu in weyl_orbit(rs, lam) if in_root_lattice(rs, mu - lam)}


def _height_allowance(rs: RootSystem, query: BlockQuery, depth: int) -> Optional[Fraction]:
    if query.max_height is None:
        return None
    if query.max_loop_depth is None:
        return Fraction(query.max_height)
    theta = rs.height(rs.highest_root)
    return query.max_height + (query.max_loop_depth - depth) * theta


def _admissible_state(rs: RootSystem, query: BlockQuery, source: Weight, state: State) -> bool:
    weight, depth = state
    if not query.in_box(weight):
        return False
    if query.max_loop_depth is not None and depth > query.max_loop_depth:
        return False
    allowance = _height_allowance(rs, query, depth)
    if allowance is not None and rs.height(source - weight) > allowance:
        return False
    return True


def _forward_search(
    rs: RootSystem,
    level: Level,
    source: Weight,
    query: BlockQuery,
    goal: Optional[Weight] = None,
    allowed: Optional[Set[Weight]] = None,
) -> Tuple[Dict[State, Tuple[Optional[State], Optional[StarStep]]], Optional[State]]:
    """
    Breadth-first closure of (⋆)-steps from `source`.

    Returns the parent map over reached (weight, loop depth) states and the
    first state whose weight equals `goal`, if any.
    """
    root: State = (source, 0)
    parents: Dict[State, Tuple[Optional[State], Optional[StarStep]]] = {root: (None, None)}
    frontier = [root]
    for _ in range(query.max_chain_len):
        next_frontier = []
        for state in frontier:
            weight, depth = state
            for step in _cached_steps(
                rs, level, weight, query.effective_max_m, query.step_convention
            ):
                child = (step.target, depth + step.loop_depth)
                if child in parents:
                    continue
                if allowed is not None and step.target not in allowed:
                    continue
                if not _admissible_state(rs, query, source, child):
                    continue
                parents[child] = (state, step)
                if goal is not None and step.target == goal:
                    return parents, child
                next_frontier.append(child)
        if not next_frontier:
            break
        frontier = next_frontier
    logger.debug("Forward search from %s reached %d states", source, len(parents))
    return parents, None


def _chain_to(
    source: Weight,
    parents: Dict[State, Tuple[Optional[State], Optional[StarStep]]],
    state: State,
) -> StarChain:
    steps = []
    current: Optional[State] = state
    while current is not None:
        parent, step = parents[current]
        if step is not None:
            steps.append(step)
        current = parent
    steps.reverse()
    return StarChain(source=source, target=state[0], steps=tuple(steps))


def satisfies_star(
    rs: RootSystem,
    level: Level,
    lam: Weight,
    mu: Weight,
    query: Optional[BlockQuery] = None,
) -> Optional[StarChain]:
    """
    Search for a (⋆)-certificate from λ to μ within the query bounds.

    Args:
        rs: Root system
        level: Noncritical level
        lam: Source weight
        mu: Target weight
        query: Search bounds (configured defaults when omitted)

    Returns:
        The certificate chain, or None when no chain exists within bounds
    """
    query = _resolve_query(rs, level, query)
    check_weight(rs, lam)
    check_weight(rs, mu)

    if lam == mu and query.allow_empty_chain:
        return StarChain.empty(lam)
    if not in_root_lattice(rs, mu - lam):
        logger.debug("Pruned [%s, %s]: difference not in the root lattice", lam, mu)
        return None
    allowed = None
    if level.is_generic:
        allowed = generic_candidates(rs, lam)
        if mu not in allowed:
            logger.debug("Pruned [%s, %s]: not a generic-level candidate", lam, mu)
            return None

    parents, hit = _forward_search(rs, level, lam, query, goal=mu, allowed=allowed)
    if hit is None:
        return None
    return _chain_to(lam, parents, hit)


def induced_subquotient(
    rs: RootSystem,
    level: Level,
    chi_1: Weight,
    chi_2: Weight,
    query: Optional[BlockQuery] = None,
) -> Optional[StarChain]:
    """
    Subquotient criterion for induced Harish-Chandra modules.

    The irreducible quotient attached to χ₁ occurs in the module induced
    from χ₂ iff [χ₂, χ₁] satisfies (⋆); both are Harish-Chandra parameters.
    """
    return satisfies_star(rs, level, chi_2, chi_1, query)


def _neighbours(
    rs: RootSystem, level: Level, x: Weight, query: BlockQuery
) -> List[LinkMove]:
    moves: List[LinkMove] = []
    for y in sorted(weyl_orbit(rs, x)):
        if y != x:
            moves.append(LinkMove(kind=MoveKind.WEYL, source=x, target=y))
    for step in _cached_steps(rs, level, x, query.effective_max_m, query.step_convention):
        moves.append(LinkMove(kind=MoveKind.FORWARD, source=x, target=step.target, step=step))
    for step in _reverse_steps(rs, level, x, query.effective_max_m, query.step_convention):
        moves.append(LinkMove(kind=MoveKind.REVERSE, source=x, target=step.source, step=step))
    return [move for move in moves if query.in_box(move.target)]


def _closure(
    rs: RootSystem,
    level: Level,
    lam: Weight,
    query: BlockQuery,
    goal: Optional[Weight] = None,
) -> Tuple[Dict[Weight, Optional[LinkMove]], bool]:
    """BFS over elementary moves; returns parents and whether the bound cut it off."""
    parents: Dict[Weight, Optional[LinkMove]] = {lam: None}
    frontier = [lam]
    for _ in range(query.max_chain_len):
        next_frontier = []
        for x in frontier:
            for move in _neighbours(rs, level, x, query):
                if move.target in parents:
                    continue
                parents[move.target] = move
                if goal is not None and move.target == goal:
                    return parents, False
                next_frontier.append(move.target)
        frontier = next_frontier
        if not frontier:
            return parents, False
    truncated = any(
        move.target not in parents
        for x in frontier
        for move in _neighbours(rs, level, x, query)
    )
    return parents, truncated


def _with_weyl_index(rs: RootSystem, move: LinkMove) -> LinkMove:
    if move.kind != MoveKind.WEYL:
        return move
    index = find_weyl_element(rs, move.source, move.target)
    return LinkMove(
        kind=move.kind, source=move.source, target=move.target, weyl_index=index
    )


def linked(
    rs: RootSystem,
    level: Level,
    lam: Weight,
    mu: Weight,
    query: Optional[BlockQuery] = None,
) -> LinkResult:
    """
    Bounded membership in the relation generated by Weyl orbits and (⋆).

    Sound always, complete only within max_chain_len elementary moves.
    """
    query = _resolve_query(rs, level, query)
    check_weight(rs, lam)
    check_weight(rs, mu)
    if lam == mu:
        return LinkResult(linked=True, trail=())

    parents, _ = _closure(rs, level, lam, query, goal=mu)
    if mu not in parents:
        return LinkResult(linked=False, trail=())

    trail = []
    current = mu
    while parents[current] is not None:
        move = parents[current]
        trail.append(_with_weyl_index(rs, move))
        current = move.source
    trail.reverse()
    return LinkResult(linked=True, trail=tuple(trail))


def linkage_class(
    rs: RootSystem,
    level: Level,
    lam: Weight,
    query: Optional[BlockQuery] = None,
) -> LinkageClass:
    """Weights reachable from λ by at most max_chain_len elementary moves."""
    query = _resolve_query(rs, level, query)
    check_weight(rs, lam)
    parents, truncated = _closure(rs, level, lam, query)
    if truncated:
        logger.warning(
            "Linkage class of %s truncated at %d moves (%d weights)",
            lam, query.max_chain_len, len(parents),
        )
    return LinkageClass(
        weights=tuple(sorted(parents)),
        truncated=truncated,
        finite_length_regime=is_finite_length_regime(level),
    )


def subquotient_candidates(
    rs: RootSystem,
    level: Level,
    lam: Weight,
    query: Optional[BlockQuery] = None,
) -> List[SubquotientCandidate]:
    """
    All μ such that [λ + ρ, μ + ρ] satisfies (⋆) within the query bounds.

    Candidates are deduplicated by (μ, loop depth), keep their shortest
    certificate, and are sorted by loop depth then weight. With max_height
    set, only end points with ht(λ − μ) ≤ max_height are returned.
    """
    query = _resolve_query(rs, level, query)
    check_weight(rs, lam)
    source = lam + rs.rho
    allowed = generic_candidates(rs, source) if level.is_generic else None
    parents, _ = _forward_search(rs, level, source, query, allowed=allowed)

    candidates: List[SubquotientCandidate] = []
    for state in parents:
        weight, depth = state
        if state == (source, 0) and not query.allow_empty_chain:
            continue
        if query.max_height is not None and rs.height(source - weight) > query.max_height:
            continue
        chain = _chain_to(source, parents, state)
        candidates.append(SubquotientCandidate(weight=weight - rs.rho, chain=chain))
    candidates.sort(key=lambda c: (c.loop_depth, c.weight))
    logger.debug("Found %d subquotient candidates for %s", len(candidates), lam)
    return candidates

