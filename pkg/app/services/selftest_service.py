"""
Self-test service layer.
Bundled verification suites: the A1 oracle grid, the A2 finite slice,
L₀ convention arbitration, block refinement and a quick invariant pass.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence
import logging
import random
import time

from app.config import settings
from app.models.level_model import Level
from app.models.weight_model import Weight
from app.repositories.root_system_repository import RootSystemRepository, root_system_repository
from app.services.block_service import rational_block_equal
from app.services.charge_service import matching_l0_conventions
from app.services.linkage_service import (
    default_query,
    linkage_class,
    subquotient_candidates,
    verify_chain,
)
from app.services.root_system_service import apply_weyl, coroot, inner, pairing, reflect, weyl_orbit
from app.services.shapovalov_service import OracleConfig, ShapovalovService

logger = logging.getLogger(__name__)

GRID_LEVELS = ("generic", "-1", "-2", "-3/2", "-5/3")
GRID_SHIFTED = tuple(Fraction(c) for c in range(-3, 6)) + (Fraction(1, 2), Fraction(5, 2))
ARBITRATION_LEVELS = ("-1", "-2", "3")


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    failures: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    seconds: float = 0.0


@dataclass
class SelftestConfig:
    """Suite selection and sizes."""
    suites: Sequence[str] = ("kk_grid", "a2_slice", "l0_arbitration", "block_refinement", "invariants")
    grid_depth: int = 4
    grid_height: Optional[int] = None
    block_box: int = 8
    block_chain_len: int = 8
    block_max_m: int = 4
    invariant_cases: int = 100
    seed: int = 20240611
    max_workers: int = 1


class SelftestService:
    """
    Runs the verification suites and collects their results by name.
    """

    def __init__(
        self,
        config: Optional[SelftestConfig] = None,
        repository: Optional[RootSystemRepository] = None,
        oracle: Optional[ShapovalovService] = None,
    ):
        """
        Initialize service with its collaborators.

        Args:
            config: Suite selection and sizes
            repository: Root-system lookups (shared instance when omitted)
            oracle: Shapovalov oracle (fresh instance when omitted)
        """
        self.config = config or SelftestConfig()
        self.repository = repository or root_system_repository
        self.oracle = oracle or ShapovalovService(OracleConfig())

    def _suite_table(self) -> Dict[str, Callable[[], SuiteResult]]:
        return {
            "kk_grid": self.kk_grid,
            "a2_slice": self.a2_slice,
            "l0_arbitration": self.l0_arbitration,
            "block_refinement": self.block_refinement,
            "invariants": self.invariants,
        }

    def run(self) -> Dict[str, SuiteResult]:
        """
        Run the configured suites.

        Returns:
            Results keyed by suite name, in the configured order
        """
        table = self._suite_table()
        unknown = [name for name in self.config.suites if name not in table]
        if unknown:
            raise ValueError(f"Unknown suites: {unknown}")

        results: Dict[str, SuiteResult] = {}
        with ThreadPoolExecutor(max_workers=max(1, self.config.max_workers)) as executor:
            future_to_suite = {
                executor.submit(self._timed, name, table[name]): name for name in self.config.suites
            }
            for future in as_completed(future_to_suite):
                name = future_to_suite[future]
                try:
                    results[name] = future.result()
                except Exception as e:
                    logger.error("Suite '%s' failed: %s", name, e, exc_info=True)
                    results[name] = SuiteResult(name=name, passed=False, cases=0, failures=[str(e)])
        return {name: results[name] for name in self.config.suites}

    def _timed(self, name: str, suite: Callable[[], SuiteResult]) -> SuiteResult:
        start = time.time()
        result = suite()
        result.seconds = time.time() - start
        logger.info(
            "Suite %s: %s (%d cases, %d failures) in %.2fs",
            name, "pass" if result.passed else "FAIL", result.cases, len(result.failures), result.seconds,
        )
        return result

    def kk_grid(self) -> SuiteResult:
        """verify_kk over A1 levels and shifted highest weights."""
        rs = self.repository.find_by_code("A1")
        result = SuiteResult(name="kk_grid", passed=True, cases=0)
        for text in GRID_LEVELS:
            level = Level.parse(text)
            for shifted in GRID_SHIFTED:
                lam_hw = Weight((shifted - 1,))
                report = self.oracle.verify_kk(
                    rs, level, lam_hw, depth_cap=self.config.grid_depth, height_cap=self.config.grid_height
                )
                result.cases += 1
                if not report.agrees:
                    result.failures.append(
                        f"level {level}, λ = {lam_hw}: missing {report.missing}, extra {report.extra}"
                    )
        result.passed = not result.failures
        return result

    def a2_slice(self) -> SuiteResult:
        """Generic-level A2: m = 0 candidates are the dot orbit and match finite kernels."""
        rs = self.repository.find_by_code("A2")
        level = Level.generic()
        result = SuiteResult(name="a2_slice", passed=True, cases=0)
        for a in range(1, 4):
            for b in range(1, 5 - a):
                shifted = Weight.of((a, b))
                lam_hw = shifted - rs.rho
                expected = {w - rs.rho for w in weyl_orbit(rs, shifted)} - {lam_hw}
                query = default_query(rs, level, max_chain_len=6)
                found = {c.weight for c in subquotient_candidates(rs, level, lam_hw, query)}
                report = self.oracle.verify_kk(rs, level, lam_hw, depth_cap=0, height_cap=8)
                singular = {w for w, d in report.singular if d == 0}
                result.cases += 1
                if found != expected:
                    result.failures.append(f"λ + ρ = {shifted}: chains {sorted(found)} ≠ orbit {sorted(expected)}")
                if singular != expected or not report.agrees:
                    result.failures.append(f"λ + ρ = {shifted}: kernels {sorted(singular)} ≠ orbit")
        result.passed = not result.failures
        return result

    def l0_arbitration(self) -> SuiteResult:
        """The oracle's highest-weight L₀ matches one convention, the same everywhere."""
        rs = self.repository.find_by_code("A1")
        result = SuiteResult(name="l0_arbitration", passed=True, cases=0)
        seen = set()
        for text in ARBITRATION_LEVELS:
            level = Level.parse(text)
            for lam_hw in (rs.rho.scale(0), rs.rho, rs.simple_roots[0]):
                observed = self.oracle.highest_weight_l0(rs, level, lam_hw)
                matches = matching_l0_conventions(rs, level, lam_hw, observed)
                result.cases += 1
                if len(matches) != 1:
                    result.failures.append(f"κ = {level}, λ = {lam_hw}: L0 = {observed} matches {matches}")
                seen.update(matches)
        if len(seen) != 1:
            result.failures.append(f"Conventions disagree across cells: {sorted(seen)}")
        elif settings.l0_convention not in seen:
            result.failures.append(f"Oracle picks {seen}, configured {settings.l0_convention}")
        else:
            result.notes.append(f"convention {next(iter(seen))}")
        result.passed = not result.failures
        return result

    def block_refinement(self) -> SuiteResult:
        """
        A1 at κ = −2: bounded linkage inside the box stays in W ⋉ 2Q∨ orbits.

        Same-orbit pairs not linked within the bound are reported as notes,
        since the bounded search is complete only up to its move limit.
        """
        rs = self.repository.find_by_code("A1")
        level = Level.rational(-2)
        bound = self.config.block_box
        box = [Weight.of((k,)) for k in range(-bound, bound + 1)]
        inside = set(box)
        query = default_query(
            rs, level, max_chain_len=self.config.block_chain_len, max_m=self.config.block_max_m
        )
        result = SuiteResult(name="block_refinement", passed=True, cases=0)
        for lam in box:
            reached = set(linkage_class(rs, level, lam, query).weights) & inside
            for mu in box:
                if mu <= lam:
                    continue
                result.cases += 1
                same_orbit = rational_block_equal(rs, level.p, level.q, lam, mu)
                if mu in reached and not same_orbit:
                    result.failures.append(f"{lam} ~ {mu} but not in one W ⋉ 2Q∨ orbit")
                elif same_orbit and mu not in reached:
                    result.notes.append(f"{lam}, {mu}: same orbit, not linked within the bound")
        result.passed = not result.failures
        return result

    def invariants(self) -> SuiteResult:
        """Seeded quick pass over root-system and chain invariants."""
        rng = random.Random(self.config.seed)
        result = SuiteResult(name="invariants", passed=True, cases=0)
        for code in ("A1", "A2", "B2", "G2"):
            rs = self.repository.find_by_code(code)
            for i, alpha in enumerate(rs.simple_roots):
                result.cases += 1
                if pairing(rs, rs.rho, alpha) != 1:
                    result.failures.append(f"{code}: (ρ, α{i + 1}∨) ≠ 1")
            for _ in range(self.config.invariant_cases):
                lam = Weight.of(Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3))) for _ in range(rs.rank))
                mu = Weight.of(rng.randint(-6, 6) for _ in range(rs.rank))
                beta = rng.choice(rs.roots)
                w = rng.randrange(rs.weyl_order)
                result.cases += 1
                if reflect(rs, reflect(rs, lam, beta), beta) != lam:
                    result.failures.append(f"{code}: reflection in {beta} is not an involution at {lam}")
                if inner(rs, apply_weyl(rs, w, lam), apply_weyl(rs, w, mu)) != inner(rs, lam, mu):
                    result.failures.append(f"{code}: form not invariant under element {w}")
                if inner(rs, beta, coroot(rs, beta)) != 2:
                    result.failures.append(f"{code}: (β, β∨) ≠ 2 for {beta}")
        rs = self.repository.find_by_code("A1")
        for text in ("-2", "-3/2", "generic"):
            level = Level.parse(text)
            query = default_query(rs, level)
            for k in range(-3, 6):
                for candidate in subquotient_candidates(rs, level, Weight.of((k,)), query):
                    result.cases += 1
                    if not verify_chain(rs, level, candidate.chain, query.step_convention):
                        result.failures.append(f"κ = {level}: certificate for {candidate.weight} fails")
        result.passed = not result.failures
        return result


def selftest_passed(results: Dict[str, SuiteResult]) -> bool:
    return all(r.passed for r in results.values())
