"""
Shapovalov oracle service layer.
Computes contravariant forms, singular vectors and Sugawara L₀ values on
truncated affine Verma modules, and compares the singular vectors it finds
with the subquotient candidates predicted by the linkage search.
"""
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple
import logging
import time

from app.config import settings
from app.exceptions import EmptyWeightSpaceError, LinkageToolkitError, OracleError
from app.models.chain_model import BlockQuery
from app.models.level_model import Level
from app.models.root_system_model import RootSystem
from app.models.verma_model import (
    GradedPiece,
    Horizon,
    KKComparison,
    PBWMonomial,
    ShapovalovReport,
    SingularVector,
    VermaState,
)
from app.models.weight_model import Weight
from app.services.affine_algebra_service import build_truncated_affine
from app.services.charge_service import matching_l0_conventions
from app.services.exact_linalg_service import determinant, kernel_basis
from app.services.linkage_service import default_query, subquotient_candidates
from app.services.root_system_service import check_weight
from app.services.verma_service import Mono, PieceKey, VermaModule

logger = logging.getLogger(__name__)


@dataclass
class OracleConfig:
    """Horizon defaults and parallelism for oracle runs."""
    depth_cap: int = field(default_factory=lambda: settings.default_depth_cap)
    height_cap: int = field(default_factory=lambda: settings.default_height_cap)
    max_workers: int = field(default_factory=lambda: settings.oracle_workers)
    probe_levels: List[str] = field(default_factory=lambda: list(settings.generic_probe_levels))
    module_cache_size: int = field(default_factory=lambda: settings.oracle_module_cache_size)
    action_cache_size: int = field(default_factory=lambda: settings.verma_action_cache_size)


class ShapovalovService:
    """
    Oracle over truncated affine Verma modules.
    The most recently used Verma modules are kept per (root system, level,
    highest weight, depth cap) so repeated queries reuse their straightening
    tables; config.module_cache_size bounds how many.
    """

    def __init__(self, config: Optional[OracleConfig] = None):
        """
        Initialize service with its configuration.

        Args:
            config: Oracle horizon and worker settings
        """
        self.config = config or OracleConfig()
        self._module_cache = lru_cache(maxsize=self.config.module_cache_size)(self._build_module)

    def _build_module(
        self, rs: RootSystem, level: Level, lam_hw: Weight, depth_cap: int
    ) -> VermaModule:
        return VermaModule(
            build_truncated_affine(rs, depth_cap),
            level,
            lam_hw,
            cache_size=self.config.action_cache_size,
        )

    def module(self, rs: RootSystem, level: Level, lam_hw: Weight, depth_cap: int) -> VermaModule:
        check_weight(rs, lam_hw)
        return self._module_cache(rs, level, lam_hw, depth_cap)

    def _caps(self, depth_cap: Optional[int], height_cap: Optional[int]) -> Tuple[int, int]:
        depth = self.config.depth_cap if depth_cap is None else depth_cap
        height = self.config.height_cap if height_cap is None else height_cap
        if depth < 0 or height < 0:
            raise LinkageToolkitError("Horizon caps must be nonnegative")
        return depth, height

    def verma_weight_space(
        self,
        rs: RootSystem,
        level: Level,
        lam_hw: Weight,
        depth: int,
        nu: Weight,
        depth_cap: Optional[int] = None,
    ) -> List[PBWMonomial]:
        """
        Canonical PBW basis of the (depth, ν) graded piece.

        Args:
            rs: Root system
            level: Level κ
            lam_hw: Highest weight
            depth: Loop depth d
            nu: Finite weight ν of the piece
            depth_cap: Truncation cap (configured default when omitted)

        Returns:
            Monomials in PBW order; empty when the piece is zero
        """
        cap, _ = self._caps(depth_cap, None)
        module = self.module(rs, level, lam_hw, max(cap, 0))
        check_weight(rs, nu)
        key = module.key_for(depth, nu)
        if key is None:
            module.check_depth(depth)
            return []
        return [module.to_monomial(mono) for mono in module.basis(key)]

    def shapovalov_matrix(
        self, rs: RootSystem, level: Level, lam_hw: Weight, depth: int, nu: Weight
    ) -> List[List[Any]]:
        """Contravariant form on the PBW basis of a nonempty graded piece."""
        cap = max(self.config.depth_cap, depth)
        module = self.module(rs, level, lam_hw, cap)
        key = module.key_for(depth, nu)
        basis = module.basis(key) if key is not None else []
        if not basis:
            raise EmptyWeightSpaceError(f"The piece (d={depth}, ν={nu}) of M({lam_hw}) is zero")
        return module.shapovalov_matrix(basis)

    def _raising_kernel(self, module: VermaModule, basis: List[Mono]) -> List[List[Any]]:
        rows = module.raising_rows(basis, module.simple_raising_generators())
        return kernel_basis(rows, len(basis), module.field)

    def _evaluate_piece(
        self,
        module: VermaModule,
        probes: List[VermaModule],
        key: PieceKey,
        basis: List[Mono],
    ) -> Optional[SingularVector]:
        depth, _ = key
        for probe in probes:
            if not self._raising_kernel(probe, basis):
                return None
        kernel = self._raising_kernel(module, basis)
        if not kernel:
            return None

        vectors = []
        for coeffs in kernel:
            vector = {basis[j]: c for j, c in enumerate(coeffs) if c}
            for gen in module.raising_generators(depth):
                if module.apply(gen, vector):
                    raise OracleError(
                        f"Kernel vector at {key} is not annihilated by generator {gen}"
                    )
            vectors.append({module.to_monomial(mono): c for mono, c in vector.items()})
        logger.debug("Singular vectors at %s: kernel dimension %d", key, len(vectors))
        return SingularVector(depth=depth, weight=module.weight_of_key(key), vectors=vectors)

    def singular_vectors(
        self,
        rs: RootSystem,
        level: Level,
        lam_hw: Weight,
        depth_cap: Optional[int] = None,
        height_cap: Optional[int] = None,
    ) -> List[SingularVector]:
        """
        Singular vectors of the Verma module inside the horizon.

        Each piece's candidates are the kernel of the stacked maps e_i t⁰ and
        f_θ t¹; every kernel vector is then checked against all raising
        generators up to its depth. At the generic level a trivial kernel at
        any probe level proves a trivial generic kernel.

        Returns:
            Singular vectors sorted by (depth, weight), the hw line excluded
        """
        depth_cap, height_cap = self._caps(depth_cap, height_cap)
        start = time.time()
        module = self.module(rs, level, lam_hw, depth_cap)
        pieces = module.pieces(depth_cap, height_cap)
        pieces.pop((0, (0,) * rs.rank), None)
        probes = []
        if level.is_generic:
            probes = [
                self.module(rs, Level.parse(text), lam_hw, depth_cap)
                for text in self.config.probe_levels
            ]

        found: List[SingularVector] = []
        if self.config.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
                future_to_key = {
                    executor.submit(self._evaluate_piece, module, probes, key, basis): key
                    for key, basis in pieces.items()
                }
                for future in as_completed(future_to_key):
                    try:
                        result = future.result()
                    except Exception as e:
                        logger.error("Piece %s failed: %s", future_to_key[future], e, exc_info=True)
                        raise
                    if result is not None:
                        found.append(result)
        else:
            for key, basis in pieces.items():
                result = self._evaluate_piece(module, probes, key, basis)
                if result is not None:
                    found.append(result)

        found.sort(key=lambda sv: (sv.depth, sv.weight))
        logger.info(
            "Oracle for %s at level %s, λ = %s: %d pieces, %d singular in %.2fs",
            rs.code, level, lam_hw, len(pieces), len(found), time.time() - start,
        )
        return found

    def sugawara_l0(self, rs: RootSystem, level: Level, state: VermaState) -> Any:
        """
        Sugawara L₀ eigenvalue of a state lying in one graded piece.

        Returns:
            Fraction at a rational level, sympy expression at the generic level
        """
        if not any(state.coefficients.values()):
            raise EmptyWeightSpaceError("The zero vector has no L0 eigenvalue")
        depth = max(m.depth for m in state.coefficients)
        module = self.module(rs, level, state.highest_weight, max(depth, self.config.depth_cap))
        vector = {
            VermaModule.from_monomial(m): module.field.coerce(c)
            for m, c in state.coefficients.items()
            if c
        }
        image = module.sugawara_l0(vector)
        probe_mono, probe_value = next(iter(sorted(vector.items())))
        eigenvalue = image.get(probe_mono, module.field.zero) / probe_value
        # image is sparse: a zero eigenvalue leaves it empty
        if not set(image) <= set(vector):
            raise OracleError("State is not an L0 eigenvector")
        for mono, value in vector.items():
            if image.get(mono, module.field.zero) != eigenvalue * value:
                raise OracleError("State is not an L0 eigenvector")
        if level.is_generic:
            return module.field.to_sympy(eigenvalue)
        return Fraction(eigenvalue)

    def highest_weight_l0(self, rs: RootSystem, level: Level, lam_hw: Weight) -> Any:
        vacuum = PBWMonomial(factors=(), depth=0, weight=lam_hw)
        return self.sugawara_l0(rs, level, VermaState(lam_hw, {vacuum: 1}))

    def l0_convention(self, rs: RootSystem, level: Level, lam_hw: Weight) -> str:
        """Which L₀ formula the oracle reproduces on the highest-weight vector."""
        observed = self.highest_weight_l0(rs, level, lam_hw)
        matches = matching_l0_conventions(rs, level, lam_hw, observed)
        if settings.l0_convention in matches:
            return settings.l0_convention
        if matches:
            logger.warning("L0 on M(%s) matches %s, not the pinned convention", lam_hw, matches)
            return matches[0]
        logger.warning("L0 on M(%s) = %s matches no convention", lam_hw, observed)
        return "none"

    def shapovalov_report(
        self,
        rs: RootSystem,
        level: Level,
        lam_hw: Weight,
        depth_cap: Optional[int] = None,
        height_cap: Optional[int] = None,
    ) -> ShapovalovReport:
        """Forms, determinants, kernels, singular vectors and L₀ per depth over a horizon."""
        depth_cap, height_cap = self._caps(depth_cap, height_cap)
        module = self.module(rs, level, lam_hw, depth_cap)
        pieces = []
        l0_by_depth: Dict[int, Any] = {}
        for key, basis in module.pieces(depth_cap, height_cap).items():
            depth, _ = key
            matrix = module.shapovalov_matrix(basis)
            kernel = kernel_basis(matrix, len(basis), module.field)
            pieces.append(GradedPiece(
                depth=depth,
                weight=module.weight_of_key(key),
                basis=[module.to_monomial(mono) for mono in basis],
                matrix=matrix,
                determinant=determinant(matrix, module.field),
                kernel_dim=len(kernel),
                kernel_basis=kernel,
            ))
            if depth not in l0_by_depth:
                state = VermaState(lam_hw, {module.to_monomial(basis[0]): 1})
                l0_by_depth[depth] = self.sugawara_l0(rs, level, state)
        singular = self.singular_vectors(rs, level, lam_hw, depth_cap, height_cap)
        return ShapovalovReport(
            highest_weight=lam_hw,
            horizon=Horizon(depth_cap=depth_cap, height_cap=height_cap),
            pieces=pieces,
            singular=singular,
            l0_by_depth=l0_by_depth,
        )

    def comparison_query(
        self,
        rs: RootSystem,
        level: Level,
        depth_cap: int,
        height_cap: int,
        query: Optional[BlockQuery] = None,
    ) -> BlockQuery:
        """Linkage bounds that make the chain side complete inside the horizon."""
        base = query or default_query(rs, level)
        theta = int(rs.height(rs.highest_root))
        return replace(
            base,
            max_chain_len=depth_cap + height_cap + 2 * depth_cap * theta + 1,
            max_m=depth_cap,
            weight_box=None,
            max_loop_depth=depth_cap,
            max_height=height_cap,
            allow_empty_chain=False,
        )

    def verify_kk(
        self,
        rs: RootSystem,
        level: Level,
        lam_hw: Weight,
        depth_cap: Optional[int] = None,
        query: Optional[BlockQuery] = None,
        height_cap: Optional[int] = None,
    ) -> KKComparison:
        """
        Compare oracle singular vectors with linkage predictions.

        Both sides are keyed by (weight, loop depth) and restricted to the
        same horizon; the step convention of `query` is kept.
        """
        depth_cap, height_cap = self._caps(depth_cap, height_cap)
        singular = self.singular_vectors(rs, level, lam_hw, depth_cap, height_cap)
        found = sorted({(sv.weight, sv.depth) for sv in singular})

        chain_query = self.comparison_query(rs, level, depth_cap, height_cap, query)
        candidates = subquotient_candidates(rs, level, lam_hw, chain_query)
        predicted = sorted({(c.weight, c.loop_depth) for c in candidates})

        missing = sorted(set(predicted) - set(found))
        extra = sorted(set(found) - set(predicted))
        report = KKComparison(
            highest_weight=lam_hw,
            horizon=Horizon(depth_cap=depth_cap, height_cap=height_cap),
            singular=found,
            predicted=predicted,
            missing=missing,
            extra=extra,
            l0_convention=self.l0_convention(rs, level, lam_hw),
        )
        if report.agrees:
            logger.info("verify_kk %s level %s λ = %s: agreement", rs.code, level, lam_hw)
        else:
            logger.warning(
                "verify_kk %s level %s λ = %s: %d missing, %d extra",
                rs.code, level, lam_hw, len(missing), len(extra),
            )
        return report


@lru_cache()
def get_shapovalov_service() -> ShapovalovService:
    """Shared oracle instance."""
    return ShapovalovService()
