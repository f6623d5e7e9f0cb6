"""
Verma module service layer.
Straightens products of affine generators against a highest-weight vector in
the PBW basis of U(n̂₋), enumerates graded pieces, and evaluates raising
operators, the contravariant form and the Sugawara L₀.

Internally a generator x t^n is the tuple (n, index) and a PBW monomial is a
non-decreasing tuple of such generators; this tuple order is the global PBW
order (loop degree, then basis index of g).
"""
from functools import lru_cache
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple
import logging

from app.config import settings
from app.exceptions import DepthExceededError
from app.models.level_model import Level
from app.models.verma_model import AffineBasisElement, PBWMonomial
from app.models.weight_model import Weight
from app.services.affine_algebra_service import AffineAlgebra
from app.services.exact_linalg_service import ScalarField

logger = logging.getLogger(__name__)

Gen = Tuple[int, int]
Mono = Tuple[Gen, ...]
Vector = Dict[Mono, Any]
PieceKey = Tuple[int, Tuple[int, ...]]


def _accumulate(out: Vector, mono: Mono, value: Any) -> None:
    total = out.get(mono)
    total = value if total is None else total + value
    if total:
        out[mono] = total
    else:
        out.pop(mono, None)


class VermaModule:
    """
    Verma module over the affine algebra with highest weight λ and K = κ − h∨.

    Coefficients live in the ScalarField of the level; act() is memoised per
    (generator, monomial) in an LRU cache of at most cache_size entries.
    """

    def __init__(
        self,
        algebra: AffineAlgebra,
        level: Level,
        highest_weight: Weight,
        cache_size: Optional[int] = None,
    ):
        """
        Initialize the module.

        Args:
            algebra: Truncated affine algebra; its depth_cap bounds the pieces
            level: Level κ (rational or generic)
            highest_weight: λ in fundamental-weight coordinates
            cache_size: Bound on memoised actions (settings.verma_action_cache_size)
        """
        self.algebra = algebra
        self.g = algebra.g
        self.rs = self.g.rs
        self.level = level
        self.lam = highest_weight
        self.field = ScalarField(level)
        self.central = self.field.kappa - self.field.scalar(self.rs.dual_coxeter)
        self.depth_cap = algebra.depth_cap

        f = self.field
        self._structure = {
            key: tuple((k, f.scalar(c)) for k, c in combo)
            for key, combo in self.g.structure.items()
        }
        self._form = {key: f.scalar(c) for key, c in self.g.form.items()}
        self._hw_value = {
            k: f.scalar(highest_weight.coords[i]) for k, i in self.g.simple_of_h.items()
        }
        if cache_size is None:
            cache_size = settings.verma_action_cache_size
        self.act = lru_cache(maxsize=cache_size)(self._act)
        self._finite_lowering = sorted(
            (0, k) for k, kind in enumerate(self.g.kinds) if kind == "f"
        )

    # ---- generator classification -------------------------------------------------

    def is_lowering(self, gen: Gen) -> bool:
        n, b = gen
        return n < 0 or (n == 0 and self.g.kinds[b] == "f")

    def is_cartan_zero_mode(self, gen: Gen) -> bool:
        n, b = gen
        return n == 0 and self.g.kinds[b] == "h"

    def raising_generators(self, depth: int) -> List[Gen]:
        """Every e_α t⁰ and x t^n with 1 ≤ n ≤ depth."""
        gens = [(0, k) for k, kind in enumerate(self.g.kinds) if kind == "e"]
        gens += [(n, k) for n in range(1, depth + 1) for k in range(self.g.dim)]
        return gens

    def simple_raising_generators(self) -> List[Gen]:
        """e_i t⁰ and f_θ t¹, which generate the affine positive part."""
        gens = [(0, self.g.e_index[alpha]) for alpha in self.rs.simple_roots]
        gens.append((1, self.g.f_index[self.rs.highest_root]))
        return gens

    # ---- straightening -----------------------------------------------------------

    def _bracket(self, x: Gen, y: Gen) -> Tuple[List[Tuple[Gen, Any]], Any]:
        (n, a), (m, b) = x, y
        terms = [((n + m, k), c) for k, c in self._structure.get((a, b), ())]
        central = None
        if n != 0 and n == -m:
            pairing = self._form.get((a, b))
            if pairing:
                central = self.field.scalar(n) * pairing * self.central
        return terms, central

    def _act(self, gen: Gen, mono: Mono) -> Vector:
        """x t^n applied to the PBW monomial `mono`, in the PBW basis."""
        if self.is_lowering(gen):
            if not mono or gen <= mono[0]:
                return {(gen,) + mono: self.field.one}
        elif not mono:
            if self.is_cartan_zero_mode(gen):
                value = self._hw_value[gen[1]]
                return {(): value} if value else {}
            return {}

        head, rest = mono[0], mono[1:]
        out: Vector = {}
        # x y R = y (x R) + [x, y] R
        for m1, c1 in self.act(gen, rest).items():
            for m2, c2 in self.act(head, m1).items():
                _accumulate(out, m2, c1 * c2)
        terms, central = self._bracket(gen, head)
        for g2, c in terms:
            for m2, c2 in self.act(g2, rest).items():
                _accumulate(out, m2, c * c2)
        if central is not None:
            _accumulate(out, rest, central)
        return out

    def apply(self, gen: Gen, vector: Vector) -> Vector:
        out: Vector = {}
        for mono, c in vector.items():
            for m2, c2 in self.act(gen, mono).items():
                _accumulate(out, m2, c * c2)
        return out

    def apply_combination(self, terms: Sequence[Tuple[Gen, Any]], vector: Vector) -> Vector:
        out: Vector = {}
        for gen, c in terms:
            for mono, value in self.apply(gen, vector).items():
                _accumulate(out, mono, c * value)
        return out

    # ---- grading ------------------------------------------------------------------

    def depth_of(self, mono: Mono) -> int:
        return sum(-n for n, _ in mono)

    def weight_offset(self, mono: Mono) -> Tuple[int, ...]:
        """ν − λ in simple-root coordinates."""
        total = [0] * self.rs.rank
        for _, b in mono:
            for i, c in enumerate(self.g.weights[b]):
                total[i] += c
        return tuple(total)

    def key_of(self, mono: Mono) -> PieceKey:
        """(d, λ − ν) in simple-root coordinates."""
        return self.depth_of(mono), tuple(-c for c in self.weight_offset(mono))

    def weight_of_key(self, key: PieceKey) -> Weight:
        _, gamma = key
        shift = Weight.zero(self.rs.rank)
        for i, c in enumerate(gamma):
            if c:
                shift = shift + self.rs.simple_roots[i].scale(c)
        return self.lam - shift

    def key_for(self, depth: int, nu: Weight) -> Optional[PieceKey]:
        coords = self.rs.root_coordinates(self.lam - nu)
        if any(c.denominator != 1 for c in coords):
            return None
        return depth, tuple(int(c) for c in coords)

    def check_depth(self, depth: int) -> None:
        if depth > self.depth_cap:
            raise DepthExceededError(
                f"Loop depth {depth} exceeds the truncation cap {self.depth_cap}"
            )

    def _loop_parts(self, depth: int) -> Iterator[Mono]:
        gens = sorted((-k, b) for k in range(1, depth + 1) for b in range(self.g.dim))

        def rec(start: int, remaining: int, acc: Tuple[Gen, ...]) -> Iterator[Mono]:
            if remaining == 0:
                yield acc
                return
            for i in range(start, len(gens)):
                n, _ = gens[i]
                if -n <= remaining:
                    yield from rec(i, remaining + n, acc + (gens[i],))

        yield from rec(0, depth, ())

    def _finite_parts(self, target: Tuple[int, ...]) -> Iterator[Mono]:
        """Multisets of f_α t⁰ whose roots sum to `target`."""
        gens = self._finite_lowering

        def rec(start: int, remaining: Tuple[int, ...], acc: Tuple[Gen, ...]) -> Iterator[Mono]:
            if not any(remaining):
                yield acc
                return
            for i in range(start, len(gens)):
                root = tuple(-c for c in self.g.weights[gens[i][1]])
                left = tuple(r - c for r, c in zip(remaining, root))
                if min(left) >= 0:
                    yield from rec(i, left, acc + (gens[i],))

        yield from rec(0, target, ())

    def _bounded_finite_parts(self, max_height: int) -> Iterator[Mono]:
        gens = self._finite_lowering
        heights = [sum(-c for c in self.g.weights[b]) for _, b in gens]

        def rec(start: int, budget: int, acc: Tuple[Gen, ...]) -> Iterator[Mono]:
            yield acc
            for i in range(start, len(gens)):
                if heights[i] <= budget:
                    yield from rec(i, budget - heights[i], acc + (gens[i],))

        if max_height >= 0:
            yield from rec(0, max_height, ())

    def basis(self, key: PieceKey) -> List[Mono]:
        """Canonical PBW basis of the graded piece with the given key."""
        depth, gamma = key
        self.check_depth(depth)
        out = []
        for loop in self._loop_parts(depth):
            offset = self.weight_offset(loop)
            target = tuple(g + o for g, o in zip(gamma, offset))
            if min(target, default=0) < 0:
                continue
            for finite in self._finite_parts(target):
                out.append(loop + finite)
        return sorted(out)

    def pieces(self, depth_cap: int, height_cap: int) -> Dict[PieceKey, List[Mono]]:
        """All graded pieces with d ≤ depth_cap and ht(λ − ν) ≤ height_cap."""
        self.check_depth(depth_cap)
        grouped: Dict[PieceKey, List[Mono]] = {}
        for depth in range(depth_cap + 1):
            for loop in self._loop_parts(depth):
                loop_height = sum(self.weight_offset(loop))
                for finite in self._bounded_finite_parts(height_cap + loop_height):
                    mono = loop + finite
                    grouped.setdefault(self.key_of(mono), []).append(mono)
        return {key: sorted(monos) for key, monos in sorted(grouped.items())}

    # ---- public conversions ------------------------------------------------------

    def to_monomial(self, mono: Mono) -> PBWMonomial:
        factors = tuple(
            AffineBasisElement(degree=n, index=b, label=self.g.labels[b]) for n, b in mono
        )
        return PBWMonomial(
            factors=factors, depth=self.depth_of(mono), weight=self.weight_of_key(self.key_of(mono))
        )

    @staticmethod
    def from_monomial(monomial: PBWMonomial) -> Mono:
        return tuple((f.degree, f.index) for f in monomial.factors)

    # ---- forms and operators -----------------------------------------------------

    def sigma(self, gen: Gen) -> List[Tuple[Gen, Any]]:
        """Contravariant anti-involution: σ(x t^n) = σ(x) t^{−n}."""
        n, b = gen
        return [((-n, k), self.field.scalar(c)) for k, c in self.g.sigma[b]]

    def contravariant_pairing(self, left: Mono, right: Mono) -> Any:
        """Coefficient of v in σ(left)·right·v."""
        vector: Vector = {right: self.field.one}
        for gen in left:
            vector = self.apply_combination(self.sigma(gen), vector)
            if not vector:
                return self.field.zero
        return vector.get((), self.field.zero)

    def shapovalov_matrix(self, basis: Sequence[Mono]) -> List[List[Any]]:
        size = len(basis)
        matrix = [[self.field.zero] * size for _ in range(size)]
        for i in range(size):
            for j in range(i, size):
                value = self.contravariant_pairing(basis[i], basis[j])
                matrix[i][j] = value
                matrix[j][i] = value
        return matrix

    def raising_rows(self, basis: Sequence[Mono], gens: Sequence[Gen]) -> List[List[Any]]:
        """Stacked matrix of the given raising generators on a piece."""
        rows: Dict[Tuple[Gen, Mono], List[Any]] = {}
        for j, mono in enumerate(basis):
            for gen in gens:
                for image, c in self.act(gen, mono).items():
                    row = rows.setdefault((gen, image), [self.field.zero] * len(basis))
                    row[j] = row[j] + c
        return [rows[key] for key in sorted(rows)]

    def sugawara_l0(self, vector: Vector) -> Vector:
        """
        L₀ = (1/2κ)(Σ_p x_p x^p + 2 Σ_{j≥1} Σ_p x_p t^{−j} x^p t^{j}) applied to a vector.

        The j-sum stops at the largest depth present; higher modes kill it.
        """
        depth = max((self.depth_of(mono) for mono in vector), default=0)
        out: Vector = {}
        two = self.field.scalar(2)
        for a in range(self.g.dim):
            dual = [((0, k), self.field.scalar(c)) for k, c in self.g.dual[a]]
            for mono, value in self.apply((0, a), self.apply_combination(dual, vector)).items():
                _accumulate(out, mono, value)
            for j in range(1, depth + 1):
                dual_j = [((j, k), c) for (_, k), c in dual]
                inner = self.apply_combination(dual_j, vector)
                for mono, value in self.apply((-j, a), inner).items():
                    _accumulate(out, mono, two * value)
        factor = self.field.one / (two * self.field.kappa)
        return {mono: factor * value for mono, value in out.items()}
