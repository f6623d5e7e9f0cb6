"""
Affine algebra service layer.
Builds a Chevalley basis of g from a matrix realisation, its invariant form,
dual bases and contravariant anti-involution, and the loop bracket
[x t^n, y t^m] = [x, y] t^{n+m} + n δ_{n,−m} (x, y) K.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple
import logging

from sympy import Matrix, Rational, SparseMatrix

from app.config import settings
from app.exceptions import OracleError, UnsupportedRankError
from app.models.root_system_model import RootSystem
from app.models.verma_model import AffineBasisElement
from app.models.weight_model import Weight

logger = logging.getLogger(__name__)

Combination = Tuple[Tuple[int, Fraction], ...]

REALISED_SERIES = ("A", "B", "C", "D", "G")


def _rat(value) -> Rational:
    value = Fraction(value)
    return Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _commutator(x: SparseMatrix, y: SparseMatrix) -> SparseMatrix:
    return x * y - y * x


def _is_zero(x: SparseMatrix) -> bool:
    return not x.row_list()


def _leading(x: SparseMatrix) -> Tuple[int, int, Rational]:
    """First nonzero entry in row-major order."""
    return x.row_list()[0]


def _ratio(x: SparseMatrix, y: SparseMatrix) -> Rational:
    """x[k] / y[k] at the leading entry k of y."""
    row, col, value = _leading(y)
    return x[row, col] / value


def _matrix_realisation(series: str, n: int) -> Tuple[int, List[SparseMatrix], List[SparseMatrix]]:
    """Chevalley generators e_i, f_i as sparse matrices, before normalisation."""

    def sparse(size: int, entries: Dict[Tuple[int, int], int]) -> SparseMatrix:
        return SparseMatrix(size, size, {k: Rational(v) for k, v in entries.items()})

    if series == "A":
        es = [sparse(n + 1, {(i, i + 1): 1}) for i in range(n)]
        return n + 1, es, [e.T for e in es]
    if series == "G":
        e1 = sparse(7, {(0, 1): 1, (2, 3): 2, (3, 4): 1, (5, 6): 1})
        e2 = sparse(7, {(1, 2): 1, (4, 5): 1})
        f1 = sparse(7, {(1, 0): 1, (3, 2): 1, (4, 3): 2, (6, 5): 1})
        f2 = sparse(7, {(2, 1): 1, (5, 4): 1})
        return 7, [e1, e2], [f1, f2]

    if series == "B":
        size = 2 * n + 1

        def plus(k):
            return k - 1

        def minus(k):
            return 2 * n + 1 - k
    else:
        size = 2 * n

        def plus(k):
            return k - 1

        def minus(k):
            return 2 * n - k

    es = [
        sparse(size, {(plus(i), plus(i + 1)): 1, (minus(i + 1), minus(i)): -1})
        for i in range(1, n)
    ]
    if series == "B":
        es.append(sparse(size, {(plus(n), n): 1, (n, minus(n)): -1}))
    elif series == "C":
        es.append(sparse(size, {(plus(n), minus(n)): 1}))
    else:
        es.append(sparse(size, {(plus(n - 1), minus(n)): 1, (plus(n), minus(n - 1)): -1}))
    return size, es, [e.T for e in es]


def _format_root(coords: Tuple[int, ...]) -> str:
    return "[" + ",".join(str(c) for c in coords) + "]"


@dataclass
class SimpleLieAlgebra:
    """
    Chevalley basis of g with exact structure constants.

    Basis order: e_α for α ∈ Δ₊ by height, then h_1..h_r, then f_α in the
    same order as the e_α.
    """

    rs: RootSystem
    kinds: Tuple[str, ...]
    roots: Tuple[Optional[Weight], ...]
    weights: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...]
    structure: Dict[Tuple[int, int], Combination]
    form: Dict[Tuple[int, int], Fraction]
    dual: Tuple[Combination, ...]
    sigma: Tuple[Combination, ...]
    e_index: Dict[Weight, int]
    f_index: Dict[Weight, int]
    h_index: Tuple[int, ...]
    simple_of_h: Dict[int, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.kinds)

    def bracket(self, a: int, b: int) -> Combination:
        return self.structure.get((a, b), ())

    def pairing(self, a: int, b: int) -> Fraction:
        return self.form.get((a, b), Fraction(0))


def _build_simple_algebra(rs: RootSystem) -> SimpleLieAlgebra:
    size, es, fs = _matrix_realisation(rs.series, rs.rank)
    r = rs.rank
    zero = SparseMatrix.zeros(size, size)

    # normalise so that [h_i, e_i] = 2 e_i
    hs = []
    for i in range(r):
        h = _commutator(es[i], fs[i])
        image = _commutator(h, es[i])
        ratio = _ratio(image, es[i])
        if ratio == 0:
            raise OracleError(f"Degenerate generator pair {i} for {rs.code}")
        fs[i] = fs[i] * (2 / ratio)
        hs.append(_commutator(es[i], fs[i]))

    for i in range(r):
        for j in range(r):
            image = _commutator(hs[i], es[j])
            if image != es[j] * _rat(rs.cartan_matrix[j][i]):
                raise OracleError(f"Matrix realisation of {rs.code} does not match its Cartan matrix")

    positive = list(rs.positive_roots)
    root_coords = {beta: tuple(int(c) for c in rs.root_coordinates(beta)) for beta in rs.roots}
    e_mats: Dict[Weight, SparseMatrix] = {}
    f_mats: Dict[Weight, SparseMatrix] = {}
    recipe: Dict[Weight, Tuple[int, Weight]] = {}
    for i, alpha in enumerate(rs.simple_roots):
        e_mats[alpha] = es[i]
        f_mats[alpha] = fs[i]
    for alpha in positive:
        if alpha in e_mats:
            continue
        for i, simple in enumerate(rs.simple_roots):
            rest = alpha - simple
            if rest in e_mats:
                break
        else:
            raise OracleError(f"No height decomposition for {alpha}")
        e_alpha = _commutator(es[i], e_mats[rest])
        f_alpha = _commutator(f_mats[rest], fs[i])
        if _is_zero(e_alpha) or _is_zero(f_alpha):
            raise OracleError(f"Root vector for {alpha} vanished")
        coroot = rs.coroot_coordinates[alpha]
        h_alpha = sum((hs[j] * _rat(c) for j, c in enumerate(coroot) if c), zero)
        image = _commutator(e_alpha, f_alpha)
        ratio = _ratio(image, h_alpha)
        if ratio == 0:
            raise OracleError(f"[e, f] vanished for {alpha}")
        f_alpha = f_alpha / ratio
        if _commutator(e_alpha, f_alpha) != h_alpha:
            raise OracleError(f"[e, f] is not the coroot for {alpha}")
        e_mats[alpha] = e_alpha
        f_mats[alpha] = f_alpha
        recipe[alpha] = (i, rest)

    kinds: List[str] = []
    roots: List[Optional[Weight]] = []
    weights: List[Tuple[int, ...]] = []
    labels: List[str] = []
    mats: List[SparseMatrix] = []
    for alpha in positive:
        kinds.append("e")
        roots.append(alpha)
        weights.append(root_coords[alpha])
        labels.append("e" + _format_root(root_coords[alpha]))
        mats.append(e_mats[alpha])
    for i in range(r):
        kinds.append("h")
        roots.append(None)
        weights.append((0,) * r)
        labels.append(f"h{i + 1}")
        mats.append(hs[i])
    for alpha in positive:
        kinds.append("f")
        roots.append(-alpha)
        weights.append(tuple(-c for c in root_coords[alpha]))
        labels.append("f" + _format_root(root_coords[alpha]))
        mats.append(f_mats[alpha])

    e_index = {alpha: k for k, alpha in enumerate(positive)}
    h_index = tuple(len(positive) + i for i in range(r))
    f_index = {alpha: len(positive) + r + k for k, alpha in enumerate(positive)}
    by_weight: Dict[Tuple[int, ...], int] = {}
    for k, kind in enumerate(kinds):
        if kind != "h":
            by_weight[weights[k]] = k

    # left inverse of the diagonal embedding of the Cartan subalgebra
    diag = Matrix(size, r, lambda row, col: hs[col][row, row])
    left_inverse = (diag.T * diag).inv() * diag.T

    def decompose(m: SparseMatrix, weight: Tuple[int, ...]) -> Combination:
        if _is_zero(m):
            return ()
        if all(c == 0 for c in weight):
            vec = Matrix(size, 1, lambda row, _: m[row, row])
            coeffs = left_inverse * vec
            combo = tuple(
                (h_index[i], _fraction(coeffs[i]))
                for i in range(r) if coeffs[i] != 0
            )
            rebuilt = sum((mats[k] * _rat(c) for k, c in combo), zero)
        else:
            k = by_weight.get(weight)
            if k is None:
                raise OracleError(f"Bracket landed outside g at weight {weight}")
            c = _fraction(_ratio(m, mats[k]))
            combo = ((k, c),) if c else ()
            rebuilt = mats[k] * _rat(c)
        if rebuilt != m:
            raise OracleError("Bracket is not a combination of the basis")
        return combo

    structure: Dict[Tuple[int, int], Combination] = {}
    dim = len(kinds)
    for a in range(dim):
        for b in range(dim):
            weight = tuple(x + y for x, y in zip(weights[a], weights[b]))
            combo = decompose(_commutator(mats[a], mats[b]), weight)
            if combo:
                structure[(a, b)] = combo

    # invariant form, long roots of norm 2
    gram = rs.form_gram
    form: Dict[Tuple[int, int], Fraction] = {}
    for alpha in positive:
        value = Fraction(2) / rs.root_norms[alpha]
        form[(e_index[alpha], f_index[alpha])] = value
        form[(f_index[alpha], e_index[alpha])] = value
    h_gram = [
        [4 * gram[i][j] / (gram[i][i] * gram[j][j]) for j in range(r)] for i in range(r)
    ]
    for i in range(r):
        for j in range(r):
            if h_gram[i][j]:
                form[(h_index[i], h_index[j])] = h_gram[i][j]

    h_inverse = Matrix([[_rat(v) for v in row] for row in h_gram]).inv()
    dual: List[Combination] = []
    for k, kind in enumerate(kinds):
        if kind == "e":
            alpha = roots[k]
            dual.append(((f_index[alpha], rs.root_norms[alpha] / 2),))
        elif kind == "f":
            alpha = -roots[k]
            dual.append(((e_index[alpha], rs.root_norms[alpha] / 2),))
        else:
            i = h_index.index(k)
            dual.append(tuple(
                (h_index[j], _fraction(h_inverse[i, j]))
                for j in range(r) if h_inverse[i, j] != 0
            ))

    # σ(e_i) = f_i, σ(h) = h, extended as an anti-automorphism
    c_alpha: Dict[Weight, Fraction] = {alpha: Fraction(1) for alpha in rs.simple_roots}
    for alpha in positive:
        if alpha in c_alpha:
            continue
        i, rest = recipe[alpha]
        image = decompose(_commutator(f_mats[rest], fs[i]), tuple(-c for c in root_coords[alpha]))
        c_alpha[alpha] = c_alpha[rest] * image[0][1]
    sigma: List[Combination] = []
    for k, kind in enumerate(kinds):
        if kind == "e":
            alpha = roots[k]
            sigma.append(((f_index[alpha], c_alpha[alpha]),))
        elif kind == "f":
            alpha = -roots[k]
            sigma.append(((e_index[alpha], 1 / c_alpha[alpha]),))
        else:
            sigma.append(((k, Fraction(1)),))

    algebra = SimpleLieAlgebra(
        rs=rs,
        kinds=tuple(kinds),
        roots=tuple(roots),
        weights=tuple(weights),
        labels=tuple(labels),
        structure=structure,
        form=form,
        dual=tuple(dual),
        sigma=tuple(sigma),
        e_index=e_index,
        f_index=f_index,
        h_index=h_index,
        simple_of_h={k: i for i, k in enumerate(h_index)},
    )
    if algebra.dim != rs.rank + len(rs.roots):
        raise OracleError(f"Chevalley basis of {rs.code} has the wrong dimension")
    logger.info("Built Chevalley basis for %s (dim %d)", rs.code, algebra.dim)
    return algebra


@lru_cache(maxsize=32)
def simple_lie_algebra(rs: RootSystem) -> SimpleLieAlgebra:
    if rs.series not in REALISED_SERIES:
        raise UnsupportedRankError(f"No matrix realisation for type {rs.series}")
    if rs.rank > settings.max_oracle_rank:
        raise UnsupportedRankError(
            f"Oracle supports rank ≤ {settings.max_oracle_rank}, got {rs.code}"
        )
    return _build_simple_algebra(rs)


@dataclass
class AffineAlgebra:
    """Loop algebra g[t, t⁻¹] ⊕ ℂK truncated to |loop degree| ≤ depth_cap."""

    g: SimpleLieAlgebra
    depth_cap: int

    def element(self, index: int, degree: int) -> AffineBasisElement:
        return AffineBasisElement(degree=degree, index=index, label=self.g.labels[index])

    def generators(self) -> List[AffineBasisElement]:
        out = [
            self.element(index, degree)
            for degree in range(-self.depth_cap, self.depth_cap + 1)
            for index in range(self.g.dim)
        ]
        out.append(AffineBasisElement.central())
        return out

    def bracket(
        self, x: AffineBasisElement, y: AffineBasisElement
    ) -> List[Tuple[AffineBasisElement, Fraction]]:
        """[x t^n, y t^m] as (element, coefficient) pairs; K appears as a term."""
        if x.is_central or y.is_central:
            return []
        degree = x.degree + y.degree
        terms = [(self.element(k, degree), c) for k, c in self.g.bracket(x.index, y.index)]
        if x.degree == -y.degree and x.degree != 0:
            central = x.degree * self.g.pairing(x.index, y.index)
            if central:
                terms.append((AffineBasisElement.central(), central))
        return terms

    def table(self) -> Dict[Tuple[AffineBasisElement, AffineBasisElement], List]:
        """Exact bracket table on every generator pair inside the truncation."""
        gens = self.generators()
        return {(x, y): self.bracket(x, y) for x in gens for y in gens}


def build_truncated_affine(rs: RootSystem, depth_cap: int) -> AffineAlgebra:
    """
    Truncated affine algebra over the Chevalley basis of g.

    Args:
        rs: Root system of rank at most settings.max_oracle_rank
        depth_cap: Largest |loop degree| kept

    Returns:
        AffineAlgebra with exact structure constants
    """
    if depth_cap < 0:
        raise UnsupportedRankError("depth_cap must be nonnegative")
    return AffineAlgebra(g=simple_lie_algebra(rs), depth_cap=depth_cap)
