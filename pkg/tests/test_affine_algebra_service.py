from fractions import Fraction
from itertools import combinations_with_replacement
import random

import pytest

from app.exceptions import UnsupportedRankError
from app.models.verma_model import AffineBasisElement
from app.repositories.root_system_repository import root_system_repository
from app.services.affine_algebra_service import build_truncated_affine, simple_lie_algebra

K = AffineBasisElement.central()


def bracket_combination(algebra, left, right):
    """Bilinear extension of the affine bracket to {element: coefficient} maps."""
    out = {}
    for x, a in left.items():
        for y, b in right.items():
            for z, c in algebra.bracket(x, y):
                out[z] = out.get(z, Fraction(0)) + a * b * c
    return {z: c for z, c in out.items() if c}


def add(*vectors):
    out = {}
    for vector in vectors:
        for z, c in vector.items():
            out[z] = out.get(z, Fraction(0)) + c
    return {z: c for z, c in out.items() if c}


class TestChevalleyBasis:
    def test_a1_labels_and_brackets(self, a1):
        g = simple_lie_algebra(a1)
        assert g.labels == ("e[1]", "h1", "f[1]")
        assert g.bracket(0, 2) == ((1, Fraction(1)),)
        assert g.bracket(1, 0) == ((0, Fraction(2)),)
        assert g.bracket(1, 2) == ((2, Fraction(-2)),)
        assert g.pairing(0, 2) == 1
        assert g.pairing(1, 1) == 2

    @pytest.mark.parametrize("code, dim", [("A1", 3), ("A2", 8), ("B2", 10), ("C3", 21), ("G2", 14)])
    def test_dimension(self, code, dim):
        assert simple_lie_algebra(root_system_repository.find_by_code(code)).dim == dim

    @pytest.mark.parametrize("code", ["A2", "B2", "G2"])
    def test_form_is_invariant(self, code):
        g = simple_lie_algebra(root_system_repository.find_by_code(code))
        for a in range(g.dim):
            for b in range(g.dim):
                for c in range(g.dim):
                    lhs = sum((coef * g.pairing(k, c) for k, coef in g.bracket(a, b)), Fraction(0))
                    rhs = sum((coef * g.pairing(a, k) for k, coef in g.bracket(b, c)), Fraction(0))
                    assert lhs == rhs

    @pytest.mark.parametrize("code", ["A2", "B2", "G2"])
    def test_sigma_is_an_anti_involution(self, code):
        g = simple_lie_algebra(root_system_repository.find_by_code(code))

        def sigma(vector):
            out = {}
            for k, c in vector.items():
                for j, s in g.sigma[k]:
                    out[j] = out.get(j, Fraction(0)) + c * s
            return {j: c for j, c in out.items() if c}

        def br(x, y):
            out = {}
            for a, ca in x.items():
                for b, cb in y.items():
                    for k, c in g.bracket(a, b):
                        out[k] = out.get(k, Fraction(0)) + ca * cb * c
            return {k: c for k, c in out.items() if c}

        for a in range(g.dim):
            assert sigma(sigma({a: Fraction(1)})) == {a: Fraction(1)}
            for b in range(g.dim):
                x, y = {a: Fraction(1)}, {b: Fraction(1)}
                assert sigma(br(x, y)) == br(sigma(y), sigma(x))

    def test_rank_above_the_oracle_limit(self):
        with pytest.raises(UnsupportedRankError):
            simple_lie_algebra(root_system_repository.find_by_code("A4"))


class TestLoopBracket:
    def test_central_term(self, a1):
        algebra = build_truncated_affine(a1, 1)
        e1 = algebra.element(0, 1)
        f_1 = algebra.element(2, -1)
        assert algebra.bracket(e1, f_1) == [(algebra.element(1, 0), Fraction(1)), (K, Fraction(1))]

    def test_no_central_term_at_degree_zero(self, a1):
        algebra = build_truncated_affine(a1, 1)
        assert algebra.bracket(algebra.element(0, 0), algebra.element(2, 0)) == [
            (algebra.element(1, 0), Fraction(1))
        ]

    def test_central_element_commutes(self, a2):
        algebra = build_truncated_affine(a2, 2)
        for x in algebra.generators():
            assert algebra.bracket(x, K) == []
            assert algebra.bracket(K, x) == []

    def test_generators_cover_the_truncation(self, a1):
        algebra = build_truncated_affine(a1, 2)
        gens = algebra.generators()
        assert len(gens) == 5 * 3 + 1
        assert {g.degree for g in gens if not g.is_central} == {-2, -1, 0, 1, 2}

    def test_table_is_antisymmetric(self, a1):
        algebra = build_truncated_affine(a1, 1)
        table = algebra.table()
        for (x, y), terms in table.items():
            assert dict(terms) == {z: -c for z, c in table[(y, x)]}

    def test_negative_cap(self, a1):
        with pytest.raises(UnsupportedRankError):
            build_truncated_affine(a1, -1)


def jacobiator(algebra, x, y, z):
    x, y, z = {x: Fraction(1)}, {y: Fraction(1)}, {z: Fraction(1)}
    return add(
        bracket_combination(algebra, x, bracket_combination(algebra, y, z)),
        bracket_combination(algebra, y, bracket_combination(algebra, z, x)),
        bracket_combination(algebra, z, bracket_combination(algebra, x, y)),
    )


class TestJacobi:
    @pytest.mark.parametrize("code", ["A1", "A2", "B2", "G2"])
    def test_random_triples(self, code):
        algebra = build_truncated_affine(root_system_repository.find_by_code(code), 3)
        gens = algebra.generators()
        rng = random.Random(sum(map(ord, code)))
        for _ in range(500):
            x, y, z = (rng.choice(gens) for _ in range(3))
            assert jacobiator(algebra, x, y, z) == {}, (x, y, z)

    @pytest.mark.parametrize("depth_cap", [1, 2, 3])
    def test_every_triple_of_a1(self, a1, depth_cap):
        algebra = build_truncated_affine(a1, depth_cap)
        gens = algebra.generators()
        for x in gens:
            for y in gens:
                for z in gens:
                    assert jacobiator(algebra, x, y, z) == {}, (x, y, z)

    # the bracket table is antisymmetric, so unordered triples cover every ordering
    @pytest.mark.slow
    @pytest.mark.parametrize("code", ["A2", "B2"])
    @pytest.mark.parametrize("depth_cap", [1, 2, 3])
    def test_every_triple_of_rank_two(self, code, depth_cap):
        algebra = build_truncated_affine(root_system_repository.find_by_code(code), depth_cap)
        for x, y, z in combinations_with_replacement(algebra.generators(), 3):
            assert jacobiator(algebra, x, y, z) == {}, (x, y, z)
