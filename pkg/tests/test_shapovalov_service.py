from fractions import Fraction

import pytest
import sympy

from app.config import settings
from app.exceptions import (
    DepthExceededError,
    EmptyWeightSpaceError,
    OracleError,
    UnsupportedRankError,
)
from app.models.level_model import KAPPA, Level
from app.models.verma_model import VermaState
from app.repositories.root_system_repository import root_system_repository
from app.services.affine_algebra_service import build_truncated_affine
from app.services.shapovalov_service import OracleConfig, ShapovalovService
from app.services.verma_service import VermaModule
from helpers import level, w


class TestWeightSpaces:
    def test_depth_one_top_weight(self, a1, oracle):
        basis = oracle.verma_weight_space(a1, level("-2"), w(3), 1, w(3))
        assert [str(mono) for mono in basis] == ["e[1]t^-1·f[1]·v", "h1t^-1·v"]
        assert all(mono.depth == 1 and mono.weight == w(3) for mono in basis)

    def test_finite_piece(self, a1, oracle):
        basis = oracle.verma_weight_space(a1, level("-2"), w(3), 0, w(-1))
        assert [str(mono) for mono in basis] == ["f[1]·f[1]·v"]

    def test_weight_off_the_root_lattice(self, a1, oracle):
        assert oracle.verma_weight_space(a1, level("-2"), w(3), 0, w(2)) == []

    def test_depth_beyond_the_cap(self, a1, oracle):
        with pytest.raises(DepthExceededError):
            oracle.verma_weight_space(a1, level("-2"), w(3), 3, w(3), depth_cap=2)

    def test_a2_piece_dimension(self, a2, oracle):
        # f_{α1+α2} and f_{α2}·f_{α1} span the weight λ − α1 − α2
        theta = a2.highest_root
        basis = oracle.verma_weight_space(a2, level("-3/2"), w(1, 1), 0, w(1, 1) - theta)
        assert len(basis) == 2


class TestShapovalovMatrix:
    def test_a1_lowest_piece(self, a1, oracle):
        assert oracle.shapovalov_matrix(a1, level("-2"), w(3), 0, w(1)) == [[Fraction(3)]]

    def test_second_piece(self, a1, oracle):
        # ⟨f²v, f²v⟩ = 2λ(λ − 1)
        assert oracle.shapovalov_matrix(a1, level("-2"), w(3), 0, w(-1)) == [[Fraction(12)]]

    def test_empty_piece(self, a1, oracle):
        with pytest.raises(EmptyWeightSpaceError):
            oracle.shapovalov_matrix(a1, level("-2"), w(3), 0, w(5))

    def test_unsupported_rank(self, oracle):
        a4 = root_system_repository.find_by_code("A4")
        with pytest.raises(UnsupportedRankError):
            oracle.shapovalov_matrix(a4, level("-2"), w(0, 0, 0, 0), 0, w(0, 0, 0, 0))


class TestReport:
    @pytest.mark.parametrize("code, lam", [("A1", w(1)), ("A2", w(1, 0)), ("B2", w(0, 1))])
    def test_matrices_are_symmetric_and_determinants_detect_kernels(self, code, lam, oracle):
        rs = root_system_repository.find_by_code(code)
        report = oracle.shapovalov_report(rs, level("-2"), lam, depth_cap=1, height_cap=2)
        assert report.pieces
        for piece in report.pieces:
            size = len(piece.basis)
            assert len(piece.matrix) == size
            for i in range(size):
                for j in range(size):
                    assert piece.matrix[i][j] == piece.matrix[j][i]
            assert (piece.determinant == 0) == (piece.kernel_dim > 0)

    @pytest.mark.parametrize(
        "code, lam, text",
        [("A1", w(1), "-2"), ("A1", w("1/2"), "generic"), ("A2", w(1, 0), "-3/2"), ("B2", w(0, 1), "-2")],
    )
    def test_form_is_symmetric_in_both_orders(self, code, lam, text, oracle):
        rs = root_system_repository.find_by_code(code)
        module = oracle.module(rs, level(text), lam, 1)
        pairs = 0
        for basis in module.pieces(1, 2).values():
            for u in basis:
                for v in basis:
                    assert module.contravariant_pairing(u, v) == module.contravariant_pairing(v, u), (u, v)
                    pairs += 1
        assert pairs > 10

    def test_l0_grows_by_depth(self, a1, oracle):
        report = oracle.shapovalov_report(a1, level("-2"), w(1), depth_cap=1, height_cap=1)
        assert report.l0_by_depth == {0: Fraction(-3, 8), 1: Fraction(5, 8)}
        assert report.horizon.depth_cap == 1


class TestSingularVectors:
    def test_finite_singular_vector(self, a1, oracle):
        singular = oracle.singular_vectors(a1, Level.generic(), w(1), depth_cap=0, height_cap=4)
        assert [(sv.depth, sv.weight, sv.kernel_dim) for sv in singular] == [(0, w(-3), 1)]
        assert [str(mono) for mono in singular[0].vectors[0]] == ["f[1]·f[1]·v"]

    def test_non_integral_weight_has_none(self, a1, oracle):
        assert oracle.singular_vectors(a1, Level.generic(), w("1/2"), depth_cap=0, height_cap=4) == []

    def test_generic_level_has_no_loop_singular_vectors(self, a1, oracle):
        singular = oracle.singular_vectors(a1, Level.generic(), w(2), depth_cap=1, height_cap=4)
        assert all(sv.depth == 0 for sv in singular)

    def test_vectors_are_killed_by_every_raising_generator(self, a1, oracle):
        kappa = level("-2")
        singular = oracle.singular_vectors(a1, kappa, w(4), depth_cap=2, height_cap=2)
        assert singular
        module = oracle.module(a1, kappa, w(4), 2)
        for sv in singular:
            for vector in sv.vectors:
                raw = {VermaModule.from_monomial(m): c for m, c in vector.items()}
                for gen in module.raising_generators(sv.depth):
                    assert module.apply(gen, raw) == {}


class TestSugawara:
    def test_highest_weight_rational(self, a1, oracle):
        assert oracle.highest_weight_l0(a1, level("-2"), w(1)) == Fraction(-3, 8)

    def test_highest_weight_generic(self, a1, oracle):
        value = oracle.highest_weight_l0(a1, Level.generic(), w(1))
        assert sympy.simplify(value - sympy.Rational(3, 4) / KAPPA) == 0

    def test_depth_shifts_the_eigenvalue(self, a1, oracle):
        kappa = level("-2")
        mono = oracle.verma_weight_space(a1, kappa, w(1), 1, w(1))[1]
        state = VermaState(highest_weight=w(1), coefficients={mono: 1})
        assert oracle.sugawara_l0(a1, kappa, state) == Fraction(5, 8)

    def test_zero_state(self, a1, oracle):
        with pytest.raises(EmptyWeightSpaceError):
            oracle.sugawara_l0(a1, level("-2"), VermaState(highest_weight=w(1), coefficients={}))

    def test_convention_is_aw(self, a1, oracle):
        assert oracle.l0_convention(a1, level("-1"), w(2)) == "aw"

    @pytest.mark.parametrize("text", ["-1", "-2", "-3/2"])
    @pytest.mark.parametrize("lam", [w(0), w(-2)])
    def test_zero_eigenvalue(self, a1, oracle, text, lam):
        assert oracle.highest_weight_l0(a1, level(text), lam) == 0
        assert oracle.l0_convention(a1, level(text), lam) == "aw"

    def test_zero_eigenvalue_generic(self, a1, oracle):
        assert oracle.highest_weight_l0(a1, Level.generic(), w(0)) == 0

    def test_non_eigenvector_is_rejected(self, a1, oracle):
        kappa = level("-2")
        # mixes the vacuum (L0 = 0) with a depth-one state (L0 = 1)
        loop = oracle.verma_weight_space(a1, kappa, w(0), 1, w(0))[0]
        vacuum = oracle.verma_weight_space(a1, kappa, w(0), 0, w(0))[0]
        state = VermaState(highest_weight=w(0), coefficients={loop: 1, vacuum: 1})
        with pytest.raises(OracleError):
            oracle.sugawara_l0(a1, kappa, state)


class TestVerifyKK:
    def test_finite_slice(self, a1, oracle):
        report = oracle.verify_kk(a1, Level.generic(), w(2), depth_cap=0, height_cap=4)
        assert report.singular == [(w(-4), 0)]
        assert report.agrees

    def test_affine_singular_vector(self, a1, oracle):
        report = oracle.verify_kk(a1, level("-2"), w(4), depth_cap=2, height_cap=2)
        assert (w(2), 2) in report.singular
        assert report.missing == [] and report.extra == []
        assert report.l0_convention == "aw"

    @pytest.mark.parametrize("text", ["-1", "-3/2"])
    def test_small_grid(self, a1, oracle, text):
        for shifted in (-1, 0, 1, 2, 3):
            report = oracle.verify_kk(a1, level(text), w(shifted - 1), depth_cap=1, height_cap=3)
            assert report.agrees, (text, shifted, report.missing, report.extra)


class TestCaches:
    def test_module_cache_is_bounded(self, a1):
        service = ShapovalovService(OracleConfig(depth_cap=1, height_cap=2, max_workers=1, module_cache_size=2))
        kappa = level("-2")
        first = service.module(a1, kappa, w(0), 1)
        assert service.module(a1, kappa, w(0), 1) is first
        for k in (1, 2, 3):
            service.module(a1, kappa, w(k), 1)
        info = service._module_cache.cache_info()
        assert info.maxsize == 2
        assert info.currsize == 2
        assert service.module(a1, kappa, w(0), 1) is not first

    def test_action_cache_is_bounded(self, a1):
        module = VermaModule(build_truncated_affine(a1, 1), level("-2"), w(3), cache_size=4)
        basis = module.basis((0, (2,)))
        # ⟨f²v, f²v⟩ = 2λ(λ − 1) with most straightening steps evicted
        assert module.shapovalov_matrix(basis) == [[Fraction(12)]]
        info = module.act.cache_info()
        assert info.maxsize == 4
        assert info.currsize <= 4

    def test_default_sizes_come_from_settings(self, a1):
        service = ShapovalovService()
        assert service._module_cache.cache_info().maxsize == settings.oracle_module_cache_size
        module = service.module(a1, level("-2"), w(1), 0)
        assert module.act.cache_info().maxsize == settings.verma_action_cache_size
