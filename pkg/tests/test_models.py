from fractions import Fraction

import pytest
import sympy

from app.exceptions import (
    CriticalLevelError,
    DimensionMismatchError,
    InvalidLevelError,
    InvalidWeightError,
    LinkageToolkitError,
)
from app.models.chain_model import BlockQuery, StarChain, StarStep
from app.models.level_model import KAPPA, Level
from app.models.weight_model import Weight
from helpers import w


class TestWeight:
    def test_parse_and_canonical_text(self):
        lam = Weight.parse(" 2/4, -3 ,0")
        assert lam.coords == (Fraction(1, 2), Fraction(-3), Fraction(0))
        assert lam.to_json() == ["1/2", "-3/1", "0"]
        assert lam.to_text() == "1/2,-3/1,0"
        assert str(lam) == "(1/2, -3/1, 0)"

    @pytest.mark.parametrize("text", ["", "1/0", "a", "1,,2", "0.5", "1e2,0"])
    def test_parse_rejects_garbage(self, text):
        with pytest.raises(InvalidWeightError):
            Weight.parse(text)

    def test_floats_are_not_exact(self):
        with pytest.raises(InvalidWeightError):
            Weight.of([0.5])

    def test_arithmetic(self):
        assert w(1, 2) + w("1/2", -1) == w("3/2", 1)
        assert w(1, 2) - w(1, 2) == Weight.zero(2)
        assert -w(1, -2) == w(-1, 2)
        assert w(2, 4).scale("1/2") == w(1, 2)
        assert w(0, 0).is_zero()
        assert w(1, 2).is_integral() and not w("1/2", 2).is_integral()

    def test_mismatched_ranks(self):
        with pytest.raises(DimensionMismatchError):
            w(1) + w(1, 2)

    def test_lexicographic_order(self):
        assert sorted([w(1, 0), w(-1, 5), w(0, 0)]) == [w(-1, 5), w(0, 0), w(1, 0)]


class TestLevel:
    def test_parse(self):
        assert Level.parse("generic").is_generic
        kappa = Level.parse("-6/4")
        assert kappa.value == Fraction(-3, 2)
        assert (kappa.p, kappa.q) == (-3, 2)
        assert kappa.to_json() == "-3/2"
        assert Level.parse("5").to_json() == "5/1"

    @pytest.mark.parametrize("text", ["0", "0/1", "0/7"])
    def test_critical_level_is_rejected(self, text):
        with pytest.raises(CriticalLevelError):
            Level.parse(text)

    def test_garbage_level(self):
        with pytest.raises(InvalidLevelError):
            Level.parse("kappa")

    @pytest.mark.parametrize("text", ["1.5", "-2.0", "1e3", "3/-2"])
    def test_decimals_are_rejected(self, text):
        with pytest.raises(InvalidLevelError):
            Level.parse(text)

    def test_integer_input(self):
        assert Level.parse(-2).to_json() == "-2/1"
        with pytest.raises(CriticalLevelError):
            Level.parse(0)

    def test_generic_has_no_numerator(self):
        with pytest.raises(InvalidLevelError):
            Level.generic().p

    def test_integer_value(self):
        kappa = Level.rational(Fraction(-3, 2))
        assert kappa.integer_value(Fraction(5), Fraction(2)) == 2
        assert kappa.integer_value(Fraction(5), Fraction(1)) is None
        generic = Level.generic()
        assert generic.integer_value(Fraction(3), Fraction(0)) == 3
        assert generic.integer_value(Fraction(3), Fraction(1)) is None
        assert generic.integer_value(Fraction(1, 2), Fraction(0)) is None

    def test_expressions_and_regime(self):
        assert Level.generic().as_expr() == KAPPA
        assert Level.rational(3).as_expr() == sympy.Integer(3)
        assert Level.generic().is_finite_length_regime()
        assert Level.rational(-1).is_finite_length_regime()
        assert not Level.rational(Fraction(1, 2)).is_finite_length_regime()


class TestChains:
    def test_chain_must_compose(self, a1):
        alpha = a1.simple_roots[0]
        step = StarStep(beta=alpha, m=0, n=3, source=w(3), target=w(-3))
        chain = StarChain(source=w(3), target=w(-3), steps=(step,))
        assert chain.length == 1
        assert chain.loop_depth == 0
        assert chain.points() == [w(3), w(-3)]
        with pytest.raises(LinkageToolkitError):
            StarChain(source=w(1), target=w(-3), steps=(step,))
        with pytest.raises(LinkageToolkitError):
            StarChain(source=w(3), target=w(5), steps=(step,))

    def test_step_loop_depth_is_n_times_m(self, a1):
        step = StarStep(beta=a1.simple_roots[0], m=2, n=3, source=w(5), target=w(-1))
        assert step.loop_depth == 6

    def test_query_bounds(self, a1, generic):
        with pytest.raises(LinkageToolkitError):
            BlockQuery(rs=a1, level=generic, max_chain_len=-1, max_m=0)
        with pytest.raises(LinkageToolkitError):
            BlockQuery(rs=a1, level=generic, max_chain_len=1, max_m=0, weight_box=-2)
        query = BlockQuery(rs=a1, level=generic, max_chain_len=3, max_m=4, weight_box=2)
        assert query.effective_max_m == 0
        assert query.in_box(w(-2)) and not query.in_box(w(3))
