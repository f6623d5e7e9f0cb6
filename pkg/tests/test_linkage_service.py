from dataclasses import replace

import pytest

from app.exceptions import CriticalLevelError, LinkageToolkitError
from app.models.chain_model import MoveKind, StarChain, StarStep, StepConvention
from app.services.linkage_service import (
    default_query,
    generic_candidates,
    induced_subquotient,
    is_finite_length_regime,
    linkage_class,
    linked,
    satisfies_star,
    star_step_candidates,
    subquotient_candidates,
    verify_chain,
)
from app.services.root_system_service import in_root_lattice
from helpers import level, random_weight, w

REFLECTION = StepConvention.REFLECTION
LITERAL = StepConvention.LITERAL


class TestStarSteps:
    def test_generic_integral_weight_has_one_step(self, a1, generic):
        steps = star_step_candidates(a1, generic, w(3), max_m=4)
        assert len(steps) == 1
        step = steps[0]
        assert (step.beta, step.m, step.n, step.target) == (a1.simple_roots[0], 0, 3, w(-3))

    def test_non_integral_pairing_has_no_steps(self, a1, generic):
        assert star_step_candidates(a1, generic, w("1/2"), max_m=4) == []

    def test_affine_step_literal_target(self, a1):
        steps = star_step_candidates(a1, level("-2"), w(5), max_m=2, convention=LITERAL)
        affine = [s for s in steps if s.m == 2]
        assert len(affine) == 1
        assert affine[0].n == 1
        assert affine[0].target == w(-13)

    def test_affine_steps_reflection_targets(self, a1):
        steps = star_step_candidates(a1, level("-2"), w(5), max_m=4)
        assert [(s.m, s.n, s.target) for s in steps] == [(0, 5, w(-5)), (1, 3, w(-1)), (2, 1, w(3))]
        assert [s.loop_depth for s in steps] == [0, 3, 2]

    def test_conventions_agree_for_m_zero(self, a2, rng):
        kappa = level("-5/3")
        for _ in range(50):
            lam = random_weight(rng, 2, denominators=(1,))
            assert star_step_candidates(a2, kappa, lam, 0, REFLECTION) == star_step_candidates(
                a2, kappa, lam, 0, LITERAL
            )


class TestSatisfiesStar:
    def test_length_one_certificate(self, a1, generic):
        chain = satisfies_star(a1, generic, w(3), w(-3))
        assert chain is not None
        assert chain.length == 1
        assert verify_chain(a1, generic, chain)

    def test_absent_within_bounds(self, a1, generic):
        assert satisfies_star(a1, generic, w(3), w(1)) is None

    def test_root_lattice_prune(self, a1, generic):
        assert satisfies_star(a1, generic, w(3), w(0)) is None

    def test_empty_chain_needs_the_flag(self, a1, generic):
        query = default_query(a1, generic, max_chain_len=0)
        assert satisfies_star(a1, generic, w(3), w(3), query) is None
        query = replace(query, allow_empty_chain=True)
        chain = satisfies_star(a1, generic, w(3), w(3), query)
        assert chain == StarChain.empty(w(3))

    def test_critical_level_is_an_input_error(self):
        with pytest.raises(CriticalLevelError):
            level("0/1")

    def test_query_for_another_root_system_is_rejected(self, a1, a2, generic):
        query = default_query(a1, generic)
        with pytest.raises(LinkageToolkitError):
            satisfies_star(a2, generic, w(1, 1), w(-1, -1), query)
        with pytest.raises(LinkageToolkitError):
            satisfies_star(a1, level("-2"), w(1), w(-1), query)

    def test_literal_affine_certificate(self, a1):
        kappa = level("-2")
        query = default_query(a1, kappa, max_chain_len=1, step_convention=LITERAL)
        chain = satisfies_star(a1, kappa, w(5), w(-13), query)
        assert chain is not None
        assert chain.steps[0].m == 2
        assert verify_chain(a1, kappa, chain, LITERAL)
        assert not verify_chain(a1, kappa, chain, REFLECTION)

    def test_a2_longest_element_is_the_highest_root_reflection(self, a2, generic):
        chain = satisfies_star(a2, generic, a2.rho, -a2.rho)
        assert chain is not None
        assert chain.length == 1
        assert chain.steps[0].beta == a2.highest_root
        assert chain.steps[0].n == 2

    def test_induced_subquotient_reverses_the_pair(self, a1, generic):
        chain = induced_subquotient(a1, generic, chi_1=w(-3), chi_2=w(3))
        assert chain is not None and chain.source == w(3)
        assert induced_subquotient(a1, generic, chi_1=w(3), chi_2=w(-3)) is None


class TestVerifyChain:
    def test_tampered_certificates_fail(self, a1, generic):
        chain = satisfies_star(a1, generic, w(3), w(-3))
        step = chain.steps[0]
        bad_n = replace(step, n=2, target=w(-1))
        assert not verify_chain(a1, generic, StarChain(w(3), w(-1), (bad_n,)))
        negative_root = replace(step, beta=-step.beta, n=-3)
        assert not verify_chain(a1, generic, StarChain(w(3), w(-3), (negative_root,)))

    def test_generic_level_rejects_affine_steps(self, a1, generic):
        step = StarStep(beta=a1.simple_roots[0], m=1, n=1, source=w(3), target=w(1))
        assert not verify_chain(a1, generic, StarChain(w(3), w(1), (step,)))


class TestLinked:
    def test_reflexive(self, a1, generic):
        result = linked(a1, generic, w(2), w(2))
        assert result.linked and result.trail == ()

    def test_weyl_move_first(self, a1, generic):
        result = linked(a1, generic, w(-3), w(3))
        assert result.linked
        assert len(result.trail) == 1
        move = result.trail[0]
        assert move.kind == MoveKind.WEYL
        assert move.weyl_index == 1

    def test_not_linked(self, a1, generic):
        assert not linked(a1, generic, w(3), w(1)).linked

    def test_affine_trail_uses_star_steps(self, a1):
        kappa = level("-2")
        query = default_query(a1, kappa, max_chain_len=2)
        result = linked(a1, kappa, w(5), w(1), query)
        assert result.linked
        assert any(move.kind in (MoveKind.FORWARD, MoveKind.REVERSE) for move in result.trail)
        for move in result.trail:
            if move.step is not None:
                chain = StarChain(move.step.source, move.step.target, (move.step,))
                assert verify_chain(a1, kappa, chain)


class TestLinkageClass:
    @pytest.mark.parametrize(
        "lam, expected",
        [
            (w(3), {w(3), w(-3)}),
            (w("1/2"), {w("1/2"), w("-1/2")}),
            (w(0), {w(0)}),
        ],
    )
    def test_generic_classes(self, a1, generic, lam, expected):
        result = linkage_class(a1, generic, lam)
        assert set(result.weights) == expected
        assert not result.truncated
        assert result.finite_length_regime

    def test_truncation_is_reported(self, a1):
        kappa = level("-2")
        result = linkage_class(a1, kappa, w(1), default_query(a1, kappa, max_chain_len=1))
        assert result.truncated
        assert list(result.weights) == sorted(result.weights)

    def test_regime_flag(self, a1):
        kappa = level("1/2")
        assert not is_finite_length_regime(kappa)
        result = linkage_class(a1, kappa, w(0), default_query(a1, kappa, max_chain_len=1))
        assert not result.finite_length_regime


class TestSubquotients:
    def test_generic_single_candidate(self, a1, generic):
        candidates = subquotient_candidates(a1, generic, w(2))
        assert [(c.weight, c.loop_depth) for c in candidates] == [(w(-4), 0)]
        assert candidates[0].chain.length == 1

    def test_zero_shifted_weight_has_none(self, a1, generic):
        assert subquotient_candidates(a1, generic, w(-1)) == []

    def test_literal_affine_candidate(self, a1):
        kappa = level("-2")
        query = default_query(a1, kappa, max_chain_len=1, step_convention=LITERAL)
        weights = {c.weight for c in subquotient_candidates(a1, kappa, w(4), query)}
        assert w(-14) in weights

    def test_reflection_affine_candidates(self, a1):
        kappa = level("-2")
        query = default_query(a1, kappa, max_chain_len=1)
        keyed = [(c.weight, c.loop_depth) for c in subquotient_candidates(a1, kappa, w(4), query)]
        assert keyed == [(w(-6), 0), (w(2), 2), (w(-2), 3)]

    def test_height_and_depth_bounds(self, a1):
        kappa = level("-2")
        query = default_query(a1, kappa, max_chain_len=3, max_loop_depth=2, max_height=1)
        for candidate in subquotient_candidates(a1, kappa, w(4), query):
            assert candidate.loop_depth <= 2
            assert a1.height(w(4) - candidate.weight) <= 1

    def test_generic_candidates(self, a1, a2):
        assert generic_candidates(a1, w(3)) == {w(3), w(-3)}
        assert generic_candidates(a1, w("1/2")) == {w("1/2")}
        assert len(generic_candidates(a2, a2.rho)) == 6


class TestProperties:
    def test_certificates_verify_and_stay_in_the_root_lattice(self, a2, rng):
        for text in ("generic", "-1", "-3/2"):
            kappa = level(text)
            query = default_query(a2, kappa, max_chain_len=2, max_m=1)
            for _ in range(30):
                lam = random_weight(rng, 2, spread=4, denominators=(1, 2))
                for candidate in subquotient_candidates(a2, kappa, lam, query):
                    source = lam + a2.rho
                    assert verify_chain(a2, kappa, candidate.chain)
                    assert in_root_lattice(a2, candidate.weight - lam)
                    if kappa.is_generic:
                        assert all(s.m == 0 and a2.is_positive(s.beta) for s in candidate.chain.steps)
                    assert candidate.chain.source == source

    def test_linked_is_symmetric_and_composes(self, a1, rng):
        kappa = level("-2")
        short = default_query(a1, kappa, max_chain_len=2)
        double = default_query(a1, kappa, max_chain_len=4)
        for _ in range(20):
            lam, mu, nu = (w(rng.randint(-5, 5)) for _ in range(3))
            forward = linked(a1, kappa, lam, mu, short).linked
            assert forward == linked(a1, kappa, mu, lam, short).linked
            if forward and linked(a1, kappa, mu, nu, short).linked:
                assert linked(a1, kappa, lam, nu, double).linked
