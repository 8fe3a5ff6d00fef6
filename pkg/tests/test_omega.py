import pytest

from src.services.errors import BudgetExceededError, MalformedInputError
from src.services.formulas import parse
from src.services.kinds import CongruenceKind
from src.services.omega import (
    ACCUMULATION_LOOP,
    BOOLEAN_JOIN,
    DISCRETE,
    OMEGA,
    PAIRS,
    SHIFTED_PAIRS,
    STAR_LOOP,
    EquivSpec,
    OmegaPlusSet,
    RelationSpec,
    bounded_clopen_family,
    congruence_check,
    eval_formula,
    nonprincipal_witness,
    omega_class_criterion,
    pre,
    post,
    sigma_pi_symbolic,
    subordination_holds,
    symbolic_validity,
)


class TestOmegaPlusSet:
    def test_finite(self):
        E = OmegaPlusSet.finite({1, 3})
        assert 3 in E and 2 not in E and OMEGA not in E
        assert E.render() == "{1,3}"
        assert E.is_clopen()

    def test_complement_of_finite_is_cofinite(self):
        assert ~OmegaPlusSet.finite({0}) == OmegaPlusSet.cofinite({0})
        assert OmegaPlusSet.cofinite({0}).render() == "ω⁺∖{0}"

    def test_evens_are_open_not_closed(self):
        evens = OmegaPlusSet.evens()
        assert evens.is_open() and not evens.is_closed()
        assert evens.closure().is_closed()
        assert not evens.closure().is_clopen()
        assert evens.render() == "{n≥0, n mod 2 ∈ {0}}"

    def test_boolean_laws(self):
        evens = OmegaPlusSet.evens()
        assert (evens | ~evens).is_everything()
        assert (evens & ~evens).is_empty()
        assert OmegaPlusSet.finite({2}) <= evens
        assert not OmegaPlusSet.finite({3}) <= evens

    def test_canonical_forms_compare_equal(self):
        assert OmegaPlusSet.periodic({0}, 2, 2, {0}) == OmegaPlusSet.evens()
        assert OmegaPlusSet.periodic((), 0, 4, {0, 2}) == OmegaPlusSet.evens()

    def test_least(self):
        assert OmegaPlusSet.evens().least() == 0
        assert OmegaPlusSet.finite((), True).least() is OMEGA
        assert OmegaPlusSet.empty().least() is None

    def test_rejects_negative(self):
        with pytest.raises(MalformedInputError):
            OmegaPlusSet.finite({-1})

    def test_document(self):
        E = OmegaPlusSet.periodic({1}, 3, 2, {1}, omega=True)
        doc = E.to_document()
        assert doc.kind == "periodic"
        assert OmegaPlusSet.from_document(doc) == E

    def test_bounded_family(self):
        family = bounded_clopen_family(3)
        assert len(family) == 16
        assert all(E.is_clopen() for E in family)


class TestRelations:
    def test_accumulation_images(self):
        E = OmegaPlusSet.finite({3})
        assert pre(ACCUMULATION_LOOP, E) == OmegaPlusSet.finite({3}, True)
        assert post(ACCUMULATION_LOOP, OmegaPlusSet.finite((), True)).is_everything()

    def test_star_reaches_everything_from_omega(self):
        assert pre(STAR_LOOP, OmegaPlusSet.finite((), True)).is_everything()

    def test_base_pairs(self):
        R = RelationSpec(frozenset({(0, 1)}))
        assert pre(R, OmegaPlusSet.finite({1})) == OmegaPlusSet.finite({0})
        assert R.support == 2

    def test_subordination_needs_clopen(self):
        O = OmegaPlusSet.finite({3})
        assert not subordination_holds(ACCUMULATION_LOOP, O, O)
        assert subordination_holds(ACCUMULATION_LOOP, O, OmegaPlusSet.cofinite())
        with pytest.raises(MalformedInputError):
            subordination_holds(ACCUMULATION_LOOP, O, OmegaPlusSet.evens())

    def test_nonprincipal_filter(self):
        verdict = nonprincipal_witness(ACCUMULATION_LOOP, OmegaPlusSet.finite({0}), 4)
        assert not verdict.principal
        assert verdict.chain[0] == OmegaPlusSet.cofinite({1})
        assert len(verdict.chain) == 4
        assert all(later <= earlier and later != earlier for earlier, later in zip(verdict.chain, verdict.chain[1:]))

    def test_principal_filter(self):
        verdict = nonprincipal_witness(ACCUMULATION_LOOP, OmegaPlusSet.everything())
        assert verdict.principal
        assert verdict.generator.is_everything()


class TestSymbolicValidity:
    def test_reflexivity_axiom_holds(self):
        report = symbolic_validity(ACCUMULATION_LOOP, parse("p -> <>p"), k=3)
        assert report.ok
        assert report.details["valuations"] == 16

    def test_converse_fails_at_omega(self):
        report = symbolic_validity(ACCUMULATION_LOOP, parse("<>p -> p"), k=3)
        assert not report.ok
        assert report.rendered.startswith("fails at ω")

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            symbolic_validity(ACCUMULATION_LOOP, parse("p & q"), k=6, max_valuations=10)

    def test_eval_psi(self):
        value = eval_formula(ACCUMULATION_LOOP, parse("p & ~[]p"), {"p": OmegaPlusSet.cofinite({0})})
        assert value == OmegaPlusSet.finite((), True)

    @pytest.mark.parametrize("E", [OmegaPlusSet.evens(), OmegaPlusSet.evens(True), OmegaPlusSet.finite({0, 4})])
    def test_sigma_pi(self, E):
        assert sigma_pi_symbolic(ACCUMULATION_LOOP, E).ok

    def test_sigma_pi_values(self):
        open_evens = sigma_pi_symbolic(ACCUMULATION_LOOP, OmegaPlusSet.evens())
        assert open_evens.sigma == open_evens.pi == OmegaPlusSet.evens(True)
        closed_evens = sigma_pi_symbolic(STAR_LOOP, OmegaPlusSet.evens(True))
        assert closed_evens.ok
        assert closed_evens.direct == OmegaPlusSet.everything()

    def test_sigma_pi_detects_a_wrong_diamond(self, mocker):
        real = pre

        def lossy(R, E):
            value = real(R, E)
            return value if E.is_clopen() else value - E

        spy = mocker.patch("src.services.omega.pre", side_effect=lossy)
        verdict = sigma_pi_symbolic(ACCUMULATION_LOOP, OmegaPlusSet.evens())
        assert not verdict.ok
        assert verdict.sigma == verdict.pi == OmegaPlusSet.evens(True)
        assert verdict.direct == OmegaPlusSet.finite((), True)
        assert [c.args[1] for c in spy.call_args_list if not c.args[1].is_clopen()] == [OmegaPlusSet.evens()]


class TestEquivalences:
    def test_pairs(self):
        assert PAIRS.class_of(3) == OmegaPlusSet.finite({2, 3})
        assert PAIRS.related(2, 3)
        assert not PAIRS.related(1, 2)
        assert PAIRS.omega_class == OmegaPlusSet.finite((), True)

    def test_shifted_pairs(self):
        assert SHIFTED_PAIRS.class_of(2) == OmegaPlusSet.finite({2})
        assert SHIFTED_PAIRS.class_of(4) == OmegaPlusSet.finite({3, 4})

    def test_join_absorbs_infinite_class(self):
        assert BOOLEAN_JOIN.class_of(0) == OmegaPlusSet.finite({0, 1})
        assert BOOLEAN_JOIN.omega_class == OmegaPlusSet.cofinite({0, 1})
        assert (BOOLEAN_JOIN.offset, BOOLEAN_JOIN.period) == (2, 1)

    def test_omega_class_criterion(self):
        assert omega_class_criterion(DISCRETE)
        assert omega_class_criterion(PAIRS)
        assert not omega_class_criterion(BOOLEAN_JOIN)

    def test_saturate(self):
        assert PAIRS.saturate(OmegaPlusSet.finite({2})) == OmegaPlusSet.finite({2, 3})
        assert PAIRS.saturate(OmegaPlusSet.evens()) == OmegaPlusSet.cofinite((), False)

    def test_build_canonicalizes(self):
        longer = EquivSpec.build(blocks=[(0, 1)], offset=2, period=4, shape=[(0, 1), (2, 3)])
        assert longer == PAIRS

    def test_rejects_gaps(self):
        with pytest.raises(MalformedInputError):
            EquivSpec.build(offset=2, period=1, shape=[(0,)])

    def test_pairs_below(self):
        assert PAIRS.pairs_below(4) == [(), (0, 1), (2, 3)]


class TestOmegaCongruences:
    def test_discrete_is_strong(self):
        assert congruence_check(STAR_LOOP, DISCRETE, CongruenceKind.STRONG).ok

    def test_join_violation(self):
        report = congruence_check(STAR_LOOP, BOOLEAN_JOIN)
        assert not report.ok
        assert report.check("white").witness == (2, OMEGA, 0)
        assert report.details["bound"] == 3
