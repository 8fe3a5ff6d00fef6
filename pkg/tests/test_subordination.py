import pytest
from hypothesis import given, settings

from src.services.boolean_algebra import BooleanMorphism, FiniteBooleanAlgebra
from src.services.duality import FrameMorphism, KripkeFrame, dual_of_frame_morphism, of
from src.services.errors import MalformedInputError, OperatorLawError
from src.services.kinds import Colour, MorphismKind
from src.services.subordination import (
    BASIC_AXIOMS,
    SubordinationAlgebra,
    check_axioms,
    check_morphism,
    classify_algebra,
    from_operator,
    is_morphism,
    is_subordination,
    morphism_kind,
    to_multi_operator,
    to_operator,
)
from tests.strategies import frames, subordinations


class TestAxioms:
    def test_order_is_de_vries(self, order_algebra):
        assert check_axioms(order_algebra).ok
        assert classify_algebra(order_algebra) == ["subordination", "modal", "contact", "de_vries"]

    def test_top_only_fails_s1(self):
        S = SubordinationAlgebra.from_pairs(FiniteBooleanAlgebra(1), [(1, 1)])
        report = check_axioms(S, BASIC_AXIOMS)
        assert not report.ok
        s1 = report.check("S1")
        assert s1.witness == (0, 0)
        assert "0 ⊀ 0" in s1.rendered

    def test_asymmetric_frame_fails_s7(self, arrow_algebra):
        report = check_axioms(arrow_algebra, ["S7"])
        assert not report.ok
        assert report.check("S7").witness == (1, 0)

    def test_unknown_axiom(self, order_algebra):
        with pytest.raises(MalformedInputError):
            check_axioms(order_algebra, ["S9"])

    def test_complete_axioms_report_implication(self, order_algebra):
        report = check_axioms(order_algebra, ["S'2", "S'3"])
        assert all(c.details["implied_by_S1_S4"] for c in report.checks)

    def test_empty_relation_is_not_subordination(self, two_atoms):
        assert not is_subordination(SubordinationAlgebra.from_pairs(two_atoms, []))

    @settings(derandomize=True, max_examples=40)
    @given(subordinations(max_atoms=3))
    def test_complex_algebras_are_subordination_algebras(self, S):
        assert is_subordination(S)
        assert check_axioms(S, ["S'2", "S'3"]).ok


class TestRelationPowers:
    def test_power_zero_is_order(self, arrow_algebra):
        A = arrow_algebra.algebra
        assert all(arrow_algebra.precedes(a, b, 0) == A.leq(a, b) for a in A.elements() for b in A.elements())

    def test_power_two_composes(self):
        chain = of(KripkeFrame.of_size(3, {(0, 1), (1, 2)}))
        # ◇◇{2} = {0}, so {2} ≺² b iff {0} ≤ b
        assert chain.precedes(0b100, 0b001, 2)
        assert not chain.precedes(0b100, 0b010, 2)

    def test_perp(self, arrow_algebra):
        # {1} ⊥ b iff {1} ≺ ¬b iff {0} ≤ ¬b
        assert arrow_algebra.perp(0b10, 0b10)
        assert not arrow_algebra.perp(0b10, 0b01)


class TestOperators:
    @settings(derandomize=True, max_examples=30)
    @given(frames(max_points=3))
    def test_diamond_is_preimage(self, F):
        S = of(F)
        assert to_operator(S) == tuple(F.pre(E) for E in S.algebra.elements())
        assert from_operator(S.algebra, to_operator(S)) == S

    def test_black_operator_round_trip(self, arrow_algebra):
        table = to_operator(arrow_algebra, Colour.BLACK)
        assert from_operator(arrow_algebra.algebra, table, Colour.BLACK) == arrow_algebra

    def test_operator_law_violation(self, two_atoms):
        with pytest.raises(OperatorLawError) as info:
            from_operator(two_atoms, (1, 1, 2, 3))
        assert info.value.witness == (0,)

    def test_box_and_black_diamond_are_duals(self, arrow_algebra):
        A = arrow_algebra.algebra
        for a in A.elements():
            assert arrow_algebra.box(a) == A.complement(arrow_algebra.diamond(A.complement(a)))
            assert arrow_algebra.black_diamond(a) == A.complement(arrow_algebra.black_box(A.complement(a)))

    def test_multi_operator(self, arrow_algebra):
        multi = to_multi_operator(arrow_algebra)
        assert multi.verify().ok
        assert multi(0b01).tag == "filter"


class TestMorphisms:
    def test_identity_is_strong(self, arrow_algebra):
        f = BooleanMorphism.identity(arrow_algebra.algebra)
        report = check_morphism(f, arrow_algebra, arrow_algebra, MorphismKind.STRONG)
        assert report.ok
        assert report.details["operator_view_agrees"]

    def test_mismatched_algebras(self, arrow_algebra, order_algebra):
        f = BooleanMorphism.identity(FiniteBooleanAlgebra(1))
        with pytest.raises(MalformedInputError):
            check_morphism(f, arrow_algebra, order_algebra)

    def test_black_not_white_inclusion(self):
        serial = KripkeFrame.of_size(2, {(0, 1), (1, 1)})
        point = KripkeFrame.of_size(1, set())
        f = dual_of_frame_morphism(FrameMorphism(point, serial, (0,)), MorphismKind.BLACK)
        S, T = of(serial), of(point)
        assert is_morphism(f, S, T, MorphismKind.BLACK)
        assert not is_morphism(f, S, T, MorphismKind.WHITE)
        assert morphism_kind(f, S, T) == MorphismKind.BLACK

    def test_weak_failure_has_witness(self, two_atoms):
        swap = BooleanMorphism.from_point_map(two_atoms, two_atoms, (1, 0))
        chain = of(KripkeFrame.of_size(2, {(0, 0)}))
        report = check_morphism(swap, chain, chain)
        assert not report.ok
        assert report.check("w").witness is not None
