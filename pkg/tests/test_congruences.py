import pytest
from hypothesis import given, settings

from src.services.boolean_algebra import ElementSet
from src.services.congruences import (
    SubCongruence,
    congruence_lattice,
    first_isomorphism,
    is_congruence,
    kernel,
    quotient,
    saturate,
    second_isomorphism,
    third_isomorphism,
    zero_class_partition,
)
from src.services.errors import MalformedInputError, NotABooleanCongruenceError, NotACongruenceError
from src.services.kinds import CongruenceKind
from tests.strategies import subordinations


class TestIsCongruence:
    def test_round_zero_class(self, arrow_algebra):
        A = arrow_algebra.algebra
        # pre({0}) is empty, pre({1}) = {0}
        assert is_congruence(arrow_algebra, zero_class_partition(A, 0b01)).ok
        report = is_congruence(arrow_algebra, zero_class_partition(A, 0b10))
        assert not report.ok
        assert report.details["agree"]

    def test_black_kind(self, arrow_algebra):
        A = arrow_algebra.algebra
        # black needs ¬z ≺ ¬z, i.e. post-closure of z
        assert is_congruence(arrow_algebra, zero_class_partition(A, 0b10), CongruenceKind.BLACK).ok
        assert not is_congruence(arrow_algebra, zero_class_partition(A, 0b01), CongruenceKind.BLACK).ok

    def test_not_boolean(self, order_algebra):
        report = is_congruence(order_algebra, [[0, 1], [2], [3]])
        assert not report.ok
        assert report.details == {"boolean": False}
        assert report.error

    def test_partition_must_cover(self, order_algebra):
        with pytest.raises(MalformedInputError):
            is_congruence(order_algebra, [[0, 1], [2]])

    @settings(derandomize=True, max_examples=30)
    @given(subordinations(max_atoms=3))
    def test_equivalent_conditions_agree(self, S):
        for kind in CongruenceKind:
            for z in S.algebra.elements():
                report = is_congruence(S, zero_class_partition(S.algebra, z), kind)
                assert report.details["agree"]


class TestQuotient:
    def test_identity_quotient_echoes(self, arrow_algebra):
        result = quotient(arrow_algebra, SubCongruence.identity(arrow_algebra))
        assert result.algebra == arrow_algebra
        assert result.report.ok

    def test_collapse_to_one_atom(self, arrow_algebra):
        theta = SubCongruence.from_zero_class(arrow_algebra, 0b01)
        result = quotient(arrow_algebra, theta)
        assert result.algebra.atom_count == 1
        assert result.projection(0b11) == 0b1
        assert result.report.check("projection").ok

    def test_rejects_non_congruence(self, arrow_algebra):
        with pytest.raises(NotACongruenceError):
            quotient(arrow_algebra, SubCongruence.from_zero_class(arrow_algebra, 0b10))

    def test_rejects_non_boolean_partition(self, arrow_algebra):
        theta = SubCongruence.from_partition(arrow_algebra, [[0, 3], [1, 2]])
        with pytest.raises(NotABooleanCongruenceError):
            quotient(arrow_algebra, theta)

    def test_kernel_of_projection(self, arrow_algebra):
        theta = SubCongruence.from_zero_class(arrow_algebra, 0b01)
        result = quotient(arrow_algebra, theta)
        assert kernel(result.projection, arrow_algebra).blocks == theta.blocks


class TestCongruenceLattice:
    def test_order_algebra_has_all(self, order_algebra):
        lattice = congruence_lattice(order_algebra)
        assert lattice.generators == [0, 1, 2, 3]
        assert lattice.report.ok
        assert len(lattice) == 4

    @settings(derandomize=True, max_examples=30)
    @given(subordinations(max_atoms=3))
    def test_frame_law_and_closure(self, S):
        for kind in CongruenceKind:
            assert congruence_lattice(S, kind).report.ok


class TestIsomorphismTheorems:
    @settings(derandomize=True, max_examples=200, deadline=None)
    @given(subordinations(max_atoms=3))
    def test_all_three(self, S):
        whole = ElementSet.of(S.algebra, S.algebra.elements())
        for z in congruence_lattice(S).generators:
            theta = SubCongruence.from_zero_class(S, z)
            q = quotient(S, theta)
            assert first_isomorphism(q.projection, S, q.algebra).ok
            assert second_isomorphism(S, whole, theta).ok
            assert third_isomorphism(S, theta).ok

    def test_saturation(self, order_algebra):
        theta = SubCongruence.from_zero_class(order_algebra, 0b01)
        trivial = ElementSet.of(order_algebra.algebra, [0, 3])
        assert saturate(order_algebra, trivial, theta).members == (0, 1, 2, 3)
