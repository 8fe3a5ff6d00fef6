import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.services.boolean_algebra import (
    BooleanMorphism,
    ElementSet,
    FiniteBooleanAlgebra,
    boolean_morphisms,
    check_boolean_morphism,
    filter_ideal_check,
    generated_boolean_subalgebra,
    is_boolean_subalgebra,
    is_ultrafilter,
    iter_bits,
    principal_filter,
    principal_generator,
    principal_ideal,
    powerset_algebra,
    set_partitions,
    subalgebra_atoms,
    submasks,
    ultrafilters,
)
from src.services.errors import ForeignElementError, MalformedInputError, SizingError


class TestFiniteBooleanAlgebra:
    def test_size_and_bounds(self):
        A = FiniteBooleanAlgebra(3)
        assert A.size == 8
        assert A.top == 0b111
        assert A.bottom == 0
        assert A.atoms() == [1, 2, 4]

    def test_rejects_too_many_atoms(self):
        with pytest.raises(SizingError):
            FiniteBooleanAlgebra(11)

    def test_powerset_algebra_respects_cap(self):
        with pytest.raises(SizingError):
            powerset_algebra(7, max_atoms=6)
        assert powerset_algebra(2).size == 4

    def test_foreign_element(self):
        A = FiniteBooleanAlgebra(2)
        with pytest.raises(ForeignElementError):
            A.require(4)
        assert True not in A

    def test_indices_round_trip(self):
        A = FiniteBooleanAlgebra(4)
        assert A.from_indices([0, 3]) == 0b1001
        assert A.to_indices(0b1001) == [0, 3]
        assert A.render(0b1001) == "{0,3}"

    @settings(derandomize=True, max_examples=50)
    @given(st.integers(0, 15), st.integers(0, 15))
    def test_lattice_laws(self, a, b):
        A = FiniteBooleanAlgebra(4)
        assert A.complement(A.meet(a, b)) == A.join(A.complement(a), A.complement(b))
        assert A.leq(A.meet(a, b), a)
        assert A.leq(a, A.join(a, b))
        assert A.meet(a, A.complement(a)) == A.bottom

    def test_up_and_down_masks(self):
        A = FiniteBooleanAlgebra(2)
        assert list(iter_bits(A.up_masks[1])) == [1, 3]
        assert list(iter_bits(A.down_masks[2])) == [0, 2]
        assert submasks(0b101) == [0, 1, 4, 5]


class TestFiltersAndIdeals:
    def test_principal_filter(self):
        A = FiniteBooleanAlgebra(2)
        F = principal_filter(A, 1)
        assert F.members == (1, 3)
        assert filter_ideal_check(A, F, "filter")
        assert principal_generator(F) == (1, True)

    def test_principal_ideal(self):
        A = FiniteBooleanAlgebra(2)
        I = principal_ideal(A, 2)
        assert filter_ideal_check(A, I, "ideal")
        assert principal_generator(I) == (2, True)

    def test_not_upward_closed(self):
        A = FiniteBooleanAlgebra(2)
        assert not filter_ideal_check(A, ElementSet.of(A, [1]), "filter")

    def test_generator_needs_tag(self):
        A = FiniteBooleanAlgebra(1)
        with pytest.raises(MalformedInputError):
            principal_generator(ElementSet.of(A, [1]))

    def test_ultrafilters_are_atom_filters(self):
        A = FiniteBooleanAlgebra(3)
        ufs = ultrafilters(A)
        assert len(ufs) == 3
        assert all(is_ultrafilter(A, U) for U in ufs)
        assert not is_ultrafilter(A, principal_filter(A, 3))


class TestSubalgebras:
    def test_generated_subalgebra(self):
        A = FiniteBooleanAlgebra(3)
        S = generated_boolean_subalgebra(A, [0b001])
        assert S.members == (0, 1, 6, 7)
        assert is_boolean_subalgebra(A, S)
        assert subalgebra_atoms(A, S) == [1, 6]

    def test_missing_complement(self):
        A = FiniteBooleanAlgebra(2)
        assert not is_boolean_subalgebra(A, ElementSet.of(A, [0, 1, 3]))


class TestBooleanMorphism:
    def test_identity_is_homomorphism(self):
        A = FiniteBooleanAlgebra(2)
        assert check_boolean_morphism(BooleanMorphism.identity(A)).ok

    def test_constant_map_fails_one(self):
        A = FiniteBooleanAlgebra(1)
        f = BooleanMorphism(A, A, (0, 0))
        report = check_boolean_morphism(f)
        assert not report.ok
        assert report.name == "one"

    def test_partial_table_raises(self):
        A = FiniteBooleanAlgebra(1)
        with pytest.raises(MalformedInputError):
            check_boolean_morphism(BooleanMorphism(A, A, (0,)))

    def test_point_map_round_trip(self):
        A, B = FiniteBooleanAlgebra(2), FiniteBooleanAlgebra(3)
        f = BooleanMorphism.from_point_map(A, B, (0, 1, 1))
        assert f(1) == 0b001
        assert f(2) == 0b110
        assert f.point_map() == (0, 1, 1)
        assert f.is_injective() and not f.is_surjective()

    def test_enumeration_counts(self):
        A, B = FiniteBooleanAlgebra(2), FiniteBooleanAlgebra(3)
        maps = list(boolean_morphisms(A, B))
        assert len(maps) == 2 ** 3
        assert all(check_boolean_morphism(f).ok for f in maps)

    def test_compose_and_kernel(self):
        A, B = FiniteBooleanAlgebra(2), FiniteBooleanAlgebra(1)
        collapse = BooleanMorphism.from_point_map(A, B, (0,))
        assert collapse.kernel_partition() == ((0, 2), (1, 3))
        assert collapse.compose(BooleanMorphism.identity(A)).table == collapse.table


class TestSetPartitions:
    @pytest.mark.parametrize("n,bell", [(0, 1), (1, 1), (3, 5), (4, 15)])
    def test_bell_numbers(self, n, bell):
        assert len(list(set_partitions(range(n)))) == bell
