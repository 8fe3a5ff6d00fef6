import pytest

from src.services.boolean_algebra import ElementSet, FiniteBooleanAlgebra
from src.services.constructions import (
    boolean_subalgebras,
    check_categorical_product,
    diagonal,
    directed_union,
    is_subalgebra,
    product,
    relativize,
    subalgebra_lattice,
)
from src.services.errors import MalformedInputError, NotASubalgebraError, SizingError
from src.services.kinds import CongruenceKind, MorphismKind
from src.services.subordination import SubordinationAlgebra, is_morphism


class TestSubalgebras:
    def test_whole_algebra(self, arrow_algebra):
        whole = ElementSet.of(arrow_algebra.algebra, range(4))
        report = is_subalgebra(arrow_algebra, whole, CongruenceKind.STRONG)
        assert report.ok
        assert report.details["agree"]

    def test_trivial_subalgebra_not_white(self, arrow_algebra):
        trivial = ElementSet.of(arrow_algebra.algebra, [0, 3])
        report = is_subalgebra(arrow_algebra, trivial)
        assert not report.ok
        assert report.check("white").witness == (3, 1)
        assert report.details["agree"]

    def test_not_boolean(self, arrow_algebra):
        with pytest.raises(NotASubalgebraError):
            is_subalgebra(arrow_algebra, ElementSet.of(arrow_algebra.algebra, [0, 1, 3]))

    def test_relativize(self, order_algebra):
        rel = relativize(order_algebra, ElementSet.of(order_algebra.algebra, [0, 3]))
        assert rel.algebra.atom_count == 1
        assert rel.inclusion(1) == 3
        assert rel.to_small(3) == 1
        with pytest.raises(NotASubalgebraError):
            rel.to_small(1)

    def test_boolean_subalgebras_follow_partitions(self):
        assert len(boolean_subalgebras(FiniteBooleanAlgebra(3))) == 5

    def test_lattice_of_order(self, order_algebra):
        assert len(subalgebra_lattice(order_algebra, CongruenceKind.STRONG)) == 2

    def test_directed_union(self, two_atoms):
        chain = [ElementSet.of(two_atoms, [0, 3]), ElementSet.of(two_atoms, [0, 1, 2, 3])]
        assert directed_union(chain).members == (0, 1, 2, 3)
        with pytest.raises(MalformedInputError):
            directed_union([])


class TestProducts:
    def test_projections_are_strong(self, arrow_algebra):
        one = SubordinationAlgebra.order(FiniteBooleanAlgebra(1))
        result = product([one, arrow_algebra])
        assert result.algebra.atom_count == 3
        assert result.offsets == [0, 1]
        assert result.report.ok

    def test_size_cap(self, arrow_algebra):
        with pytest.raises(SizingError):
            product([arrow_algebra] * 4, max_atoms=6)

    def test_empty_family(self):
        with pytest.raises(MalformedInputError):
            product([])

    def test_diagonal_is_white(self, arrow_algebra):
        result, delta = diagonal(arrow_algebra)
        assert is_morphism(delta, arrow_algebra, result.algebra, MorphismKind.WHITE)

    def test_universal_property(self):
        one = SubordinationAlgebra.order(FiniteBooleanAlgebra(1))
        assert check_categorical_product([one, one], one).ok
