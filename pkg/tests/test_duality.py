import pytest
from hypothesis import given, settings

from src.services.boolean_algebra import BooleanMorphism
from src.services.duality import (
    FrameMorphism,
    KripkeFrame,
    at,
    canonical_extension,
    check_frame_morphism,
    check_subalgebra_congruence_duality,
    converse,
    disjoint_union,
    dual_of_algebra_morphism,
    dual_of_frame_morphism,
    factor_through_delta,
    algebra_isomorphism,
    frame_class,
    frame_isomorphism,
    is_increasing,
    is_space_congruence,
    of,
    quotient_frame,
    restrict_frame,
    sigma_pi_extension,
    subalgebra_of_congruence,
    ult,
)
from src.services.errors import MalformedInputError, MorphismKindError, NotACongruenceError, SizingError
from src.services.generators import all_frames, all_subordinations
from src.services.kinds import CongruenceKind, MorphismKind
from tests.strategies import frames, subordinations


@pytest.fixture
def loop_point():
    return KripkeFrame.of_size(1, {(0, 0)})


class TestKripkeFrame:
    def test_operators(self, arrow_frame):
        assert arrow_frame.pre(0b10) == 0b01
        assert arrow_frame.post(0b01) == 0b10
        assert arrow_frame.box(0b00) == 0b10
        assert arrow_frame.black_box(0b00) == 0b01

    def test_from_labels(self):
        F = KripkeFrame.from_labels(["a", "b"], [("a", "b")])
        assert F.edges == frozenset({(0, 1)})
        assert F.render(0b11) == "{a,b}"
        assert F.label_edges() == [("a", "b")]

    def test_unknown_label(self):
        with pytest.raises(MalformedInputError):
            KripkeFrame.from_labels(["a"], [("a", "z")])

    def test_hard_cap(self):
        with pytest.raises(SizingError):
            KripkeFrame.of_size(11, set())

    def test_increasing(self, arrow_frame):
        assert is_increasing(arrow_frame, 0b10)
        assert not is_increasing(arrow_frame, 0b01)


class TestFrameMorphisms:
    def test_identity_is_strong(self, arrow_frame):
        h = FrameMorphism(arrow_frame, arrow_frame, (0, 1))
        assert check_frame_morphism(h, MorphismKind.STRONG).ok

    def test_collapse_onto_loop(self, arrow_frame, loop_point):
        h = FrameMorphism(arrow_frame, loop_point, (0, 0))
        assert check_frame_morphism(h).ok
        report = check_frame_morphism(h, MorphismKind.STRONG)
        assert not report.ok
        assert report.check("forth").witness == (1, 0)
        assert report.check("back").witness == (0, 0)

    def test_wrong_arity(self, arrow_frame, loop_point):
        with pytest.raises(MalformedInputError):
            FrameMorphism(arrow_frame, loop_point, (0,))

    def test_dual_of_frame_morphism(self, arrow_frame, loop_point):
        h = FrameMorphism(arrow_frame, loop_point, (0, 0))
        f = dual_of_frame_morphism(h)
        assert f.table == (0, 3)
        with pytest.raises(MorphismKindError):
            dual_of_frame_morphism(h, MorphismKind.STRONG)

    def test_dual_of_identity(self, arrow_algebra):
        h = dual_of_algebra_morphism(BooleanMorphism.identity(arrow_algebra.algebra), arrow_algebra, arrow_algebra)
        assert h.mapping == (0, 1)


class TestDuality:
    def test_arrow_round_trip(self, arrow_frame, arrow_algebra):
        assert ult(arrow_algebra).edges == arrow_frame.edges
        assert at(arrow_algebra).edges == arrow_frame.edges

    def test_ult_of_every_small_frame(self):
        for F in all_frames(3):
            G = ult(of(F))
            assert G.edges == F.edges
            assert frame_isomorphism(G, F) is not None

    def test_of_ult_every_small_algebra(self):
        for S in all_subordinations(1) + all_subordinations(2):
            T = of(ult(S))
            assert T.rel == S.rel
            assert algebra_isomorphism(T, S) is not None

    @settings(derandomize=True, max_examples=500, deadline=None)
    @given(subordinations(max_atoms=4, min_atoms=3))
    def test_of_ult_algebra(self, S):
        assert of(ult(S)).rel == S.rel

    @settings(max_examples=40, deadline=None)
    @given(frames(max_points=4))
    def test_ult_of_frame(self, F):
        assert ult(of(F)).edges == F.edges

    def test_isomorphism_to_converse(self, arrow_frame):
        assert frame_isomorphism(arrow_frame, converse(arrow_frame)) == (1, 0)
        assert algebra_isomorphism(of(arrow_frame), of(converse(arrow_frame))) is not None

    def test_non_isomorphic(self, arrow_frame, loop_point):
        assert frame_isomorphism(arrow_frame, KripkeFrame.of_size(2, {(0, 0)})) is None
        assert algebra_isomorphism(of(arrow_frame), of(loop_point)) is None

    def test_isomorphism_at_the_point_cap(self):
        cycle = KripkeFrame.of_size(10, {(i, (i + 1) % 10) for i in range(10)} | {(0, 0)})
        shift = [(3 * i + 7) % 10 for i in range(10)]
        relabelled = KripkeFrame.of_size(10, {(shift[x], shift[y]) for x, y in cycle.edges})
        perm = frame_isomorphism(cycle, relabelled)
        assert perm is not None
        assert {(perm[x], perm[y]) for x, y in cycle.edges} == relabelled.edges

    def test_algebra_isomorphism_follows_the_dual_frames(self):
        F = KripkeFrame.of_size(4, {(0, 1), (1, 2), (2, 2), (3, 0)})
        G = KripkeFrame.of_size(4, {(2, 0), (0, 3), (3, 3), (1, 2)})
        f = algebra_isomorphism(of(F), of(G))
        assert f is not None
        assert f(0b0001) == 0b0100

    def test_same_degrees_not_isomorphic(self):
        one_cycle = KripkeFrame.of_size(10, {(i, (i + 1) % 10) for i in range(10)})
        two_cycles = KripkeFrame.of_size(10, {(i, (i + 1) % 5) for i in range(5)} | {(i, 5 + (i + 1) % 5) for i in range(5, 10)})
        assert frame_isomorphism(one_cycle, two_cycles) is None

    def test_frame_classes(self):
        assert len({frame_class(F) for F in all_frames(2)}) == 12
        assert len({frame_class(F) for F in all_frames(3)}) == 116

    def test_frame_class_cap(self):
        with pytest.raises(SizingError):
            frame_class(KripkeFrame.of_size(6, set()))


class TestCanonicalExtension:
    def test_finite_extension_is_bijective(self, arrow_algebra):
        ext = canonical_extension(arrow_algebra)
        assert ext.report.ok
        assert ext.report.details["bijective"]
        assert ext.embedding.table == (0, 1, 2, 3)

    @pytest.mark.parametrize("E", [0, 1, 2, 3])
    def test_sigma_pi_agree(self, arrow_algebra, E):
        smooth = sigma_pi_extension(arrow_algebra, E)
        assert smooth.ok
        assert smooth.expected == ult(arrow_algebra).pre(E)

    def test_sigma_pi_on_every_small_frame(self):
        for F in all_frames(3):
            S = of(F)
            for E in S.algebra.elements():
                smooth = sigma_pi_extension(S, E)
                assert smooth.ok, (F.edges, E)
                assert smooth.expected == F.pre(E)

    def test_sigma_pi_outside(self, arrow_algebra):
        with pytest.raises(MalformedInputError):
            sigma_pi_extension(arrow_algebra, 0b100)

    def test_factor_identity(self, arrow_algebra):
        f = BooleanMorphism.identity(arrow_algebra.algebra)
        result = factor_through_delta(f, arrow_algebra, arrow_algebra)
        assert result.unique
        assert result.white
        assert result.candidates == 1
        assert result.morphism.table == f.table


class TestFrameConstructions:
    def test_disjoint_union(self, arrow_frame, loop_point):
        union, injections = disjoint_union([arrow_frame, loop_point])
        assert union.points == ("0:0", "0:1", "1:0")
        assert union.edges == frozenset({(0, 1), (2, 2)})
        assert all(check_frame_morphism(j, MorphismKind.STRONG).ok for j in injections)

    def test_empty_union(self):
        with pytest.raises(MalformedInputError):
            disjoint_union([])

    def test_restrict(self, arrow_frame):
        sub, kept = restrict_frame(arrow_frame, 0b10)
        assert sub.points == ("1",)
        assert not sub.edges
        assert kept == [1]


class TestSpaceCongruences:
    def test_discrete_partition(self, arrow_frame):
        assert is_space_congruence(arrow_frame, [[0], [1]], CongruenceKind.STRONG).ok

    def test_collapse_fails_white(self, arrow_frame):
        report = is_space_congruence(arrow_frame, [[0, 1]])
        assert not report.ok
        assert report.check("white").witness == (1, 0, 1)

    def test_quotient(self, arrow_frame):
        quotient, h = quotient_frame(arrow_frame, [[1], [0]])
        assert quotient.edges == frozenset({(0, 1)})
        assert h.mapping == (0, 1)
        with pytest.raises(NotACongruenceError):
            quotient_frame(arrow_frame, [[0, 1]])

    def test_bad_partition(self, arrow_frame):
        with pytest.raises(MalformedInputError):
            is_space_congruence(arrow_frame, [[0]])

    def test_saturated_sets(self, arrow_frame):
        assert set(subalgebra_of_congruence(arrow_frame, [[0, 1]])) == {0, 3}

    def test_anti_isomorphism_on_arrow(self, arrow_frame):
        report = check_subalgebra_congruence_duality(arrow_frame)
        assert report.ok
        assert report.details["congruences"] == 1

    @settings(max_examples=25, deadline=None)
    @given(frames(max_points=3))
    def test_anti_isomorphism(self, F):
        for kind in CongruenceKind:
            assert check_subalgebra_congruence_duality(F, kind).ok
