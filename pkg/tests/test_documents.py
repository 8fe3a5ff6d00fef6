import json

import pytest

from src.config.models import EquivSpecDocument, FrameDocument, MorphismDocument
from src.services.boolean_algebra import FiniteBooleanAlgebra
from src.services.documents import (
    atoms_of,
    classify_document,
    equivalence_from_document,
    frame_from_document,
    frame_to_document,
    load_document,
    morphism_from_document,
    named_structure,
    omega_set_from_document,
    read_json,
    subordination_from_document,
    subordination_to_document,
)
from src.services.duality import KripkeFrame
from src.services.errors import MalformedInputError, SizingError
from src.services.omega import PAIRS, STAR_LOOP, OmegaPlusSet
from src.services.subordination import SubordinationAlgebra

ORDER_1 = {"algebra": {"atoms": 1}, "prec": [[[], []], [[], [0]], [[0], [0]]]}


class TestElements:
    def test_atoms_round_trip(self):
        A = FiniteBooleanAlgebra(3)
        doc = subordination_to_document(SubordinationAlgebra.order(A))
        assert subordination_from_document(doc).rel == SubordinationAlgebra.order(A).rel
        assert atoms_of(0b101) == [0, 2]

    def test_atom_out_of_range(self):
        with pytest.raises(MalformedInputError):
            subordination_from_document(classify_document({"algebra": {"atoms": 1}, "prec": [[[1], [0]]]})[1])

    def test_atom_limit(self):
        _, doc = classify_document({"algebra": {"atoms": 4}})
        with pytest.raises(SizingError):
            subordination_from_document(doc, max_atoms=3)


class TestClassify:
    @pytest.mark.parametrize(
        "raw,kind",
        [
            (ORDER_1, "subordination"),
            ({"points": ["a"]}, "frame"),
            ({"structure": ORDER_1, "partition": [[[]], [[0]]]}, "congruence"),
            ({"structure": ORDER_1, "members": [[], [0]]}, "subalgebra"),
            ({"diagonal": True}, "relation"),
            ({"offset": 0, "period": 2, "shape": [[0, 1]]}, "equivalence"),
            ({"exceptions": [1, 3]}, "omega_set"),
        ],
    )
    def test_by_keys(self, raw, kind):
        assert classify_document(raw)[0] == kind

    def test_explicit_type(self):
        kind, doc = classify_document({"type": "relation"})
        assert kind == "relation"
        assert doc.diagonal is False

    @pytest.mark.parametrize(
        "raw",
        [[1, 2], {"type": "cube"}, {"colour": "red"}, {"points": ["a", "a"]}, {"type": "frame", "edges": []}],
    )
    def test_rejects(self, raw):
        with pytest.raises(MalformedInputError):
            classify_document(raw)

    def test_unknown_edge_label(self):
        with pytest.raises(MalformedInputError):
            classify_document({"points": ["a"], "edges": [["a", "b"]]})


class TestConversions:
    def test_frame(self):
        doc = FrameDocument(points=["x", "y"], edges=[("x", "y")])
        F = frame_from_document(doc)
        assert F.edges == frozenset({(0, 1)})
        assert frame_to_document(F) == doc

    def test_frame_limit(self):
        with pytest.raises(SizingError):
            frame_from_document(FrameDocument(points=["a", "b", "c"]), max_points=2)

    def test_morphism_needs_every_image(self):
        doc = MorphismDocument(source=ORDER_1, target=ORDER_1, images=[[]])
        with pytest.raises(MalformedInputError):
            morphism_from_document(doc)

    def test_identity_morphism(self):
        doc = MorphismDocument(source=ORDER_1, target=ORDER_1, images=[[], [0]], kind="strong")
        f, S, T, kind = morphism_from_document(doc)
        assert f.table == (0, 1)
        assert kind.value == "strong"

    def test_omega_documents(self):
        _, doc = classify_document({"kind": "cofinite", "exceptions": [0], "omega": True})
        assert omega_set_from_document(doc) == OmegaPlusSet.cofinite({0}, True)
        assert equivalence_from_document(EquivSpecDocument(period=2, shape=[[0, 1]])) == PAIRS


class TestFiles:
    def test_load(self, tmp_path):
        path = tmp_path / "order.json"
        path.write_text(json.dumps(ORDER_1), encoding="utf-8")
        kind, doc = load_document(path)
        assert kind == "subordination"
        assert doc.algebra.atoms == 1

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(MalformedInputError, match="invalid JSON"):
            read_json(path)

    def test_missing(self, tmp_path):
        with pytest.raises(MalformedInputError):
            read_json(tmp_path / "absent.json")


class TestNamedStructures:
    def test_kinds(self):
        assert isinstance(named_structure("five-point"), KripkeFrame)
        assert isinstance(named_structure("order-1"), SubordinationAlgebra)
        assert named_structure("omega-star") == STAR_LOOP

    def test_unknown(self):
        with pytest.raises(MalformedInputError, match="known"):
            named_structure("nowhere")
