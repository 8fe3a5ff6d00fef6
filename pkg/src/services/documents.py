"""Conversion between JSON documents and domain objects."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import BaseModel, ValidationError

from ..config.models import (
    HARD_MAX_ATOMS,
    AlgebraDocument,
    CongruenceDocument,
    EquivSpecDocument,
    FrameDocument,
    MorphismDocument,
    NamedStructure,
    OmegaSetDocument,
    RelationSpecDocument,
    SubalgebraDocument,
    SubordinationDocument,
    load_named_structures,
)
from .boolean_algebra import BooleanMorphism, Element, ElementSet, FiniteBooleanAlgebra, iter_bits
from .duality import KripkeFrame
from .errors import MalformedInputError, SizingError
from .kinds import CongruenceKind, MorphismKind
from .omega import EquivSpec, OmegaPlusSet, RelationSpec
from .subordination import SubordinationAlgebra

logger = logging.getLogger(__name__)

Structure = Union[KripkeFrame, SubordinationAlgebra, RelationSpec]


def element_of(A: FiniteBooleanAlgebra, atoms: List[int]) -> Element:
    if any(not 0 <= i < A.atom_count for i in atoms):
        raise MalformedInputError(f"atom index outside 0..{A.atom_count - 1}")
    return sum(1 << i for i in set(atoms))


def atoms_of(a: Element) -> List[int]:
    return list(iter_bits(a))


def algebra_from_document(doc: AlgebraDocument, max_atoms: int = HARD_MAX_ATOMS) -> FiniteBooleanAlgebra:
    if doc.atoms > max_atoms:
        raise SizingError(f"{doc.atoms} atoms exceed the limit of {max_atoms}")
    return FiniteBooleanAlgebra(doc.atoms)


def subordination_from_document(doc: SubordinationDocument, max_atoms: int = HARD_MAX_ATOMS) -> SubordinationAlgebra:
    A = algebra_from_document(doc.algebra, max_atoms)
    return SubordinationAlgebra.from_pairs(A, [(element_of(A, a), element_of(A, b)) for a, b in doc.prec])


def subordination_to_document(S: SubordinationAlgebra) -> SubordinationDocument:
    return SubordinationDocument(
        algebra=AlgebraDocument(atoms=S.atom_count),
        prec=[(atoms_of(a), atoms_of(b)) for a, b in sorted(S.rel)],
    )


def frame_from_document(doc: FrameDocument, max_points: int = HARD_MAX_ATOMS) -> KripkeFrame:
    if len(doc.points) > max_points:
        raise SizingError(f"{len(doc.points)} points exceed the limit of {max_points}")
    return KripkeFrame.from_labels(doc.points, doc.edges)


def frame_to_document(F: KripkeFrame) -> FrameDocument:
    return FrameDocument(points=list(F.points), edges=F.label_edges())


def morphism_from_document(
    doc: MorphismDocument, max_atoms: int = HARD_MAX_ATOMS
) -> Tuple[BooleanMorphism, SubordinationAlgebra, SubordinationAlgebra, MorphismKind]:
    S = subordination_from_document(doc.source, max_atoms)
    T = subordination_from_document(doc.target, max_atoms)
    if len(doc.images) != S.algebra.size:
        raise MalformedInputError("one image per source element is required")
    f = BooleanMorphism(S.algebra, T.algebra, tuple(element_of(T.algebra, img) for img in doc.images))
    return f, S, T, MorphismKind(doc.kind)


def morphism_to_document(f: BooleanMorphism, S: SubordinationAlgebra, T: SubordinationAlgebra, kind: str = "weak") -> MorphismDocument:
    return MorphismDocument(
        source=subordination_to_document(S),
        target=subordination_to_document(T),
        images=[atoms_of(f(a)) for a in S.algebra.elements()],
        kind=kind,
    )


def congruence_from_document(
    doc: CongruenceDocument, max_atoms: int = HARD_MAX_ATOMS
) -> Tuple[SubordinationAlgebra, List[List[Element]], CongruenceKind]:
    S = subordination_from_document(doc.structure, max_atoms)
    blocks = [[element_of(S.algebra, a) for a in block] for block in doc.partition]
    return S, blocks, CongruenceKind(doc.kind)


def subalgebra_from_document(
    doc: SubalgebraDocument, max_atoms: int = HARD_MAX_ATOMS
) -> Tuple[SubordinationAlgebra, ElementSet, CongruenceKind]:
    S = subordination_from_document(doc.structure, max_atoms)
    members = ElementSet.of(S.algebra, [element_of(S.algebra, a) for a in doc.members])
    return S, members, CongruenceKind(doc.kind)


def structure_from_named(item: NamedStructure, max_atoms: int = HARD_MAX_ATOMS) -> Structure:
    if item.kind == "frame":
        return frame_from_document(item.frame, max_atoms)
    if item.kind == "subordination":
        return subordination_from_document(item.subordination, max_atoms)
    return RelationSpec.from_document(item.relation)


def named_structure(name: str, max_atoms: int = HARD_MAX_ATOMS) -> Structure:
    registry = load_named_structures()
    if name not in registry:
        raise MalformedInputError(f"no structure named {name!r}; known: {', '.join(sorted(registry))}")
    return structure_from_named(registry[name], max_atoms)


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{path}: invalid JSON at line {exc.lineno}") from exc
    except OSError as exc:
        raise MalformedInputError(f"{path}: {exc.strerror}") from exc


_SHAPES: Tuple[Tuple[str, type], ...] = (
    ("morphism", MorphismDocument),
    ("congruence", CongruenceDocument),
    ("subalgebra", SubalgebraDocument),
    ("subordination", SubordinationDocument),
    ("frame", FrameDocument),
    ("relation", RelationSpecDocument),
    ("equivalence", EquivSpecDocument),
    ("omega_set", OmegaSetDocument),
)

_KEYS: Dict[str, Tuple[str, ...]] = {
    "morphism": ("source", "target", "images"),
    "congruence": ("structure", "partition"),
    "subalgebra": ("structure", "members"),
    "subordination": ("algebra",),
    "frame": ("points",),
    "relation": ("base_pairs", "diagonal", "omega_row", "omega_col", "omega_loop"),
    "equivalence": ("shape", "omega_shape", "blocks"),
    "omega_set": ("exceptions", "residues", "kind"),
}


def classify_document(raw: Any) -> Tuple[str, BaseModel]:
    """Pick the document model by its keys; an explicit ``type`` field wins."""
    if not isinstance(raw, dict):
        raise MalformedInputError("input must be a JSON object")
    body = {k: v for k, v in raw.items() if k != "type"}
    models = dict(_SHAPES)
    if "type" in raw:
        if raw["type"] not in models:
            raise MalformedInputError(f"unknown document type {raw['type']!r}")
        candidates = [raw["type"]]
    else:
        candidates = [name for name, _ in _SHAPES if any(key in body for key in _KEYS[name])]
    for name in candidates:
        try:
            return name, models[name](**body)
        except ValidationError as exc:
            if "type" in raw:
                raise MalformedInputError(str(exc)) from exc
    raise MalformedInputError("input does not match any document shape")


def load_document(path: Union[str, Path]) -> Tuple[str, BaseModel]:
    return classify_document(read_json(path))


def omega_set_from_document(doc: OmegaSetDocument) -> OmegaPlusSet:
    return OmegaPlusSet.from_document(doc)


def equivalence_from_document(doc: EquivSpecDocument) -> EquivSpec:
    return EquivSpec.from_document(doc)


def dump(model: BaseModel) -> Dict[str, Any]:
    return model.model_dump()
