"""Correspondences between bimodal formulas, frame conditions and subordination conditions."""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Union

from ..config.models import DEFAULT_EXCEPTION_BOUND, DEFAULT_MAX_VALUATIONS
from .conditions import (
    Condition,
    FrameCondition,
    SubCondition,
    eval_frame_condition,
    eval_sub_condition,
    parse_frame_condition,
    parse_sub_condition,
    render_condition,
)
from .duality import (
    CANONICAL_KEY_POINTS,
    FrameMorphism,
    KripkeFrame,
    check_frame_morphism,
    frame_class,
    of,
    quotient_frame,
    restrict_frame,
    ult,
)
from .errors import MalformedInputError
from .formulas import Formula, bdia, box, dia, implies, parse, render, var
from .kinds import CongruenceKind, MorphismKind
from .omega import RelationSpec, eval_frame_condition_symbolic
from .reports import CheckReport, SuiteReport
from .semantics import scheme_validity, validity
from .subordination import SubordinationAlgebra

logger = logging.getLogger(__name__)

Item = Union[Formula, Condition]


@dataclass
class CorrespondenceTriple:
    name: str
    formulas: Dict[str, Formula]
    frame_condition: FrameCondition
    sub_condition: Optional[SubCondition] = None
    note: str = ""
    alternatives: Dict[str, FrameCondition] = field(default_factory=dict)
    witnesses: Dict[str, Any] = field(default_factory=dict)
    scheme: bool = False

    def summary(self) -> Dict[str, Any]:
        out = {
            "name": self.name,
            "formulas": {key: render(phi) for key, phi in self.formulas.items()},
            "frame_condition": render_condition(self.frame_condition),
        }
        if self.sub_condition is not None:
            out["sub_condition"] = render_condition(self.sub_condition)
        if self.note:
            out["note"] = self.note
        return out


def correspondent_klmn(k: int, l: int, m: int, n: int) -> CorrespondenceTriple:
    """◇ᵏ□ˡp → □ᵐ◇ⁿp with its bicolour twin, frame condition and algebra condition."""
    if min(k, l, m, n) < 0:
        raise MalformedInputError("klmn indices are nonnegative")
    p = var("p")
    white = implies(dia(box(p, l), k), box(dia(p, n), m))
    bicolour = implies(bdia(dia(p, k), m), dia(bdia(p, l), n))
    frame = parse_frame_condition(
        f"A x,y,z. (x R^{k} y /\\ x R^{m} z) -> E u. (y R^{l} u /\\ z R^{n} u)"
    )
    algebra = parse_sub_condition(
        f"A a,b,c. (~a <^{l} ~b /\\ a _|_^{n} c) -> E d. (b <^{k} d /\\ c _|_^{m} d)"
    )
    printed = f"◇^{k}◆^{m}p → ◆^{l}◇^{n}p"
    return CorrespondenceTriple(
        name=f"klmn({k},{l},{m},{n})",
        formulas={"white": white, "bicolour": bicolour},
        frame_condition=frame,
        sub_condition=algebra,
        note=f"bicolour form certified by adjunction; printed black form {printed} kept for reference",
    )


def unicolour_gap_frames():
    """Five points with R = {(a,b),(c,d),(c,e)} and its quotient by b θ d."""
    frame = KripkeFrame.from_labels(("a", "b", "c", "d", "e"), [("a", "b"), ("c", "d"), ("c", "e")])
    partition = [[0], [1, 3], [2], [4]]
    quotient, projection = quotient_frame(frame, partition, CongruenceKind.WHITE)
    return frame, partition, quotient, projection


def seriality_black_witness():
    """({0,1}, {(0,1),(1,1)}) with the subobject {0}."""
    frame = KripkeFrame.of_size(2, {(0, 1), (1, 1)})
    sub, kept = restrict_frame(frame, 0b01)
    inclusion = FrameMorphism(sub, frame, tuple(kept))
    return frame, sub, inclusion


@lru_cache(maxsize=1)
def _library() -> tuple:
    p = var("p")
    entries = []

    for name, indices in (("reflexivity", (0, 1, 0, 0)), ("transitivity", (0, 1, 2, 0)), ("confluence", (1, 1, 1, 1))):
        triple = correspondent_klmn(*indices)
        triple.name = name
        entries.append(triple)

    entries.append(
        CorrespondenceTriple(
            name="two-variable",
            formulas={"white": parse("[]([]p -> q) | []([]q -> p)")},
            frame_condition=parse_frame_condition("A x,y,z. (x R y /\\ x R z) -> (y R z \\/ z R y)"),
            sub_condition=parse_sub_condition("A a,b. (a _|_ b /\\ b _|_ a) -> E c. (a < c /\\ b _|_ c)"),
        )
    )

    frame, sub, inclusion = seriality_black_witness()
    entries.append(
        CorrespondenceTriple(
            name="seriality",
            formulas={"white": implies(box(p), dia(p)), "bicolour": implies(p, dia(bdia(p)))},
            frame_condition=parse_frame_condition("A x. E y. x R y"),
            sub_condition=parse_sub_condition("A a. 1 < a -> 1 <= a"),
            note="not expressible in the black language",
            witnesses={"black_witness": {"frame": frame, "subobject": sub, "inclusion": inclusion}},
        )
    )

    five, partition, quotient, projection = unicolour_gap_frames()
    entries.append(
        CorrespondenceTriple(
            name="unicolour-gap",
            formulas={"bicolour": implies(dia(bdia(dia(p))), dia(p))},
            frame_condition=parse_frame_condition("A x,y,z,u. (x R y /\\ z R y /\\ z R u) -> x R u"),
            note="not expressible by a unicolour axiom",
            witnesses={
                "unicolour_witness": {"frame": five, "partition": partition, "quotient": quotient, "projection": projection}
            },
        )
    )

    equal_form = parse_frame_condition("A x. E y. (x R y /\\ y R x /\\ (A w. (y R w -> w = x)))")
    subset_form = parse_frame_condition("A x. E y. (x R y /\\ (A w. (y R w -> w = x)))")
    entries.append(
        CorrespondenceTriple(
            name="scheme-dcb",
            formulas={"white": implies(p, dia(box(p))), "black": parse("p -> <+>[+]p")},
            frame_condition=equal_form,
            alternatives={"subset": subset_form},
            note="R(y,−) = {x} and R(y,−) ⊆ {x} agree on Kripke frames; neither holds on the accumulation loop",
            scheme=True,
        )
    )

    entries.append(
        CorrespondenceTriple(
            name="symmetry",
            formulas={
                "bicolour": implies(dia(p), bdia(p)),
                "white": parse("<>[]p -> p"),
                "black": parse("<+>[+]p -> p"),
            },
            frame_condition=parse_frame_condition("A x,y. x R y -> y R x"),
            sub_condition=parse_sub_condition("A a,b. a < b -> ~b < ~a"),
        )
    )
    return tuple(entries)


def builtin_library() -> List[CorrespondenceTriple]:
    return list(_library())


def builtin(name: str) -> CorrespondenceTriple:
    for triple in _library():
        if triple.name == name:
            return triple
    if name.startswith("klmn"):
        try:
            indices = [int(x) for x in name[name.index("(") + 1 : name.index(")")].split(",")]
        except ValueError as exc:
            raise MalformedInputError(f"bad klmn name {name!r}") from exc
        if len(indices) != 4:
            raise MalformedInputError("klmn takes four indices")
        return correspondent_klmn(*indices)
    raise MalformedInputError(f"no builtin correspondence named {name!r}")


def describe(structure) -> str:
    if isinstance(structure, KripkeFrame):
        return f"frame {list(structure.points)} R={structure.label_edges()}"
    if isinstance(structure, SubordinationAlgebra):
        return f"algebra on {structure.atom_count} atoms with dual R={ult(structure).label_edges()}"
    if isinstance(structure, RelationSpec):
        return f"ω⁺ relation {structure.to_document().model_dump()}"
    return repr(structure)


def holds(
    item: Item,
    structure,
    scheme: bool = False,
    k: int = DEFAULT_EXCEPTION_BOUND,
    max_valuations: int = DEFAULT_MAX_VALUATIONS,
) -> bool:
    """Truth of a formula (validity), frame condition or subordination condition in one structure."""
    if isinstance(item, Formula):
        if scheme and not isinstance(structure, KripkeFrame):
            return scheme_validity(structure, item, max_valuations=max_valuations).ok
        return validity(structure, item, max_valuations, k).ok
    if isinstance(item, FrameCondition):
        if isinstance(structure, RelationSpec):
            return eval_frame_condition_symbolic(item, structure)
        frame = ult(structure) if isinstance(structure, SubordinationAlgebra) else structure
        return eval_frame_condition(item, frame)
    if isinstance(item, SubCondition):
        if isinstance(structure, RelationSpec):
            raise MalformedInputError("subordination conditions are decided on finite algebras")
        algebra = of(structure) if isinstance(structure, KripkeFrame) else structure
        return eval_sub_condition(item, algebra)
    raise MalformedInputError(f"cannot decide {type(item).__name__}")


Memo = Dict[tuple, bool]


def _truth(item: Item, structure, scheme: bool, k: int, max_valuations: int, memo: Optional[Memo]) -> bool:
    """``holds`` once per isomorphism class of small frames."""
    if memo is None or not isinstance(structure, KripkeFrame) or structure.size > CANONICAL_KEY_POINTS:
        return holds(item, structure, scheme, k, max_valuations)
    key = (item, frame_class(structure), scheme, k, max_valuations)
    if key not in memo:
        memo[key] = holds(item, structure, scheme, k, max_valuations)
    return memo[key]


def check_equivalence(
    left: Item,
    right: Item,
    family: Iterable,
    scheme: bool = False,
    k: int = DEFAULT_EXCEPTION_BOUND,
    max_valuations: int = DEFAULT_MAX_VALUATIONS,
    memo: Optional[Memo] = None,
) -> CheckReport:
    """Both sides agree on every member of the family; the first divergence is the witness.

    With a ``memo``, isomorphic frames share one verdict per side.
    """
    checked = 0
    for structure in family:
        checked += 1
        a = _truth(left, structure, scheme, k, max_valuations, memo)
        b = _truth(right, structure, scheme, k, max_valuations, memo)
        if a != b:
            logger.warning("divergence on %s", describe(structure))
            return CheckReport(
                ok=False,
                name="equivalence",
                witness=(describe(structure),),
                rendered=f"left {'holds' if a else 'fails'}, right {'holds' if b else 'fails'} on {describe(structure)}",
                details={"checked": checked, "index": checked - 1, "left_holds": a, "right_holds": b},
            )
    logger.debug("equivalence held on %d structures", checked)
    return CheckReport(ok=True, name="equivalence", details={"checked": checked})


def certify(
    triple: CorrespondenceTriple, family: Iterable, k: int = DEFAULT_EXCEPTION_BOUND, memo: Optional[Memo] = None
) -> SuiteReport:
    """Every formula, alternative and subordination condition against the frame condition."""
    members = list(family)
    memo = {} if memo is None else memo
    checks = []
    for key, phi in triple.formulas.items():
        report = check_equivalence(phi, triple.frame_condition, members, triple.scheme, k, memo=memo)
        report.name = f"formula:{key}"
        checks.append(report)
    for key, condition in triple.alternatives.items():
        report = check_equivalence(condition, triple.frame_condition, members, k=k, memo=memo)
        report.name = f"frame_condition:{key}"
        checks.append(report)
    if triple.sub_condition is not None:
        finite = [s for s in members if not isinstance(s, RelationSpec)]
        report = check_equivalence(triple.sub_condition, triple.frame_condition, finite, k=k, memo=memo)
        report.name = "sub_condition"
        checks.append(report)
    return SuiteReport.of(triple.name, checks, structures=len(members))


def check_black_gap(triple: CorrespondenceTriple) -> SuiteReport:
    """The inclusion is a black frame morphism, the frame satisfies the condition and the subobject does not."""
    witness = triple.witnesses["black_witness"]
    morphism = check_frame_morphism(witness["inclusion"], MorphismKind.BLACK)
    checks = [
        CheckReport(ok=morphism.ok, name="black_morphism", details=morphism.details),
        CheckReport(ok=holds(triple.frame_condition, witness["frame"]), name="frame_satisfies"),
        CheckReport(ok=not holds(triple.frame_condition, witness["subobject"]), name="subobject_fails"),
    ]
    return SuiteReport.of("black_gap", checks)


def check_unicolour_gap(triple: CorrespondenceTriple) -> SuiteReport:
    """The formula is valid on the frame but not on its quotient by a white space congruence."""
    witness = triple.witnesses["unicolour_witness"]
    phi = next(iter(triple.formulas.values()))
    checks = [
        CheckReport(ok=holds(phi, witness["frame"]), name="frame_valid"),
        CheckReport(ok=not holds(phi, witness["quotient"]), name="quotient_invalid"),
        CheckReport(ok=holds(triple.frame_condition, witness["frame"]), name="condition_on_frame"),
        CheckReport(ok=not holds(triple.frame_condition, witness["quotient"]), name="condition_fails_on_quotient"),
    ]
    return SuiteReport.of("unicolour_gap", checks, quotient=list(witness["quotient"].points))
