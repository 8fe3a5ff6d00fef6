"""Subordination relations on finite powerset algebras.

The relation is kept extensionally as a pair set so that invalid candidates can
be inspected; the diamond / black-box operators are derived views.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .boolean_algebra import (
    BooleanMorphism,
    Element,
    ElementSet,
    FiniteBooleanAlgebra,
    check_boolean_morphism,
    elements_of_mask,
    iter_bits,
)
from .errors import MalformedInputError, OperatorLawError
from .kinds import Colour, MorphismKind
from .reports import CheckReport, SuiteReport

logger = logging.getLogger(__name__)

AXIOMS = ("S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S'2", "S'3")
BASIC_AXIOMS = ("S1", "S2", "S3", "S4")

Operator = Union[Callable[[Element], Element], Sequence[Element]]


@dataclass(frozen=True)
class SubordinationAlgebra:
    algebra: FiniteBooleanAlgebra
    rel: FrozenSet[Tuple[Element, Element]]

    def __post_init__(self):
        for a, b in self.rel:
            self.algebra.require(a, b)

    @classmethod
    def from_pairs(cls, algebra: FiniteBooleanAlgebra, pairs: Iterable[Tuple[Element, Element]]) -> "SubordinationAlgebra":
        return cls(algebra, frozenset((a, b) for a, b in pairs))

    @classmethod
    def from_predicate(
        cls, algebra: FiniteBooleanAlgebra, holds: Callable[[Element, Element], bool]
    ) -> "SubordinationAlgebra":
        return cls(algebra, frozenset((a, b) for a in algebra.elements() for b in algebra.elements() if holds(a, b)))

    @classmethod
    def order(cls, algebra: FiniteBooleanAlgebra) -> "SubordinationAlgebra":
        return cls.from_predicate(algebra, algebra.leq)

    @property
    def atom_count(self) -> int:
        return self.algebra.atom_count

    @cached_property
    def above_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.algebra.size
        for a, b in self.rel:
            masks[a] |= 1 << b
        return tuple(masks)

    @cached_property
    def below_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.algebra.size
        for a, b in self.rel:
            masks[b] |= 1 << a
        return tuple(masks)

    @cached_property
    def _powers(self) -> Dict[int, Tuple[int, ...]]:
        return {0: self.algebra.up_masks, 1: self.above_masks}

    def power_masks(self, k: int) -> Tuple[int, ...]:
        """Above-masks of ≺ᵏ, the k-fold relational composition (≺⁰ is ≤)."""
        if k < 0:
            raise MalformedInputError("relation powers are nonnegative")
        cache = self._powers
        if k not in cache:
            previous = self.power_masks(k - 1)
            composed = []
            for a in self.algebra.elements():
                mask = 0
                for c in iter_bits(previous[a]):
                    mask |= self.above_masks[c]
                composed.append(mask)
            cache[k] = tuple(composed)
        return cache[k]

    def precedes(self, a: Element, b: Element, k: int = 1) -> bool:
        masks = self.above_masks if k == 1 else self.power_masks(k)
        return bool((masks[a] >> b) & 1)

    def perp(self, a: Element, b: Element, k: int = 1) -> bool:
        return self.precedes(a, self.algebra.complement(b), k)

    def above(self, a: Element) -> List[Element]:
        return elements_of_mask(self.above_masks[a])

    def below(self, b: Element) -> List[Element]:
        return elements_of_mask(self.below_masks[b])

    def diamond(self, a: Element) -> Element:
        """Least element of ≺(a,−); the white operator of a valid finite algebra."""
        return self.algebra.meet_all(self.above(a))

    def black_box(self, a: Element) -> Element:
        """Greatest element of ≺(−,a)."""
        return self.algebra.join_all(self.below(a))

    def box(self, a: Element) -> Element:
        A = self.algebra
        return A.complement(self.diamond(A.complement(a)))

    def black_diamond(self, a: Element) -> Element:
        A = self.algebra
        return A.complement(self.black_box(A.complement(a)))

    def render_tuple(self, witness: Sequence[Element]) -> str:
        return "(" + ", ".join(self.algebra.render(a) for a in witness) + ")"


def _failure(S: SubordinationAlgebra, name: str, witness: Tuple[Element, ...], text: str) -> CheckReport:
    return CheckReport(ok=False, name=name, witness=witness, rendered=f"{name}: {text} at {S.render_tuple(witness)}")


def _check_s1(S):
    top = S.algebra.top
    if not S.precedes(0, 0):
        return _failure(S, "S1", (0, 0), "0 ⊀ 0")
    if not S.precedes(top, top):
        return _failure(S, "S1", (top, top), "1 ⊀ 1")
    return None


def _check_s2(S):
    for a in S.algebra.elements():
        mask = S.above_masks[a]
        for b in iter_bits(mask):
            for c in iter_bits(mask):
                if not (mask >> (b & c)) & 1:
                    return _failure(S, "S2", (a, b, c), "a ≺ b, a ≺ c but a ⊀ b∧c")
    return None


def _check_s3(S):
    for c in S.algebra.elements():
        mask = S.below_masks[c]
        for a in iter_bits(mask):
            for b in iter_bits(mask):
                if not (mask >> (a | b)) & 1:
                    return _failure(S, "S3", (a, b, c), "a ≺ c, b ≺ c but a∨b ⊀ c")
    return None


def _check_s4(S):
    A = S.algebra
    for a in A.elements():
        allowed = S.above_masks[a]
        for b in A.supersets(a):
            for c in iter_bits(S.above_masks[b]):
                missing = A.up_masks[c] & ~allowed
                if missing:
                    d = (missing & -missing).bit_length() - 1
                    return _failure(S, "S4", (a, b, c, d), "a ≤ b ≺ c ≤ d but a ⊀ d")
    return None


def _check_s5(S):
    for a in S.algebra.elements():
        if a and not S.below_masks[a] & ~1:
            return _failure(S, "S5", (a,), "no nonzero b with b ≺ a")
    return None


def _check_s6(S):
    for a, b in sorted(S.rel):
        if not S.algebra.leq(a, b):
            return _failure(S, "S6", (a, b), "a ≺ b but a ≰ b")
    return None


def _check_s7(S):
    A = S.algebra
    for a, b in sorted(S.rel):
        if not S.precedes(A.complement(b), A.complement(a)):
            return _failure(S, "S7", (a, b), "a ≺ b but ¬b ⊀ ¬a")
    return None


def _check_s8(S):
    for a, b in sorted(S.rel):
        if not S.above_masks[a] & S.below_masks[b]:
            return _failure(S, "S8", (a, b), "no c with a ≺ c ≺ b")
    return None


def _check_complete_meets(S):
    for a in S.algebra.elements():
        if not (S.above_masks[a] >> S.diamond(a)) & 1:
            return _failure(S, "S'2", (a,), "≺(a,−) misses the meet of its members")
    return None


def _check_complete_joins(S):
    for a in S.algebra.elements():
        if not (S.below_masks[a] >> S.black_box(a)) & 1:
            return _failure(S, "S'3", (a,), "≺(−,a) misses the join of its members")
    return None


_CHECKS = {
    "S1": _check_s1,
    "S2": _check_s2,
    "S3": _check_s3,
    "S4": _check_s4,
    "S5": _check_s5,
    "S6": _check_s6,
    "S7": _check_s7,
    "S8": _check_s8,
    "S'2": _check_complete_meets,
    "S'3": _check_complete_joins,
}


def check_axioms(S: SubordinationAlgebra, which: Optional[Iterable[str]] = None) -> SuiteReport:
    names = list(which) if which is not None else list(AXIOMS)
    unknown = [name for name in names if name not in _CHECKS]
    if unknown:
        raise MalformedInputError(f"unknown axioms: {', '.join(unknown)}")
    checks = []
    basic_ok = None
    for name in AXIOMS:
        if name not in names:
            continue
        report = _CHECKS[name](S) or CheckReport(ok=True, name=name)
        if name in ("S'2", "S'3"):
            if basic_ok is None:
                basic_ok = all(_CHECKS[b](S) is None for b in BASIC_AXIOMS)
            report.details["implied_by_S1_S4"] = basic_ok
            if basic_ok and not report.ok:
                logger.error("%s failed on an algebra satisfying S1-S4: %s", name, report.rendered)
        checks.append(report)
    return SuiteReport.of("axioms", checks)


def is_subordination(S: SubordinationAlgebra) -> bool:
    return all(_CHECKS[name](S) is None for name in BASIC_AXIOMS)


def classify_algebra(S: SubordinationAlgebra) -> List[str]:
    """Names of the classes S belongs to, weakest first."""
    report = check_axioms(S)
    holds = {c.name for c in report.checks if c.ok}
    classes = []
    if set(BASIC_AXIOMS) <= holds:
        classes.append("subordination")
        if {"S'2", "S'3"} <= holds:
            classes.append("modal")
        if {"S5", "S6", "S7"} <= holds:
            classes.append("contact")
            if "S8" in holds:
                classes.append("de_vries")
    return classes


def _operator_table(A: FiniteBooleanAlgebra, op: Operator) -> Tuple[Element, ...]:
    if callable(op):
        table = tuple(op(a) for a in A.elements())
    else:
        table = tuple(op)
    if len(table) != A.size:
        raise MalformedInputError(f"operator must be total: {len(table)} values for {A.size} elements")
    A.require(*table)
    return table


def check_operator_laws(A: FiniteBooleanAlgebra, table: Sequence[Element]) -> None:
    if table[0] != 0:
        raise OperatorLawError("operator does not preserve 0", (0,))
    for a in A.elements():
        for b in A.elements():
            if table[a | b] != table[a] | table[b]:
                raise OperatorLawError(
                    f"operator is not additive at ({A.render(a)}, {A.render(b)})", (a, b)
                )


def from_operator(A: FiniteBooleanAlgebra, op: Operator, colour: Colour = Colour.WHITE) -> SubordinationAlgebra:
    """a ≺ b iff ◇a ≤ b (white) or a ≤ ■b with ■ = ¬◆¬ (black)."""
    table = _operator_table(A, op)
    check_operator_laws(A, table)
    if Colour(colour) == Colour.WHITE:
        return SubordinationAlgebra.from_predicate(A, lambda a, b: A.leq(table[a], b))
    if Colour(colour) == Colour.BLACK:
        black_box = [A.complement(table[A.complement(b)]) for b in A.elements()]
        return SubordinationAlgebra.from_predicate(A, lambda a, b: A.leq(a, black_box[b]))
    raise MalformedInputError("an operator induces a white or a black relation")


def to_operator(S: SubordinationAlgebra, colour: Colour = Colour.WHITE) -> Tuple[Element, ...]:
    if Colour(colour) == Colour.WHITE:
        return tuple(S.diamond(a) for a in S.algebra.elements())
    return tuple(S.black_diamond(a) for a in S.algebra.elements())


class MultiOperator:
    """a ↦ ≺(a,−), a meet-preserving multi-valued operator."""

    def __init__(self, S: SubordinationAlgebra):
        self.S = S

    def __call__(self, a: Element) -> ElementSet:
        self.S.algebra.require(a)
        return ElementSet(self.S.algebra, tuple(self.S.above(a)), "filter")

    def verify(self) -> CheckReport:
        S, A = self.S, self.S.algebra
        if S.above_masks[0] != (1 << A.size) - 1:
            return CheckReport(ok=False, name="multi_operator", witness=(0,), rendered="≺(0,−) is not the whole algebra")
        for a in A.elements():
            for b in A.elements():
                if S.above_masks[a | b] != S.above_masks[a] & S.above_masks[b]:
                    return CheckReport(
                        ok=False,
                        name="multi_operator",
                        witness=(a, b),
                        rendered=f"≺(a∨b,−) ≠ ≺(a,−) ∩ ≺(b,−) at {S.render_tuple((a, b))}",
                    )
        return CheckReport(ok=True, name="multi_operator")


def to_multi_operator(S: SubordinationAlgebra) -> MultiOperator:
    return MultiOperator(S)


def check_morphism(
    f: BooleanMorphism,
    source: SubordinationAlgebra,
    target: SubordinationAlgebra,
    kind: MorphismKind = MorphismKind.WEAK,
) -> SuiteReport:
    kind = MorphismKind(kind)
    if f.source != source.algebra or f.target != target.algebra:
        raise MalformedInputError("morphism does not match the given algebras")
    boolean = check_boolean_morphism(f)
    if not boolean.ok:
        raise MalformedInputError(f"not a Boolean homomorphism: {boolean.rendered}")

    checks = [_check_weak(f, source, target)]
    if kind.forth:
        checks.append(_check_forth(f, source, target))
    if kind.back:
        checks.append(_check_back(f, source, target))

    details = {"kind": kind.value}
    if is_subordination(source) and is_subordination(target):
        details.update(_operator_cross_check(f, source, target, checks))
    return SuiteReport.of("morphism", checks, **details)


def _check_weak(f, S, T) -> CheckReport:
    for a, b in sorted(S.rel):
        if not T.precedes(f(a), f(b)):
            return _failure(S, "w", (a, b), "a ≺ b but f(a) ⊀ f(b)")
    return CheckReport(ok=True, name="w")


def _check_forth(f, S, T) -> CheckReport:
    A = S.algebra
    for a in A.elements():
        candidates = [f(b) for b in S.above(a)]
        for c in iter_bits(T.above_masks[f(a)]):
            if not any(T.algebra.leq(image, c) for image in candidates):
                return CheckReport(
                    ok=False,
                    name="forth",
                    witness=(a, c),
                    rendered=f"forth: f({A.render(a)}) ≺ {T.algebra.render(c)} without a ≺ b, f(b) ≤ c",
                )
    return CheckReport(ok=True, name="forth")


def _check_back(f, S, T) -> CheckReport:
    A = S.algebra
    for a in A.elements():
        candidates = [f(b) for b in S.below(a)]
        for c in iter_bits(T.below_masks[f(a)]):
            if not any(T.algebra.leq(c, image) for image in candidates):
                return CheckReport(
                    ok=False,
                    name="back",
                    witness=(a, c),
                    rendered=f"back: {T.algebra.render(c)} ≺ f({A.render(a)}) without b ≺ a, c ≤ f(b)",
                )
    return CheckReport(ok=True, name="back")


def _operator_cross_check(f, S, T, checks: List[CheckReport]) -> dict:
    A, B = S.algebra, T.algebra
    verdicts = {
        "w": all(B.leq(T.diamond(f(a)), f(S.diamond(a))) for a in A.elements()),
        "forth": all(B.leq(f(S.diamond(a)), T.diamond(f(a))) for a in A.elements()),
        "back": all(B.leq(T.black_box(f(a)), f(S.black_box(a))) for a in A.elements()),
    }
    agree = all(verdicts[c.name] == c.ok for c in checks)
    if not agree:
        logger.error("operator cross-check disagrees with the relational check: %s", verdicts)
    return {"operator_view": verdicts, "operator_view_agrees": agree}


def morphism_kind(f: BooleanMorphism, source: SubordinationAlgebra, target: SubordinationAlgebra) -> Optional[MorphismKind]:
    """Strongest kind f belongs to, or None when (w) fails."""
    report = check_morphism(f, source, target, MorphismKind.STRONG)
    verdict = {c.name: c.ok for c in report.checks}
    if not verdict["w"]:
        return None
    if verdict["forth"] and verdict["back"]:
        return MorphismKind.STRONG
    if verdict["forth"]:
        return MorphismKind.WHITE
    if verdict["back"]:
        return MorphismKind.BLACK
    return MorphismKind.WEAK


def is_morphism(f, source, target, kind: MorphismKind) -> bool:
    return check_morphism(f, source, target, kind).ok
