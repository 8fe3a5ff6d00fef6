"""Congruences of finite subordination algebras, quotients and the isomorphism theorems.

A Boolean congruence of a powerset algebra is fixed by its 0-class z↓, so
x θ y iff x ∖ z = y ∖ z. The subordination conditions are evaluated on the
partition itself, independently of that shortcut.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

from .boolean_algebra import (
    BooleanMorphism,
    Element,
    ElementSet,
    FiniteBooleanAlgebra,
    is_boolean_subalgebra,
    iter_bits,
)
from .constructions import Relativized, is_isomorphism, is_subalgebra, relativize
from .errors import MalformedInputError, NotABooleanCongruenceError, NotACongruenceError
from .kinds import CongruenceKind
from .reports import CheckReport, SuiteReport
from .subordination import SubordinationAlgebra, check_morphism, is_morphism

logger = logging.getLogger(__name__)

Blocks = Tuple[Tuple[Element, ...], ...]


def _normalize_blocks(A: FiniteBooleanAlgebra, blocks: Sequence[Sequence[Element]]) -> Blocks:
    seen = set()
    normalized = []
    for block in blocks:
        items = tuple(sorted(set(block)))
        if not items:
            raise MalformedInputError("empty block")
        A.require(*items)
        if seen & set(items):
            raise MalformedInputError("blocks overlap")
        seen.update(items)
        normalized.append(items)
    if len(seen) != A.size:
        raise MalformedInputError("partition does not cover all elements")
    return tuple(sorted(normalized))


def zero_class_partition(A: FiniteBooleanAlgebra, z: Element) -> Blocks:
    classes: Dict[Element, List[Element]] = {}
    for x in A.elements():
        classes.setdefault(x & ~z, []).append(x)
    return tuple(sorted(tuple(block) for block in classes.values()))


@dataclass(frozen=True)
class SubCongruence:
    algebra: SubordinationAlgebra
    blocks: Blocks
    kind: CongruenceKind = CongruenceKind.WHITE

    @classmethod
    def from_partition(cls, S: SubordinationAlgebra, blocks, kind=CongruenceKind.WHITE) -> "SubCongruence":
        return cls(S, _normalize_blocks(S.algebra, blocks), CongruenceKind(kind))

    @classmethod
    def from_zero_class(cls, S: SubordinationAlgebra, z: Element, kind=CongruenceKind.WHITE) -> "SubCongruence":
        S.algebra.require(z)
        return cls(S, zero_class_partition(S.algebra, z), CongruenceKind(kind))

    @classmethod
    def identity(cls, S, kind=CongruenceKind.WHITE) -> "SubCongruence":
        return cls.from_zero_class(S, 0, kind)

    @classmethod
    def full(cls, S, kind=CongruenceKind.WHITE) -> "SubCongruence":
        return cls.from_zero_class(S, S.algebra.top, kind)

    @cached_property
    def class_index(self) -> Tuple[int, ...]:
        index = [0] * self.algebra.algebra.size
        for i, block in enumerate(self.blocks):
            for a in block:
                index[a] = i
        return tuple(index)

    @cached_property
    def class_masks(self) -> Tuple[int, ...]:
        masks = []
        for block in self.blocks:
            mask = 0
            for a in block:
                mask |= 1 << a
            masks.append(mask)
        return tuple(masks)

    def class_mask_of(self, a: Element) -> int:
        return self.class_masks[self.class_index[a]]

    def related(self, a: Element, b: Element) -> bool:
        return self.class_index[a] == self.class_index[b]

    @property
    def zero_class(self) -> Tuple[Element, ...]:
        return self.blocks[self.class_index[0]]

    @property
    def one_class(self) -> Tuple[Element, ...]:
        return self.blocks[self.class_index[self.algebra.algebra.top]]

    @property
    def zero_generator(self) -> Element:
        return self.algebra.algebra.join_all(self.zero_class)

    def pairs(self) -> frozenset:
        return frozenset((a, b) for block in self.blocks for a in block for b in block)


def check_boolean_congruence(A: FiniteBooleanAlgebra, blocks: Blocks) -> CheckReport:
    zero = next(block for block in blocks if 0 in block)
    z = A.join_all(zero)
    if z not in zero or any(not A.leq(a, z) for a in zero) or len(zero) != 1 << bin(z).count("1"):
        return CheckReport(ok=False, name="boolean", witness=(z,), rendered=f"0-class is not the ideal {A.render(z)}↓")
    expected = zero_class_partition(A, z)
    if expected != blocks:
        index = {a: i for i, block in enumerate(blocks) for a in block}
        for a in A.elements():
            for b in A.elements():
                if (index[a] == index[b]) != ((a & ~z) == (b & ~z)):
                    return CheckReport(
                        ok=False,
                        name="boolean",
                        witness=(a, b),
                        rendered=f"partition is not compatible with the Boolean operations at ({A.render(a)}, {A.render(b)})",
                    )
    return CheckReport(ok=True, name="boolean", details={"zero_generator": z})


def _white_transfer(theta: SubCongruence) -> CheckReport:
    """a θ b ≺ c ⇒ ∃d: a ≺ d θ c."""
    S = theta.algebra
    for a in S.algebra.elements():
        for b in theta.blocks[theta.class_index[a]]:
            for c in iter_bits(S.above_masks[b]):
                if not S.above_masks[a] & theta.class_mask_of(c):
                    return CheckReport(ok=False, name="white_transfer", witness=(a, b, c))
    return CheckReport(ok=True, name="white_transfer")


def _black_transfer(theta: SubCongruence) -> CheckReport:
    """a θ b ≻ c ⇒ ∃d: c θ d ≺ a."""
    S = theta.algebra
    for a in S.algebra.elements():
        for b in theta.blocks[theta.class_index[a]]:
            for c in iter_bits(S.below_masks[b]):
                if not S.below_masks[a] & theta.class_mask_of(c):
                    return CheckReport(ok=False, name="black_transfer", witness=(a, b, c))
    return CheckReport(ok=True, name="black_transfer")


def _round_ideal(theta: SubCongruence) -> CheckReport:
    S = theta.algebra
    ideal = theta.class_masks[theta.class_index[0]]
    for a in theta.zero_class:
        if not S.above_masks[a] & ideal:
            return CheckReport(ok=False, name="round_ideal", witness=(a,))
    return CheckReport(ok=True, name="round_ideal")


def _round_filter(theta: SubCongruence) -> CheckReport:
    S = theta.algebra
    filt = theta.class_masks[theta.class_index[S.algebra.top]]
    for a in theta.one_class:
        if not S.below_masks[a] & filt:
            return CheckReport(ok=False, name="round_filter", witness=(a,))
    return CheckReport(ok=True, name="round_filter")


def _filter_complement_condition(theta: SubCongruence) -> CheckReport:
    """a ∈ F ⇒ ¬a ≺ ¬b for some b ∈ F."""
    S = theta.algebra
    A = S.algebra
    for a in theta.one_class:
        if not any(S.precedes(A.complement(a), A.complement(b)) for b in theta.one_class):
            return CheckReport(ok=False, name="filter_complement", witness=(a,))
    return CheckReport(ok=True, name="filter_complement")


def _ideal_complement_condition(theta: SubCongruence) -> CheckReport:
    """a ∈ I ⇒ ¬b ≺ ¬a for some b ∈ I."""
    S = theta.algebra
    A = S.algebra
    for a in theta.zero_class:
        if not any(S.precedes(A.complement(b), A.complement(a)) for b in theta.zero_class):
            return CheckReport(ok=False, name="ideal_complement", witness=(a,))
    return CheckReport(ok=True, name="ideal_complement")


def is_congruence(S: SubordinationAlgebra, partition, kind: CongruenceKind = CongruenceKind.WHITE) -> SuiteReport:
    kind = CongruenceKind(kind)
    blocks = _normalize_blocks(S.algebra, partition)
    boolean = check_boolean_congruence(S.algebra, blocks)
    if not boolean.ok:
        return SuiteReport(ok=False, name="congruence", checks=[boolean], details={"boolean": False}, error=boolean.rendered)
    theta = SubCongruence(S, blocks, kind)
    groups = []
    if kind.white:
        groups.append([_white_transfer(theta), _round_ideal(theta), _filter_complement_condition(theta)])
    if kind.black:
        groups.append([_black_transfer(theta), _round_filter(theta), _ideal_complement_condition(theta)])
    agree = all(len({c.ok for c in group}) == 1 for group in groups)
    if not agree:
        logger.error("equivalent congruence conditions disagree: %s", [[c.to_dict() for c in g] for g in groups])
    checks = [boolean] + [c for group in groups for c in group]
    return SuiteReport.of("congruence", checks, boolean=True, agree=agree, kind=kind.value)


def _is_round(S: SubordinationAlgebra, z: Element, kind: CongruenceKind) -> bool:
    A = S.algebra
    white = S.precedes(z, z)
    black = S.precedes(A.complement(z), A.complement(z))
    return {CongruenceKind.WHITE: white, CongruenceKind.BLACK: black, CongruenceKind.STRONG: white and black}[kind]


@dataclass
class CongruenceLattice:
    algebra: SubordinationAlgebra
    kind: CongruenceKind
    generators: List[Element]
    report: SuiteReport

    @property
    def congruences(self) -> List[SubCongruence]:
        return [SubCongruence.from_zero_class(self.algebra, z, self.kind) for z in self.generators]

    def leq(self, z: Element, w: Element) -> bool:
        return z & ~w == 0

    def meet(self, z: Element, w: Element) -> Element:
        return z & w

    def join(self, z: Element, w: Element) -> Element:
        return z | w

    def __len__(self) -> int:
        return len(self.generators)


def _equivalence_join(A: FiniteBooleanAlgebra, first: Blocks, second: Blocks) -> Blocks:
    parent = list(A.elements())

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for blocks in (first, second):
        for block in blocks:
            for a in block[1:]:
                parent[find(a)] = find(block[0])
    classes: Dict[int, List[Element]] = {}
    for a in A.elements():
        classes.setdefault(find(a), []).append(a)
    return tuple(sorted(tuple(block) for block in classes.values()))


def congruence_lattice(S: SubordinationAlgebra, kind: CongruenceKind = CongruenceKind.WHITE) -> CongruenceLattice:
    """Congruences indexed by their round 0-class generators, with lattice laws verified."""
    kind = CongruenceKind(kind)
    A = S.algebra
    generators = [z for z in A.elements() if _is_round(S, z, kind)]
    members = set(generators)
    checks = [
        CheckReport(ok=0 in members and A.top in members, name="bounds"),
        CheckReport(
            ok=all(is_congruence(S, zero_class_partition(A, z), kind).ok for z in generators),
            name="members_are_congruences",
        ),
    ]

    closed = True
    meet_is_intersection = True
    join_is_equivalence_join = True
    for z in generators:
        pz = SubCongruence.from_zero_class(S, z, kind)
        for w in generators:
            if (z & w) not in members or (z | w) not in members:
                closed = False
                continue
            pw = SubCongruence.from_zero_class(S, w, kind)
            meet = SubCongruence.from_zero_class(S, z & w, kind)
            if meet.pairs() != pz.pairs() & pw.pairs():
                meet_is_intersection = False
            if _equivalence_join(A, pz.blocks, pw.blocks) != zero_class_partition(A, z | w):
                join_is_equivalence_join = False
    checks.append(CheckReport(ok=closed, name="closed_under_meet_and_join"))
    checks.append(CheckReport(ok=meet_is_intersection, name="meet_is_intersection"))
    checks.append(CheckReport(ok=join_is_equivalence_join, name="join_is_equivalence_join"))
    checks.append(_frame_law(generators))
    logger.debug("%s congruence lattice has %d members", kind.value, len(generators))
    return CongruenceLattice(S, kind, generators, SuiteReport.of("congruence_lattice", checks))


def _frame_law(generators: List[Element]) -> CheckReport:
    """x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z); finite joins reduce to the binary law."""
    for x in generators:
        for y in generators:
            for z in generators:
                if x & (y | z) != (x & y) | (x & z):
                    return CheckReport(ok=False, name="frame_law", witness=(x, y, z))
    return CheckReport(ok=True, name="frame_law")


@dataclass
class QuotientResult:
    algebra: SubordinationAlgebra
    projection: BooleanMorphism
    report: SuiteReport


def quotient(S: SubordinationAlgebra, theta: SubCongruence) -> QuotientResult:
    verdict = is_congruence(S, theta.blocks, theta.kind)
    if not verdict.ok:
        if verdict.details.get("boolean") is False:
            raise NotABooleanCongruenceError(verdict.error)
        raise NotACongruenceError(f"partition is not a {theta.kind.value} congruence")
    A = S.algebra
    z = theta.zero_generator
    kept = [i for i in range(A.atom_count) if not (z >> i) & 1]
    Q = FiniteBooleanAlgebra(len(kept))

    def compress(x: Element) -> Element:
        return sum(1 << j for j, i in enumerate(kept) if (x >> i) & 1)

    def expand(q: Element) -> Element:
        return sum(1 << kept[j] for j in iter_bits(q))

    projection = BooleanMorphism.from_function(A, Q, compress)

    def white(x, y):
        return bool(S.above_masks[x] & theta.class_mask_of(y))

    def black(x, y):
        return bool(theta.class_mask_of(x) & S.below_masks[y])

    reading = black if theta.kind == CongruenceKind.BLACK else white
    pairs = [(p, q) for p in Q.elements() for q in Q.elements() if reading(expand(p), expand(q))]
    result = SubordinationAlgebra.from_pairs(Q, pairs)

    well_defined = all(
        reading(x, y) == reading(expand(compress(x)), expand(compress(y))) for x in A.elements() for y in A.elements()
    )
    checks = [
        CheckReport(ok=well_defined, name="well_defined"),
        CheckReport(
            ok=is_morphism(projection, S, result, theta.kind.as_morphism_kind()),
            name="projection",
            details={"kind": theta.kind.value},
        ),
    ]
    details = {}
    if theta.kind == CongruenceKind.STRONG:
        details["readings_agree"] = all(
            white(expand(p), expand(q)) == black(expand(p), expand(q)) for p in Q.elements() for q in Q.elements()
        )
    return QuotientResult(result, projection, SuiteReport.of("quotient", checks, **details))


def kernel(f: BooleanMorphism, S: SubordinationAlgebra, kind=CongruenceKind.WHITE) -> SubCongruence:
    return SubCongruence.from_partition(S, f.kernel_partition(), kind)


def saturate(S: SubordinationAlgebra, A: ElementSet, theta: SubCongruence) -> ElementSet:
    """A^θ, the union of the θ-classes meeting A."""
    members = set()
    for a in A.members:
        members.update(theta.blocks[theta.class_index[a]])
    return ElementSet.of(S.algebra, members)


def restrict(theta: SubCongruence, rel: Relativized, kind=None) -> SubCongruence:
    """θ restricted to a relativized subalgebra, as a congruence of the small algebra."""
    small = rel.algebra
    classes: Dict[int, List[Element]] = {}
    for x in small.algebra.elements():
        classes.setdefault(theta.class_index[rel.inclusion(x)], []).append(x)
    return SubCongruence.from_partition(small, list(classes.values()), kind or theta.kind)


def first_isomorphism(
    f: BooleanMorphism, S: SubordinationAlgebra, T: SubordinationAlgebra, kind=CongruenceKind.WHITE
) -> SuiteReport:
    """S / ker f ≅ image f, the image being a subalgebra of T."""
    kind = CongruenceKind(kind)
    if not check_morphism(f, S, T, kind.as_morphism_kind()).ok:
        return SuiteReport(ok=False, name="first_isomorphism", error="hypothesis: f is not a morphism of the kind")
    theta = kernel(f, S, kind)
    congruence = is_congruence(S, theta.blocks, kind)
    if not congruence.ok:
        return SuiteReport(ok=False, name="first_isomorphism", checks=congruence.checks, error="kernel is not a congruence")
    image = f.image()
    sub = is_subalgebra(T, image, kind)
    q = quotient(S, theta)
    rel = relativize(T, image)
    bijection = BooleanMorphism.from_function(
        q.algebra.algebra, rel.algebra.algebra, lambda p: rel.to_small(f(_representative(q.projection, p)))
    )
    checks = [
        CheckReport(ok=sub.ok, name="image_is_subalgebra"),
        CheckReport(ok=is_isomorphism(bijection, q.algebra, rel.algebra), name="isomorphism"),
    ]
    return SuiteReport.of("first_isomorphism", checks)


def _representative(projection: BooleanMorphism, q: Element) -> Element:
    for a in projection.source.elements():
        if projection(a) == q:
            return a
    raise MalformedInputError("projection is not onto")


def second_isomorphism(S: SubordinationAlgebra, A: ElementSet, theta: SubCongruence) -> SuiteReport:
    """A / θ|A ≅ A^θ / θ|A^θ."""
    kind = theta.kind
    if not is_boolean_subalgebra(S.algebra, A) or not is_subalgebra(S, A, kind).ok:
        return SuiteReport(ok=False, name="second_isomorphism", error="hypothesis: A is not a subalgebra of the kind")
    if not is_congruence(S, theta.blocks, kind).ok:
        return SuiteReport(ok=False, name="second_isomorphism", error="hypothesis: θ is not a congruence of the kind")
    saturated = saturate(S, A, theta)
    saturated_boolean = is_boolean_subalgebra(S.algebra, saturated)
    checks = [CheckReport(ok=saturated_boolean, name="saturation_is_boolean_subalgebra")]
    if not saturated_boolean:
        return SuiteReport.of("second_isomorphism", checks)
    checks.append(CheckReport(ok=is_subalgebra(S, saturated, kind).ok, name="saturation_is_subalgebra"))

    small = relativize(S, A)
    big = relativize(S, saturated)
    theta_small = restrict(theta, small)
    theta_big = restrict(theta, big)
    restricted_ok = (
        is_congruence(small.algebra, theta_small.blocks, kind).ok and is_congruence(big.algebra, theta_big.blocks, kind).ok
    )
    checks.append(CheckReport(ok=restricted_ok, name="restrictions_are_congruences"))
    if not restricted_ok:
        return SuiteReport.of("second_isomorphism", checks)
    q_small = quotient(small.algebra, theta_small)
    q_big = quotient(big.algebra, theta_big)
    bijection = BooleanMorphism.from_function(
        q_small.algebra.algebra,
        q_big.algebra.algebra,
        lambda p: q_big.projection(big.to_small(small.inclusion(_representative(q_small.projection, p)))),
    )
    checks.append(CheckReport(ok=is_isomorphism(bijection, q_small.algebra, q_big.algebra), name="isomorphism"))
    return SuiteReport.of("second_isomorphism", checks)


def third_isomorphism(S: SubordinationAlgebra, theta: SubCongruence) -> SuiteReport:
    """Con(S/θ) ≅ the principal filter of Con(S) at θ."""
    kind = theta.kind
    if not is_congruence(S, theta.blocks, kind).ok:
        return SuiteReport(ok=False, name="third_isomorphism", error="hypothesis: θ is not a congruence of the kind")
    z = theta.zero_generator
    q = quotient(S, theta)
    upper = [w for w in congruence_lattice(S, kind).generators if z & ~w == 0]
    image = [q.projection(w) for w in upper]
    target = congruence_lattice(q.algebra, kind).generators
    bijective = sorted(image) == sorted(target) and len(set(image)) == len(image)
    order = all(
        ((u & ~w) == 0) == ((q.projection(u) & ~q.projection(w)) == 0) for u in upper for w in upper
    )
    checks = [CheckReport(ok=bijective, name="bijection"), CheckReport(ok=order, name="order_isomorphism")]
    return SuiteReport.of("third_isomorphism", checks, size=len(upper))


def isomorphism_theorems(
    S: SubordinationAlgebra, theta: SubCongruence, A: ElementSet, f: BooleanMorphism, T: SubordinationAlgebra
) -> SuiteReport:
    """Run the three statements on one batch of inputs."""
    reports = [
        first_isomorphism(f, S, T, theta.kind),
        second_isomorphism(S, A, theta),
        third_isomorphism(S, theta),
    ]
    checks = [CheckReport(ok=r.ok, name=r.name, error=r.error) for r in reports]
    return SuiteReport.of("isomorphism_theorems", checks)
