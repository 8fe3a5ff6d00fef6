"""Subalgebras, relativization and finite products of subordination algebras."""
import logging
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import List, Sequence, Tuple

from ..config.models import DEFAULT_MAX_ATOMS
from .boolean_algebra import (
    BooleanMorphism,
    Element,
    ElementSet,
    FiniteBooleanAlgebra,
    boolean_morphisms,
    is_boolean_subalgebra,
    set_partitions,
    subalgebra_atoms,
    unions_of_blocks,
)
from .errors import MalformedInputError, NotASubalgebraError, SizingError
from .kinds import CongruenceKind, MorphismKind
from .reports import CheckReport, SuiteReport
from .subordination import SubordinationAlgebra, check_morphism, is_morphism

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Relativized:
    algebra: SubordinationAlgebra
    inclusion: BooleanMorphism
    atoms: Tuple[Element, ...]

    def to_small(self, a: Element) -> Element:
        """Encode an element of the big algebra lying in the subalgebra."""
        small = 0
        for i, atom in enumerate(self.atoms):
            if atom & a:
                small |= 1 << i
        if self.inclusion(small) != a:
            raise NotASubalgebraError(f"{self.inclusion.target.render(a)} is not in the subalgebra")
        return small


def relativize(S: SubordinationAlgebra, A: ElementSet) -> Relativized:
    """Present a Boolean subalgebra of S as a powerset algebra on its own atoms."""
    if not is_boolean_subalgebra(S.algebra, A):
        raise NotASubalgebraError("members are not closed under the Boolean operations")
    atoms = tuple(sorted(subalgebra_atoms(S.algebra, A)))
    small = FiniteBooleanAlgebra(len(atoms))
    inclusion = BooleanMorphism.from_atom_images(small, S.algebra, atoms)
    pairs = [
        (x, y)
        for x in small.elements()
        for y in small.elements()
        if S.precedes(inclusion(x), inclusion(y))
    ]
    return Relativized(SubordinationAlgebra.from_pairs(small, pairs), inclusion, atoms)


def is_subalgebra(S: SubordinationAlgebra, A: ElementSet, kind: CongruenceKind = CongruenceKind.WHITE) -> SuiteReport:
    kind = CongruenceKind(kind)
    if not is_boolean_subalgebra(S.algebra, A):
        raise NotASubalgebraError("candidate is not a Boolean subalgebra")
    checks = []
    if kind.white:
        checks.append(_white_condition(S, A))
    if kind.black:
        checks.append(_black_condition(S, A))
    rel = relativize(S, A)
    inclusion_ok = is_morphism(rel.inclusion, rel.algebra, S, kind.as_morphism_kind())
    agree = inclusion_ok == all(c.ok for c in checks)
    if not agree:
        logger.error("subalgebra condition and inclusion-morphism check disagree")
    return SuiteReport.of("subalgebra", checks, kind=kind.value, inclusion_is_morphism=inclusion_ok, agree=agree)


def _white_condition(S: SubordinationAlgebra, A: ElementSet) -> CheckReport:
    for a in A.members:
        for b in S.above(a):
            if not any(S.precedes(a, c) and S.algebra.leq(c, b) for c in A.members):
                return CheckReport(
                    ok=False, name="white", witness=(a, b), rendered=f"white: no c in A with a ≺ c ≤ b at {S.render_tuple((a, b))}"
                )
    return CheckReport(ok=True, name="white")


def _black_condition(S: SubordinationAlgebra, A: ElementSet) -> CheckReport:
    for a in A.members:
        for b in S.below(a):
            if not any(S.algebra.leq(b, c) and S.precedes(c, a) for c in A.members):
                return CheckReport(
                    ok=False, name="black", witness=(a, b), rendered=f"black: no c in A with b ≤ c ≺ a at {S.render_tuple((a, b))}"
                )
    return CheckReport(ok=True, name="black")


def boolean_subalgebras(A: FiniteBooleanAlgebra) -> List[ElementSet]:
    """One Boolean subalgebra per partition of the atoms."""
    result = []
    for partition in set_partitions(range(A.atom_count)):
        blocks = [sum(1 << i for i in block) for block in partition]
        result.append(ElementSet(A, tuple(unions_of_blocks(sorted(blocks))), "subset"))
    return sorted(result, key=lambda s: (len(s), s.members))


def subalgebra_lattice(S: SubordinationAlgebra, kind: CongruenceKind = CongruenceKind.WHITE) -> List[ElementSet]:
    return [A for A in boolean_subalgebras(S.algebra) if is_subalgebra(S, A, kind).ok]


def directed_union(chain: Sequence[ElementSet]) -> ElementSet:
    if not chain:
        raise MalformedInputError("a directed family is nonempty")
    algebra = chain[0].algebra
    members = set()
    for A in chain:
        members.update(A.members)
    return ElementSet.of(algebra, members)


def is_isomorphism(f: BooleanMorphism, S: SubordinationAlgebra, T: SubordinationAlgebra) -> bool:
    """Bijective homomorphism carrying ≺ exactly onto ≺."""
    if f.source != S.algebra or f.target != T.algebra or not f.is_injective() or not f.is_surjective():
        return False
    return frozenset((f(a), f(b)) for a, b in S.rel) == T.rel


@dataclass
class ProductResult:
    algebra: SubordinationAlgebra
    projections: List[BooleanMorphism]
    offsets: List[int]
    report: SuiteReport = field(default_factory=lambda: SuiteReport(ok=True))

    def pairing(self, maps: Sequence[BooleanMorphism]) -> BooleanMorphism:
        if len(maps) != len(self.projections):
            raise MalformedInputError("one map per factor is required")
        source = maps[0].source
        table = []
        for a in source.elements():
            value = 0
            for f, offset in zip(maps, self.offsets):
                value |= f(a) << offset
            table.append(value)
        return BooleanMorphism(source, self.algebra.algebra, tuple(table))


def product(family: Sequence[SubordinationAlgebra], max_atoms: int = DEFAULT_MAX_ATOMS) -> ProductResult:
    if not family:
        raise MalformedInputError("product of an empty family")
    total = sum(S.atom_count for S in family)
    if total > max_atoms:
        raise SizingError(f"product needs {total} atoms, cap is {max_atoms}")
    algebra = FiniteBooleanAlgebra(total)
    offsets = []
    position = 0
    for S in family:
        offsets.append(position)
        position += S.atom_count

    pairs = set()
    for combo in cartesian(*(sorted(S.rel) for S in family)):
        a = b = 0
        for (x, y), offset in zip(combo, offsets):
            a |= x << offset
            b |= y << offset
        pairs.add((a, b))
    P = SubordinationAlgebra(algebra, frozenset(pairs))

    projections = []
    for S, offset in zip(family, offsets):
        mask = S.algebra.top
        projections.append(
            BooleanMorphism.from_function(algebra, S.algebra, lambda x, o=offset, m=mask: (x >> o) & m)
        )
    checks = []
    for j, (p, S) in enumerate(zip(projections, family)):
        verdict = check_morphism(p, P, S, MorphismKind.STRONG)
        checks.append(CheckReport(ok=verdict.ok, name=f"projection_{j}", details={"kind": "strong"}))
    logger.debug("product of %d factors has %d atoms", len(family), total)
    return ProductResult(P, projections, offsets, SuiteReport.of("product", checks))


def diagonal(S: SubordinationAlgebra, copies: int = 2, max_atoms: int = DEFAULT_MAX_ATOMS) -> Tuple[ProductResult, BooleanMorphism]:
    result = product([S] * copies, max_atoms)
    identity = BooleanMorphism.identity(S.algebra)
    return result, result.pairing([identity] * copies)


def morphisms_of_kind(S: SubordinationAlgebra, T: SubordinationAlgebra, kind: MorphismKind) -> List[BooleanMorphism]:
    return [f for f in boolean_morphisms(S.algebra, T.algebra) if is_morphism(f, S, T, kind)]


def check_categorical_product(
    family: Sequence[SubordinationAlgebra],
    cone: SubordinationAlgebra,
    kind: MorphismKind = MorphismKind.WHITE,
    max_atoms: int = DEFAULT_MAX_ATOMS,
) -> CheckReport:
    """Every tuple of kind-morphisms cone → Aⱼ pairs into a kind-morphism cone → ΠAⱼ."""
    result = product(family, max_atoms)
    legs = [morphisms_of_kind(cone, S, kind) for S in family]
    tried = 0
    for maps in cartesian(*legs):
        tried += 1
        paired = result.pairing(maps)
        if not is_morphism(paired, cone, result.algebra, kind):
            return CheckReport(ok=False, name="categorical_product", witness=tuple(m.table for m in maps))
    return CheckReport(ok=True, name="categorical_product", details={"tuples": tried})
