"""Modalization of finite subordination algebras and the canonical product map."""
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from ..config.models import DEFAULT_MAX_ATOMS, DEFAULT_MAX_CLOSURE
from .boolean_algebra import BooleanMorphism, Element, ElementSet
from .constructions import product
from .duality import KripkeFrame, canonical_extension, delta_morphism, ult
from .errors import BudgetExceededError, MorphismKindError
from .kinds import Colour, MorphismKind
from .reports import CheckReport, SuiteReport
from .subordination import SubordinationAlgebra, is_morphism

logger = logging.getLogger(__name__)


@dataclass
class Modalization:
    """Subalgebra of Sδ generated by r(B) and the frame operators of the colour."""

    colour: Colour
    extension: SubordinationAlgebra
    frame: KripkeFrame
    embedding: BooleanMorphism
    members: ElementSet
    terms: Dict[Element, str] = field(default_factory=dict)

    @property
    def white(self) -> Optional[Tuple[Element, ...]]:
        if self.colour == Colour.BLACK:
            return None
        return tuple(self.frame.pre(E) for E in self.extension.algebra.elements())

    @property
    def black(self) -> Optional[Tuple[Element, ...]]:
        if self.colour == Colour.WHITE:
            return None
        return tuple(self.frame.post(E) for E in self.extension.algebra.elements())

    def is_whole_extension(self) -> bool:
        return len(self.members) == self.extension.algebra.size


def modalize(S: SubordinationAlgebra, colour: Colour = Colour.WHITE, max_closure: int = DEFAULT_MAX_CLOSURE) -> Modalization:
    colour = Colour(colour)
    ext = canonical_extension(S)
    frame = ult(S)
    A = ext.algebra.algebra
    r = ext.embedding

    terms: Dict[Element, str] = {}
    queue = deque()

    def admit(value: Element, term: str) -> None:
        if value in terms:
            return
        if len(terms) >= max_closure:
            raise BudgetExceededError(f"modal closure exceeds {max_closure} elements")
        terms[value] = term
        queue.append(value)

    for b in S.algebra.elements():
        admit(r(b), f"r({S.algebra.render(b)})")
    while queue:
        value = queue.popleft()
        term = terms[value]
        admit(A.complement(value), f"¬{term}")
        if colour != Colour.BLACK:
            admit(frame.pre(value), f"◇{term}")
        if colour != Colour.WHITE:
            admit(frame.post(value), f"◆{term}")
        for other in list(terms):
            admit(value & other, f"({term} ∧ {terms[other]})")
    logger.debug("%s modalization of a %d-atom algebra has %d elements", colour.value, S.atom_count, len(terms))
    return Modalization(colour, ext.algebra, frame, r, ElementSet.of(A, terms), terms)


def check_modalization_functor(
    f: BooleanMorphism, S: SubordinationAlgebra, C: SubordinationAlgebra, colour: Colour = Colour.WHITE
) -> CheckReport:
    """f^δ maps S^m into C^m for a morphism of the matching colour."""
    colour = Colour(colour)
    kind = {Colour.WHITE: MorphismKind.WHITE, Colour.BLACK: MorphismKind.BLACK, Colour.BI: MorphismKind.STRONG}[colour]
    if not is_morphism(f, S, C, kind):
        raise MorphismKindError(f"modalization is functorial along {kind.value} morphisms")
    lifted = delta_morphism(f, S, C)
    source = modalize(S, colour)
    target = modalize(C, colour)
    escaped = [E for E in source.members if lifted(E) not in target.members]
    return CheckReport(ok=not escaped, name="functor", witness=tuple(escaped[:1]) or None)


@dataclass
class ProductMap:
    morphism: BooleanMorphism
    good: bool
    s_good: bool
    report: SuiteReport


def canonical_product_map(family: Sequence[SubordinationAlgebra], max_atoms: int = DEFAULT_MAX_ATOMS) -> ProductMap:
    """f: (ΠAⱼ)δ → ΠAⱼδ, the pairing of the lifted projections."""
    base = product(family, max_atoms)
    extensions = [canonical_extension(S).algebra for S in family]
    lifted_target = product(extensions, max_atoms)
    lifted = [delta_morphism(p, base.algebra, S) for p, S in zip(base.projections, family)]
    f = lifted_target.pairing(lifted)

    white = modalize(base.algebra, Colour.WHITE)
    bi = modalize(base.algebra, Colour.BI)
    good = len({f(E) for E in white.members}) == len(white.members)
    s_good = len({f(E) for E in bi.members}) == len(bi.members)
    checks = [
        CheckReport(ok=f.is_injective() and f.is_surjective(), name="bijective"),
        CheckReport(ok=is_morphism(f, canonical_extension(base.algebra).algebra, lifted_target.algebra, MorphismKind.STRONG), name="strong"),
        CheckReport(ok=good, name="good"),
        CheckReport(ok=s_good, name="s_good"),
    ]
    return ProductMap(f, good, s_good, SuiteReport.of("canonical_product_map", checks, factors=len(family)))
