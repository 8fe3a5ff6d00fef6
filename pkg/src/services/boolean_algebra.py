"""Finite Boolean algebras presented as powersets of atoms.

An element is an ``int`` whose bit ``i`` is set when atom ``i`` lies below it,
so the numeric order of elements is the canonical enumeration order.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Callable, FrozenSet, Iterable, Iterator, List, Literal, Sequence, Tuple

from ..config.models import DEFAULT_MAX_ATOMS, HARD_MAX_ATOMS
from .errors import ForeignElementError, MalformedInputError, SizingError
from .reports import CheckReport

logger = logging.getLogger(__name__)

Element = int
SetTag = Literal["filter", "ideal", "subset"]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield positions of set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> List[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    subs.reverse()
    return subs


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    atom_count: int

    def __post_init__(self):
        if not 0 <= self.atom_count <= HARD_MAX_ATOMS:
            raise SizingError(f"atom count {self.atom_count} outside 0..{HARD_MAX_ATOMS}")

    @property
    def size(self) -> int:
        return 1 << self.atom_count

    @property
    def top(self) -> Element:
        return self.size - 1

    @property
    def bottom(self) -> Element:
        return 0

    def elements(self) -> range:
        return range(self.size)

    def atoms(self) -> List[Element]:
        return [1 << i for i in range(self.atom_count)]

    def __contains__(self, a) -> bool:
        return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.size

    def require(self, *elements: Element) -> None:
        for a in elements:
            if a not in self:
                raise ForeignElementError(f"{a!r} is not an element of the {self.atom_count}-atom algebra")

    def meet(self, a: Element, b: Element) -> Element:
        return a & b

    def join(self, a: Element, b: Element) -> Element:
        return a | b

    def complement(self, a: Element) -> Element:
        return self.top ^ a

    def leq(self, a: Element, b: Element) -> bool:
        return a & ~b == 0

    def meet_all(self, elements: Iterable[Element]) -> Element:
        result = self.top
        for a in elements:
            result &= a
        return result

    def join_all(self, elements: Iterable[Element]) -> Element:
        result = 0
        for a in elements:
            result |= a
        return result

    def supersets(self, a: Element) -> List[Element]:
        return [a | s for s in submasks(self.top ^ a)]

    def subsets(self, a: Element) -> List[Element]:
        return submasks(a)

    @cached_property
    def up_masks(self) -> Tuple[int, ...]:
        """Bit ``b`` of ``up_masks[a]`` is set iff a ≤ b."""
        masks = []
        for a in self.elements():
            mask = 0
            for b in self.supersets(a):
                mask |= 1 << b
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def down_masks(self) -> Tuple[int, ...]:
        masks = []
        for a in self.elements():
            mask = 0
            for b in submasks(a):
                mask |= 1 << b
            masks.append(mask)
        return tuple(masks)

    def to_indices(self, a: Element) -> List[int]:
        self.require(a)
        return list(iter_bits(a))

    def from_indices(self, indices: Iterable[int]) -> Element:
        a = 0
        for i in indices:
            if not 0 <= i < self.atom_count:
                raise ForeignElementError(f"atom index {i} outside 0..{self.atom_count - 1}")
            a |= 1 << i
        return a

    def render(self, a: Element) -> str:
        return "{" + ",".join(str(i) for i in iter_bits(a)) + "}"


def powerset_algebra(n: int, max_atoms: int = DEFAULT_MAX_ATOMS) -> FiniteBooleanAlgebra:
    if not 1 <= n <= max_atoms:
        raise SizingError(f"powerset algebra needs 1 <= n <= {max_atoms}, got {n}")
    return FiniteBooleanAlgebra(n)


@dataclass(frozen=True)
class ElementSet:
    algebra: FiniteBooleanAlgebra
    members: Tuple[Element, ...]
    tag: SetTag = "subset"

    @classmethod
    def of(cls, algebra: FiniteBooleanAlgebra, members: Iterable[Element], tag: SetTag = "subset") -> "ElementSet":
        items = sorted(set(members))
        algebra.require(*items)
        return cls(algebra, tuple(items), tag)

    @cached_property
    def member_set(self) -> FrozenSet[Element]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> int:
        mask = 0
        for a in self.members:
            mask |= 1 << a
        return mask

    def __contains__(self, a) -> bool:
        return a in self.member_set

    def __iter__(self) -> Iterator[Element]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def elements_of_mask(mask: int) -> List[Element]:
    return list(iter_bits(mask))


def principal_filter(A: FiniteBooleanAlgebra, a: Element) -> ElementSet:
    A.require(a)
    return ElementSet(A, tuple(elements_of_mask(A.up_masks[a])), "filter")


def principal_ideal(A: FiniteBooleanAlgebra, a: Element) -> ElementSet:
    A.require(a)
    return ElementSet(A, tuple(elements_of_mask(A.down_masks[a])), "ideal")


def _require_members(A: FiniteBooleanAlgebra, S: ElementSet) -> None:
    if S.algebra != A:
        raise ForeignElementError("element set belongs to a different algebra")
    A.require(*S.members)


def filter_ideal_check(A: FiniteBooleanAlgebra, S: ElementSet, tag: SetTag) -> bool:
    _require_members(A, S)
    if tag == "subset":
        return True
    if not S.members:
        return False
    closure = A.up_masks if tag == "filter" else A.down_masks
    for a in S.members:
        if closure[a] & ~S.mask:
            return False
    combine = A.meet if tag == "filter" else A.join
    for a in S.members:
        for b in S.members:
            if combine(a, b) not in S:
                return False
    return True


def principal_generator(S: ElementSet) -> Tuple[Element, bool]:
    """Return the generator of a filter (meet) or ideal (join) and whether S is principal."""
    A = S.algebra
    if S.tag == "filter":
        generator = A.meet_all(S.members)
        return generator, S.mask == A.up_masks[generator]
    if S.tag == "ideal":
        generator = A.join_all(S.members)
        return generator, S.mask == A.down_masks[generator]
    raise MalformedInputError("principal generator needs a filter or ideal tag")


def is_ultrafilter(A: FiniteBooleanAlgebra, S: ElementSet) -> bool:
    if not filter_ideal_check(A, S, "filter") or 0 in S:
        return False
    return all((a in S) != (A.complement(a) in S) for a in A.elements())


def ultrafilters(A: FiniteBooleanAlgebra) -> List[ElementSet]:
    """The principal filters at atoms, which exhaust the ultrafilters of a finite algebra."""
    return [principal_filter(A, atom) for atom in A.atoms()]


def generated_blocks(A: FiniteBooleanAlgebra, generators: Iterable[Element]) -> List[Element]:
    """Atoms of the Boolean subalgebra generated by ``generators``, as disjoint atom-sets."""
    blocks = [A.top] if A.atom_count else []
    for g in generators:
        A.require(g)
        refined = []
        for block in blocks:
            for part in (block & g, block & ~g):
                if part:
                    refined.append(part)
        blocks = refined
    return sorted(blocks)


def unions_of_blocks(blocks: Sequence[Element]) -> List[Element]:
    members = []
    for choice in range(1 << len(blocks)):
        members.append(sum(blocks[i] for i in iter_bits(choice)))
    return sorted(members)


def generated_boolean_subalgebra(A: FiniteBooleanAlgebra, G: Iterable[Element]) -> ElementSet:
    blocks = generated_blocks(A, G)
    return ElementSet(A, tuple(unions_of_blocks(blocks)), "subset")


def is_boolean_subalgebra(A: FiniteBooleanAlgebra, S: ElementSet) -> bool:
    _require_members(A, S)
    if 0 not in S or A.top not in S:
        return False
    for a in S.members:
        if A.complement(a) not in S:
            return False
        for b in S.members:
            if a & b not in S:
                return False
    return True


def subalgebra_atoms(A: FiniteBooleanAlgebra, S: ElementSet) -> List[Element]:
    """Minimal nonzero members of a Boolean subalgebra."""
    nonzero = [a for a in S.members if a]
    return [a for a in nonzero if not any(b != a and A.leq(b, a) for b in nonzero)]


@dataclass(frozen=True)
class BooleanMorphism:
    source: FiniteBooleanAlgebra
    target: FiniteBooleanAlgebra
    table: Tuple[Element, ...]

    def __call__(self, a: Element) -> Element:
        return self.table[a]

    @classmethod
    def from_function(
        cls, source: FiniteBooleanAlgebra, target: FiniteBooleanAlgebra, fn: Callable[[Element], Element]
    ) -> "BooleanMorphism":
        return cls(source, target, tuple(fn(a) for a in source.elements()))

    @classmethod
    def from_atom_images(
        cls, source: FiniteBooleanAlgebra, target: FiniteBooleanAlgebra, images: Sequence[Element]
    ) -> "BooleanMorphism":
        if len(images) != source.atom_count:
            raise MalformedInputError("one image per source atom is required")
        table = []
        for a in source.elements():
            value = 0
            for i in iter_bits(a):
                value |= images[i]
            table.append(value)
        return cls(source, target, tuple(table))

    @classmethod
    def from_point_map(
        cls, source: FiniteBooleanAlgebra, target: FiniteBooleanAlgebra, point_map: Sequence[int]
    ) -> "BooleanMorphism":
        """Preimage map of ``point_map``: target atoms → source atoms."""
        if len(point_map) != target.atom_count:
            raise MalformedInputError("one source atom per target atom is required")
        images = [0] * source.atom_count
        for j, i in enumerate(point_map):
            if not 0 <= i < source.atom_count:
                raise ForeignElementError(f"point {i} is not an atom of the source")
            images[i] |= 1 << j
        return cls.from_atom_images(source, target, images)

    @classmethod
    def identity(cls, A: FiniteBooleanAlgebra) -> "BooleanMorphism":
        return cls(A, A, tuple(A.elements()))

    def compose(self, first: "BooleanMorphism") -> "BooleanMorphism":
        """``self ∘ first``."""
        return BooleanMorphism(first.source, self.target, tuple(self.table[first.table[a]] for a in first.source.elements()))

    def point_map(self) -> Tuple[int, ...]:
        """For every target atom j, the source atom i with j ∈ f({i})."""
        owners = [-1] * self.target.atom_count
        for i in range(self.source.atom_count):
            for j in iter_bits(self.table[1 << i]):
                owners[j] = i
        return tuple(owners)

    def image(self) -> ElementSet:
        return ElementSet.of(self.target, self.table)

    def kernel_partition(self) -> Tuple[Tuple[Element, ...], ...]:
        classes = {}
        for a in self.source.elements():
            classes.setdefault(self.table[a], []).append(a)
        return tuple(sorted(tuple(block) for block in classes.values()))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.target.size


def check_boolean_morphism(f: BooleanMorphism) -> CheckReport:
    A, B = f.source, f.target
    if len(f.table) != A.size:
        raise MalformedInputError(f"partial mapping: {len(f.table)} images for {A.size} elements")
    B.require(*f.table)
    if f(0) != 0:
        return CheckReport(ok=False, name="zero", witness=(0,), rendered=f"f(0) = {B.render(f(0))}")
    if f(A.top) != B.top:
        return CheckReport(ok=False, name="one", witness=(A.top,), rendered=f"f(1) = {B.render(f(A.top))}")
    for a in A.elements():
        for b in A.elements():
            if f(a & b) != f(a) & f(b):
                return CheckReport(
                    ok=False, name="meet", witness=(a, b), rendered=f"f({A.render(a)} ∧ {A.render(b)}) differs"
                )
    for a in A.elements():
        if f(A.complement(a)) != B.complement(f(a)):
            return CheckReport(ok=False, name="complement", witness=(a,), rendered=f"f(¬{A.render(a)}) differs")
    return CheckReport(ok=True, name="boolean")


def boolean_morphisms(A: FiniteBooleanAlgebra, B: FiniteBooleanAlgebra) -> Iterator[BooleanMorphism]:
    """All homomorphisms A → B, one per point map atoms(B) → atoms(A)."""
    for point_map in cartesian(range(A.atom_count), repeat=B.atom_count):
        yield BooleanMorphism.from_point_map(A, B, point_map)


def set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    """All partitions of ``items`` into nonempty blocks (restricted growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
