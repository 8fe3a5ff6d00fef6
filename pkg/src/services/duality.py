"""Finite subordination spaces (Kripke frames) and their duality with subordination algebras.

Finite Boolean spaces are discrete, so a point set is encoded exactly like an
element of the powerset algebra on the points: an ``int`` bitmask.
"""
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from ..config.models import HARD_MAX_ATOMS
from .boolean_algebra import (
    BooleanMorphism,
    ElementSet,
    FiniteBooleanAlgebra,
    boolean_morphisms,
    iter_bits,
    set_partitions,
    submasks,
)
from .constructions import is_isomorphism, is_subalgebra
from .errors import MalformedInputError, MorphismKindError, NotACongruenceError, SizingError
from .kinds import CongruenceKind, MorphismKind
from .reports import CheckReport, SuiteReport
from .subordination import SubordinationAlgebra, check_morphism, is_morphism

logger = logging.getLogger(__name__)

PointSet = int

CANONICAL_KEY_POINTS = 5


@dataclass(frozen=True)
class KripkeFrame:
    points: Tuple[str, ...]
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        if len(self.points) > HARD_MAX_ATOMS:
            raise SizingError(f"{len(self.points)} points exceed the hard cap of {HARD_MAX_ATOMS}")
        if len(set(self.points)) != len(self.points):
            raise MalformedInputError("point labels must be unique")
        for x, y in self.edges:
            if not (0 <= x < self.size and 0 <= y < self.size):
                raise MalformedInputError(f"edge ({x}, {y}) leaves the frame")

    @classmethod
    def of_size(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "KripkeFrame":
        return cls(tuple(str(i) for i in range(n)), frozenset(edges))

    @classmethod
    def from_labels(cls, points: Sequence[str], edges: Iterable[Tuple[str, str]]) -> "KripkeFrame":
        index = {p: i for i, p in enumerate(points)}
        try:
            pairs = frozenset((index[x], index[y]) for x, y in edges)
        except KeyError as exc:
            raise MalformedInputError(f"edge mentions unknown point {exc.args[0]!r}") from exc
        return cls(tuple(points), pairs)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def everything(self) -> PointSet:
        return (1 << self.size) - 1

    @cached_property
    def successor_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.size
        for x, y in self.edges:
            masks[x] |= 1 << y
        return tuple(masks)

    @cached_property
    def predecessor_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.size
        for x, y in self.edges:
            masks[y] |= 1 << x
        return tuple(masks)

    def related(self, x: int, y: int) -> bool:
        return (x, y) in self.edges

    def pre(self, E: PointSet) -> PointSet:
        """R(−,E)."""
        return sum(1 << x for x in range(self.size) if self.successor_masks[x] & E)

    def post(self, E: PointSet) -> PointSet:
        """R(E,−)."""
        result = 0
        for x in iter_bits(E):
            result |= self.successor_masks[x]
        return result

    diamond = pre
    black_diamond = post

    def box(self, E: PointSet) -> PointSet:
        return self.everything ^ self.pre(self.everything ^ E)

    def black_box(self, E: PointSet) -> PointSet:
        return self.everything ^ self.post(self.everything ^ E)

    def render(self, E: PointSet) -> str:
        return "{" + ",".join(self.points[i] for i in iter_bits(E)) + "}"

    def label_edges(self) -> List[Tuple[str, str]]:
        return [(self.points[x], self.points[y]) for x, y in sorted(self.edges)]


@dataclass(frozen=True)
class FrameMorphism:
    source: KripkeFrame
    target: KripkeFrame
    mapping: Tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.size:
            raise MalformedInputError("one image per source point is required")
        if any(not 0 <= y < self.target.size for y in self.mapping):
            raise MalformedInputError("image outside the target frame")

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def preimage(self, E: PointSet) -> PointSet:
        return sum(1 << x for x, y in enumerate(self.mapping) if (E >> y) & 1)


def check_frame_morphism(h: FrameMorphism, kind: MorphismKind = MorphismKind.WEAK) -> SuiteReport:
    """(w) x R y ⇒ h(x) R h(y); (◇) h(x) R y ⇒ ∃z y = h(z), x R z; (◆) y R h(x) ⇒ ∃z y = h(z), z R x."""
    kind = MorphismKind(kind)
    F, G = h.source, h.target
    checks = []
    weak = next(((x, y) for x, y in sorted(F.edges) if not G.related(h(x), h(y))), None)
    checks.append(CheckReport(ok=weak is None, name="w", witness=weak))
    if kind.forth:
        witness = None
        for x in range(F.size):
            reachable = {h(z) for z in iter_bits(F.successor_masks[x])}
            missing = [y for y in iter_bits(G.successor_masks[h(x)]) if y not in reachable]
            if missing:
                witness = (x, missing[0])
                break
        checks.append(CheckReport(ok=witness is None, name="forth", witness=witness))
    if kind.back:
        witness = None
        for x in range(F.size):
            reachable = {h(z) for z in iter_bits(F.predecessor_masks[x])}
            missing = [y for y in iter_bits(G.predecessor_masks[h(x)]) if y not in reachable]
            if missing:
                witness = (x, missing[0])
                break
        checks.append(CheckReport(ok=witness is None, name="back", witness=witness))
    return SuiteReport.of("frame_morphism", checks, kind=kind.value)


def of(F: KripkeFrame) -> SubordinationAlgebra:
    """Powerset of the points with O ≺ U iff R(−,O) ⊆ U."""
    A = FiniteBooleanAlgebra(F.size)
    pre = [F.pre(O) for O in A.elements()]
    return SubordinationAlgebra.from_predicate(A, lambda O, U: A.leq(pre[O], U))


def ult(S: SubordinationAlgebra) -> KripkeFrame:
    """Ultrafilters ↑{i}, with x R y iff ≺(y,−) ⊆ x."""
    edges = set()
    for y in range(S.atom_count):
        filter_mask = S.above_masks[1 << y]
        for x in range(S.atom_count):
            if all((b >> x) & 1 for b in iter_bits(filter_mask)):
                edges.add((x, y))
    return KripkeFrame.of_size(S.atom_count, edges)


def at(S: SubordinationAlgebra) -> KripkeFrame:
    """Atom structure: α R β iff β ≺ b implies α ≤ b for every b."""
    A = S.algebra
    edges = set()
    for alpha in A.atoms():
        for beta in A.atoms():
            if all(A.leq(alpha, b) for b in S.above(beta)):
                edges.add((alpha.bit_length() - 1, beta.bit_length() - 1))
    return KripkeFrame.of_size(A.atom_count, edges)


def pset(F: KripkeFrame) -> SubordinationAlgebra:
    """Complex algebra: E ≺ G iff R(−,E) ⊆ G."""
    return of(F)


def dual_of_algebra_morphism(
    f: BooleanMorphism, source: SubordinationAlgebra, target: SubordinationAlgebra, kind=MorphismKind.WEAK
) -> FrameMorphism:
    """Ult(f): ult(target) → ult(source), y ↦ f⁻¹(y)."""
    kind = MorphismKind(kind)
    if not is_morphism(f, source, target, kind):
        raise MorphismKindError(f"input is not a {kind.value} morphism")
    h = FrameMorphism(ult(target), ult(source), f.point_map())
    verdict = check_frame_morphism(h, kind)
    if not verdict.ok:
        logger.error("dual of a %s morphism fails %s", kind.value, [c.name for c in verdict.failures()])
    return h


def dual_of_frame_morphism(h: FrameMorphism, kind=MorphismKind.WEAK) -> BooleanMorphism:
    """Of(h): of(target) → of(source), U ↦ h⁻¹(U)."""
    kind = MorphismKind(kind)
    if not check_frame_morphism(h, kind).ok:
        raise MorphismKindError(f"input is not a {kind.value} frame morphism")
    S, T = of(h.target), of(h.source)
    f = BooleanMorphism.from_point_map(S.algebra, T.algebra, h.mapping)
    if not is_morphism(f, S, T, kind):
        logger.error("dual of a %s frame morphism is not a %s morphism", kind.value, kind.value)
    return f


def dual_morphism(
    arrow: Union[BooleanMorphism, FrameMorphism],
    source: Optional[SubordinationAlgebra] = None,
    target: Optional[SubordinationAlgebra] = None,
    kind=MorphismKind.WEAK,
):
    if isinstance(arrow, FrameMorphism):
        return dual_of_frame_morphism(arrow, kind)
    if source is None or target is None:
        raise MalformedInputError("an algebra morphism needs its source and target algebras")
    return dual_of_algebra_morphism(arrow, source, target, kind)


def at_morphism(f: BooleanMorphism) -> Tuple[int, ...]:
    """At(f): At(C) → At(B), α ↦ ⋀{b | α ≤ f(b)}, as atom indices."""
    B, C = f.source, f.target
    images = []
    for alpha in C.atoms():
        least = B.meet_all(b for b in B.elements() if C.leq(alpha, f(b)))
        if least not in B.atoms():
            raise MalformedInputError("f is not a complete Boolean homomorphism")
        images.append(least.bit_length() - 1)
    return tuple(images)


def delta_morphism(f: BooleanMorphism, source: SubordinationAlgebra, target: SubordinationAlgebra) -> BooleanMorphism:
    """f^δ = Of(Ult(f)) : Sδ → Tδ."""
    return dual_of_frame_morphism(dual_of_algebra_morphism(f, source, target))


@dataclass
class CanonicalExtension:
    algebra: SubordinationAlgebra
    embedding: BooleanMorphism
    report: SuiteReport


def canonical_extension(S: SubordinationAlgebra) -> CanonicalExtension:
    """Sδ = 𝒫(Ult S) with r(b) = {x | b ∈ x}."""
    frame = ult(S)
    extension = of(frame)
    A = S.algebra
    r = BooleanMorphism.from_function(
        A, extension.algebra, lambda b: sum(1 << x for x in range(frame.size) if (S.algebra.up_masks[1 << x] >> b) & 1)
    )
    reflects = all(
        S.precedes(b, c) == extension.precedes(r(b), r(c)) for b in A.elements() for c in A.elements()
    )
    checks = [
        CheckReport(ok=r.is_injective(), name="injective"),
        CheckReport(ok=check_morphism(r, S, extension, MorphismKind.WEAK).ok, name="w"),
        CheckReport(ok=reflects, name="reflects"),
    ]
    return CanonicalExtension(extension, r, SuiteReport.of("canonical_extension", checks, bijective=r.is_surjective()))


@dataclass
class Factorization:
    morphism: BooleanMorphism
    unique: bool
    white: bool
    candidates: int


def factor_through_delta(f: BooleanMorphism, S: SubordinationAlgebra, C: SubordinationAlgebra) -> Factorization:
    """The unique weak g: Sδ → C with g ∘ r = f."""
    if not is_morphism(f, S, C, MorphismKind.WEAK):
        raise MorphismKindError("factorization needs a weak morphism")
    ext = canonical_extension(S)
    j_dual = FrameMorphism(at(C), ult(C), tuple(range(C.atom_count)))
    h = dual_of_algebra_morphism(f, S, C)
    composite = tuple(h(j_dual(x)) for x in range(C.atom_count))
    g = BooleanMorphism.from_point_map(ext.algebra.algebra, C.algebra, composite)
    if g.compose(ext.embedding).table != f.table:
        logger.error("factorization does not commute with r")
    candidates = [
        candidate
        for candidate in boolean_morphisms(ext.algebra.algebra, C.algebra)
        if candidate.compose(ext.embedding).table == f.table and is_morphism(candidate, ext.algebra, C, MorphismKind.WEAK)
    ]
    white = is_morphism(g, ext.algebra, C, MorphismKind.WHITE)
    return Factorization(g, len(candidates) == 1 and candidates[0] == g, white, len(candidates))


@dataclass
class Smoothness:
    sigma: PointSet
    pi: PointSet
    expected: PointSet

    @property
    def ok(self) -> bool:
        return self.sigma == self.pi == self.expected


def sigma_pi_extension(S: SubordinationAlgebra, E: PointSet) -> Smoothness:
    """σ and π extensions of b ↦ r(◇b), evaluated through the closed/open set families."""
    ext = canonical_extension(S)
    r = ext.embedding
    frame = ult(S)
    A = S.algebra
    X = frame.everything
    if E & ~X:
        raise MalformedInputError("point set leaves the dual frame")
    lifted = [r(S.diamond(b)) for b in A.elements()]

    def on_closed(K: PointSet) -> PointSet:
        result = X
        for b in A.elements():
            if K & ~r(b) == 0:
                result &= lifted[b]
        return result

    def on_open(O: PointSet) -> PointSet:
        result = 0
        for b in A.elements():
            if r(b) & ~O == 0:
                result |= lifted[b]
        return result

    sigma = 0
    for K in submasks(E):
        sigma |= on_closed(K)
    pi = X
    for O in frame_supersets(E, X):
        pi &= on_open(O)
    return Smoothness(sigma, pi, frame.pre(E))


def frame_supersets(E: PointSet, X: PointSet) -> List[PointSet]:
    return [E | s for s in submasks(X ^ E)]


def degree_signature(F: KripkeFrame, x: int) -> Tuple[bool, int, int]:
    return ((x, x) in F.edges, bin(F.successor_masks[x]).count("1"), bin(F.predecessor_masks[x]).count("1"))


def frame_isomorphism(F: KripkeFrame, G: KripkeFrame) -> Optional[Tuple[int, ...]]:
    """Point map x ↦ perm[x] carrying R_F onto R_G, or None.

    Candidates for x are the points of G with the same loop, out-degree and
    in-degree, and each choice is checked against the points already placed.
    """
    if F.size != G.size or len(F.edges) != len(G.edges):
        return None
    sig_f = [degree_signature(F, x) for x in range(F.size)]
    sig_g = [degree_signature(G, y) for y in range(G.size)]
    if sorted(sig_f) != sorted(sig_g):
        return None
    order = sorted(range(F.size), key=lambda x: sum(s == sig_f[x] for s in sig_f))
    perm: Dict[int, int] = {}
    used = 0

    def consistent(x: int, y: int) -> bool:
        for u, v in perm.items():
            if ((x, u) in F.edges) != ((y, v) in G.edges) or ((u, x) in F.edges) != ((v, y) in G.edges):
                return False
        return True

    def place(i: int) -> bool:
        nonlocal used
        if i == len(order):
            return True
        x = order[i]
        for y in range(G.size):
            if (used >> y) & 1 or sig_g[y] != sig_f[x] or not consistent(x, y):
                continue
            perm[x] = y
            used |= 1 << y
            if place(i + 1):
                return True
            del perm[x]
            used &= ~(1 << y)
        return False

    if not place(0):
        return None
    return tuple(perm[x] for x in range(F.size))


@lru_cache(maxsize=None)
def frame_class(F: KripkeFrame) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """The same key for isomorphic frames: the least relabelled edge list."""
    if F.size > CANONICAL_KEY_POINTS:
        raise SizingError(f"canonical keys are computed up to {CANONICAL_KEY_POINTS} points")
    best = min(tuple(sorted((perm[x], perm[y]) for x, y in F.edges)) for perm in permutations(range(F.size)))
    return F.size, best


def algebra_isomorphism(S: SubordinationAlgebra, T: SubordinationAlgebra) -> Optional[BooleanMorphism]:
    if S.atom_count != T.atom_count or len(S.rel) != len(T.rel):
        return None
    perm = frame_isomorphism(ult(T), ult(S))
    if perm is None:
        return None
    f = BooleanMorphism.from_point_map(S.algebra, T.algebra, perm)
    return f if is_isomorphism(f, S, T) else None


def disjoint_union(frames: Sequence[KripkeFrame]) -> Tuple[KripkeFrame, List[FrameMorphism]]:
    if not frames:
        raise MalformedInputError("disjoint union of an empty family")
    points, edges, offsets = [], set(), []
    for j, F in enumerate(frames):
        offsets.append(len(points))
        points.extend(f"{j}:{p}" for p in F.points)
        edges.update((x + offsets[-1], y + offsets[-1]) for x, y in F.edges)
    union = KripkeFrame(tuple(points), frozenset(edges))
    injections = [
        FrameMorphism(F, union, tuple(x + offset for x in range(F.size))) for F, offset in zip(frames, offsets)
    ]
    return union, injections


def converse(F: KripkeFrame) -> KripkeFrame:
    return KripkeFrame(F.points, frozenset((y, x) for x, y in F.edges))


def restrict_frame(F: KripkeFrame, Y: PointSet) -> Tuple[KripkeFrame, List[int]]:
    """Subframe on Y, with the original index of every kept point."""
    kept = list(iter_bits(Y))
    position = {x: i for i, x in enumerate(kept)}
    edges = frozenset((position[x], position[y]) for x, y in F.edges if x in position and y in position)
    return KripkeFrame(tuple(F.points[x] for x in kept), edges), kept


def is_increasing(F: KripkeFrame, C: PointSet) -> bool:
    return F.post(C) & ~C == 0


def _point_blocks(F: KripkeFrame, partition: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
    seen = set()
    blocks = []
    for block in partition:
        items = tuple(sorted(set(block)))
        if not items or seen & set(items) or any(not 0 <= x < F.size for x in items):
            raise MalformedInputError("not a partition of the frame's points")
        seen.update(items)
        blocks.append(items)
    if len(seen) != F.size:
        raise MalformedInputError("partition does not cover all points")
    return tuple(sorted(blocks))


def _block_masks(blocks) -> Dict[int, int]:
    owner = {}
    for block in blocks:
        mask = sum(1 << x for x in block)
        for x in block:
            owner[x] = mask
    return owner


def is_space_congruence(F: KripkeFrame, partition, kind: CongruenceKind = CongruenceKind.WHITE) -> SuiteReport:
    """White: x θ y R z ⇒ ∃u x R u θ z. Black: x R y θ z ⇒ ∃u x θ u R z."""
    kind = CongruenceKind(kind)
    blocks = _point_blocks(F, partition)
    owner = _block_masks(blocks)
    checks = []
    if kind.white:
        witness = None
        for x in range(F.size):
            for y in iter_bits(owner[x]):
                for z in iter_bits(F.successor_masks[y]):
                    if witness is None and not F.successor_masks[x] & owner[z]:
                        witness = (x, y, z)
        checks.append(CheckReport(ok=witness is None, name="white", witness=witness))
    if kind.black:
        witness = None
        for x in range(F.size):
            for y in iter_bits(F.successor_masks[x]):
                for z in iter_bits(owner[y]):
                    if witness is None and not F.predecessor_masks[z] & owner[x]:
                        witness = (x, y, z)
        checks.append(CheckReport(ok=witness is None, name="black", witness=witness))
    return SuiteReport.of("space_congruence", checks, kind=kind.value)


def quotient_frame(F: KripkeFrame, partition, kind: CongruenceKind = CongruenceKind.WHITE) -> Tuple[KripkeFrame, FrameMorphism]:
    blocks = _point_blocks(F, partition)
    if not is_space_congruence(F, blocks, kind).ok:
        raise NotACongruenceError(f"partition is not a {CongruenceKind(kind).value} space congruence")
    index = {x: i for i, block in enumerate(blocks) for x in block}
    labels = tuple("/".join(F.points[x] for x in block) for block in blocks)
    edges = frozenset((index[x], index[y]) for x, y in F.edges)
    quotient = KripkeFrame(labels, edges)
    return quotient, FrameMorphism(F, quotient, tuple(index[x] for x in range(F.size)))


def subalgebra_of_congruence(F: KripkeFrame, partition) -> ElementSet:
    """θ-saturated point sets, a Boolean subalgebra of of(F)."""
    blocks = _point_blocks(F, partition)
    masks = [sum(1 << x for x in block) for block in blocks]
    members = [sum(masks[i] for i in iter_bits(choice)) for choice in range(1 << len(masks))]
    return ElementSet.of(FiniteBooleanAlgebra(F.size), members)


def check_subalgebra_congruence_duality(F: KripkeFrame, kind: CongruenceKind = CongruenceKind.WHITE) -> CheckReport:
    """Subalgebras of of(F) of the kind are exactly the saturation algebras of space congruences of the kind."""
    kind = CongruenceKind(kind)
    S = of(F)
    congruences = []
    for partition in set_partitions(range(F.size)):
        space = is_space_congruence(F, partition, kind).ok
        algebraic = is_subalgebra(S, subalgebra_of_congruence(F, partition), kind).ok
        if space != algebraic:
            return CheckReport(ok=False, name="anti_isomorphism", witness=tuple(tuple(b) for b in partition))
        if space:
            congruences.append(_point_blocks(F, partition))
    order_reversing = all(
        _refines(p, q) == (set(subalgebra_of_congruence(F, q).members) <= set(subalgebra_of_congruence(F, p).members))
        for p in congruences
        for q in congruences
    )
    logger.debug("%d %s space congruences on %d points", len(congruences), kind.value, F.size)
    return CheckReport(ok=order_reversing, name="anti_isomorphism", details={"congruences": len(congruences)})


def _refines(finer, coarser) -> bool:
    owner = _block_masks(coarser)
    return all(all(owner[x] == owner[block[0]] for x in block) for block in finer)
