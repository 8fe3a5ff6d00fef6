"""Exact computation on ω⁺, the one-point compactification of the naturals.

Every set handled here is eventually periodic on the naturals plus one bit for
the limit point ω. Clopen sets are the finite sets without ω and the cofinite
sets with ω; the wider class is closed under the Boolean operations and under
the images of every ``RelationSpec``, which lets open and closed non-clopen
sets (``{evens}``) take part in the smoothness and closure computations.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product as cartesian
from math import gcd
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from ..config.models import (
    DEFAULT_EXCEPTION_BOUND,
    DEFAULT_MAX_VALUATIONS,
    EquivSpecDocument,
    OmegaSetDocument,
    RelationSpecDocument,
)
from .errors import BudgetExceededError, MalformedInputError, UnrepresentableError
from .kinds import CongruenceKind
from .reports import CheckReport, SuiteReport

logger = logging.getLogger(__name__)


class OmegaPoint(Enum):
    OMEGA = "ω"

    def __str__(self) -> str:
        return "ω"

    def __repr__(self) -> str:
        return "ω"


OMEGA = OmegaPoint.OMEGA
Point = Union[int, OmegaPoint]


def point_key(p: Point) -> Tuple[int, int]:
    """Naturals in their order, then ω."""
    return (1, 0) if p is OMEGA else (0, p)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class OmegaPlusSet:
    """Naturals below ``offset`` listed in ``prefix``; from ``offset`` on, n belongs iff n mod period ∈ residues."""

    prefix: FrozenSet[int] = frozenset()
    offset: int = 0
    period: int = 1
    residues: FrozenSet[int] = frozenset()
    omega: bool = False

    def __post_init__(self):
        if self.period < 1 or self.offset < 0:
            raise MalformedInputError("period must be positive and offset nonnegative")
        if any(not 0 <= n < self.offset for n in self.prefix):
            raise MalformedInputError("prefix members must lie below the offset")
        if any(not 0 <= r < self.period for r in self.residues):
            raise MalformedInputError("residues must lie in 0..period-1")

    # construction

    @classmethod
    def canonical(cls, prefix, offset, period, residues, omega) -> "OmegaPlusSet":
        prefix = {n for n in prefix if n < offset}
        residues = set(residues)
        for p in _divisors(period):
            pattern = {r % p for r in residues}
            if all((r in residues) == ((r % p) in pattern) for r in range(period)):
                residues, period = pattern, p
                break
        while offset > 0 and ((offset - 1) in prefix) == (((offset - 1) % period) in residues):
            offset -= 1
            prefix.discard(offset)
        return cls(frozenset(prefix), offset, period, frozenset(residues), bool(omega))

    @classmethod
    def finite(cls, members: Iterable[int], omega: bool = False) -> "OmegaPlusSet":
        members = set(members)
        if any(n < 0 for n in members):
            raise MalformedInputError("naturals only")
        return cls.canonical(members, max(members, default=-1) + 1, 1, (), omega)

    @classmethod
    def cofinite(cls, exceptions: Iterable[int] = (), omega: bool = True) -> "OmegaPlusSet":
        exceptions = set(exceptions)
        if any(n < 0 for n in exceptions):
            raise MalformedInputError("naturals only")
        offset = max(exceptions, default=-1) + 1
        return cls.canonical(set(range(offset)) - exceptions, offset, 1, {0}, omega)

    @classmethod
    def periodic(cls, prefix: Iterable[int], offset: int, period: int, residues: Iterable[int], omega: bool = False) -> "OmegaPlusSet":
        return cls.canonical(set(prefix), offset, period, {r % period for r in residues}, omega)

    @classmethod
    def from_predicate(cls, offset: int, period: int, member: Callable[[int], bool], omega: bool) -> "OmegaPlusSet":
        """Sample ``member`` below offset and over one period from it."""
        prefix = {n for n in range(offset) if member(n)}
        residues = {n % period for n in range(offset, offset + period) if member(n)}
        return cls.canonical(prefix, offset, period, residues, omega)

    @classmethod
    def empty(cls) -> "OmegaPlusSet":
        return cls()

    @classmethod
    def everything(cls) -> "OmegaPlusSet":
        return cls(frozenset(), 0, 1, frozenset({0}), True)

    @classmethod
    def evens(cls, omega: bool = False) -> "OmegaPlusSet":
        return cls.periodic((), 0, 2, {0}, omega)

    # membership

    def contains_natural(self, n: int) -> bool:
        if n < self.offset:
            return n in self.prefix
        return (n % self.period) in self.residues

    def __contains__(self, p) -> bool:
        if p is OMEGA:
            return self.omega
        return isinstance(p, int) and p >= 0 and self.contains_natural(p)

    def naturals_below(self, bound: int) -> List[int]:
        return [n for n in range(bound) if self.contains_natural(n)]

    def least(self) -> Optional[Point]:
        if self.prefix:
            return min(self.prefix)
        for n in range(self.offset, self.offset + self.period):
            if self.contains_natural(n):
                return n
        return OMEGA if self.omega else None

    @property
    def horizon(self) -> int:
        """First natural from which the trace is periodic."""
        return self.offset

    # shape predicates

    @property
    def is_finite_trace(self) -> bool:
        return not self.residues

    @property
    def is_cofinite_trace(self) -> bool:
        return len(self.residues) == self.period

    def is_empty(self) -> bool:
        return not self.omega and not self.prefix and not self.residues

    def is_everything(self) -> bool:
        return self == OmegaPlusSet.everything()

    def is_open(self) -> bool:
        return not self.omega or self.is_cofinite_trace

    def is_closed(self) -> bool:
        return self.omega or self.is_finite_trace

    def is_clopen(self) -> bool:
        return self.is_open() and self.is_closed()

    def closure(self) -> "OmegaPlusSet":
        if self.is_finite_trace:
            return self
        return self._with_omega(True)

    def interior(self) -> "OmegaPlusSet":
        if self.is_cofinite_trace:
            return self
        return self._with_omega(False)

    def _with_omega(self, omega: bool) -> "OmegaPlusSet":
        return OmegaPlusSet(self.prefix, self.offset, self.period, self.residues, omega)

    # Boolean operations

    def _combine(self, other: "OmegaPlusSet", rule: Callable[[bool, bool], bool]) -> "OmegaPlusSet":
        offset = max(self.offset, other.offset)
        period = _lcm(self.period, other.period)
        return OmegaPlusSet.from_predicate(
            offset,
            period,
            lambda n: rule(self.contains_natural(n), other.contains_natural(n)),
            rule(self.omega, other.omega),
        )

    def meet(self, other: "OmegaPlusSet") -> "OmegaPlusSet":
        return self._combine(other, lambda a, b: a and b)

    def join(self, other: "OmegaPlusSet") -> "OmegaPlusSet":
        return self._combine(other, lambda a, b: a or b)

    def difference(self, other: "OmegaPlusSet") -> "OmegaPlusSet":
        return self._combine(other, lambda a, b: a and not b)

    def complement(self) -> "OmegaPlusSet":
        return OmegaPlusSet.canonical(
            set(range(self.offset)) - self.prefix,
            self.offset,
            self.period,
            set(range(self.period)) - self.residues,
            not self.omega,
        )

    def leq(self, other: "OmegaPlusSet") -> bool:
        return self.difference(other).is_empty()

    __and__ = meet
    __or__ = join
    __sub__ = difference
    __invert__ = complement
    __le__ = leq

    # presentation

    def render(self) -> str:
        tail = ["ω"] if self.omega else []
        if self.is_finite_trace:
            return "{" + ",".join([str(n) for n in sorted(self.prefix)] + tail) + "}"
        if self.is_cofinite_trace:
            missing = sorted(set(range(self.offset)) - self.prefix)
            base = "ω⁺" if self.omega else "ω"
            return base + ("∖{" + ",".join(map(str, missing)) + "}" if missing else "")
        head = ",".join(str(n) for n in sorted(self.prefix))
        rule = f"n≥{self.offset}, n mod {self.period} ∈ {{{','.join(map(str, sorted(self.residues)))}}}"
        parts = ["{" + head + "}"] if head else []
        parts.append("{" + rule + "}")
        if self.omega:
            parts.append("{ω}")
        return " ∪ ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def to_document(self) -> OmegaSetDocument:
        if self.is_finite_trace:
            return OmegaSetDocument(kind="finite", exceptions=sorted(self.prefix), omega=self.omega)
        if self.is_cofinite_trace:
            missing = sorted(set(range(self.offset)) - self.prefix)
            return OmegaSetDocument(kind="cofinite", exceptions=missing, omega=self.omega)
        return OmegaSetDocument(
            kind="periodic",
            exceptions=sorted(self.prefix),
            omega=self.omega,
            offset=self.offset,
            period=self.period,
            residues=sorted(self.residues),
        )

    @classmethod
    def from_document(cls, doc: OmegaSetDocument) -> "OmegaPlusSet":
        if doc.kind == "finite":
            return cls.finite(doc.exceptions, doc.omega)
        if doc.kind == "cofinite":
            return cls.cofinite(doc.exceptions, doc.omega)
        if any(n >= doc.offset for n in doc.exceptions):
            raise MalformedInputError("periodic prefix members must lie below the offset")
        return cls.periodic(doc.exceptions, doc.offset, doc.period, doc.residues, doc.omega)


@dataclass(frozen=True)
class RelationSpec:
    """x R y iff (x,y) is a base pair, or a set flag covers it."""

    base_pairs: FrozenSet[Tuple[int, int]] = frozenset()
    diagonal: bool = False
    omega_row: bool = False
    omega_col: bool = False
    omega_loop: bool = False

    def __post_init__(self):
        if any(x < 0 or y < 0 for x, y in self.base_pairs):
            raise MalformedInputError("base pairs relate naturals only")

    @property
    def support(self) -> int:
        """One past the largest natural mentioned by a base pair."""
        return max((max(x, y) for x, y in self.base_pairs), default=-1) + 1

    def related(self, x: Point, y: Point) -> bool:
        if x is not OMEGA and y is not OMEGA and (x, y) in self.base_pairs:
            return True
        if self.diagonal and x == y:
            return True
        if self.omega_row and x is OMEGA:
            return True
        if self.omega_col and y is OMEGA:
            return True
        return self.omega_loop and x is OMEGA and y is OMEGA

    def to_document(self) -> RelationSpecDocument:
        return RelationSpecDocument(
            base_pairs=sorted(self.base_pairs),
            diagonal=self.diagonal,
            omega_row=self.omega_row,
            omega_col=self.omega_col,
            omega_loop=self.omega_loop,
        )

    @classmethod
    def from_document(cls, doc: RelationSpecDocument) -> "RelationSpec":
        return cls(frozenset(map(tuple, doc.base_pairs)), doc.diagonal, doc.omega_row, doc.omega_col, doc.omega_loop)


ACCUMULATION_LOOP = RelationSpec(diagonal=True, omega_row=True)
STAR_LOOP = RelationSpec(diagonal=True, omega_row=True, omega_col=True)


def pre(R: RelationSpec, E: OmegaPlusSet) -> OmegaPlusSet:
    """◇E = R(−,E)."""
    result = OmegaPlusSet.finite({x for x, y in R.base_pairs if E.contains_natural(y)})
    if R.diagonal:
        result = result | E
    if R.omega_row and not E.is_empty():
        result = result | OmegaPlusSet.finite((), True)
    if R.omega_col and E.omega:
        result = OmegaPlusSet.everything()
    if R.omega_loop and E.omega:
        result = result | OmegaPlusSet.finite((), True)
    return result


def post(R: RelationSpec, E: OmegaPlusSet) -> OmegaPlusSet:
    """◆E = R(E,−)."""
    result = OmegaPlusSet.finite({y for x, y in R.base_pairs if E.contains_natural(x)})
    if R.diagonal:
        result = result | E
    if R.omega_row and E.omega:
        result = OmegaPlusSet.everything()
    if R.omega_col and not E.is_empty():
        result = result | OmegaPlusSet.finite((), True)
    if R.omega_loop and E.omega:
        result = result | OmegaPlusSet.finite((), True)
    return result


def successors(R: RelationSpec, x: Point) -> OmegaPlusSet:
    single = OmegaPlusSet.finite((), True) if x is OMEGA else OmegaPlusSet.finite({x})
    return post(R, single)


def rel_images(R: RelationSpec, E: OmegaPlusSet) -> Dict[str, OmegaPlusSet]:
    return {
        "dia": pre(R, E),
        "box": pre(R, E.complement()).complement(),
        "bdia": post(R, E),
        "bbox": post(R, E.complement()).complement(),
    }


def _require_clopen(*sets: OmegaPlusSet) -> None:
    for E in sets:
        if not E.is_clopen():
            raise MalformedInputError(f"{E.render()} is not clopen")


def subordination_holds(R: RelationSpec, O: OmegaPlusSet, U: OmegaPlusSet) -> bool:
    """O ≺ U iff R(−,O) ⊆ U."""
    _require_clopen(O, U)
    return pre(R, O) <= U


@dataclass
class PrincipalityVerdict:
    principal: bool
    generator: Optional[OmegaPlusSet] = None
    chain: List[OmegaPlusSet] = field(default_factory=list)


def nonprincipal_witness(R: RelationSpec, a: OmegaPlusSet, length: int = DEFAULT_EXCEPTION_BOUND) -> PrincipalityVerdict:
    """Decide whether the clopen filter ≺(a,−) has a least member.

    The clopen supersets of R(−,a) have a least member exactly when the closure
    of R(−,a) is clopen; otherwise a strictly descending chain of members is
    returned, each dropping one more natural missing from R(−,a).
    """
    _require_clopen(a)
    image = pre(R, a)
    closure = image.closure()
    if closure.is_clopen():
        return PrincipalityVerdict(True, closure)
    missing = []
    n = 0
    while len(missing) < length:
        if not image.contains_natural(n):
            missing.append(n)
        n += 1
    chain = [OmegaPlusSet.cofinite(missing[:k], True) for k in range(1, length + 1)]
    return PrincipalityVerdict(False, None, chain)


def bounded_clopen_family(k: int = DEFAULT_EXCEPTION_BOUND) -> List[OmegaPlusSet]:
    """Finite sets inside {0..k−1} and their complements in ω⁺."""
    finite = []
    for mask in range(1 << k):
        finite.append(OmegaPlusSet.finite(n for n in range(k) if (mask >> n) & 1))
    return finite + [E.complement() for E in finite]


class OmegaStructure:
    """Clopen-valued evaluation target for bimodal formulas over (ω⁺, R)."""

    def __init__(self, R: RelationSpec):
        self.R = R

    def top(self):
        return OmegaPlusSet.everything()

    def bottom(self):
        return OmegaPlusSet.empty()

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def complement(self, a):
        return ~a

    def diamond(self, a):
        return pre(self.R, a)

    def black_diamond(self, a):
        return post(self.R, a)

    def is_top(self, a) -> bool:
        return a.is_everything()


def eval_formula(R: RelationSpec, phi, valuation: Dict[str, OmegaPlusSet]) -> OmegaPlusSet:
    from .semantics import evaluate

    return evaluate(OmegaStructure(R), phi, valuation)


def symbolic_validity(
    R: RelationSpec,
    phi,
    k: int = DEFAULT_EXCEPTION_BOUND,
    max_valuations: int = DEFAULT_MAX_VALUATIONS,
) -> CheckReport:
    """Validity under every valuation drawn from ``bounded_clopen_family(k)``."""
    from .formulas import variables

    names = variables(phi)
    family = bounded_clopen_family(k)
    total = len(family) ** len(names)
    if total > max_valuations:
        raise BudgetExceededError(f"{total} valuations exceed the budget of {max_valuations}")
    structure = OmegaStructure(R)
    from .semantics import evaluate

    for values in cartesian(family, repeat=len(names)):
        valuation = dict(zip(names, values))
        value = evaluate(structure, phi, valuation)
        if not value.is_everything():
            witness = tuple((name, v.render()) for name, v in valuation.items())
            return CheckReport(
                ok=False,
                name="symbolic_validity",
                witness=witness,
                rendered=f"fails at {value.complement().least()} under {dict(witness)}",
                details={"valuations": total, "k": k},
            )
    return CheckReport(ok=True, name="symbolic_validity", details={"valuations": total, "k": k})


def _finite_part(E: OmegaPlusSet, bound: int) -> OmegaPlusSet:
    return OmegaPlusSet.finite(E.naturals_below(bound))


def _tail_neighbourhood(E: OmegaPlusSet, k: int) -> OmegaPlusSet:
    """E ∪ {n ≥ k} ∪ {ω}; for ω ∈ E these are cofinal among the clopens containing E."""
    return E | OmegaPlusSet.cofinite(range(k), True)


def join_over_finite_parts(R: RelationSpec, E: OmegaPlusSet) -> OmegaPlusSet:
    """⋃ R(−,K) over finite K ⊆ E.

    A natural n sees K only through base pairs below the support or through the
    diagonal, so its membership is settled once K reaches past n and the support.
    """
    start = max(E.horizon, R.support) + 1

    def member(n: int) -> bool:
        return pre(R, _finite_part(E, max(n, start) + 1)).contains_natural(n)

    omega = OMEGA in pre(R, _finite_part(E, start + E.period))
    return OmegaPlusSet.from_predicate(start, E.period, member, omega)


def meet_over_tails(R: RelationSpec, E: OmegaPlusSet) -> OmegaPlusSet:
    """⋂ₖ R(−, E ∪ {n ≥ k} ∪ {ω}) for ω ∈ E."""
    start = max(E.horizon, R.support) + 1

    def member(n: int) -> bool:
        return pre(R, _tail_neighbourhood(E, max(n, start) + 1)).contains_natural(n)

    omega = OMEGA in pre(R, _tail_neighbourhood(E, start + E.period))
    return OmegaPlusSet.from_predicate(start, E.period, member, omega)


@dataclass
class SmoothnessVerdict:
    sigma: OmegaPlusSet
    pi: OmegaPlusSet
    direct: OmegaPlusSet

    @property
    def ok(self) -> bool:
        return self.sigma == self.pi == self.direct


def sigma_pi_symbolic(R: RelationSpec, E: OmegaPlusSet) -> SmoothnessVerdict:
    """σ and π extensions of ◇ at E, both built from ◇ on clopen sets only.

    σ joins, over closed K ⊆ E, the meets of ◇U over clopen U ⊇ K. Without ω
    the closed parts of E are its finite parts; with ω, E is itself closed and
    its clopen neighbourhoods are the tails E ∪ {n ≥ k} ∪ {ω}.

    π meets, over open O ⊇ E, the joins of ◇V over clopen V ⊆ O. Without ω, E
    is open and its clopen parts are finite; with ω, every open O ⊇ E is a
    clopen tail and the meet runs down the same chain.

    ``direct`` is ◇E itself, the only call to ◇ on a set that need not be clopen.
    """
    if E.omega:
        sigma = join_over_finite_parts(R, E._with_omega(False)) | meet_over_tails(R, E)
        pi = meet_over_tails(R, E)
    else:
        sigma = join_over_finite_parts(R, E)
        pi = join_over_finite_parts(R, E)
    return SmoothnessVerdict(sigma, pi, pre(R, E))


# equivalences


@dataclass(frozen=True)
class EquivSpec:
    """Partition of ω⁺ into finite blocks plus the class of ω.

    Below ``offset`` the blocks are listed; from ``offset`` on the pattern repeats
    every ``period`` points: ``shape`` lists blocks of positions relative to the
    start of each window, ``omega_shape`` the positions whose points join ω.
    """

    blocks: Tuple[Tuple[int, ...], ...] = ()
    omega_extra: FrozenSet[int] = frozenset()
    offset: int = 0
    period: int = 1
    shape: Tuple[Tuple[int, ...], ...] = ()
    omega_shape: FrozenSet[int] = frozenset({0})

    def __post_init__(self):
        below = [n for block in self.blocks for n in block] + list(self.omega_extra)
        if sorted(below) != list(range(self.offset)):
            raise MalformedInputError("blocks and omega_extra must partition 0..offset-1")
        window = [r for block in self.shape for r in block] + list(self.omega_shape)
        if sorted(window) != list(range(self.period)):
            raise MalformedInputError("shape and omega_shape must partition 0..period-1")
        if any(not block for block in self.blocks + self.shape):
            raise MalformedInputError("empty block")

    @classmethod
    def build(cls, blocks=(), omega_extra=(), offset=0, period=1, shape=(), omega_shape=None) -> "EquivSpec":
        if omega_shape is None:
            covered = {r for block in shape for r in block}
            omega_shape = set(range(period)) - covered
        spec = cls(
            tuple(sorted(tuple(sorted(b)) for b in blocks)),
            frozenset(omega_extra),
            offset,
            period,
            tuple(sorted(tuple(sorted(b)) for b in shape)),
            frozenset(omega_shape),
        )
        return spec.canonical()

    def canonical(self) -> "EquivSpec":
        spec = self
        while True:
            reduced = spec._drop_period() or spec._drop_point()
            if reduced is None:
                shorter = spec._minimal_period()
                if shorter == spec:
                    return spec
                reduced = shorter
            spec = reduced

    def _drop_period(self) -> Optional["EquivSpec"]:
        start = self.offset - self.period
        if start < 0:
            return None
        window_blocks = {tuple(start + r for r in block) for block in self.shape}
        window_omega = {start + r for r in self.omega_shape}
        if not window_blocks <= set(self.blocks) or not window_omega <= self.omega_extra:
            return None
        return EquivSpec(
            tuple(b for b in self.blocks if b not in window_blocks),
            self.omega_extra - window_omega,
            start,
            self.period,
            self.shape,
            self.omega_shape,
        )

    def _drop_point(self) -> Optional["EquivSpec"]:
        """Move the offset back by one when the point before it follows the tail rule."""
        if self.offset == 0:
            return None
        n = self.offset - 1
        last = self.period - 1
        if last in self.omega_shape:
            if n not in self.omega_extra:
                return None
        elif (last,) not in self.shape or (n,) not in self.blocks:
            return None

        def rotate(r):
            return (r + 1) % self.period

        return EquivSpec(
            tuple(b for b in self.blocks if b != (n,)),
            self.omega_extra - {n},
            n,
            self.period,
            tuple(sorted(tuple(sorted(rotate(r) for r in block)) for block in self.shape)),
            frozenset(rotate(r) for r in self.omega_shape),
        )

    def _minimal_period(self) -> "EquivSpec":
        block_of = {r: block for block in self.shape for r in block}
        for p in _divisors(self.period):
            if p == self.period:
                break

            def key(r):
                if r in self.omega_shape:
                    return "ω"
                block = block_of[r]
                window = r // p
                if any(s // p != window for s in block):
                    return None
                return tuple(s - window * p for s in block)

            keys = [key(r) for r in range(self.period)]
            if None not in keys and all(keys[r] == keys[r % p] for r in range(self.period)):
                shape = sorted({keys[r] for r in range(p) if keys[r] != "ω"})
                omega_shape = {r for r in range(p) if keys[r] == "ω"}
                return EquivSpec(self.blocks, self.omega_extra, self.offset, p, tuple(shape), frozenset(omega_shape))
        return self

    # classes

    @property
    def omega_class(self) -> OmegaPlusSet:
        residues = {(self.offset + r) % self.period for r in self.omega_shape}
        return OmegaPlusSet.periodic(self.omega_extra, self.offset, self.period, residues, True)

    def class_of(self, p: Point) -> OmegaPlusSet:
        if p is OMEGA or p in self.omega_extra:
            return self.omega_class
        if p < self.offset:
            return OmegaPlusSet.finite(next(b for b in self.blocks if p in b))
        rel = (p - self.offset) % self.period
        if rel in self.omega_shape:
            return self.omega_class
        base = p - rel
        block = next(b for b in self.shape if rel in b)
        return OmegaPlusSet.finite(base + r for r in block)

    def related(self, x: Point, y: Point) -> bool:
        return y in self.class_of(x)

    def saturate(self, E: OmegaPlusSet) -> OmegaPlusSet:
        """Union of the classes meeting E."""
        meets_omega = not (self.omega_class & E).is_empty()
        start = self.offset
        while start < E.offset:
            start += self.period
        period = _lcm(self.period, E.period)

        def member(n: int) -> bool:
            cls = self.class_of(n)
            if cls.omega:
                return meets_omega
            return any(E.contains_natural(m) for m in cls.prefix)

        return OmegaPlusSet.from_predicate(start, period, member, meets_omega)

    def pairs_below(self, bound: int) -> List[Tuple[int, ...]]:
        """Classes restricted to the naturals below ``bound``, ω's class first."""
        omega_part = tuple(n for n in range(bound) if self.omega_class.contains_natural(n))
        rest = []
        seen = set(omega_part)
        for n in range(bound):
            if n in seen:
                continue
            block = tuple(m for m in sorted(self.class_of(n).prefix) if m < bound)
            seen.update(block)
            rest.append(block)
        return [omega_part] + rest

    def to_document(self) -> EquivSpecDocument:
        return EquivSpecDocument(
            blocks=[list(b) for b in self.blocks],
            omega_extra=sorted(self.omega_extra),
            offset=self.offset,
            period=self.period,
            shape=[list(b) for b in self.shape],
            omega_shape=sorted(self.omega_shape),
        )

    @classmethod
    def from_document(cls, doc: EquivSpecDocument) -> "EquivSpec":
        return cls.build(doc.blocks, doc.omega_extra, doc.offset, doc.period, doc.shape, doc.omega_shape)


DISCRETE = EquivSpec.build(period=1, shape=[(0,)])
PAIRS = EquivSpec.build(offset=0, period=2, shape=[(0, 1)])
SHIFTED_PAIRS = EquivSpec.build(blocks=[(0, 1), (2,)], offset=3, period=2, shape=[(0, 1)])


class _UnionFind:
    def __init__(self):
        self.parent: Dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[rx] = ry
        return True


def join(first: EquivSpec, second: EquivSpec) -> EquivSpec:
    """Least Boolean congruence containing both; infinite classes are absorbed by ω."""
    start = max(first.offset, second.offset)
    period = _lcm(first.period, second.period)
    bound = start + (period + 3) * period
    uf = _UnionFind()
    for spec in (first, second):
        for n in range(bound):
            cls = spec.class_of(n)
            anchor = OMEGA if cls.omega else min(cls.prefix)
            uf.union(n, anchor)

    changed = True
    while changed:
        changed = False
        for r in range(start, start + period):
            column = range(r, bound, period)
            infinite = any(uf.find(r) == uf.find(m) for m in column if m != r)
            absorbed = any(uf.find(m) == uf.find(OMEGA) for m in column)
            if infinite or absorbed:
                for m in column:
                    changed |= uf.union(m, OMEGA)

    def component(n: int) -> FrozenSet[int]:
        root = uf.find(n)
        return frozenset(m for m in range(bound) if uf.find(m) == root)

    for cut in range(start + period, start + 2 * period):
        window = range(cut, cut + period)
        clean = True
        for n in range(cut + period):
            if uf.find(n) == uf.find(OMEGA):
                continue
            members = component(n)
            inside_window = all(cut <= m < cut + period for m in members)
            below_cut = all(m < cut for m in members)
            if not (inside_window or below_cut):
                clean = False
                break
        if not clean:
            continue
        omega_root = uf.find(OMEGA)
        blocks = {component(n) for n in range(cut) if uf.find(n) != omega_root}
        shape = {frozenset(m - cut for m in component(n)) for n in window if uf.find(n) != omega_root}
        return EquivSpec.build(
            blocks=[sorted(b) for b in blocks],
            omega_extra=[n for n in range(cut) if uf.find(n) == omega_root],
            offset=cut,
            period=period,
            shape=[sorted(b) for b in shape],
            omega_shape=[n - cut for n in window if uf.find(n) == omega_root],
        )
    raise UnrepresentableError("join has finite classes straddling every window of the common period")


BOOLEAN_JOIN = join(PAIRS, SHIFTED_PAIRS)


def _check_bound(R: RelationSpec, e: EquivSpec) -> int:
    bound = e.offset
    while bound < R.support:
        bound += e.period
    return bound + e.period


def congruence_check(R: RelationSpec, e: EquivSpec, kind: CongruenceKind = CongruenceKind.WHITE) -> SuiteReport:
    """Space-congruence conditions of e under R, decided exactly.

    White: x θ y R z ⇒ ∃u x R u θ z, i.e. R([x],−) ⊆ [R(x,−)]. Black: x R y θ z ⇒
    ∃u x θ u R z, i.e. [R(x,−)] ⊆ R([x],−). Points past the support of the base
    pairs and past the offset behave like their translates by one period, so the
    naturals below the returned bound together with ω cover every case.
    """
    kind = CongruenceKind(kind)
    bound = _check_bound(R, e)
    points: List[Point] = list(range(bound)) + [OMEGA]
    separation = CheckReport(
        ok=all(e.class_of(n).is_clopen() for n in range(bound) if n not in e.omega_class),
        name="separation",
        details={"omega_class": e.omega_class.render()},
    )
    checks = [separation]
    if kind.white:
        checks.append(_white_condition(R, e, points))
    if kind.black:
        checks.append(_black_condition(R, e, points))
    return SuiteReport.of("omega_congruence", checks, bound=bound, kind=kind.value)


def _white_condition(R: RelationSpec, e: EquivSpec, points: Sequence[Point]) -> CheckReport:
    for x in points:
        cls = e.class_of(x)
        reach = post(R, cls)
        allowed = e.saturate(successors(R, x))
        z = (reach - allowed).least()
        if z is not None:
            target = OmegaPlusSet.finite((), True) if z is OMEGA else OmegaPlusSet.finite({z})
            y = (cls & pre(R, target)).least()
            return CheckReport(
                ok=False,
                name="white",
                witness=(x, y, z),
                rendered=f"{x} θ {y} R {z} but no u with {x} R u θ {z}",
            )
    return CheckReport(ok=True, name="white")


def _black_condition(R: RelationSpec, e: EquivSpec, points: Sequence[Point]) -> CheckReport:
    for x in points:
        cls = e.class_of(x)
        reach = post(R, cls)
        allowed = e.saturate(successors(R, x))
        z = (allowed - reach).least()
        if z is not None:
            y = (successors(R, x) & e.class_of(z)).least()
            return CheckReport(
                ok=False,
                name="black",
                witness=(x, y, z),
                rendered=f"{x} R {y} θ {z} but no u with {x} θ u R {z}",
            )
    return CheckReport(ok=True, name="black")


def omega_class_criterion(e: EquivSpec) -> bool:
    """The class of ω is {ω} or all of ω⁺."""
    cls = e.omega_class
    return cls == OmegaPlusSet.finite((), True) or cls.is_everything()


def condition_domain(R: RelationSpec, fresh: int) -> List[Point]:
    """Base-pair support, ω and ``fresh`` naturals beyond the support."""
    return list(range(R.support + fresh)) + [OMEGA]


def eval_frame_condition_symbolic(condition, R: RelationSpec) -> bool:
    """First-order frame condition on (ω⁺, R); naturals outside the support are indiscernible.

    One fresh natural per bound variable and per intermediate point of an Rᵏ
    atom is enough for every quantifier to see each kind of point.
    """
    from .conditions import evaluate_frame_condition, fresh_points_needed

    domain = condition_domain(R, fresh_points_needed(condition))
    return evaluate_frame_condition(condition, domain, R.related)
