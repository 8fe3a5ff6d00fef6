"""Evaluation and validity of bimodal formulas on frames, finite algebras and ω⁺."""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Any, FrozenSet, Mapping, Optional, Protocol, Sequence, Tuple, Union

from ..config.models import DEFAULT_EXCEPTION_BOUND, DEFAULT_MAX_CLOSURE, DEFAULT_MAX_VALUATIONS
from .boolean_algebra import Element, FiniteBooleanAlgebra
from .duality import KripkeFrame, converse, ult
from .errors import BudgetExceededError, FreeVariableError, MalformedInputError, OperatorLawError
from .formulas import (
    AND,
    BBOX,
    BDIA,
    BOT,
    BOX,
    DIA,
    IMPLIES,
    NOT,
    OR,
    TOP,
    VAR,
    Formula,
    colour,
    render,
    substitute,
    variables,
)
from .kinds import Colour
from .reports import CheckReport, SuiteReport
from .subordination import SubordinationAlgebra, check_operator_laws

logger = logging.getLogger(__name__)


class ModalStructure(Protocol):
    """Anything a formula can be evaluated in."""

    def top(self) -> Any: ...

    def bottom(self) -> Any: ...

    def meet(self, a, b) -> Any: ...

    def join(self, a, b) -> Any: ...

    def complement(self, a) -> Any: ...

    def diamond(self, a) -> Any: ...

    def black_diamond(self, a) -> Any: ...

    def is_top(self, a) -> bool: ...


class FrameStructure:
    """Complex algebra of a frame: ◇E = R(−,E), ◆E = R(E,−)."""

    def __init__(self, frame: KripkeFrame):
        self.frame = frame
        self.algebra = FiniteBooleanAlgebra(frame.size)

    def elements(self) -> range:
        return self.algebra.elements()

    def top(self):
        return self.algebra.top

    def bottom(self):
        return 0

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def complement(self, a):
        return self.algebra.complement(a)

    def diamond(self, a):
        return self.frame.pre(a)

    def black_diamond(self, a):
        return self.frame.post(a)

    def is_top(self, a) -> bool:
        return a == self.algebra.top


def algebra_structure(S: SubordinationAlgebra) -> FrameStructure:
    """Evaluation target of a finite subordination algebra: its ult dual."""
    return FrameStructure(ult(S))


@dataclass(frozen=True)
class BimodalFrame:
    """Points with one relation per colour; ◇E = R◇(−,E) and ◆E = R◆(−,E)."""

    points: Tuple[str, ...]
    white: FrozenSet[Tuple[int, int]]
    black: FrozenSet[Tuple[int, int]]

    @classmethod
    def from_frame(cls, frame: KripkeFrame) -> "BimodalFrame":
        return cls(frame.points, frame.edges, converse(frame).edges)

    @cached_property
    def white_frame(self) -> KripkeFrame:
        return KripkeFrame(self.points, self.white)

    @cached_property
    def black_frame(self) -> KripkeFrame:
        return KripkeFrame(self.points, self.black)

    def is_tense(self) -> bool:
        return self.black == converse(self.white_frame).edges


class BimodalFrameStructure(FrameStructure):
    def __init__(self, frame: BimodalFrame):
        super().__init__(frame.white_frame)
        self.black_frame = frame.black_frame

    def black_diamond(self, a):
        return self.black_frame.pre(a)


@dataclass(frozen=True)
class BimodalAlgebra:
    """Finite powerset algebra with a white and a black operator table."""

    algebra: FiniteBooleanAlgebra
    white: Tuple[Element, ...]
    black: Tuple[Element, ...]

    def __post_init__(self):
        for table in (self.white, self.black):
            if len(table) != self.algebra.size:
                raise MalformedInputError("operator tables must be total")
            self.algebra.require(*table)

    @classmethod
    def of_frame(cls, frame: Union[KripkeFrame, BimodalFrame]) -> "BimodalAlgebra":
        if isinstance(frame, KripkeFrame):
            frame = BimodalFrame.from_frame(frame)
        A = FiniteBooleanAlgebra(len(frame.points))
        return cls(
            A,
            tuple(frame.white_frame.pre(E) for E in A.elements()),
            tuple(frame.black_frame.pre(E) for E in A.elements()),
        )

    @classmethod
    def canonical_of(cls, S: SubordinationAlgebra) -> "BimodalAlgebra":
        """The canonical extension of S with ◇ and ◆ of its dual frame."""
        return cls.of_frame(ult(S))


class BimodalAlgebraStructure:
    def __init__(self, B: BimodalAlgebra):
        self.B = B
        self.algebra = B.algebra

    def elements(self) -> range:
        return self.algebra.elements()

    def top(self):
        return self.algebra.top

    def bottom(self):
        return 0

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def complement(self, a):
        return self.algebra.complement(a)

    def diamond(self, a):
        return self.B.white[a]

    def black_diamond(self, a):
        return self.B.black[a]

    def is_top(self, a) -> bool:
        return a == self.algebra.top


def structure_for(target) -> Any:
    if isinstance(target, SubordinationAlgebra):
        return algebra_structure(target)
    if isinstance(target, KripkeFrame):
        return FrameStructure(target)
    if isinstance(target, BimodalFrame):
        return BimodalFrameStructure(target)
    if isinstance(target, BimodalAlgebra):
        return BimodalAlgebraStructure(target)
    from .omega import OmegaStructure, RelationSpec

    if isinstance(target, RelationSpec):
        return OmegaStructure(target)
    if hasattr(target, "diamond") and hasattr(target, "black_diamond"):
        return target
    raise MalformedInputError(f"cannot evaluate formulas in {type(target).__name__}")


def evaluate(structure: ModalStructure, phi: Formula, valuation: Mapping[str, Any]):
    op = phi.op
    if op == VAR:
        if phi.name not in valuation:
            raise FreeVariableError(f"valuation does not assign {phi.name}")
        return valuation[phi.name]
    if op == TOP:
        return structure.top()
    if op == BOT:
        return structure.bottom()
    args = [evaluate(structure, a, valuation) for a in phi.args]
    if op == NOT:
        return structure.complement(args[0])
    if op == AND:
        return structure.meet(args[0], args[1])
    if op == OR:
        return structure.join(args[0], args[1])
    if op == IMPLIES:
        return structure.join(structure.complement(args[0]), args[1])
    if op == DIA:
        return structure.diamond(args[0])
    if op == BDIA:
        return structure.black_diamond(args[0])
    if op == BOX:
        return structure.complement(structure.diamond(structure.complement(args[0])))
    if op == BBOX:
        return structure.complement(structure.black_diamond(structure.complement(args[0])))
    raise MalformedInputError(f"unknown connective {op!r}")


def eval_formula(phi: Formula, target, valuation: Mapping[str, Any]):
    return evaluate(structure_for(target), phi, valuation)


def validity_over(
    structure, phi: Formula, values: Sequence[Any], max_valuations: int = DEFAULT_MAX_VALUATIONS, name: str = "validity"
) -> CheckReport:
    """Exhaustive over valuations into ``values``; the first counter-valuation in order is reported."""
    names = variables(phi)
    total = len(values) ** len(names)
    if total > max_valuations:
        raise BudgetExceededError(f"{total} valuations exceed the budget of {max_valuations}")
    for choice in cartesian(values, repeat=len(names)):
        valuation = dict(zip(names, choice))
        if not structure.is_top(evaluate(structure, phi, valuation)):
            return CheckReport(
                ok=False,
                name=name,
                witness=tuple(valuation.items()),
                rendered=f"{render(phi, 'unicode')} fails under {valuation}",
                details={"valuations": total},
            )
    return CheckReport(ok=True, name=name, details={"valuations": total})


def validity(target, phi: Formula, max_valuations: int = DEFAULT_MAX_VALUATIONS, k: int = DEFAULT_EXCEPTION_BOUND) -> CheckReport:
    from .omega import RelationSpec, symbolic_validity

    if isinstance(target, RelationSpec):
        return symbolic_validity(target, phi, k, max_valuations)
    structure = structure_for(target)
    return validity_over(structure, phi, list(structure.elements()), max_valuations)


def scheme_validity(
    target,
    phi: Formula,
    max_closure: int = DEFAULT_MAX_CLOSURE,
    max_valuations: int = DEFAULT_MAX_VALUATIONS,
    substitutions: Optional[Sequence[Formula]] = None,
    k: int = 2,
) -> CheckReport:
    """Validity of every substitution instance of φ.

    On a finite algebra the instances range exactly over the modalization of the
    colour of φ, so validity is checked with valuations into it. On ω⁺ the
    instances are searched explicitly among ``substitutions`` (by default a
    one-variable corpus), each checked with clopen exception sets below ``k``.
    """
    from .omega import RelationSpec

    if isinstance(target, RelationSpec):
        return _symbolic_scheme_validity(target, phi, max_valuations, substitutions, k)
    if not isinstance(target, SubordinationAlgebra):
        raise MalformedInputError("scheme validity needs a finite subordination algebra or a relation on ω⁺")
    from .modalization import modalize

    shade = colour(phi)
    chosen = Colour.WHITE if shade in ("none", "white") else Colour(shade)
    closure = modalize(target, chosen, max_closure)
    structure = algebra_structure(target)
    report = validity_over(structure, phi, list(closure.members), max_valuations, name="scheme_validity")
    report.details["closure"] = len(closure.members)
    report.details["colour"] = chosen.value
    return report


def _symbolic_scheme_validity(R, phi, max_valuations, substitutions, k) -> CheckReport:
    from .generators import formula_corpus
    from .omega import symbolic_validity

    base = symbolic_validity(R, phi, k, max_valuations)
    if not base.ok:
        base.name = "scheme_validity"
        return base
    names = variables(phi)
    if substitutions is None:
        shade = colour(phi)
        substitutions = formula_corpus(["p"], max_size=5, colour="white" if shade == "none" else shade)
    tried = 0
    for psi in substitutions:
        instance = substitute(phi, {name: psi for name in names})
        tried += 1
        verdict = symbolic_validity(R, instance, k, max_valuations)
        if not verdict.ok:
            return CheckReport(
                ok=False,
                name="scheme_validity",
                witness=(render(instance),),
                rendered=f"instance {render(instance, 'unicode')} fails: {verdict.rendered}",
                details={"formula_valid": True, "instances_tried": tried, "substitution": render(psi)},
            )
    return CheckReport(ok=True, name="scheme_validity", details={"formula_valid": True, "instances_tried": tried})


def tense_check(target: Union[BimodalFrame, BimodalAlgebra]) -> SuiteReport:
    """(K◇), (K◆), (T1) p → □◆p and (T2) ◆□p → p, checked on all elements."""
    algebra = target if isinstance(target, BimodalAlgebra) else BimodalAlgebra.of_frame(target)
    A = algebra.algebra
    checks = []
    for name, table in (("K_white", algebra.white), ("K_black", algebra.black)):
        try:
            check_operator_laws(A, table)
            checks.append(CheckReport(ok=True, name=name))
        except OperatorLawError as exc:
            checks.append(CheckReport(ok=False, name=name, witness=exc.witness, error=str(exc)))

    def box(a):
        return A.complement(algebra.white[A.complement(a)])

    t1 = next((a for a in A.elements() if not A.leq(a, box(algebra.black[a]))), None)
    t2 = next((a for a in A.elements() if not A.leq(algebra.black[box(a)], a)), None)
    checks.append(CheckReport(ok=t1 is None, name="T1", witness=None if t1 is None else (t1,)))
    checks.append(CheckReport(ok=t2 is None, name="T2", witness=None if t2 is None else (t2,)))
    details = {}
    if isinstance(target, BimodalFrame):
        converse_holds = target.is_tense()
        details["converse"] = converse_holds
        details["agree"] = converse_holds == all(c.ok for c in checks)
        if not details["agree"]:
            logger.error("tense axioms and the converse condition disagree on %s", target)
    return SuiteReport.of("tense", checks, **details)
