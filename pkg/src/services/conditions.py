"""First-order frame conditions and subordination conditions.

Text syntax::

    A x,y. x R y -> E z. (y R^2 z /\ !(z = x))
    A a,b. a < b -> ~b < ~a
    A a. E b. a <^0 b /\ b _|_^2 ~a

Quantifiers ``A``/``E`` scope as far right as possible; ``!`` binds tightest,
then ``/\``, ``\/`` and ``->`` (right associative). Frame atoms are ``x R y``,
``x R^k y`` and ``x = y``; subordination atoms compare Boolean terms built from
variables, ``0``, ``1``, ``~``, ``&`` and ``|`` with ``<=``, ``<`` (≺),
``<^k``, ``_|_`` (a ≺ ¬b), ``_|_^k`` and ``=``.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Set, Tuple

from lark import Lark, Transformer, UnexpectedInput

from ..config.models import ConditionNode
from .errors import ConditionSyntaxError, FreeVariableError, MalformedInputError, SizingError
from .subordination import SubordinationAlgebra

logger = logging.getLogger(__name__)

MAX_BOUND_VARIABLES = 6

FORALL, EXISTS = "forall", "exists"
CNOT, CAND, COR, CIMPLIES, CTRUE, CFALSE = "not", "and", "or", "implies", "true", "false"
REL, EQ, LEQ, PREC, PERP = "rel", "eq", "leq", "prec", "perp"
QUANTIFIERS = (FORALL, EXISTS)
FRAME_ATOMS = (REL, EQ)
SUB_ATOMS = (LEQ, PREC, PERP, EQ)


@dataclass(frozen=True)
class Term:
    """Boolean term over element variables."""

    op: str
    name: Optional[str] = None
    args: Tuple["Term", ...] = ()

    def __str__(self) -> str:
        return render_term(self)


def tvar(name: str) -> Term:
    return Term("var", name)


ZERO = Term("zero")
ONE = Term("one")


def tnot(a: Term) -> Term:
    return Term("not", args=(a,))


def tand(a: Term, b: Term) -> Term:
    return Term("and", args=(a, b))


def tor(a: Term, b: Term) -> Term:
    return Term("or", args=(a, b))


@dataclass(frozen=True)
class Condition:
    op: str
    var: Optional[str] = None
    power: int = 1
    args: Tuple["Condition", ...] = ()
    terms: Tuple[Any, ...] = ()

    def __str__(self) -> str:
        return render_condition(self)


class FrameCondition(Condition):
    """Sentence about points and the accessibility relation."""


class SubCondition(Condition):
    """Sentence about elements of a subordination algebra."""


def forall(names: Sequence[str], body: Condition) -> Condition:
    for name in reversed(list(names)):
        body = type(body)(FORALL, var=name, args=(body,))
    return body


def exists(names: Sequence[str], body: Condition) -> Condition:
    for name in reversed(list(names)):
        body = type(body)(EXISTS, var=name, args=(body,))
    return body


def c_not(a: Condition) -> Condition:
    return type(a)(CNOT, args=(a,))


def c_and(*parts: Condition) -> Condition:
    result = parts[0]
    for p in parts[1:]:
        result = type(result)(CAND, args=(result, p))
    return result


def c_or(*parts: Condition) -> Condition:
    result = parts[0]
    for p in parts[1:]:
        result = type(result)(COR, args=(result, p))
    return result


def c_implies(a: Condition, b: Condition) -> Condition:
    return type(a)(CIMPLIES, args=(a, b))


def rel(x: str, y: str, power: int = 1) -> FrameCondition:
    return FrameCondition(REL, power=power, terms=(x, y))


def same(x: str, y: str) -> FrameCondition:
    return FrameCondition(EQ, terms=(x, y))


def leq(a: Term, b: Term) -> SubCondition:
    return SubCondition(LEQ, terms=(a, b))


def prec(a: Term, b: Term, power: int = 1) -> SubCondition:
    return SubCondition(PREC, power=power, terms=(a, b))


def perp(a: Term, b: Term, power: int = 1) -> SubCondition:
    return SubCondition(PERP, power=power, terms=(a, b))


def equal(a: Term, b: Term) -> SubCondition:
    return SubCondition(EQ, terms=(a, b))


FRAME_TRUE = FrameCondition(CTRUE)
SUB_TRUE = SubCondition(CTRUE)
SUB_FALSE = SubCondition(CFALSE)


_CONNECTIVES = r"""
    ?start: formula

    ?formula: impl
            | QUANT names "." formula     -> quant

    names: NAME ("," NAME)*

    ?impl: disj
         | disj "->" formula              -> implies

    ?disj: conj
         | disj "\\/" conj                -> or_

    ?conj: neg
         | conj "/\\" neg                 -> and_

    ?neg: primary
        | "!" neg                         -> not_

    ?primary: atom
            | "true"                      -> true
            | "false"                     -> false
            | "(" formula ")"

    QUANT: "A" | "E"
    NAME: /(?!(true|false)\b)[a-z][a-z0-9_']*/
    POWER: /[0-9]+/

    %import common.WS
    %ignore WS
"""

FRAME_GRAMMAR = _CONNECTIVES + r"""
    ?atom: NAME "R" NAME                  -> rel
         | NAME "R" "^" POWER NAME        -> rel_power
         | NAME "=" NAME                  -> eq
"""

SUB_GRAMMAR = _CONNECTIVES + r"""
    ?atom: term "<=" term                 -> leq
         | term "<" term                  -> prec
         | term "<^" POWER term           -> prec_power
         | term "_|_" term                -> perp
         | term "_|_^" POWER term         -> perp_power
         | term "=" term                  -> eq

    ?term: tconj
         | term "|" tconj                 -> tor
    ?tconj: tunary
          | tconj "&" tunary              -> tand
    ?tunary: NAME                         -> tvar
           | "0"                          -> zero
           | "1"                          -> one
           | "~" tunary                   -> tnot
           | "[" term "]"
"""


class _Build(Transformer):
    def __init__(self, cls):
        super().__init__()
        self.cls = cls

    def names(self, items):
        return [str(t) for t in items]

    def quant(self, items):
        kind, names, body = items
        return (forall if str(kind) == "A" else exists)(names, body)

    def implies(self, items):
        return self.cls(CIMPLIES, args=tuple(items))

    def or_(self, items):
        return self.cls(COR, args=tuple(items))

    def and_(self, items):
        return self.cls(CAND, args=tuple(items))

    def not_(self, items):
        return self.cls(CNOT, args=tuple(items))

    def true(self, _):
        return self.cls(CTRUE)

    def false(self, _):
        return self.cls(CFALSE)

    def rel(self, items):
        return self.cls(REL, power=1, terms=(str(items[0]), str(items[1])))

    def rel_power(self, items):
        return self.cls(REL, power=int(items[1]), terms=(str(items[0]), str(items[2])))

    def eq(self, items):
        terms = tuple(str(t) if self.cls is FrameCondition else t for t in items)
        return self.cls(EQ, terms=terms)

    def leq(self, items):
        return self.cls(LEQ, terms=tuple(items))

    def prec(self, items):
        return self.cls(PREC, power=1, terms=tuple(items))

    def prec_power(self, items):
        return self.cls(PREC, power=int(items[1]), terms=(items[0], items[2]))

    def perp(self, items):
        return self.cls(PERP, power=1, terms=tuple(items))

    def perp_power(self, items):
        return self.cls(PERP, power=int(items[1]), terms=(items[0], items[2]))

    def tvar(self, items):
        return tvar(str(items[0]))

    def zero(self, _):
        return ZERO

    def one(self, _):
        return ONE

    def tnot(self, items):
        return tnot(items[0])

    def tand(self, items):
        return tand(items[0], items[1])

    def tor(self, items):
        return tor(items[0], items[1])


_FRAME_PARSER = Lark(FRAME_GRAMMAR, parser="lalr")
_SUB_PARSER = Lark(SUB_GRAMMAR, parser="lalr")


def _parse(parser: Lark, cls, text: str) -> Condition:
    try:
        tree = parser.parse(text)
    except UnexpectedInput as exc:
        position = getattr(exc, "pos_in_stream", None)
        if position is None or position < 0:
            position = len(text)
        raise ConditionSyntaxError(
            f"invalid condition at position {position}: {text!r}",
            position,
            getattr(exc, "line", -1) or -1,
            getattr(exc, "column", -1) or -1,
        ) from exc
    return _Build(cls).transform(tree)


def parse_frame_condition(text: str) -> FrameCondition:
    return _parse(_FRAME_PARSER, FrameCondition, text)


def parse_sub_condition(text: str) -> SubCondition:
    return _parse(_SUB_PARSER, SubCondition, text)


# presentation

_TERM_LEVEL = {"or": 1, "and": 2}


def render_term(t: Term) -> str:
    if t.op == "var":
        return t.name
    if t.op == "zero":
        return "0"
    if t.op == "one":
        return "1"
    if t.op == "not":
        inner = render_term(t.args[0])
        return "~" + (inner if t.args[0].op in ("var", "zero", "one", "not") else f"[{inner}]")
    level = _TERM_LEVEL[t.op]
    symbol = " | " if t.op == "or" else " & "

    def wrap(child, minimum):
        text = render_term(child)
        return f"[{text}]" if _TERM_LEVEL.get(child.op, 3) < minimum else text

    return wrap(t.args[0], level) + symbol + wrap(t.args[1], level + 1)


_COND_LEVEL = {FORALL: 0, EXISTS: 0, CIMPLIES: 1, COR: 2, CAND: 3, CNOT: 4}


def render_condition(c: Condition) -> str:
    def level(node):
        return _COND_LEVEL.get(node.op, 5)

    def wrap(child, minimum):
        text = go(child)
        return f"({text})" if level(child) < minimum else text

    def power_suffix(node, symbol):
        return symbol if node.power == 1 else f"{symbol}^{node.power}"

    def go(node):
        op = node.op
        if op in QUANTIFIERS:
            names = [node.var]
            body = node.args[0]
            while body.op == op:
                names.append(body.var)
                body = body.args[0]
            letter = "A" if op == FORALL else "E"
            return f"{letter} {','.join(names)}. {go(body)}"
        if op == CTRUE:
            return "true"
        if op == CFALSE:
            return "false"
        if op == CNOT:
            return "!" + wrap(node.args[0], 4)
        if op == CIMPLIES:
            return wrap(node.args[0], 2) + " -> " + go(node.args[1])
        if op in (COR, CAND):
            symbol = " \\/ " if op == COR else " /\\ "
            lvl = _COND_LEVEL[op]
            return wrap(node.args[0], lvl) + symbol + wrap(node.args[1], lvl + 1)
        a, b = node.terms
        if op == REL:
            return f"{a} {power_suffix(node, 'R')} {b}"
        left, right = (str(a), str(b))
        if op == EQ:
            return f"{left} = {right}"
        if op == LEQ:
            return f"{left} <= {right}"
        if op == PREC:
            return f"{left} {power_suffix(node, '<')} {right}"
        if op == PERP:
            return f"{left} {power_suffix(node, '_|_')} {right}"
        raise MalformedInputError(f"unknown condition node {op!r}")

    return go(c)


# structure


def bound_variables(c: Condition) -> List[str]:
    found = []

    def go(node):
        if node.op in QUANTIFIERS:
            found.append(node.var)
        for a in node.args:
            go(a)

    go(c)
    return found


def _term_variables(t: Term, out: Set[str]) -> None:
    if t.op == "var":
        out.add(t.name)
    for a in t.args:
        _term_variables(a, out)


def free_variables(c: Condition) -> Set[str]:
    def go(node, bound) -> Set[str]:
        if node.op in QUANTIFIERS:
            return go(node.args[0], bound | {node.var})
        free: Set[str] = set()
        for a in node.args:
            free |= go(a, bound)
        for t in node.terms:
            if isinstance(t, Term):
                _term_variables(t, free)
            else:
                free.add(t)
        return free - bound

    return go(c, frozenset())


def max_power(c: Condition) -> int:
    here = c.power if c.op in (REL, PREC, PERP) else 0
    return max([here] + [max_power(a) for a in c.args])


def fresh_points_needed(c: Condition) -> int:
    """Bound variables plus the intermediate points of every Rᵏ atom."""
    extra = 0

    def go(node):
        nonlocal extra
        if node.op == REL:
            extra += max(node.power - 1, 0)
        for a in node.args:
            go(a)

    go(c)
    return len(bound_variables(c)) + extra


def _require_closed(c: Condition, env: Mapping[str, Any]) -> None:
    missing = free_variables(c) - set(env)
    if missing:
        raise FreeVariableError(f"free variables without values: {', '.join(sorted(missing))}")
    if len(bound_variables(c)) > MAX_BOUND_VARIABLES:
        raise SizingError(f"conditions are capped at {MAX_BOUND_VARIABLES} bound variables")


# evaluation

Values = List[Any]
Compiled = Callable[[Values], bool]
AtomCompiler = Callable[["Condition", Dict[str, int]], Compiled]


def _compile(c: Condition, domain: Sequence[Any], atom: AtomCompiler, scope: Dict[str, int], width: List[int]) -> Compiled:
    """Closure over a value list; every binder gets its own slot."""
    op = c.op
    if op in QUANTIFIERS:
        index = width[0]
        width[0] += 1
        body = _compile(c.args[0], domain, atom, {**scope, c.var: index}, width)
        if op == FORALL:

            def every(values: Values) -> bool:
                for d in domain:
                    values[index] = d
                    if not body(values):
                        return False
                return True

            return every

        def some(values: Values) -> bool:
            for d in domain:
                values[index] = d
                if body(values):
                    return True
            return False

        return some
    if op == CTRUE:
        return lambda values: True
    if op == CFALSE:
        return lambda values: False
    if op == CNOT:
        inner = _compile(c.args[0], domain, atom, scope, width)
        return lambda values: not inner(values)
    if op in (CAND, COR, CIMPLIES):
        left = _compile(c.args[0], domain, atom, scope, width)
        right = _compile(c.args[1], domain, atom, scope, width)
        if op == CAND:
            return lambda values: left(values) and right(values)
        if op == COR:
            return lambda values: left(values) or right(values)
        return lambda values: not left(values) or right(values)
    return atom(c, scope)


def _run(c: Condition, domain: Sequence[Any], atom: AtomCompiler, env: Mapping[str, Any]) -> bool:
    scope = {name: i for i, name in enumerate(env)}
    width = [len(scope)]
    compiled = _compile(c, list(domain), atom, scope, width)
    values: Values = list(env.values()) + [None] * (width[0] - len(scope))
    return compiled(values)


def _relation_powers(domain: Sequence[Any], related: Callable[[Any, Any], bool], k: int) -> Dict[Any, Set[Any]]:
    step = {x: {y for y in domain if related(x, y)} for x in domain}
    reach = {x: {x} for x in domain}
    for _ in range(k):
        reach = {x: set().union(*(step[w] for w in reach[x])) if reach[x] else set() for x in domain}
    return reach


def evaluate_frame_condition(
    c: Condition, domain: Sequence[Any], related: Callable[[Any, Any], bool], env: Optional[Mapping[str, Any]] = None
) -> bool:
    env = dict(env or {})
    _require_closed(c, env)
    domain = list(domain)
    powers: Dict[int, Dict[Any, Set[Any]]] = {}

    def atom(node: Condition, scope: Dict[str, int]) -> Compiled:
        i, j = scope[node.terms[0]], scope[node.terms[1]]
        if node.op == EQ:
            return lambda values: values[i] == values[j]
        if node.op == REL:
            if node.power == 1:
                return lambda values: related(values[i], values[j])
            if node.power not in powers:
                powers[node.power] = _relation_powers(domain, related, node.power)
            reach = powers[node.power]
            return lambda values: values[j] in reach[values[i]]
        raise MalformedInputError(f"{node.op} is not a frame atom")

    return _run(c, domain, atom, env)


def eval_frame_condition(c: Condition, frame, env: Optional[Mapping[str, Any]] = None) -> bool:
    return evaluate_frame_condition(c, range(frame.size), frame.related, env)


def _compile_term(t: Term, top: int, scope: Dict[str, int]) -> Callable[[Values], int]:
    if t.op == "var":
        i = scope[t.name]
        return lambda values: values[i]
    if t.op == "zero":
        return lambda values: 0
    if t.op == "one":
        return lambda values: top
    if t.op == "not":
        inner = _compile_term(t.args[0], top, scope)
        return lambda values: top ^ inner(values)
    left = _compile_term(t.args[0], top, scope)
    right = _compile_term(t.args[1], top, scope)
    if t.op == "and":
        return lambda values: left(values) & right(values)
    return lambda values: left(values) | right(values)


def eval_sub_condition(c: Condition, S: SubordinationAlgebra, env: Optional[Mapping[str, int]] = None) -> bool:
    env = dict(env or {})
    _require_closed(c, env)
    S.algebra.require(*env.values())
    top = S.algebra.top

    def atom(node: Condition, scope: Dict[str, int]) -> Compiled:
        a = _compile_term(node.terms[0], top, scope)
        b = _compile_term(node.terms[1], top, scope)
        if node.op == EQ:
            return lambda values: a(values) == b(values)
        if node.op == LEQ:
            return lambda values: not a(values) & (top ^ b(values))
        if node.op in (PREC, PERP):
            masks = S.power_masks(node.power)
            if node.op == PREC:
                return lambda values: bool((masks[a(values)] >> b(values)) & 1)
            return lambda values: bool((masks[a(values)] >> (top ^ b(values))) & 1)
        raise MalformedInputError(f"{node.op} is not a subordination atom")

    return _run(c, S.algebra.elements(), atom, env)


# documents


def _term_document(t: Term) -> dict:
    out: Dict[str, Any] = {"op": t.op}
    if t.name is not None:
        out["name"] = t.name
    if t.args:
        out["args"] = [_term_document(a) for a in t.args]
    return out


def _term_from_document(doc: Mapping[str, Any]) -> Term:
    if "op" not in doc:
        raise MalformedInputError("term document needs an op")
    return Term(doc["op"], doc.get("name"), tuple(_term_from_document(a) for a in doc.get("args", [])))


def to_document(c: Condition) -> ConditionNode:
    terms = [{"point": t} if isinstance(t, str) else _term_document(t) for t in c.terms]
    return ConditionNode(op=c.op, var=c.var, power=c.power, args=[to_document(a) for a in c.args], terms=terms)


def from_document(node: ConditionNode, cls=None) -> Condition:
    if cls is None:
        cls = FrameCondition if _looks_like_frame(node) else SubCondition
    terms = tuple(t["point"] if "point" in t else _term_from_document(t) for t in node.terms)
    return cls(node.op, node.var, node.power, tuple(from_document(a, cls) for a in node.args), terms)


def _looks_like_frame(node: ConditionNode) -> bool:
    if node.op == REL or any("point" in t for t in node.terms):
        return True
    if node.terms:
        return False
    return any(_looks_like_frame(a) for a in node.args)
