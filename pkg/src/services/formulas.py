"""Bimodal formulas: AST, concrete syntax and syntactic transformations.

Concrete syntax: ``<>`` ◇, ``[]`` □, ``<+>`` ◆, ``[+]`` ■, ``~`` ¬, ``&``, ``|``,
``->`` (right associative), ``top`` and ``bot``. Unary operators bind tightest,
then ``&``, then ``|``, then ``->``.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from lark import Lark, Transformer, UnexpectedInput

from ..config.models import FormulaNode
from .errors import FormulaSyntaxError, MalformedInputError

logger = logging.getLogger(__name__)

VAR, TOP, BOT = "var", "top", "bot"
NOT, AND, OR, IMPLIES = "not", "and", "or", "implies"
DIA, BOX, BDIA, BBOX = "dia", "box", "bdia", "bbox"

UNARY = (NOT, DIA, BOX, BDIA, BBOX)
BINARY = (AND, OR, IMPLIES)
MODAL = (DIA, BOX, BDIA, BBOX)
WHITE_OPS = (DIA, BOX)
BLACK_OPS = (BDIA, BBOX)


@dataclass(frozen=True)
class Formula:
    op: str
    args: Tuple["Formula", ...] = ()
    name: Optional[str] = None

    def __post_init__(self):
        arity = {VAR: 0, TOP: 0, BOT: 0, **{o: 1 for o in UNARY}, **{o: 2 for o in BINARY}}
        if self.op not in arity:
            raise MalformedInputError(f"unknown connective {self.op!r}")
        if len(self.args) != arity[self.op]:
            raise MalformedInputError(f"{self.op} takes {arity[self.op]} arguments")
        if (self.op == VAR) != (self.name is not None):
            raise MalformedInputError("only variables carry a name")

    def __str__(self) -> str:
        return render(self)

    @property
    def left(self) -> "Formula":
        return self.args[0]

    @property
    def right(self) -> "Formula":
        return self.args[1]


def var(name: str) -> Formula:
    return Formula(VAR, name=name)


TRUE = Formula(TOP)
FALSE = Formula(BOT)


def neg(a: Formula) -> Formula:
    return Formula(NOT, (a,))


def conj(a: Formula, b: Formula) -> Formula:
    return Formula(AND, (a, b))


def disj(a: Formula, b: Formula) -> Formula:
    return Formula(OR, (a, b))


def implies(a: Formula, b: Formula) -> Formula:
    return Formula(IMPLIES, (a, b))


def dia(a: Formula, times: int = 1) -> Formula:
    return _repeat(DIA, a, times)


def box(a: Formula, times: int = 1) -> Formula:
    return _repeat(BOX, a, times)


def bdia(a: Formula, times: int = 1) -> Formula:
    return _repeat(BDIA, a, times)


def bbox(a: Formula, times: int = 1) -> Formula:
    return _repeat(BBOX, a, times)


def _repeat(op: str, a: Formula, times: int) -> Formula:
    for _ in range(times):
        a = Formula(op, (a,))
    return a


GRAMMAR = r"""
    ?start: impl

    ?impl: disj
         | disj "->" impl      -> implies

    ?disj: conj
         | disj "|" conj       -> or_

    ?conj: unary
         | conj "&" unary      -> and_

    ?unary: atom
          | "~" unary          -> not_
          | "<>" unary         -> dia
          | "[]" unary         -> box
          | "<+>" unary        -> bdia
          | "[+]" unary        -> bbox

    ?atom: "top"               -> top
         | "bot"               -> bot
         | NAME                -> var
         | "(" impl ")"

    NAME: /(?!(top|bot)\b)[a-z][a-z0-9_]*/

    %import common.WS
    %ignore WS
"""


class _ToFormula(Transformer):
    def var(self, items):
        return var(str(items[0]))

    def top(self, _):
        return TRUE

    def bot(self, _):
        return FALSE

    def not_(self, items):
        return neg(items[0])

    def dia(self, items):
        return Formula(DIA, (items[0],))

    def box(self, items):
        return Formula(BOX, (items[0],))

    def bdia(self, items):
        return Formula(BDIA, (items[0],))

    def bbox(self, items):
        return Formula(BBOX, (items[0],))

    def and_(self, items):
        return conj(items[0], items[1])

    def or_(self, items):
        return disj(items[0], items[1])

    def implies(self, items):
        return implies(items[0], items[1])


_PARSER = Lark(GRAMMAR, parser="lalr", transformer=_ToFormula())


def syntax_error(exc: UnexpectedInput, text: str, what: str = "formula") -> FormulaSyntaxError:
    position = getattr(exc, "pos_in_stream", None)
    if position is None or position < 0:
        position = len(text)
    line = getattr(exc, "line", -1) or -1
    column = getattr(exc, "column", -1) or -1
    return FormulaSyntaxError(f"invalid {what} at position {position}: {text!r}", position, line, column)


def parse(text: str) -> Formula:
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as exc:
        raise syntax_error(exc, text) from exc
    return canonicalize(tree)


def canonicalize(phi: Formula) -> Formula:
    """Strip double negations everywhere."""
    if phi.op == NOT and phi.left.op == NOT:
        return canonicalize(phi.left.left)
    if not phi.args:
        return phi
    return Formula(phi.op, tuple(canonicalize(a) for a in phi.args), phi.name)


_ASCII = {NOT: "~", DIA: "<>", BOX: "[]", BDIA: "<+>", BBOX: "[+]", AND: " & ", OR: " | ", IMPLIES: " -> "}
_UNICODE = {NOT: "¬", DIA: "◇", BOX: "□", BDIA: "◆", BBOX: "■", AND: " ∧ ", OR: " ∨ ", IMPLIES: " → "}
_CONSTANTS = {"ascii": {TOP: "top", BOT: "bot"}, "unicode": {TOP: "⊤", BOT: "⊥"}}
_LEVEL = {IMPLIES: 1, OR: 2, AND: 3}


def _level(phi: Formula) -> int:
    if phi.op in _LEVEL:
        return _LEVEL[phi.op]
    if phi.op in UNARY:
        return 4
    return 5


def render(phi: Formula, style: str = "ascii") -> str:
    symbols = _ASCII if style == "ascii" else _UNICODE

    def wrap(child: Formula, minimum: int) -> str:
        text = go(child)
        return f"({text})" if _level(child) < minimum else text

    def go(f: Formula) -> str:
        if f.op == VAR:
            return f.name
        if f.op in (TOP, BOT):
            return _CONSTANTS[style][f.op]
        if f.op in UNARY:
            return symbols[f.op] + wrap(f.left, 4)
        if f.op == IMPLIES:
            return wrap(f.left, 2) + symbols[IMPLIES] + wrap(f.right, 1)
        level = _LEVEL[f.op]
        return wrap(f.left, level) + symbols[f.op] + wrap(f.right, level + 1)

    return go(phi)


def variables(phi: Formula) -> List[str]:
    found = set()

    def go(f):
        if f.op == VAR:
            found.add(f.name)
        for a in f.args:
            go(a)

    go(phi)
    return sorted(found)


def modal_depth(phi: Formula) -> int:
    if not phi.args:
        return 0
    inner = max(modal_depth(a) for a in phi.args)
    return inner + 1 if phi.op in MODAL else inner


def size(phi: Formula) -> int:
    return 1 + sum(size(a) for a in phi.args)


def colour(phi: Formula) -> str:
    """``none``, ``white``, ``black`` or ``bi`` according to the modalities used."""
    ops = set()

    def go(f):
        ops.add(f.op)
        for a in f.args:
            go(a)

    go(phi)
    white = bool(ops & set(WHITE_OPS))
    black = bool(ops & set(BLACK_OPS))
    if white and black:
        return "bi"
    return "white" if white else "black" if black else "none"


_SWAP = {DIA: BDIA, BDIA: DIA, BOX: BBOX, BBOX: BOX}


def swap_colours(phi: Formula) -> Formula:
    return Formula(_SWAP.get(phi.op, phi.op), tuple(swap_colours(a) for a in phi.args), phi.name)


_DUAL = {DIA: BOX, BOX: DIA, BDIA: BBOX, BBOX: BDIA, AND: OR, OR: AND}


def nnf(phi: Formula) -> Formula:
    """Negation normal form over ∧, ∨ and the four modalities; → is eliminated."""
    op = phi.op
    if op in (VAR, TOP, BOT):
        return phi
    if op == IMPLIES:
        return disj(nnf(neg(phi.left)), nnf(phi.right))
    if op != NOT:
        return Formula(op, tuple(nnf(a) for a in phi.args))
    inner = phi.left
    if inner.op == VAR:
        return phi
    if inner.op == TOP:
        return FALSE
    if inner.op == BOT:
        return TRUE
    if inner.op == NOT:
        return nnf(inner.left)
    if inner.op == IMPLIES:
        return conj(nnf(inner.left), nnf(neg(inner.right)))
    return Formula(_DUAL[inner.op], tuple(nnf(neg(a)) for a in inner.args))


def normalize(phi: Formula) -> Formula:
    """Rewrite →, □ and ■ into ¬, ∨, ◇ and ◆."""
    args = tuple(normalize(a) for a in phi.args)
    if phi.op == IMPLIES:
        return canonicalize(disj(neg(args[0]), args[1]))
    if phi.op == BOX:
        return canonicalize(neg(Formula(DIA, (neg(args[0]),))))
    if phi.op == BBOX:
        return canonicalize(neg(Formula(BDIA, (neg(args[0]),))))
    return canonicalize(Formula(phi.op, args, phi.name))


def substitute(phi: Formula, mapping: Mapping[str, Formula]) -> Formula:
    if phi.op == VAR:
        return mapping.get(phi.name, phi)
    return Formula(phi.op, tuple(substitute(a, mapping) for a in phi.args), phi.name)


def to_document(phi: Formula) -> FormulaNode:
    return FormulaNode(op=phi.op, name=phi.name, args=[to_document(a) for a in phi.args])


def from_document(node: FormulaNode) -> Formula:
    return Formula(node.op, tuple(from_document(a) for a in node.args), node.name)


def fresh_names(taken, prefix: str, count: int) -> List[str]:
    names, i = [], 0
    while len(names) < count:
        candidate = f"{prefix}{i}"
        if candidate not in taken:
            names.append(candidate)
        i += 1
    return names


def as_mapping(pairs: Dict[str, str]) -> Dict[str, Formula]:
    """Parse every value of a name → text mapping."""
    return {name: parse(text) for name, text in pairs.items()}
