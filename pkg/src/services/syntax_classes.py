"""Syntactic classes of bimodal formulas.

Everything except the Sahlqvist shapes is decided on the negation normal form,
so ``~[]~p`` is closed just like ``<>p``.
"""
import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

from .errors import SyntaxClassError
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
    fresh_names,
    neg,
    nnf,
    var,
    variables,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntaxClass:
    closed: bool
    open: bool
    positive: bool
    negative: bool
    s_positive: bool
    s_negative: bool
    g_closed: bool
    g_open: bool
    strongly_positive: bool
    s_untied: bool
    s_sahlqvist: bool
    sahlqvist: bool

    def flags(self) -> List[str]:
        return [name for name, value in asdict(self).items() if value]

    def broken_implications(self) -> List[Tuple[str, str]]:
        """Pairs (a, b) with flag a set and the implied flag b unset."""
        values = asdict(self)
        return [(a, b) for a, b in FLAG_IMPLICATIONS if values[a] and not values[b]]


FLAG_IMPLICATIONS = (
    ("closed", "g_closed"),
    ("open", "g_open"),
    ("s_positive", "positive"),
    ("s_positive", "g_closed"),
    ("s_negative", "negative"),
    ("s_negative", "g_open"),
    ("s_negative", "s_untied"),
    ("strongly_positive", "positive"),
    ("strongly_positive", "s_untied"),
    ("s_sahlqvist", "sahlqvist"),
)


def _literal(f: Formula) -> bool:
    return f.op in (VAR, TOP, BOT) or (f.op == NOT and f.left.op == VAR)


def _built(f: Formula, base, ops) -> bool:
    if base(f):
        return True
    return f.op in ops and all(_built(a, base, ops) for a in f.args)


def is_closed(f: Formula) -> bool:
    return _built(f, _literal, (OR, AND, DIA, BDIA))


def is_open(f: Formula) -> bool:
    return _built(f, _literal, (OR, AND, BOX, BBOX))


def is_positive(f: Formula) -> bool:
    return _built(f, lambda g: g.op in (VAR, TOP, BOT), (OR, AND, DIA, BOX, BDIA, BBOX))


def is_negative(f: Formula) -> bool:
    return _built(f, lambda g: g.op in (TOP, BOT) or (g.op == NOT and g.left.op == VAR), (OR, AND, DIA, BOX, BDIA, BBOX))


def is_s_positive(f: Formula) -> bool:
    return _built(f, lambda g: is_closed(g) and is_positive(g), (OR, AND, BOX, BBOX))


def is_s_negative(f: Formula) -> bool:
    return _built(f, lambda g: is_open(g) and is_negative(g), (OR, AND, DIA, BDIA))


def is_g_closed(f: Formula) -> bool:
    return _built(f, is_closed, (OR, AND, BOX, BBOX))


def is_g_open(f: Formula) -> bool:
    return _built(f, is_open, (OR, AND, DIA, BDIA))


def _boxed_atom(f: Formula) -> bool:
    while f.op in (BOX, BBOX):
        f = f.left
    return f.op == VAR


def is_strongly_positive(f: Formula) -> bool:
    return _built(f, _boxed_atom, (AND,))


def is_s_untied(f: Formula) -> bool:
    return _built(f, lambda g: is_strongly_positive(g) or is_s_negative(g), (AND, DIA, BDIA))


def _sahlqvist_antecedent(f: Formula) -> bool:
    return _built(f, lambda g: _boxed_atom(g) or is_negative(g), (AND, OR, DIA, BDIA))


def _strip_boxes(f: Formula) -> Formula:
    while f.op in (BOX, BBOX):
        f = f.left
    return f


def _disjuncts(f: Formula) -> List[Formula]:
    if f.op == OR:
        return _disjuncts(f.left) + _disjuncts(f.right)
    if f.op == IMPLIES:
        return [neg(f.left)] + _disjuncts(f.right)
    return [f]


def _implication_shape(phi: Formula, antecedent_ok, consequent_ok) -> bool:
    """□^μ(φ₁ → φ₂) read off the disjuncts of the unboxed body.

    A disjunct either lands in the consequent, or its negation is one conjunct
    of the antecedent.
    """
    for d in _disjuncts(_strip_boxes(phi)):
        if consequent_ok(nnf(d)):
            continue
        if not antecedent_ok(nnf(neg(d))):
            return False
    return True


def classify(phi: Formula) -> SyntaxClass:
    f = nnf(phi)
    return SyntaxClass(
        closed=is_closed(f),
        open=is_open(f),
        positive=is_positive(f),
        negative=is_negative(f),
        s_positive=is_s_positive(f),
        s_negative=is_s_negative(f),
        g_closed=is_g_closed(f),
        g_open=is_g_open(f),
        strongly_positive=is_strongly_positive(f),
        s_untied=is_s_untied(f),
        s_sahlqvist=_implication_shape(phi, is_s_untied, is_s_positive),
        sahlqvist=_implication_shape(phi, _sahlqvist_antecedent, is_positive),
    )


@dataclass(frozen=True)
class GClosedDecomposition:
    """ξ = φ(ψ̄) with φ positive open over ``placeholders`` and ψ̄ closed."""

    skeleton: Formula
    substitution: Dict[str, Formula]


def decompose_g_closed(xi: Formula) -> GClosedDecomposition:
    """Maximal closed subtrees become fresh placeholder variables."""
    f = nnf(xi)
    if not is_g_closed(f):
        raise SyntaxClassError("formula is not g-closed")
    taken = set(variables(f))
    substitution: Dict[str, Formula] = {}

    def go(g: Formula) -> Formula:
        if is_closed(g):
            name = fresh_names(taken | set(substitution), "c", 1)[0]
            substitution[name] = g
            return var(name)
        return Formula(g.op, tuple(go(a) for a in g.args))

    skeleton = go(f)
    logger.debug("g-closed skeleton %s with %d closed parts", skeleton, len(substitution))
    return GClosedDecomposition(skeleton, substitution)
