"""Translations of open, closed and g-closed formulas into subordination conditions.

``translate_geq(φ)`` produces ξ(p̄, q) with B ⊨_v q → φ iff B ⊨_v ξ, and
``translate_leq(φ)`` the same for φ → q. On the dual side □ψ = ¬R(−,¬ψ),
■ψ = ¬R(¬ψ,−), and for clopen a, b:

    R(−,a) ⊆ b  iff  a ≺ b
    R(a,−) ⊆ b  iff  ¬b ≺ ¬a
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Set

from .conditions import (
    ONE,
    ZERO,
    SubCondition,
    Term,
    c_and,
    c_implies,
    exists,
    free_variables,
    forall,
    leq,
    prec,
    tnot,
    tor,
    tvar,
)
from .errors import SyntaxClassError
from .formulas import AND, BBOX, BOT, BOX, NOT, OR, TOP, VAR, Formula, fresh_names, neg, nnf, render, variables
from .syntax_classes import decompose_g_closed, is_closed, is_g_closed, is_open

logger = logging.getLogger(__name__)


@dataclass
class Translation:
    condition: SubCondition
    target: str
    polarity: str
    direction: str
    fresh: List[str] = field(default_factory=list)
    audit: List[str] = field(default_factory=list)

    @property
    def free(self) -> List[str]:
        return sorted(free_variables(self.condition))


class _Translator:
    def __init__(self, taken: Set[str]):
        self.taken = set(taken)
        self.fresh: List[str] = []
        self.audit: List[str] = []

    def name(self) -> str:
        chosen = fresh_names(self.taken, "r", 1)[0]
        self.taken.add(chosen)
        self.fresh.append(chosen)
        return chosen

    def note(self, text: str) -> None:
        self.audit.append(text)

    @staticmethod
    def literal(f: Formula) -> Optional[Term]:
        if f.op == VAR:
            return tvar(f.name)
        if f.op == NOT and f.left.op == VAR:
            return tnot(tvar(f.left.name))
        if f.op == TOP:
            return ONE
        if f.op == BOT:
            return ZERO
        return None

    def geq(self, t: Term, f: Formula) -> SubCondition:
        """t ⊆ ⟦f⟧."""
        value = self.literal(f)
        if value is not None:
            return leq(t, value)
        if not is_open(f):
            if not is_closed(f):
                raise SyntaxClassError(f"{render(f)} is neither open nor closed")
            self.note(f"closed {render(f, 'unicode')}: {t} ⊆ φ as ¬φ ⊆ ~{t}")
            return self.leq(nnf(neg(f)), tnot(t))
        if f.op == AND:
            return c_and(self.geq(t, f.left), self.geq(t, f.right))
        if f.op == OR:
            r, s = self.name(), self.name()
            self.note(f"∨ clause: ∃{r},{s} covering {t}")
            return exists(
                [r, s],
                c_and(self.geq(tvar(r), f.left), self.geq(tvar(s), f.right), leq(t, tor(tvar(r), tvar(s)))),
            )
        if f.op in (BOX, BBOX):
            inner = nnf(neg(f.left))
            value = self.literal(inner)
            if value is not None:
                return prec(value, tnot(t)) if f.op == BOX else prec(t, tnot(value))
            r = self.name()
            if f.op == BOX:
                self.note(f"□ clause: ∃{r} ⊇ {render(inner, 'unicode')} with {r} ≺ ~{t}")
                step = prec(tvar(r), tnot(t))
            else:
                self.note(f"■ clause: ∃{r} ⊇ {render(inner, 'unicode')} with {t} ≺ ~{r}")
                step = prec(t, tnot(tvar(r)))
            return exists([r], c_and(self.leq(inner, tvar(r)), step))
        raise SyntaxClassError(f"unexpected connective {f.op} in an open formula")

    def leq(self, f: Formula, t: Term) -> SubCondition:
        """⟦f⟧ ⊆ t."""
        value = self.literal(f)
        if value is not None:
            return leq(value, t)
        if not is_open(f):
            if not is_closed(f):
                raise SyntaxClassError(f"{render(f)} is neither open nor closed")
            return self.geq(tnot(t), nnf(neg(f)))
        if f.op == OR:
            return c_and(self.leq(f.left, t), self.leq(f.right, t))
        r = self.name()
        self.note(f"open {render(f, 'unicode')} ⊆ {t}: ∀{r} ⊆ φ, {r} ≤ {t}")
        return forall([r], c_implies(self.geq(tvar(r), f), leq(tvar(r), t)))


def _target(phi: Formula, target: str):
    taken = set(variables(phi))
    if target in taken:
        target = fresh_names(taken, "q", 1)[0]
    return target, taken | {target}


def _polar(name: str, polarity: str) -> Term:
    if polarity not in ("+", "-"):
        raise SyntaxClassError("polarity is '+' or '-'")
    return tvar(name) if polarity == "+" else tnot(tvar(name))


def _require_open_or_closed(f: Formula) -> None:
    if not (is_open(f) or is_closed(f)):
        raise SyntaxClassError(f"{render(f)} is neither open nor closed")


def translate_geq(phi: Formula, polarity: str = "+", target: str = "q") -> Translation:
    f = nnf(phi)
    _require_open_or_closed(f)
    name, taken = _target(f, target)
    translator = _Translator(taken)
    condition = translator.geq(_polar(name, polarity), f)
    return Translation(condition, name, polarity, "geq", translator.fresh, translator.audit)


def translate_leq(phi: Formula, polarity: str = "+", target: str = "q") -> Translation:
    f = nnf(phi)
    _require_open_or_closed(f)
    name, taken = _target(f, target)
    translator = _Translator(taken)
    condition = translator.leq(f, _polar(name, polarity))
    return Translation(condition, name, polarity, "leq", translator.fresh, translator.audit)


def translate_g_closed(xi: Formula, polarity: str = "+", target: str = "q") -> Translation:
    """∀p̄ ≥ ψ̄ (q → φ(p̄)) for the decomposition ξ = φ(ψ̄)."""
    f = nnf(xi)
    if not is_g_closed(f):
        raise SyntaxClassError(f"{render(xi)} is not g-closed")
    if is_closed(f):
        return translate_geq(f, polarity, target)
    parts = decompose_g_closed(f)
    name, taken = _target(f, target)
    translator = _Translator(taken | set(parts.substitution))
    bounds = [translator.leq(psi, tvar(p)) for p, psi in parts.substitution.items()]
    body = translator.geq(_polar(name, polarity), parts.skeleton)
    placeholders = list(parts.substitution)
    translator.note(f"skeleton {render(parts.skeleton, 'unicode')} over {', '.join(placeholders)}")
    condition = forall(placeholders, c_implies(c_and(*bounds), body))
    return Translation(condition, name, polarity, "g_closed", placeholders + translator.fresh, translator.audit)


def translate(phi: Formula) -> Translation:
    """ξ(φ) with B ⊨_v φ iff B ⊨_v ξ, for open, closed or g-closed φ."""
    f = nnf(phi)
    taken = set(variables(f))
    if is_g_closed(f) and not (is_open(f) or is_closed(f)):
        parts = decompose_g_closed(f)
        translator = _Translator(taken | set(parts.substitution))
        bounds = [translator.leq(psi, tvar(p)) for p, psi in parts.substitution.items()]
        condition = forall(list(parts.substitution), c_implies(c_and(*bounds), translator.geq(ONE, parts.skeleton)))
        return Translation(condition, "1", "+", "valid", list(parts.substitution) + translator.fresh, translator.audit)
    _require_open_or_closed(f)
    translator = _Translator(taken)
    return Translation(translator.geq(ONE, f), "1", "+", "valid", translator.fresh, translator.audit)
