"""Families of small frames, subordination algebras and formulas for exhaustive sweeps."""
import logging
import random
from typing import Dict, Iterator, List, Optional, Sequence

from ..config.models import HARD_MAX_ATOMS
from .duality import KripkeFrame, of
from .errors import MalformedInputError, SizingError
from .formulas import AND, BBOX, BDIA, BOX, DIA, IMPLIES, NOT, OR, TRUE, FALSE, Formula, render, var
from .subordination import SubordinationAlgebra

logger = logging.getLogger(__name__)

EXHAUSTIVE_FRAME_LIMIT = 3

_MODALS = {"none": (), "white": (DIA, BOX), "black": (BDIA, BBOX), "bi": (DIA, BOX, BDIA, BBOX)}


def all_frames(max_points: int, min_points: int = 1) -> Iterator[KripkeFrame]:
    """Every relation on n points for min_points ≤ n ≤ max_points."""
    if max_points > EXHAUSTIVE_FRAME_LIMIT:
        raise SizingError(f"exhaustive frame families stop at {EXHAUSTIVE_FRAME_LIMIT} points")
    for n in range(min_points, max_points + 1):
        pairs = [(x, y) for x in range(n) for y in range(n)]
        for mask in range(1 << len(pairs)):
            yield KripkeFrame.of_size(n, {p for i, p in enumerate(pairs) if (mask >> i) & 1})


def random_frame(rng: random.Random, points: int, density: float = 0.5) -> KripkeFrame:
    edges = {(x, y) for x in range(points) for y in range(points) if rng.random() < density}
    return KripkeFrame.of_size(points, edges)


def random_frames(count: int, max_points: int, seed: int = 0, min_points: int = 1) -> List[KripkeFrame]:
    rng = random.Random(seed)
    return [random_frame(rng, rng.randint(min_points, max_points), rng.choice((0.25, 0.5, 0.75))) for _ in range(count)]


def all_subordinations(atoms: int) -> List[SubordinationAlgebra]:
    """Every subordination relation on the powerset of ``atoms`` atoms.

    Finite subordination algebras are exactly the complex algebras of frames
    on their atoms, so the family is enumerated through frames.
    """
    return [of(F) for F in all_frames(atoms, atoms)]


def random_subordination(rng: random.Random, atoms: int, density: float = 0.5) -> SubordinationAlgebra:
    if atoms > HARD_MAX_ATOMS:
        raise SizingError(f"at most {HARD_MAX_ATOMS} atoms")
    return of(random_frame(rng, atoms, density))


def random_subordinations(count: int, min_atoms: int, max_atoms: int, seed: int = 0) -> List[SubordinationAlgebra]:
    rng = random.Random(seed)
    return [random_subordination(rng, rng.randint(min_atoms, max_atoms)) for _ in range(count)]


def formula_corpus(names: Sequence[str], max_size: int = 5, colour: str = "bi") -> List[Formula]:
    """All formulas over ``names`` up to ``max_size`` nodes, smallest first.

    Double negations are skipped since parsing erases them.
    """
    if colour not in _MODALS:
        raise MalformedInputError(f"unknown colour {colour!r}")
    unary = (NOT,) + _MODALS[colour]
    by_size: Dict[int, List[Formula]] = {1: [var(n) for n in names] + [TRUE, FALSE]}
    for n in range(2, max_size + 1):
        layer = [Formula(op, (a,)) for op in unary for a in by_size[n - 1] if not (op == NOT and a.op == NOT)]
        for left_size in range(1, n - 1):
            for a in by_size[left_size]:
                for b in by_size[n - 1 - left_size]:
                    layer.extend(Formula(op, (a, b)) for op in (AND, OR, IMPLIES))
        by_size[n] = layer
    corpus = [phi for n in sorted(by_size) for phi in sorted(by_size[n], key=render)]
    logger.debug("formula corpus over %s up to size %d: %d formulas", list(names), max_size, len(corpus))
    return corpus


def random_formula(
    rng: random.Random, names: Sequence[str], depth: int, colour: str = "bi", modal_bias: float = 0.4
) -> Formula:
    if colour not in _MODALS:
        raise MalformedInputError(f"unknown colour {colour!r}")
    if depth == 0 or rng.random() < 0.2:
        return var(rng.choice(list(names))) if rng.random() < 0.9 else rng.choice((TRUE, FALSE))
    modals = _MODALS[colour]
    if modals and rng.random() < modal_bias:
        return Formula(rng.choice(modals), (random_formula(rng, names, depth - 1, colour, modal_bias),))
    op = rng.choice((NOT, AND, OR, IMPLIES))
    if op == NOT:
        return Formula(NOT, (random_formula(rng, names, depth - 1, colour, modal_bias),))
    return Formula(op, (random_formula(rng, names, depth - 1, colour, modal_bias), random_formula(rng, names, depth - 1, colour, modal_bias)))


def family_from_spec(spec: str, seed: int = 0, max_points: Optional[int] = None) -> list:
    """``frames:N``, ``random:COUNT:N``, ``algebras:N`` or ``omega:NAME``."""
    kind, _, rest = spec.partition(":")
    try:
        numbers = [int(x) for x in rest.split(":")] if kind != "omega" and rest else []
    except ValueError as exc:
        raise MalformedInputError(f"bad family spec {spec!r}") from exc
    if kind == "frames" and len(numbers) == 1:
        return list(all_frames(numbers[0]))
    if kind == "random" and len(numbers) == 2:
        count, points = numbers
        if max_points is not None:
            points = min(points, max_points)
        return random_frames(count, points, seed)
    if kind == "algebras" and len(numbers) == 1:
        return all_subordinations(numbers[0])
    if kind == "omega":
        from .omega import ACCUMULATION_LOOP, STAR_LOOP

        named = {"accumulation": ACCUMULATION_LOOP, "star": STAR_LOOP}
        if rest not in named:
            raise MalformedInputError(f"unknown ω⁺ relation {rest!r}")
        return [named[rest]]
    raise MalformedInputError(f"bad family spec {spec!r}")
