# src/ui/cli.py
import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from ..config.models import RunConfig, load_named_structures
from ..services.conditions import parse_frame_condition, parse_sub_condition, render_condition
from ..services.conditions import to_document as condition_document
from ..services.congruences import SubCongruence, is_congruence, quotient
from ..services.constructions import check_categorical_product, is_subalgebra, product
from ..services.correspondence import builtin, builtin_library, certify, check_equivalence
from ..services.documents import (
    Structure,
    atoms_of,
    congruence_from_document,
    equivalence_from_document,
    frame_from_document,
    frame_to_document,
    load_document,
    morphism_from_document,
    named_structure,
    subalgebra_from_document,
    subordination_from_document,
    subordination_to_document,
)
from ..services.duality import KripkeFrame, algebra_isomorphism, frame_isomorphism, of, ult
from ..services.errors import MalformedInputError, SubordinationError
from ..services.formulas import parse, render
from ..services.generators import family_from_spec
from ..services.kinds import Colour, CongruenceKind
from ..services.modalization import modalize
from ..services.omega import RelationSpec, congruence_check
from ..services.replays import REPLAYS, replay
from ..services.reports import CheckReport, SuiteReport
from ..services.semantics import scheme_validity, validity
from ..services.subordination import BASIC_AXIOMS, SubordinationAlgebra, check_axioms, check_morphism, classify_algebra, is_subordination
from ..services.syntax_classes import classify
from ..services.translation import translate, translate_g_closed, translate_geq, translate_leq

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2

Report = Union[CheckReport, SuiteReport]


@dataclass
class Outcome:
    reports: List[Report]
    result: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    handler: str
    wraps: Tuple[str, ...]


COMMANDS: Dict[str, Command] = {
    c.name: c
    for c in (
        Command("check", "Check axioms, morphisms, congruences or subalgebras", "cmd_check",
                ("check_axioms", "classify_algebra", "check_morphism", "is_congruence", "is_subalgebra", "congruence_check")),
        Command("dualize", "Dual frame of an algebra or dual algebra of a frame", "cmd_dualize",
                ("ult", "of", "algebra_isomorphism", "frame_isomorphism")),
        Command("quotient", "Quotient of a subordination algebra by a congruence", "cmd_quotient",
                ("is_congruence", "quotient")),
        Command("product", "Product of finitely many subordination algebras", "cmd_product",
                ("product", "check_categorical_product")),
        Command("modalize", "Modal subalgebra of the canonical extension", "cmd_modalize", ("modalize",)),
        Command("validate", "Validity of a formula or scheme on a structure", "cmd_validate",
                ("validity", "scheme_validity", "symbolic_validity")),
        Command("translate", "Syntax classes and subordination condition of a formula", "cmd_translate",
                ("classify", "translate", "translate_geq", "translate_leq", "translate_g_closed")),
        Command("correspond", "Check a correspondence over a family of structures", "cmd_correspond",
                ("certify", "check_equivalence", "family_from_spec")),
        Command("examples", "Replay the worked examples", "cmd_examples", ("replay",)),
        Command("list", "List named structures, correspondences and examples", "cmd_list",
                ("load_named_structures", "builtin_library")),
    )
}


def _common() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand defaults from shadowing flags given before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-atoms", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-points", type=int, default=argparse.SUPPRESS)
    common.add_argument("--k", type=int, default=argparse.SUPPRESS, help="Exception bound for ω⁺ valuations")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="subalg", description="Subordination algebras, their duals and their logic", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    p = {name: sub.add_parser(name, help=c.help, parents=[common]) for name, c in COMMANDS.items()}

    p["check"].add_argument("input", help="JSON document")
    p["check"].add_argument("--axioms", help="Comma separated axiom names, default S1..S4")
    p["check"].add_argument("--structure", help="Named ω⁺ relation for equivalence documents")
    p["check"].add_argument("--kind", choices=[k.value for k in CongruenceKind], default="white")

    p["dualize"].add_argument("input")

    p["quotient"].add_argument("input", help="Congruence document")

    p["product"].add_argument("inputs", nargs="+")
    p["product"].add_argument("--categorical", action="store_true", help="Also check the universal property")

    p["modalize"].add_argument("input", nargs="?")
    p["modalize"].add_argument("--colour", choices=[c.value for c in Colour], default="white")

    for name in ("validate", "modalize"):
        p[name].add_argument("--structure", help="Name from the structure registry")
    p["validate"].add_argument("--input", dest="input_file")
    p["validate"].add_argument("--formula", required=True)
    p["validate"].add_argument("--scheme", action="store_true")

    p["translate"].add_argument("--formula", required=True)
    p["translate"].add_argument("--direction", choices=("valid", "geq", "leq", "g_closed"), default="valid")
    p["translate"].add_argument("--polarity", choices=("+", "-"), default="+")

    p["correspond"].add_argument("--builtin")
    p["correspond"].add_argument("--formula")
    p["correspond"].add_argument("--condition", help="Frame condition")
    p["correspond"].add_argument("--sub-condition", dest="sub_condition")
    p["correspond"].add_argument("--family", default="frames:2")
    p["correspond"].add_argument("--scheme", action="store_true")

    p["examples"].add_argument("name", nargs="?", default="all", choices=["all", *REPLAYS])
    return parser


class CLI:
    def __init__(self, config: RunConfig):
        self.config = config

    def run(self, args: argparse.Namespace, out=None) -> int:
        out = out or sys.stdout
        command = COMMANDS[args.command]
        try:
            outcome = getattr(self, command.handler)(args)
        except (SubordinationError, ValidationError, KeyError) as exc:
            logger.debug("input error in %s", command.name, exc_info=True)
            self.emit_error(command.name, exc, out)
            return EXIT_INPUT_ERROR
        self.emit(command.name, outcome, out)
        return EXIT_OK if outcome.ok else EXIT_VIOLATION

    # loading

    def _algebra(self, path: str) -> SubordinationAlgebra:
        return self._as_algebra(*load_document(path))

    def _as_algebra(self, kind: str, doc) -> SubordinationAlgebra:
        if kind == "subordination":
            return subordination_from_document(doc, self.config.max_atoms)
        if kind == "frame":
            return of(frame_from_document(doc, self.config.max_atoms))
        raise MalformedInputError(f"expected a subordination algebra or a frame, got a {kind} document")

    def _structure(self, name: Optional[str], path: Optional[str]) -> Structure:
        if name:
            return named_structure(name, self.config.max_atoms)
        if not path:
            raise MalformedInputError("give --structure or --input")
        kind, doc = load_document(path)
        if kind == "subordination":
            return subordination_from_document(doc, self.config.max_atoms)
        if kind == "frame":
            return frame_from_document(doc, self.config.max_points)
        if kind == "relation":
            return RelationSpec.from_document(doc)
        raise MalformedInputError(f"a {kind} document is not a structure")

    # commands

    def cmd_check(self, args) -> Outcome:
        kind, doc = load_document(args.input)
        if kind in ("subordination", "frame"):
            S = self._as_algebra(kind, doc)
            which = [a.strip() for a in args.axioms.split(",")] if args.axioms else BASIC_AXIOMS
            report = check_axioms(S, which)
            report.details["classes"] = classify_algebra(S)
            return Outcome([report])
        if kind == "morphism":
            f, S, T, morphism_kind = morphism_from_document(doc, self.config.max_atoms)
            return Outcome([check_morphism(f, S, T, morphism_kind)])
        if kind == "congruence":
            S, blocks, congruence_kind = congruence_from_document(doc, self.config.max_atoms)
            return Outcome([is_congruence(S, blocks, congruence_kind)])
        if kind == "subalgebra":
            S, members, congruence_kind = subalgebra_from_document(doc, self.config.max_atoms)
            return Outcome([is_subalgebra(S, members, congruence_kind)])
        if kind == "equivalence":
            R = self._structure(args.structure, None) if args.structure else None
            if not isinstance(R, RelationSpec):
                raise MalformedInputError("equivalence documents are checked against a named ω⁺ relation")
            return Outcome([congruence_check(R, equivalence_from_document(doc), CongruenceKind(args.kind))])
        raise MalformedInputError(f"nothing to check in a {kind} document")

    def cmd_dualize(self, args) -> Outcome:
        kind, doc = load_document(args.input)
        if kind == "subordination":
            S = subordination_from_document(doc, self.config.max_atoms)
            F = ult(S)
            iso = algebra_isomorphism(of(F), S)
            checks = [
                CheckReport(ok=is_subordination(S), name="subordination"),
                CheckReport(ok=iso is not None, name="round_trip", rendered="of(ult(S)) ≅ S" if iso else "of(ult(S)) ≇ S"),
            ]
            return Outcome([SuiteReport.of("dualize", checks, points=F.size)], {"frame": frame_to_document(F).model_dump()})
        if kind == "frame":
            F = frame_from_document(doc, self.config.max_points)
            S = of(F)
            iso = frame_isomorphism(ult(S), F)
            checks = [CheckReport(ok=iso is not None, name="round_trip", rendered="ult(of(F)) ≅ F" if iso else "ult(of(F)) ≇ F")]
            return Outcome(
                [SuiteReport.of("dualize", checks, atoms=S.atom_count, pairs=len(S.rel))],
                {"subordination": subordination_to_document(S).model_dump()},
            )
        raise MalformedInputError(f"cannot dualize a {kind} document")

    def cmd_quotient(self, args) -> Outcome:
        kind, doc = load_document(args.input)
        if kind != "congruence":
            raise MalformedInputError("quotient takes a congruence document")
        S, blocks, congruence_kind = congruence_from_document(doc, self.config.max_atoms)
        verdict = is_congruence(S, blocks, congruence_kind)
        if not verdict.ok:
            return Outcome([verdict])
        result = quotient(S, SubCongruence.from_partition(S, blocks, congruence_kind))
        payload = {
            "subordination": subordination_to_document(result.algebra).model_dump(),
            "projection": [atoms_of(result.projection(a)) for a in S.algebra.elements()],
        }
        return Outcome([verdict, result.report], payload)

    def cmd_product(self, args) -> Outcome:
        family = [self._algebra(path) for path in args.inputs]
        result = product(family, self.config.max_atoms)
        reports: List[Report] = [result.report]
        if args.categorical:
            reports.append(check_categorical_product(family, family[0], max_atoms=self.config.max_atoms))
        return Outcome(reports, {"subordination": subordination_to_document(result.algebra).model_dump(), "offsets": result.offsets})

    def cmd_modalize(self, args) -> Outcome:
        if not (args.structure or args.input):
            raise MalformedInputError("give an input file or --structure")
        S = named_structure(args.structure, self.config.max_atoms) if args.structure else self._algebra(args.input)
        if isinstance(S, KripkeFrame):
            S = of(S)
        if not isinstance(S, SubordinationAlgebra):
            raise MalformedInputError("modalization needs a finite subordination algebra")
        m = modalize(S, Colour(args.colour), self.config.max_closure)
        report = CheckReport(
            ok=True,
            name="modalization",
            details={"size": len(m.members), "extension": m.extension.algebra.size, "whole_extension": m.is_whole_extension()},
        )
        members = sorted(m.members)
        return Outcome([report], {"colour": m.colour.value, "members": [atoms_of(E) for E in members], "terms": [m.terms[E] for E in members]})

    def cmd_validate(self, args) -> Outcome:
        target = self._structure(args.structure, args.input_file)
        phi = parse(args.formula)
        if args.scheme:
            if isinstance(target, KripkeFrame):
                target = of(target)
            report = scheme_validity(target, phi, self.config.max_closure, self.config.max_valuations)
        else:
            report = validity(target, phi, self.config.max_valuations, self.config.k)
        report.details["formula"] = render(phi)
        return Outcome([report])

    def cmd_translate(self, args) -> Outcome:
        phi = parse(args.formula)
        syntax = classify(phi)
        if args.direction == "geq":
            result = translate_geq(phi, args.polarity)
        elif args.direction == "leq":
            result = translate_leq(phi, args.polarity)
        elif args.direction == "g_closed":
            result = translate_g_closed(phi, args.polarity)
        else:
            result = translate(phi)
        report = CheckReport(
            ok=True,
            name="translation",
            rendered=render_condition(result.condition),
            details={
                "direction": result.direction,
                "target": result.target,
                "free": result.free,
                "fresh": result.fresh,
                "syntax": syntax.flags(),
            },
        )
        return Outcome([report], {"condition": condition_document(result.condition).model_dump(), "audit": result.audit})

    def cmd_correspond(self, args) -> Outcome:
        family = family_from_spec(args.family, self.config.seed, self.config.max_points)
        if args.builtin:
            triple = builtin(args.builtin)
            return Outcome([certify(triple, family, self.config.k)], triple.summary())
        if not args.formula or not (args.condition or args.sub_condition):
            raise MalformedInputError("give --builtin, or --formula with --condition or --sub-condition")
        left = parse(args.formula)
        right = parse_frame_condition(args.condition) if args.condition else parse_sub_condition(args.sub_condition)
        report = check_equivalence(left, right, family, args.scheme, self.config.k, self.config.max_valuations)
        return Outcome([report], {"formula": render(left), "condition": render_condition(right)})

    def cmd_examples(self, args) -> Outcome:
        return Outcome(list(replay(args.name, self.config)))

    def cmd_list(self, args) -> Outcome:
        structures = [
            {"name": item.name, "kind": item.kind, "description": item.description}
            for item in load_named_structures().values()
        ]
        return Outcome(
            [],
            {
                "structures": structures,
                "correspondences": [t.summary() for t in builtin_library()],
                "examples": list(REPLAYS),
            },
        )

    # output

    def emit(self, command: str, outcome: Outcome, out) -> None:
        if self.config.format == "json":
            body = {
                "command": command,
                "ok": outcome.ok,
                "reports": [r.to_dict() for r in outcome.reports],
            }
            if outcome.result is not None:
                body["result"] = outcome.result
            out.write(json.dumps(body, ensure_ascii=False, indent=2) + "\n")
            return
        for report in outcome.reports:
            out.write("\n".join(_text_lines(report)) + "\n")
        if outcome.result is not None:
            out.write(json.dumps(outcome.result, ensure_ascii=False, indent=2) + "\n")

    def emit_error(self, command: str, exc: Exception, out) -> None:
        message = f"{type(exc).__name__}: {exc}"
        if self.config.format == "json":
            out.write(json.dumps({"command": command, "ok": False, "error": message}, ensure_ascii=False) + "\n")
        else:
            out.write(f"❌ {command}: {message}\n")


def _mark(ok: bool) -> str:
    return "✅" if ok else "❌"


def _text_lines(report: Report) -> List[str]:
    lines = [f"{_mark(report.ok)} {report.name}" + (f": {report.rendered}" if getattr(report, "rendered", "") else "")]
    for check in getattr(report, "checks", []):
        line = f"  {_mark(check.ok)} {check.name}"
        if check.rendered:
            line += f": {check.rendered}"
        lines.append(line)
    if report.details:
        plain = report.to_dict().get("details", {})
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in plain.items()))
    return lines


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None, config: Optional[RunConfig] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(getattr(args, "verbose", False))
    try:
        base = config or RunConfig()
    except ValidationError as e:
        print(f"❌ Configuration error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    flags = {key: getattr(args, key, None) for key in ("max_atoms", "max_points", "k", "seed", "format")}
    return CLI(base.overridden(**flags)).run(args)


def command_handlers() -> Dict[str, Callable]:
    return {name: getattr(CLI, c.handler) for name, c in COMMANDS.items()}
