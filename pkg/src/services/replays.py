"""Named replays of the worked counterexamples and correspondences.

Each replay returns a SuiteReport whose checks are the documented verdicts.
"""
import logging
from itertools import product as cartesian
from typing import Callable, Dict, List

from ..config.models import RunConfig
from .correspondence import builtin, certify, check_black_gap, check_unicolour_gap, correspondent_klmn, holds
from .duality import is_space_congruence
from .formulas import parse
from .generators import all_frames, random_frames
from .kinds import CongruenceKind
from .omega import (
    ACCUMULATION_LOOP,
    BOOLEAN_JOIN,
    OMEGA,
    PAIRS,
    SHIFTED_PAIRS,
    STAR_LOOP,
    OmegaPlusSet,
    congruence_check,
    eval_formula,
    nonprincipal_witness,
    omega_class_criterion,
    symbolic_validity,
)
from .reports import CheckReport, SuiteReport
from .semantics import scheme_validity
from .syntax_classes import classify

logger = logging.getLogger(__name__)


def accumulation_loop(config: RunConfig) -> SuiteReport:
    R = ACCUMULATION_LOOP
    phi = parse("p -> <>[]p")
    psi = parse("p & ~[]p")
    valuation = {"p": OmegaPlusSet.cofinite((0,), True)}
    psi_value = eval_formula(R, psi, valuation)
    dcb_value = eval_formula(R, parse("<>[]p"), {"p": psi_value})
    formula = symbolic_validity(R, phi, config.k, config.max_valuations)
    scheme = scheme_validity(R, phi, max_valuations=config.max_valuations)
    f_phi = builtin("scheme-dcb").alternatives["subset"]
    syntax = classify(phi)
    principal = nonprincipal_witness(R, OmegaPlusSet.finite({0}), config.k)
    checks = [
        CheckReport(ok=formula.ok, name="formula_valid", details={"k": config.k}),
        CheckReport(ok=not scheme.ok, name="scheme_invalid", witness=scheme.witness, rendered=scheme.rendered),
        CheckReport(
            ok=psi_value == OmegaPlusSet.finite((), True) and dcb_value.is_empty(),
            name="psi_instance",
            rendered=f"ψ = {psi_value.render()}, ◇□ψ = {dcb_value.render()}",
        ),
        CheckReport(ok=not holds(f_phi, R), name="first_order_correspondent_fails"),
        CheckReport(ok=syntax.sahlqvist and not syntax.s_sahlqvist, name="sahlqvist_not_s_sahlqvist"),
        CheckReport(ok=not principal.principal, name="nonprincipal_filter", details={"chain": [E.render() for E in principal.chain[:3]]}),
    ]
    return SuiteReport.of("accumulation-loop", checks)


def omega_congruences(config: RunConfig) -> SuiteReport:
    R = STAR_LOOP
    theta = congruence_check(R, PAIRS)
    xi = congruence_check(R, SHIFTED_PAIRS)
    joined = congruence_check(R, BOOLEAN_JOIN)
    white = joined.check("white")
    checks = [
        CheckReport(ok=theta.ok, name="theta_congruence"),
        CheckReport(ok=xi.ok, name="xi_congruence"),
        CheckReport(ok=BOOLEAN_JOIN.class_of(0) == OmegaPlusSet.finite({0, 1}), name="join_classes", rendered=BOOLEAN_JOIN.omega_class.render()),
        CheckReport(ok=not joined.ok, name="join_not_congruence", witness=white.witness, rendered=white.rendered),
        CheckReport(ok=white.witness == (2, OMEGA, 0), name="violation_2_omega_0"),
        CheckReport(
            ok=omega_class_criterion(PAIRS) and not omega_class_criterion(BOOLEAN_JOIN),
            name="omega_class_criterion",
        ),
    ]
    return SuiteReport.of("omega-congruences", checks, consequence="the meet of two subalgebras need not be a subalgebra")


def klmn(config: RunConfig) -> SuiteReport:
    frames = list(all_frames(3))
    memo: dict = {}
    checks = []
    for k, l, m, n in cartesian(range(3), repeat=4):
        report = certify(correspondent_klmn(k, l, m, n), frames, memo=memo)
        checks.append(CheckReport(ok=report.ok, name=report.name, details={"failures": [c.name for c in report.failures()]}))
    return SuiteReport.of("klmn", checks, frames=len(frames))


def two_variable(config: RunConfig) -> SuiteReport:
    triple = builtin("two-variable")
    family = list(all_frames(2)) + random_frames(40, 3, config.seed, min_points=3)
    report = certify(triple, family)
    syntax = classify(triple.formulas["white"])
    return SuiteReport.of(
        "two-variable",
        report.checks + [CheckReport(ok=syntax.s_sahlqvist, name="s_sahlqvist")],
        structures=len(family),
    )


def seriality(config: RunConfig) -> SuiteReport:
    triple = builtin("seriality")
    report = certify(triple, all_frames(3))
    return SuiteReport.of("seriality", report.checks + check_black_gap(triple).checks)


def unicolour_gap(config: RunConfig) -> SuiteReport:
    triple = builtin("unicolour-gap")
    witness = triple.witnesses["unicolour_witness"]
    congruence = is_space_congruence(witness["frame"], witness["partition"], CongruenceKind.WHITE)
    checks = [CheckReport(ok=congruence.ok, name="white_space_congruence")] + check_unicolour_gap(triple).checks
    return SuiteReport.of("unicolour-gap", checks, quotient=list(witness["quotient"].points))


def scheme_dcb(config: RunConfig) -> SuiteReport:
    triple = builtin("scheme-dcb")
    report = certify(triple, all_frames(3))
    phi = triple.formulas["white"]
    checks = report.checks + [
        CheckReport(ok=holds(phi, ACCUMULATION_LOOP), name="formula_holds_on_accumulation_loop"),
        CheckReport(ok=not holds(phi, ACCUMULATION_LOOP, scheme=True), name="scheme_fails_on_accumulation_loop"),
        CheckReport(ok=not holds(triple.frame_condition, ACCUMULATION_LOOP), name="condition_fails_on_accumulation_loop"),
    ]
    return SuiteReport.of("scheme-dcb", checks, note=triple.note)


REPLAYS: Dict[str, Callable[[RunConfig], SuiteReport]] = {
    "accumulation-loop": accumulation_loop,
    "omega-congruences": omega_congruences,
    "klmn": klmn,
    "two-variable": two_variable,
    "seriality": seriality,
    "unicolour-gap": unicolour_gap,
    "scheme-dcb": scheme_dcb,
}


def replay(name: str, config: RunConfig) -> List[SuiteReport]:
    if name == "all":
        names = list(REPLAYS)
    elif name in REPLAYS:
        names = [name]
    else:
        raise KeyError(name)
    reports = []
    for item in names:
        logger.info("replaying %s", item)
        report = REPLAYS[item](config)
        if not report.ok:
            logger.warning("%s diverged: %s", item, [c.name for c in report.failures()])
        reports.append(report)
    return reports
