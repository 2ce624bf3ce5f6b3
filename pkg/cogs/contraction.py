"""
Description:
🔧 Contractive-condition checks for a self-map, and the exact search for Reich
coefficients.

Version: 1.0.0
"""

from bvslab.commands import Cog, Context, argument, command
from bvslab.contraction import (
    ConditionKind,
    ContractionVerdict,
    ReichCoefficients,
    ReichFeasible,
    check_banach_contractive,
    check_ciric_max,
    check_kannan,
    check_reich,
    find_reich_coefficients,
)
from bvslab.errors import InvalidCoefficients
from bvslab.scalar import format_scalar, parse_scalar

KINDS = {"banach": ConditionKind.BANACH, "reich": ConditionKind.REICH, "ciric": ConditionKind.CIRIC_MAX,
         "ciric-max": ConditionKind.CIRIC_MAX, "kannan": ConditionKind.KANNAN}


def _write_verdict(report, verdict: ContractionVerdict, label: str) -> None:
    scope = " (on sample)" if verdict.on_sample else ""
    report.status(verdict.passed, f"{label}{scope}: {verdict.outcome.value} after {verdict.pairs_checked} pair(s)")
    report.record("kind", verdict.kind)
    report.record("outcome", verdict.outcome)
    report.record("pairs", verdict.pairs_checked)
    report.record("on_sample", verdict.on_sample)
    if verdict.witness is not None:
        witness = verdict.witness
        report.line(
            f"    at ({witness.x}, {witness.y}): {format_scalar(witness.lhs)} >= {format_scalar(witness.rhs)}"
        )
        report.record("witness.x", witness.x)
        report.record("witness.y", witness.y)
        report.record("witness.lhs", witness.lhs)
        report.record("witness.rhs", witness.rhs)


class Contraction(Cog, name="contraction"):
    @command(
        name="contraction",
        description="Check a contractive condition for a self-map over a space or sample.",
        arguments=[
            argument("--space", required=True, help="NAME, NAME@SELECTOR, a .space file or a .json table"),
            argument("--map", dest="map", help="a .map file, a .json table map or a corpus name"),
            argument("--kind", choices=sorted(KINDS), default="banach"),
            argument("--a", help="Reich coefficient of rho(x, y)"),
            argument("--b", help="coefficient of rho(x, Tx)"),
            argument("--c", help="coefficient of rho(y, Ty)"),
        ],
    )
    def contraction(self, context: Context) -> int:
        """
        Run one condition and report the first failing pair.

        :param context: The command context.
        """
        args = context.args
        space, points = self.lab.resolve_space(args.space)
        selfmap = self.lab.resolve_map(args.map, args.space, space)
        kind = KINDS[args.kind]
        if kind is ConditionKind.BANACH:
            verdict = check_banach_contractive(space, selfmap, points)
            label = "banach-contractive"
        elif kind is ConditionKind.CIRIC_MAX:
            verdict = check_ciric_max(space, selfmap, points)
            label = "ciric-max"
        elif kind is ConditionKind.REICH:
            if args.a is None or args.b is None or args.c is None:
                raise InvalidCoefficients("reich needs --a, --b and --c")
            coefficients = ReichCoefficients(parse_scalar(args.a), parse_scalar(args.b), parse_scalar(args.c))
            verdict = check_reich(space, selfmap, coefficients, points)
            label = f"reich{coefficients}"
        else:
            if args.b is None or args.c is None:
                raise InvalidCoefficients("kannan needs --b and --c")
            b, c = parse_scalar(args.b), parse_scalar(args.c)
            verdict = check_kannan(space, selfmap, b, c, points)
            label = f"kannan({format_scalar(b)}, {format_scalar(c)})"
        context.report.line(f"map {selfmap.name} on {len(points)} point(s)")
        _write_verdict(context.report, verdict, label)
        return 0 if verdict.passed else 1

    @command(
        name="reich-search",
        description="Search the coefficient simplex for a Reich triple with positive slack.",
        arguments=[
            argument("--space", required=True, help="NAME, NAME@SELECTOR, a .space file or a .json table"),
            argument("--map", dest="map", help="a .map file, a .json table map or a corpus name"),
        ],
    )
    def reich_search(self, context: Context) -> int:
        args = context.args
        space, points = self.lab.resolve_space(args.space)
        selfmap = self.lab.resolve_map(args.map, args.space, space)
        result = find_reich_coefficients(space, selfmap, points)
        report = context.report
        if isinstance(result, ReichFeasible) and result.vacuous:
            report.status(None, f"vacuous: {len(points)} sample point(s), no pair constrains the triple")
            report.record("feasible", "vacuous")
            return 0
        if isinstance(result, ReichFeasible):
            report.status(True, f"feasible: {result.coefficients} with least slack {format_scalar(result.slack)}")
            report.record("feasible", True)
            report.record("a", result.coefficients.a)
            report.record("b", result.coefficients.b)
            report.record("c", result.coefficients.c)
            report.record("slack", result.slack)
            return 0
        report.status(False, f"infeasible: best least slack {format_scalar(result.best_slack)}")
        for x, y in result.certificate:
            report.line(f"    tight at ({x}, {y})")
        report.record("feasible", False)
        report.record("best_slack", result.best_slack)
        report.record("certificate", [f"{x}:{y}" for x, y in result.certificate])
        return 1


def setup(lab) -> None:
    lab.add_cog(Contraction(lab))
