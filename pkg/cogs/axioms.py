"""
Description:
📐 Check the b_v(s) inequality on a finite space, find the least s for a v,
and sweep v to classify a space.

Version: 1.0.0
"""

from bvslab import axioms
from bvslab.axioms import BvsParams, MinimalS, check_bvs
from bvslab.commands import Cog, Context, argument, command
from bvslab.report import format_points
from bvslab.scalar import format_scalar, parse_scalar

SPACE_HELP = "NAME, NAME@SELECTOR, a .space file or a .json table"


def _describe_minimal(result: MinimalS) -> str:
    if result.vacuous:
        return f"v={result.v}: vacuous (fewer than {result.v + 2} points)"
    return (
        f"v={result.v}: s_min = {format_scalar(result.s_min)} "
        f"(raw {format_scalar(result.raw)}) at ({result.x}, {result.y}) via {format_points(result.interior)}"
    )


class Axioms(Cog, name="axioms"):
    @command(
        name="verify",
        description="Check the b_v(s) inequality over every pair and interior tuple.",
        arguments=[
            argument("--space", required=True, help=SPACE_HELP),
            argument("--v", type=int, required=True),
            argument("--s", required=True, help="a rational at least 1"),
        ],
    )
    def verify(self, context: Context) -> int:
        """
        Check a finite space, or a truncation of a generated one, for b_v(s).

        :param context: The command context.
        """
        args = context.args
        space = self.lab.resolve_finite(args.space)
        params = BvsParams(args.v, parse_scalar(args.s))
        verdict = check_bvs(space, params)
        report = context.report
        report.line(f"space {space.name} with {len(space)} point(s)")
        text = f"b_{params.v}({format_scalar(params.s)}): {verdict.outcome.value}"
        report.status(verdict.passed, text)
        report.record("outcome", verdict.outcome)
        report.record("v", params.v)
        report.record("s", params.s)
        if verdict.witness is not None:
            witness = verdict.witness
            report.line(
                f"    rho({witness.x}, {witness.y}) = {format_scalar(witness.lhs)} >= "
                f"{format_scalar(params.s)} * {format_scalar(witness.chain_sum)} via {format_points(witness.interior)}"
            )
            report.record("witness.x", witness.x)
            report.record("witness.y", witness.y)
            report.record("witness.interior", witness.interior)
            report.record("witness.lhs", witness.lhs)
            report.record("witness.rhs", witness.rhs)
        return 0 if verdict.passed else 1

    @command(
        name="minimal-s",
        description="Compute the least s for which a finite space is b_v(s).",
        arguments=[
            argument("--space", required=True, help=SPACE_HELP),
            argument("--v", type=int, required=True),
        ],
    )
    def minimal_s(self, context: Context) -> int:
        space = self.lab.resolve_finite(context.args.space)
        result = axioms.minimal_s(space, context.args.v)
        report = context.report
        report.line(f"space {space.name} with {len(space)} point(s)")
        if result.vacuous:
            report.status(None, _describe_minimal(result))
            report.record("s_min", "vacuous")
            return 0
        report.line(f"s_min = {format_scalar(result.s_min)}")
        report.line(f"    witness ({result.x}, {result.y}) via {format_points(result.interior)}")
        report.record("v", result.v)
        report.record("s_min", result.s_min)
        report.record("raw", result.raw)
        report.record("witness.x", result.x)
        report.record("witness.y", result.y)
        report.record("witness.interior", result.interior)
        report.record("witness.chain_sum", result.chain_sum)
        return 0

    @command(
        name="classify",
        description="Report s_min for v = 1..v_max.",
        arguments=[
            argument("--space", required=True, help=SPACE_HELP),
            argument("--v-max", type=int, default=4, dest="v_max"),
        ],
    )
    def classify(self, context: Context) -> int:
        space = self.lab.resolve_finite(context.args.space)
        report = context.report
        report.line(f"space {space.name} with {len(space)} point(s)")
        for result in axioms.classify(space, context.args.v_max):
            report.status(None, _describe_minimal(result))
            report.record(f"v{result.v}.s_min", "vacuous" if result.vacuous else result.s_min)
        return 0


def setup(lab) -> None:
    lab.add_cog(Axioms(lab))
