"""
Description:
🕳️ Build the fixed-point-free escape map on a seed's sample, check it, then run
the control with the limit adjoined.

Version: 1.0.0
"""

import os

from bvslab.commands import Cog, Context, argument, command
from bvslab.completeness import build_escape_map, control_run, load_seed, verify_escape_map
from bvslab.errors import ZeroDistanceToRange
from bvslab.scalar import format_scalar, parse_scalar


class Completeness(Cog, name="completeness"):
    @command(
        name="completeness-demo",
        description="Show a Kannan-type map without a fixed point on a space that is not complete.",
        arguments=[
            argument("--seed", help="a seed file; escape_demo.seed from the corpus by default"),
            argument("--b", help="the Kannan weight in (0, 1); the seed's b by default"),
        ],
    )
    def completeness_demo(self, context: Context) -> int:
        """
        Exit 0 when the map passes and the control is rejected, 1 otherwise.

        :param context: The command context.
        """
        args = context.args
        path = args.seed or os.path.join(self.lab.corpus_dir, "escape_demo.seed")
        demo = load_seed(path)
        b = parse_scalar(args.b) if args.b is not None else demo.b
        construction = build_escape_map(demo.seed, demo.sample, b)
        verdict = verify_escape_map(construction, demo.seed, b)
        report = context.report
        report.line(f"seed {demo.name}: {len(demo.seed.sequence)} recorded term(s), b = {format_scalar(b)}")
        if construction.prefix_relative:
            report.status(None, "no tail certificate; results are relative to the recorded prefix")
        for n0, chosen in sorted(construction.member_choice.items()):
            report.line(f"    u_{n0} -> u_{chosen}")
        for point, chosen in construction.outsider_choice.items():
            gap = construction.range_distance[point]
            report.line(f"    {point} -> u_{chosen} (distance to range {format_scalar(gap)})")
        for name, count in verdict.pair_classes.items():
            report.line(f"    {name}: {count} pair(s)")
        if verdict.fixed_point is not None:
            report.status(False, f"fixed point at {verdict.fixed_point}")
        else:
            witness = verdict.kannan.witness if verdict.kannan is not None else None
            text = f"kannan({format_scalar(b)}, {format_scalar(1 - b)}) on sample: {verdict.outcome.value}"
            if witness is not None:
                text += f" at ({witness.x}, {witness.y}): {format_scalar(witness.lhs)} >= {format_scalar(witness.rhs)}"
            report.status(verdict.passed, text)
        report.record("outcome", verdict.outcome)
        report.record("prefix_relative", construction.prefix_relative)
        for name, count in verdict.pair_classes.items():
            report.record(f"pairs.{name.replace('/', '_')}", count)
        for point, chosen in construction.outsider_choice.items():
            report.record(f"outsider.{point}", chosen)

        control_rejected = False
        if demo.limit is not None:
            try:
                control_run(demo)
            except ZeroDistanceToRange as error:
                control_rejected = True
                report.status(True, f"control with the limit adjoined rejected: {error}")
            else:
                report.status(False, "control with the limit adjoined was not rejected")
            report.record("control", "rejected" if control_rejected else "accepted")
        return 0 if verdict.passed and (demo.limit is None or control_rejected) else 1


def setup(lab) -> None:
    lab.add_cog(Completeness(lab))
