"""
Description:
🔁 Picard orbits, the s_n sequence, tail diameters and the bounded Suzuki check.

Version: 1.0.0
"""

from bvslab import picard
from bvslab.commands import Cog, Context, argument, command
from bvslab.corpus import suzuki_factor
from bvslab.errors import InvalidParameters
from bvslab.picard import (
    DEFAULT_EPSILONS,
    Cycle,
    FixedPoint,
    OrbitRecord,
    cauchy_profile,
    check_suzuki,
    verify_sn_strict_decrease,
)
from bvslab.report import format_points
from bvslab.scalar import format_scalar, format_scalars, parse_scalar, parse_scalar_list
from bvslab.space import GeneratedSpace


def _status_text(orbit: OrbitRecord) -> str:
    status = orbit.status
    if isinstance(status, FixedPoint):
        return f"fixed point {status.point} reached at step {status.index}"
    if isinstance(status, Cycle):
        return f"cycle of period {status.period} entered at index {status.entry}"
    return f"no recurrence within {status.budget} step(s)"


class Picard(Cog, name="picard"):
    def _orbit(self, context: Context) -> OrbitRecord:
        args = context.args
        space, _ = self.lab.resolve_space(args.space)
        selfmap = self.lab.resolve_map(args.map, args.space, space)
        start = self.lab.resolve_point(space, args.start)
        budget = args.budget if args.budget is not None else self.lab.default_budget
        limit = self.lab.resolve_point(space, args.limit) if getattr(args, "limit", None) else None
        return picard.iterate(space, selfmap, start, budget, limit)

    @command(
        name="iterate",
        description="Iterate a self-map from a start point and report the orbit and s_n.",
        arguments=[
            argument("--space", required=True),
            argument("--map", dest="map"),
            argument("--start", required=True, help="a rational, or a label for a table space"),
            argument("--budget", type=int, help="maximum number of steps"),
            argument("--limit", help="a point to report t_n = rho(u_n, limit) against"),
            argument("--tails", help="comma-separated tail starts for the diameter profile"),
        ],
    )
    def iterate(self, context: Context) -> int:
        """
        Print the orbit, its status and whether s_n strictly decreases.

        :param context: The command context.
        """
        orbit = self._orbit(context)
        report = context.report
        report.line(f"orbit {format_points(orbit.points)}")
        report.status(None, _status_text(orbit))
        report.line(f"s_n = {format_scalars(orbit.s_seq) or '-'}")
        if orbit.t_seq is not None:
            report.line(f"t_n = {format_scalars(orbit.t_seq)}")
        decrease = verify_sn_strict_decrease(orbit)
        report.status(decrease.passed, f"s_n strictly decreasing: {decrease.outcome.value}")
        report.record("points", orbit.points)
        report.record("status", type(orbit.status).__name__)
        if isinstance(orbit.status, FixedPoint):
            report.record("fixed_point", orbit.status.point)
            report.record("index", orbit.status.index)
        elif isinstance(orbit.status, Cycle):
            report.record("entry", orbit.status.entry)
            report.record("period", orbit.status.period)
        report.record("s", orbit.s_seq)
        if orbit.t_seq is not None:
            report.record("t", orbit.t_seq)
        report.record("s_decreasing", decrease.outcome)
        if context.args.tails:
            starts = [int(part) for part in context.args.tails.split(",") if part.strip()]
            for row in cauchy_profile(orbit, starts):
                report.line(f"    diam(N={row.start_index}) = {format_scalar(row.diameter)}")
                report.record(f"diam.{row.start_index}", row.diameter)
        return 0

    @command(
        name="suzuki",
        description="Test the orbit-level Suzuki condition over a bounded window.",
        arguments=[
            argument("--space", required=True),
            argument("--map", dest="map"),
            argument("--start", required=True),
            argument("--budget", type=int),
            argument("--horizon", type=int, help="exclusive bound on m; the budget by default"),
            argument("--factor", default="s2", help="one, s2 or a rational"),
            argument("--s", help="the s to square for --factor s2"),
            argument("--eps", help="comma-separated tolerances"),
        ],
    )
    def suzuki(self, context: Context) -> int:
        args = context.args
        orbit = self._orbit(context)
        if not isinstance(orbit.space, GeneratedSpace) and args.factor == "s2" and args.s is None:
            raise InvalidParameters("factor s2 on a table space needs --s")
        s = parse_scalar(args.s) if args.s is not None else None
        factor = suzuki_factor(args.factor, orbit.space, s)
        eps = parse_scalar_list(args.eps) if args.eps else list(DEFAULT_EPSILONS)
        findings = check_suzuki(orbit, factor, eps, horizon=args.horizon)
        report = context.report
        report.line(f"factor {format_scalar(factor)}, window m < {findings[0].horizon}")
        report.record("factor", factor)
        report.record("horizon", findings[0].horizon)
        for finding in findings:
            key = f"eps[{format_scalar(finding.epsilon)}]"
            if finding.supported:
                result = finding.result
                text = f"eps={format_scalar(finding.epsilon)}: supported with delta={format_scalar(result.delta)} N={result.start_index}"
                report.status(True, text + " (up to horizon)")
                report.record(key, f"supported delta={format_scalar(result.delta)} N={result.start_index}")
            else:
                witnesses = finding.result.witnesses
                report.status(False, f"eps={format_scalar(finding.epsilon)}: refuted for {len(witnesses)} candidate(s)")
                first = witnesses[0]
                report.line(
                    f"    delta={format_scalar(first.delta)} N={first.start_index}: rho(u_{first.n}, u_{first.m}) = "
                    f"{format_scalar(first.premise)} but rho(u_{first.n + 1}, u_{first.m + 1}) = "
                    f"{format_scalar(first.conclusion)}"
                )
                report.record(key, f"refuted {len(witnesses)} candidate(s)")
        return 0 if all(finding.supported for finding in findings) else 1


def setup(lab) -> None:
    lab.add_cog(Picard(lab))
