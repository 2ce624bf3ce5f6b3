"""
Description:
📚 Run the claims shipped with the corpus, or a user's own .claims.json file.

Version: 1.0.0
"""

from bvslab.commands import Cog, Context, argument, command
from bvslab.corpus import evaluate_claims, load_corpus, shipped_names, write_corpus_report


class Corpus(Cog, name="corpus"):
    @command(
        name="corpus",
        description="List the shipped examples or re-check their claims.",
        arguments=[
            argument("action", choices=["run", "list"]),
            argument("name", nargs="?", default="all", help="a shipped name, a .claims.json path or 'all'"),
        ],
    )
    def corpus(self, context: Context) -> int:
        """
        ``list`` prints the shipped names; ``run`` exits 1 when any claim fails.

        :param context: The command context.
        """
        args = context.args
        report = context.report
        names = shipped_names(self.lab.corpus_dir)
        if args.action == "list":
            for name in names:
                entry = load_corpus(name, self.lab.corpus_dir)
                report.line(f"{name}: carrier {entry.space.carrier.describe()}, {len(entry.claims)} claim(s)")
            report.record("names", names)
            return 0
        selected = names if args.name == "all" else [args.name]
        reports = []
        for name in selected:
            entry = load_corpus(name, self.lab.corpus_dir)
            self.lab.logger.info(f"Checking {len(entry.claims)} claim(s) of '{entry.name}'")
            reports.append(evaluate_claims(entry))
        write_corpus_report(reports, report)
        return 0 if all(corpus_report.passed for corpus_report in reports) else 1


def setup(lab) -> None:
    lab.add_cog(Corpus(lab))
