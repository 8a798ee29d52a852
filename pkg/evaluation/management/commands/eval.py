"""
Score the disambiguator against judged test cases.

Usage:
    python manage.py eval cases.tsv --taxonomy five_nouns.syn --ic ic.tsv --runs 10
"""

from django.conf import settings
from django.core.management.base import CommandError

from evaluation.services.harness import evaluate_judges, read_cases, render_report
from taxonomy.management.base import USAGE_ERROR, BaseWsdCommand


class Command(BaseWsdCommand):
    help = "Forced-choice accuracy per judge with a random-choice baseline"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("cases", help="tab-separated test cases")
        parser.add_argument("--runs", type=int, help="random baseline runs")
        parser.add_argument("--min-confidence", type=int)
        parser.add_argument("--sample-stddev", action="store_true")

    def run(self, config, *args, **options):
        runs = options.get("runs")
        if runs is None:
            runs = settings.WSD_BASELINE_RUNS
        if runs < 1:
            raise CommandError("--runs must be at least 1", returncode=USAGE_ERROR)
        min_confidence = options.get("min_confidence")
        if min_confidence is None:
            min_confidence = settings.WSD_MIN_CONFIDENCE

        taxonomy = self._get_taxonomy()
        ic = self._get_ic()
        with open(options["cases"], encoding="utf-8") as handle:
            cases = read_cases(taxonomy, handle)

        reports = evaluate_judges(
            taxonomy,
            ic,
            cases,
            config.disambiguation_options,
            runs=runs,
            seed=config.seed,
            sample_stddev=options.get("sample_stddev", False),
            min_confidence=min_confidence,
        )
        self.stdout.write("\n".join(render_report(report) for report in reports), ending="")
