import io
import math
import os
import tempfile
import unittest

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from corpus.services.counting import count_stream
from corpus.services.infocontent import ICTable, write_ic
from disambiguation.services.disambig import (
    DisambiguationOptions,
    WordGroup,
    annotate,
    disambiguate,
    top_senses,
)
from disambiguation.services.similarity import similarity
from evaluation.services.harness import TestCase as JudgedCase
from evaluation.services.harness import (
    agreement,
    evaluate_judges,
    random_baseline,
    read_cases,
    render_report,
    retained_cases,
    score,
)
from taxonomy.exceptions import (
    AllCasesExcluded,
    InvalidTestCase,
    ParseError,
    TargetNotInGroup,
)
from taxonomy.loaders import load_taxonomy
from taxonomy.sample_data import fixture_path, five_noun_ic, five_nouns

DOCTOR_NURSE_TEACHER = WordGroup(words=("doctor", "nurse", "teacher"))


def judged(target, gold, confidence=4, judge="1", group=DOCTOR_NURSE_TEACHER):
    return JudgedCase(judge=judge, confidence=confidence, target=target, gold=gold, group=group)


def fixture_cases():
    with open(fixture_path("five_nouns_cases.tsv"), encoding="utf-8") as handle:
        return read_cases(five_nouns(), handle)


class ScoreTests(SimpleTestCase):
    def setUp(self):
        self.t = five_nouns()
        self.ic = five_noun_ic()

    def test_monosemous_target_is_always_right(self):
        report = score(self.t, self.ic, [judged("teacher", "teacher_s1")])
        self.assertEqual(report.n_correct, 1)
        self.assertEqual(report.accuracy, 1.0)
        self.assertEqual(report.baseline_mean, 1.0)
        self.assertEqual(report.baseline_stddev, 0.0)

    def test_doctor_in_medical_group(self):
        report = score(self.t, self.ic, [judged("doctor", "doctor_s1")])
        self.assertEqual((report.n_considered, report.n_correct), (1, 1))

    def test_wrong_gold_counts_as_miss(self):
        report = score(self.t, self.ic, [judged("doctor", "doctor_s2")])
        self.assertEqual(report.n_correct, 0)
        self.assertEqual(report.accuracy, 0.0)

    def test_low_confidence_cases_are_excluded(self):
        cases = [judged("doctor", "doctor_s1"), judged("nurse", "nurse_s2", confidence=1)]
        report = score(self.t, self.ic, cases)
        self.assertEqual(report.n_considered, 1)
        self.assertEqual(report.excluded_low_confidence, 1)

    def test_lowering_confidence_drops_exactly_that_case(self):
        cases = [judged("doctor", "doctor_s1", judge="2"), judged("nurse", "nurse_s2", 2, "2")]
        before = score(self.t, self.ic, cases)
        cases[1] = cases[1].model_copy(update={"confidence": 0})
        after = score(self.t, self.ic, cases)
        self.assertEqual(before.n_considered - 1, after.n_considered)
        self.assertEqual(before.excluded_low_confidence + 1, after.excluded_low_confidence)
        self.assertEqual((before.accuracy, after.accuracy), (0.5, 1.0))

    def test_all_cases_excluded(self):
        with self.assertRaises(AllCasesExcluded) as ctx:
            score(self.t, self.ic, [judged("doctor", "doctor_s1", confidence=0)])
        self.assertEqual(ctx.exception.excluded, 1)

    def test_target_not_in_group(self):
        with self.assertRaises(TargetNotInGroup):
            score(self.t, self.ic, [judged("dog", "dog")])

    def test_gold_must_be_a_sense_of_the_target(self):
        with self.assertRaises(InvalidTestCase):
            score(self.t, self.ic, [judged("doctor", "nurse_s1")])

    def test_prediction_matches_argmax_phi(self):
        assignment = disambiguate(self.t, self.ic, DOCTOR_NURSE_TEACHER)
        nurse = assignment.word("nurse")
        self.assertGreater(nurse.phi("nurse_s1"), nurse.phi("nurse_s2"))
        report = score(self.t, self.ic, [judged("nurse", "nurse_s1")])
        self.assertEqual(report.n_correct, 1)

    def test_retained_cases_threshold(self):
        cases = [judged("doctor", "doctor_s1", confidence=c) for c in range(5)]
        retained, excluded = retained_cases(cases, min_confidence=3)
        self.assertEqual([case.confidence for case in retained], [3, 4])
        self.assertEqual(excluded, 3)


class RandomBaselineTests(SimpleTestCase):
    def setUp(self):
        self.t = five_nouns()

    def test_deterministic_given_seed(self):
        cases = [judged("doctor", "doctor_s1"), judged("nurse", "nurse_s2")]
        first = random_baseline(self.t, cases, runs=25, seed=7)
        second = random_baseline(self.t, cases, runs=25, seed=7)
        self.assertEqual(first, second)

    def test_two_sense_targets_average_one_half(self):
        group = WordGroup(words=("doctor", "nurse"))
        cases = [judged("doctor", "doctor_s1" if k % 2 else "doctor_s2", group=group) for k in range(40)]
        runs = 1000
        mean, stddev = random_baseline(self.t, cases, runs=runs, seed=11)
        standard_error = math.sqrt(0.25 / (len(cases) * runs))
        self.assertLessEqual(abs(mean - 0.5), 4 * standard_error)
        self.assertGreater(stddev, 0.0)

    def test_mixed_sense_counts_match_analytic_expectation(self):
        group = WordGroup(words=("doctor", "teacher"))
        cases = [judged("doctor", "doctor_s2", group=group) for _ in range(20)]
        cases += [judged("teacher", "teacher_s1", group=group) for _ in range(20)]
        runs = 1000
        mean, _ = random_baseline(self.t, cases, runs=runs, seed=5)
        expected = sum(1 / len(self.t.senses(case.target)) for case in cases) / len(cases)
        self.assertEqual(expected, 0.75)
        per_run_variance = sum(
            (1 / len(self.t.senses(case.target))) * (1 - 1 / len(self.t.senses(case.target)))
            for case in cases
        ) / len(cases) ** 2
        self.assertLessEqual(abs(mean - expected), 4 * math.sqrt(per_run_variance / runs))

    def test_sample_stddev_uses_bessel_correction(self):
        cases = [judged("doctor", "doctor_s1"), judged("nurse", "nurse_s1")]
        _, population = random_baseline(self.t, cases, runs=20, seed=3)
        _, sample = random_baseline(self.t, cases, runs=20, seed=3, sample_stddev=True)
        self.assertAlmostEqual(sample, population * math.sqrt(20 / 19))

    def test_single_run_has_zero_spread(self):
        _, stddev = random_baseline(self.t, [judged("doctor", "doctor_s1")], runs=1, seed=0, sample_stddev=True)
        self.assertEqual(stddev, 0.0)

    def test_runs_must_be_positive(self):
        with self.assertRaises(ValueError):
            random_baseline(self.t, [judged("doctor", "doctor_s1")], runs=0, seed=0)


class JudgeTests(SimpleTestCase):
    def setUp(self):
        self.t = five_nouns()
        self.ic = five_noun_ic()
        self.cases = fixture_cases()

    def test_read_cases(self):
        self.assertEqual(len(self.cases), 5)
        self.assertEqual(self.cases[2].group.words, ("doctor", "teacher"))
        self.assertEqual(self.cases[4].gold, "nurse_s2")

    def test_read_cases_drops_unknown_group_words(self):
        cases = read_cases(self.t, io.StringIO("# header\n1\t3\tdoctors\tdoctor_s1\tdoctors,nurse,unicorn\n"))
        self.assertEqual(cases[0].target, "doctor")
        self.assertEqual(cases[0].group.words, ("doctor", "nurse"))
        self.assertEqual(cases[0].group.skipped, ("unicorn",))

    def test_read_cases_rejects_short_lines(self):
        with self.assertRaises(ParseError) as ctx:
            read_cases(self.t, io.StringIO("1\t4\tdoctor\tdoctor_s1\tdoctor,nurse\n1\t4\tdoctor\n"))
        self.assertEqual(ctx.exception.line_number, 2)

    def test_read_cases_rejects_out_of_range_confidence(self):
        with self.assertRaises(ParseError):
            read_cases(self.t, io.StringIO("1\t5\tdoctor\tdoctor_s1\tdoctor,nurse\n"))

    def test_agreement(self):
        self.assertEqual(agreement(self.cases, "1", "2"), 0.5)
        self.assertEqual(agreement(self.cases, "2", "1"), 0.5)
        self.assertIsNone(agreement(self.cases, "1", "nobody"))

    def test_evaluate_judges(self):
        first, second = evaluate_judges(self.t, self.ic, self.cases, runs=10, seed=0)
        self.assertEqual(first.judge, "1")
        self.assertEqual((first.n_considered, first.n_correct), (2, 2))
        self.assertEqual(first.excluded_low_confidence, 1)
        self.assertEqual(first.upper_bound, 0.5)
        self.assertEqual(second.judge, "2")
        self.assertEqual(second.accuracy, 0.5)
        self.assertEqual(second.upper_bound, 0.5)

    def test_single_judge_has_no_upper_bound(self):
        reports = evaluate_judges(self.t, self.ic, [c for c in self.cases if c.judge == "1"])
        self.assertEqual(len(reports), 1)
        self.assertIsNone(reports[0].upper_bound)

    def test_render_report(self):
        report = evaluate_judges(self.t, self.ic, self.cases, runs=10, seed=0)[0]
        lines = render_report(report).splitlines()
        self.assertEqual(lines[0], "Judge 1")
        self.assertIn("accuracy=1.000000", lines)
        self.assertIn("baseline_runs=10", lines)
        self.assertIn("excluded_low_confidence=1", lines)
        self.assertIn("upper_bound=0.500000", lines)
        self.assertIn("min_confidence=2", lines)
        self.assertIn("excluded (confidence < 2)", lines[5])

    def test_report_label_follows_the_threshold(self):
        report = evaluate_judges(self.t, self.ic, self.cases, min_confidence=4)[0]
        text = render_report(report)
        self.assertIn("excluded (confidence < 4)", text)
        self.assertIn("excluded_low_confidence=2\n", text)
        self.assertIn("min_confidence=4\n", text)

    def test_judge_without_retained_cases_is_skipped(self):
        cases = [judged("doctor", "doctor_s1", 4, "1"), judged("doctor", "doctor_s2", 1, "2")]
        with self.assertLogs("evaluation.services.harness", level="WARNING"):
            reports = evaluate_judges(self.t, self.ic, cases)
        self.assertEqual([report.judge for report in reports], ["1"])
        self.assertEqual(reports[0].n_correct, 1)
        self.assertEqual(reports[0].upper_bound, 0.0)

    def test_every_judge_excluded(self):
        cases = [judged("doctor", "doctor_s1", 1, "1"), judged("nurse", "nurse_s1", 0, "2")]
        with self.assertRaises(AllCasesExcluded) as ctx:
            evaluate_judges(self.t, self.ic, cases)
        self.assertEqual(ctx.exception.excluded, 2)


class EvalCommandTests(SimpleTestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.ic_path = os.path.join(tmp.name, "five.ic")
        with open(self.ic_path, "w", encoding="utf-8") as handle:
            write_ic(five_noun_ic(), handle)

    def run_eval(self, **options):
        stdout = io.StringIO()
        call_command(
            "eval",
            fixture_path("five_nouns_cases.tsv"),
            taxonomy=fixture_path("five_nouns.syn"),
            ic=self.ic_path,
            stdout=stdout,
            **options,
        )
        return stdout.getvalue()

    def test_reports_every_judge_with_baseline(self):
        output = self.run_eval(runs=10, seed=4)
        self.assertIn("Judge 1", output)
        self.assertIn("Judge 2", output)
        for key in ("baseline_mean=", "baseline_stddev=", "baseline_runs=10"):
            self.assertEqual(output.count(key), 2)

    def test_output_is_reproducible(self):
        self.assertEqual(self.run_eval(runs=50, seed=9), self.run_eval(runs=50, seed=9))

    def test_min_confidence_option(self):
        output = self.run_eval(min_confidence=4)
        self.assertIn("excluded_low_confidence=2", output)

    def test_zero_runs_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_eval(runs=0)
        self.assertEqual(ctx.exception.returncode, 1)

    def test_missing_cases_file(self):
        stdout = io.StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "eval",
                os.path.join(os.path.dirname(self.ic_path), "nope.tsv"),
                taxonomy=fixture_path("five_nouns.syn"),
                ic=self.ic_path,
                stdout=stdout,
            )
        self.assertEqual(ctx.exception.returncode, 2)


@unittest.skipUnless(
    settings.WSD_WORDNET_DIR and settings.WSD_CORPUS_PATH,
    "set WSD_WORDNET_DIR and WSD_CORPUS_PATH to run against WordNet",
)
class WordnetCorpusTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.t = load_taxonomy(settings.WSD_WORDNET_DIR)
        with open(settings.WSD_CORPUS_PATH, encoding="utf-8") as handle:
            cls.ic = ICTable.from_counts(cls.t, count_stream(cls.t, handle))

    def test_similarity_ordering(self):
        values = [
            similarity(self.t, self.ic, "doctor", other).value
            for other in ("nurse", "lawyer", "man", "medicine")
        ]
        nurse, lawyer, man, medicine = values
        self.assertGreater(nurse, lawyer)
        self.assertGreater(lawyer, man)
        self.assertGreater(man, medicine)
        self.assertGreaterEqual(medicine, 0.0)

    def test_burglar_group(self):
        words = "burglars thief rob mugging stray robbing lookout chase crate thieves".split()
        assignment = disambiguate(self.t, self.ic, WordGroup.from_tokens(self.t, words))
        self.assertEqual(assignment.word("burglar").senses[0][1], 1.0)
        (lookout, _), = top_senses(assignment, "lookout", 1)
        self.assertIn("sentinel", self.t.describe(lookout))
        (crate, _), = top_senses(assignment, "crate", 1)
        self.assertIn("rugged box", self.t.describe(crate))

    def test_burglar_is_monosemous(self):
        self.assertEqual(len(self.t.senses("burglar")), 1)

    def test_medical_group_shares_an_annotation(self):
        group = WordGroup.from_tokens(self.t, ["doctor", "nurse", "lawyer"])
        assignment = disambiguate(self.t, self.ic, group, DisambiguationOptions(extend_ancestors=True))
        labels = annotate(self.t, assignment)
        self.assertEqual(labels["doctor"], labels["nurse"])
        self.assertNotEqual(labels["doctor"], labels["lawyer"])
