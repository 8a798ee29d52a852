import io
import math
import os
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from corpus.services.counting import (
    NOUN_LIST,
    LemmaCounts,
    count_stream,
    count_tokens,
    merge_counts,
    read_counts,
    tokenize,
    write_counts,
)
from corpus.services.infocontent import (
    UNOBSERVED,
    FrequencyTable,
    ICTable,
    information_content,
    probability,
    propagate,
    read_ic,
    write_ic,
)
from taxonomy.exceptions import EmptyCorpus, LogBaseMismatch, ParseError, UnknownLemma
from taxonomy.graph import VIRTUAL_ROOT, Synset, build
from taxonomy.lemmas import normalize, singularize
from taxonomy.sample_data import (
    THREE_NOUN_COUNTS,
    fixture_path,
    five_nouns,
    three_noun_ic,
    three_nouns,
)
from taxonomy.strategies import PROPERTY_SETTINGS, lemma_counts, lemmas_of, synset_records


class NormalizationTests(SimpleTestCase):
    def setUp(self):
        self.lemmas = {"burglar", "doctor", "glass", "glasses", "man", "person", "box", "city",
                       "health_professional"}

    def test_singularize(self):
        self.assertEqual(singularize("burglars", self.lemmas), "burglar")
        self.assertEqual(singularize("doctor", self.lemmas), "doctor")
        self.assertEqual(singularize("glasses", self.lemmas), "glasses")
        self.assertEqual(singularize("boxes", self.lemmas), "box")
        self.assertEqual(singularize("cities", self.lemmas), "city")
        self.assertEqual(singularize("men", self.lemmas), "man")
        self.assertEqual(singularize("people", self.lemmas), "person")

    def test_unknown_plural_is_left_alone(self):
        self.assertEqual(singularize("qwzxs", self.lemmas), "qwzxs")

    def test_normalize_collocations(self):
        self.assertEqual(normalize("Health Professionals", self.lemmas), "health_professional")
        self.assertEqual(normalize("  Doctors ", self.lemmas), "doctor")

    def test_tokenize(self):
        self.assertEqual(tokenize("The doctor's dogs, two."), ["The", "doctor's", "dogs", "two"])


class CountingTests(SimpleTestCase):
    def test_plural_and_case_forms_are_counted_together(self):
        counts = count_tokens(three_nouns(), ["doctor", "doctors", "Doctor"])
        self.assertEqual(counts.counts, {"doctor": 3})
        self.assertEqual(counts.total_N, 3)

    def test_unknown_tokens_are_ignored(self):
        counts = count_tokens(three_nouns(), ["qwzx"])
        self.assertEqual(counts.counts, {})
        self.assertEqual(counts.total_N, 0)
        self.assertEqual(counts.skipped, {"qwzx": 1})

    def test_three_noun_tally(self):
        counts = count_tokens(three_nouns(), ["doctor", "lawyer", "dog", "dog"])
        self.assertEqual(counts.counts, {"doctor": 1, "lawyer": 1, "dog": 2})
        self.assertEqual(counts.total_N, 4)

    def test_noun_list_mode_reports_unknown_nouns(self):
        with self.assertLogs("corpus.services.counting", level="WARNING"):
            counts = count_tokens(five_nouns(), ["health professional", "unicorn"], NOUN_LIST)
        self.assertEqual(counts.counts, {"health_professional": 1})
        self.assertEqual(counts.skipped_total, 1)

    def test_raw_text_is_unigram_only(self):
        counts = count_tokens(five_nouns(), tokenize("a health professional"))
        self.assertEqual(counts.counts, {})

    def test_unknown_mode(self):
        with self.assertRaises(ValueError):
            count_tokens(three_nouns(), ["doctor"], "tagged")

    def test_count_stream(self):
        with open(fixture_path("five_nouns_corpus.txt"), encoding="utf-8") as stream:
            counts = count_stream(five_nouns(), stream)
        self.assertEqual(counts.counts, {"doctor": 1, "dog": 2, "nurse": 1, "teacher": 1})
        self.assertEqual(counts.skipped_total, 9)

    @PROPERTY_SETTINGS
    @given(
        tokens=st.lists(st.sampled_from(["doctor", "doctors", "lawyer", "dog", "dogs", "cat"])),
        split=st.integers(min_value=0, max_value=20),
    )
    def test_shards_add_up(self, tokens, split):
        t = three_nouns()
        whole = count_tokens(t, tokens)
        left, right = count_tokens(t, tokens[:split]), count_tokens(t, tokens[split:])
        self.assertEqual(left + right, whole)
        self.assertEqual(right + left, whole)
        self.assertEqual(count_tokens(t, list(reversed(tokens))), whole)
        self.assertEqual(whole.total_N, sum(whole.counts.values()))

    def test_merge_is_associative(self):
        a, b, c = LemmaCounts({"x": 1}), LemmaCounts({"x": 2, "y": 1}), LemmaCounts({"z": 4})
        self.assertEqual((a + b) + c, a + (b + c))
        self.assertEqual(merge_counts([a, b, c]).counts, {"x": 3, "y": 1, "z": 4})

    def test_counts_file(self):
        buffer = io.StringIO()
        write_counts(LemmaCounts(THREE_NOUN_COUNTS), buffer)
        self.assertTrue(buffer.getvalue().endswith("#N\t4\n"))
        buffer.seek(0)
        self.assertEqual(read_counts(buffer), LemmaCounts(THREE_NOUN_COUNTS))

    def test_counts_file_with_wrong_total(self):
        with self.assertRaises(ParseError):
            read_counts(io.StringIO("doctor\t2\n#N\t5\n"))


def brute_force_freq(t, counts):
    """For each concept, test every noun's senses for subsumption directly"""
    freq = {}
    for concept in t.synsets:
        total = 0
        for lemma, count in counts.items():
            if any(t.subsumes(concept, sense) for sense in t.senses(lemma)):
                total += count
        freq[concept] = total
    return freq


class PropagationTests(SimpleTestCase):
    def test_three_noun_fixture(self):
        ft = propagate(three_nouns(), LemmaCounts(THREE_NOUN_COUNTS))
        self.assertEqual(ft["professional"], 3)
        self.assertEqual(ft["person"], 3)
        self.assertEqual(ft["animal"], 1)
        self.assertEqual(ft[VIRTUAL_ROOT], 4)

    def test_two_senses_under_one_concept_count_once(self):
        t = build(
            [
                Synset(id="c", words=("c",)),
                Synset(id="s1", words=("bank",), parents=("c",)),
                Synset(id="s2", words=("bank",), parents=("c",)),
            ]
        )
        ft = propagate(t, LemmaCounts({"bank": 5}))
        self.assertEqual(ft["c"], 5)
        self.assertEqual(ft["s1"], 5)

    def test_empty_counts(self):
        ft = propagate(three_nouns(), LemmaCounts())
        self.assertTrue(all(value == 0 for value in ft.freq.values()))
        with self.assertRaises(EmptyCorpus):
            probability(ft, "person")
        with self.assertRaises(EmptyCorpus):
            ICTable(ft)

    def test_unknown_lemma(self):
        with self.assertRaises(UnknownLemma):
            propagate(three_nouns(), LemmaCounts({"unicorn": 1}))

    def test_probability(self):
        ft = propagate(three_nouns(), LemmaCounts(THREE_NOUN_COUNTS))
        self.assertEqual(probability(ft, "professional"), 0.75)
        self.assertEqual(probability(ft, VIRTUAL_ROOT), 1.0)

    def test_information_content(self):
        ic = three_noun_ic()
        self.assertAlmostEqual(ic.ic("professional"), -math.log(0.75), places=12)
        self.assertAlmostEqual(ic.ic("professional"), 0.2877, places=4)
        self.assertEqual(ic.ic(VIRTUAL_ROOT), 0.0)
        self.assertAlmostEqual(ic.with_log_base("2").ic("animal"), 2.0, places=12)

    def test_unobserved_concept(self):
        t = build([Synset(id="a", words=("a",)), Synset(id="b", words=("b",))])
        ft = propagate(t, LemmaCounts({"a": 3}))
        self.assertEqual(probability(ft, "b"), 0.0)
        self.assertIs(information_content(ft, "b"), UNOBSERVED)

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_matches_brute_force_oracle(self, data):
        records = data.draw(synset_records())
        counts = data.draw(lemma_counts(lemmas_of(records)))
        t = build(records)
        ft = propagate(t, LemmaCounts(counts))
        for concept, expected in brute_force_freq(t, counts).items():
            self.assertEqual(ft[concept], expected)
        self.assertEqual(ft[VIRTUAL_ROOT], ft.total_N)

    @PROPERTY_SETTINGS
    @given(data=st.data())
    def test_monotone_along_every_edge(self, data):
        records = data.draw(synset_records())
        counts = data.draw(lemma_counts(lemmas_of(records)))
        t = build(records)
        ic = ICTable.from_counts(t, LemmaCounts(counts))
        for child, parent in t.graph.edges:
            self.assertGreaterEqual(ic.freq(parent), ic.freq(child))
            self.assertLessEqual(ic.freq(child), ic.total_N)
            if ic.freq(child) > 0:
                self.assertLessEqual(ic.ic(parent), ic.ic(child))


class ICFileTests(SimpleTestCase):
    def test_write_then_read(self):
        table = three_noun_ic()
        buffer = io.StringIO()
        write_ic(table, buffer)
        self.assertIn("#N\t4\n", buffer.getvalue())
        self.assertIn("#logbase\te\n", buffer.getvalue())
        buffer.seek(0)
        reloaded = read_ic(buffer, "e")
        self.assertEqual(reloaded.frequencies, table.frequencies)
        self.assertEqual(reloaded.ic("professional"), table.ic("professional"))

    def test_log_base_mismatch(self):
        buffer = io.StringIO()
        write_ic(three_noun_ic("2"), buffer)
        buffer.seek(0)
        with self.assertRaises(LogBaseMismatch):
            read_ic(buffer, "e")

    def test_missing_total(self):
        with self.assertRaises(ParseError):
            read_ic(io.StringIO("person\t3\n#logbase\te\n"))

    def test_frequency_table_equality(self):
        self.assertEqual(FrequencyTable({"a": 1}, 1), FrequencyTable({"a": 1}, 1))
        self.assertNotEqual(FrequencyTable({"a": 1}, 1), FrequencyTable({"a": 1}, 2))


class BuildICCommandTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.out = os.path.join(self.tmp.name, "ic.tsv")

    def write_corpus(self, text):
        path = os.path.join(self.tmp.name, "corpus.txt")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        return path

    def test_four_token_corpus(self):
        stdout = io.StringIO()
        counts_out = os.path.join(self.tmp.name, "counts.tsv")
        call_command(
            "build_ic",
            self.write_corpus("doctor lawyer dog dogs"),
            taxonomy=fixture_path("three_nouns.syn"),
            out=self.out,
            counts_out=counts_out,
            stdout=stdout,
        )
        self.assertEqual(stdout.getvalue(), "N=4\nvocabulary=3\nskipped=0\n")
        with open(self.out, encoding="utf-8") as handle:
            self.assertIn("#N\t4\n", handle.read())
        with open(counts_out, encoding="utf-8") as handle:
            self.assertEqual(read_counts(handle).counts, {"doctor": 1, "dog": 2, "lawyer": 1})

    def test_empty_corpus(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "build_ic",
                self.write_corpus("nothing here matches"),
                taxonomy=fixture_path("three_nouns.syn"),
                out=self.out,
                stdout=io.StringIO(),
            )
        self.assertEqual(str(ctx.exception), "empty corpus")
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertFalse(os.path.exists(self.out))

    def test_reload_with_other_log_base_fails(self):
        call_command(
            "build_ic",
            self.write_corpus("doctor lawyer dog dog"),
            taxonomy=fixture_path("three_nouns.syn"),
            out=self.out,
            log_base="2",
            stdout=io.StringIO(),
        )
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "sim",
                "doctor",
                "lawyer",
                taxonomy=fixture_path("three_nouns.syn"),
                ic=self.out,
                log_base="e",
                stdout=io.StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_output_is_a_usage_error(self):
        with self.settings(WSD_IC_PATH=""):
            with self.assertRaises(CommandError) as ctx:
                call_command(
                    "build_ic",
                    self.write_corpus("doctor"),
                    taxonomy=fixture_path("three_nouns.syn"),
                    stdout=io.StringIO(),
                )
        self.assertEqual(ctx.exception.returncode, 1)

    def test_output_is_reproducible(self):
        corpus = self.write_corpus("doctor lawyer dog dog")
        outputs = []
        for name in ("a.tsv", "b.tsv"):
            path = os.path.join(self.tmp.name, name)
            call_command(
                "build_ic", corpus, taxonomy=fixture_path("three_nouns.syn"), out=path,
                stdout=io.StringIO(),
            )
            with open(path, "rb") as handle:
                outputs.append(handle.read())
        self.assertEqual(outputs[0], outputs[1])
