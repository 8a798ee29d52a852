import io
import math
import os
import random
import tempfile

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from corpus.services.counting import LemmaCounts
from corpus.services.infocontent import ICTable, write_ic
from disambiguation.services.disambig import (
    DisambiguationOptions,
    GoldGrouping,
    WordGroup,
    annotate,
    disambiguate,
    merge_contributions,
    pair_contributions,
    top_senses,
)
from disambiguation.services.similarity import similarity, subsumers
from taxonomy.exceptions import (
    EmptyGroup,
    InvalidTestCase,
    NoSenses,
    RequiresAncestorExtension,
)
from taxonomy.graph import VIRTUAL_ROOT, Synset, build
from taxonomy.sample_data import (
    fixture_path,
    five_noun_ic,
    five_nouns,
    professional_ic,
    professionals,
    three_noun_ic,
    three_nouns,
    wordnet_excerpt,
)
from taxonomy.strategies import PROPERTY_SETTINGS, scenarios

EXTENDED = DisambiguationOptions(extend_ancestors=True)


def fixture_group(*words):
    return WordGroup(words=words)


def reference_disambiguation(t, ic, words, credit_ties=False, extend_ancestors=False):
    """Straight transcription of the group algorithm, no shared code with the service"""
    n = len(words)
    up = {s: set(t.ancestors(s)) for s in t.synsets}
    senses = []
    for word in words:
        direct = t.senses(word)
        if extend_ancestors:
            widened = set()
            for sense in direct:
                widened |= up[sense]
            senses.append(sorted(widened))
        else:
            senses.append(list(direct))
    support = [[0.0] * len(senses[i]) for i in range(n)]
    normalization = [0.0] * n

    for i in range(n):
        for j in range(i + 1, n):
            best, winners = None, []
            for concept in sorted(t.synsets):
                if ic.freq(concept) == 0:
                    continue
                if not any(concept in up[s] for s in t.senses(words[i])):
                    continue
                if not any(concept in up[s] for s in t.senses(words[j])):
                    continue
                value = -math.log(ic.freq(concept) / ic.total_N)
                if best is None or value > best:
                    best, winners = value, [concept]
                elif value == best:
                    winners.append(concept)
            winners.sort(key=lambda c: (-sum(1 for d in winners if d != c and d in up[c]), c))
            v = 0.0 if winners[0] == VIRTUAL_ROOT else best
            credited = winners if credit_ties else winners[:1]
            for k, sense in enumerate(senses[i]):
                if any(c in up[sense] for c in credited):
                    support[i][k] += v
            for k, sense in enumerate(senses[j]):
                if any(c in up[sense] for c in credited):
                    support[j][k] += v
            normalization[i] += v
            normalization[j] += v

    phi = {}
    for i in range(n):
        for k, sense in enumerate(senses[i]):
            if normalization[i] > 0:
                phi[words[i], sense] = support[i][k] / normalization[i]
            else:
                phi[words[i], sense] = 1.0 / len(senses[i])
    return phi


def all_phi(assignment):
    return {(entry.lemma, sense): phi for entry in assignment.words for sense, phi in entry.senses}


class SimilarityTests(SimpleTestCase):
    def test_subsumers(self):
        t = three_nouns()
        self.assertEqual(subsumers(t, "doctor", "lawyer"), {"professional", "person", VIRTUAL_ROOT})
        self.assertEqual(subsumers(t, "doctor", "dog"), {VIRTUAL_ROOT})

    def test_subsumers_are_reflexive(self):
        t = five_nouns()
        self.assertLessEqual(set(t.senses("doctor")), subsumers(t, "doctor", "doctor"))

    def test_similarity(self):
        result = similarity(three_nouns(), three_noun_ic(), "doctor", "lawyer")
        self.assertAlmostEqual(result.value, -math.log(3 / 4), places=12)
        self.assertEqual(result.mis, "professional")
        self.assertEqual(result.tied_mis, ("professional", "person"))

    def test_only_root_in_common(self):
        result = similarity(three_nouns(), three_noun_ic(), "doctor", "dog")
        self.assertEqual(result.value, 0.0)
        self.assertEqual(result.mis, VIRTUAL_ROOT)

    def test_plural_input(self):
        result = similarity(three_nouns(), three_noun_ic(), "Doctors", "lawyers")
        self.assertEqual(result.mis, "professional")

    def test_unknown_word(self):
        with self.assertRaises(NoSenses) as ctx:
            similarity(three_nouns(), three_noun_ic(), "doctor", "unicorn")
        self.assertIn("Not in WordNet", str(ctx.exception))

    def test_ties_along_a_chain_go_to_the_lower_concept(self):
        # person and professional are both seen only through doctor/lawyer
        ic = ICTable.from_counts(three_nouns(), LemmaCounts({"doctor": 1, "lawyer": 1, "dog": 2}))
        result = similarity(three_nouns(), ic, "doctor", "lawyer")
        self.assertEqual(result.tied_mis, ("professional", "person"))
        self.assertEqual(result.mis, "professional")

    def test_unrelated_ties_go_to_smallest_id(self):
        t = build(
            [
                Synset(id="g", words=("g",)),
                Synset(id="b", words=("b",), parents=("g",)),
                Synset(id="a", words=("a",), parents=("g",)),
                Synset(id="x", words=("x",), parents=("a", "b")),
                Synset(id="y", words=("y",), parents=("a", "b")),
                Synset(id="z", words=("z",)),
            ]
        )
        ic = ICTable.from_counts(t, LemmaCounts({"x": 1, "y": 1, "z": 1}))
        result = similarity(t, ic, "x", "y")
        self.assertEqual(result.tied_mis, ("a", "b", "g"))
        self.assertEqual(result.mis, "a")
        self.assertAlmostEqual(result.value, -math.log(2 / 3), places=12)

    @PROPERTY_SETTINGS
    @given(scenario=scenarios())
    def test_properties(self, scenario):
        records, counts, group = scenario
        t = build(records)
        ic = ICTable.from_counts(t, LemmaCounts(counts))
        ic2 = ic.with_log_base("2")
        w = group[0]
        self_value = similarity(t, ic, w, w).value
        for x in group:
            forward, backward = similarity(t, ic, w, x), similarity(t, ic, x, w)
            self.assertEqual(forward, backward)
            self.assertGreaterEqual(forward.value, 0.0)
            self.assertGreaterEqual(self_value, forward.value)
            self.assertIn(forward.mis, forward.tied_mis)
            self.assertEqual(similarity(t, ic2, w, x).tied_mis, forward.tied_mis)
            for word in (w, x):
                self.assertTrue(any(t.subsumes(forward.mis, s) for s in t.senses(word)))


class DisambiguationTests(SimpleTestCase):
    def setUp(self):
        self.t = five_nouns()
        self.ic = five_noun_ic()

    def test_fixture_phi(self):
        pa = disambiguate(self.t, self.ic, fixture_group("doctor", "nurse", "teacher"))
        self.assertAlmostEqual(pa.phi("doctor", "doctor_s1"), 1.0, places=12)
        self.assertAlmostEqual(pa.phi("doctor", "doctor_s2"), 0.3579, places=4)
        self.assertAlmostEqual(pa.phi("nurse", "nurse_s1"), 1.0, places=12)
        self.assertAlmostEqual(pa.phi("nurse", "nurse_s2"), 0.3579, places=4)
        self.assertAlmostEqual(pa.phi("teacher", "teacher_s1"), 1.0, places=12)

    def test_pair_log(self):
        pa = disambiguate(self.t, self.ic, fixture_group("doctor", "nurse", "teacher"))
        log = {(p.i, p.j): p for p in pa.pair_log}
        self.assertEqual(log[0, 1].mis, "health_prof")
        self.assertAlmostEqual(log[0, 1].value, -math.log(2 / 5), places=12)
        self.assertEqual(log[0, 2].mis, "person")
        self.assertAlmostEqual(log[1, 2].value, -math.log(3 / 5), places=12)
        self.assertAlmostEqual(pa.word("doctor").normalization, 1.4271, places=4)

    def test_support_is_a_sum_of_logs(self):
        pa = disambiguate(self.t, self.ic, fixture_group("doctor", "nurse", "teacher"))
        support = pa.word("doctor").support["doctor_s1"]
        self.assertAlmostEqual(math.exp(support), 1 / ((2 / 5) * (3 / 5)), places=9)

    def test_single_word_gets_uniform_phi(self):
        pa = disambiguate(self.t, self.ic, fixture_group("doctor"))
        self.assertEqual(pa.word("doctor").normalization, 0.0)
        self.assertEqual(dict(pa.word("doctor").senses), {"doctor_s1": 0.5, "doctor_s2": 0.5})
        self.assertEqual(pa.pair_log, ())

    def test_root_only_pair_gets_uniform_phi(self):
        pa = disambiguate(self.t, self.ic, fixture_group("doctor", "dog"))
        self.assertEqual(pa.pair_log[0].value, 0.0)
        self.assertEqual(pa.phi("doctor", "doctor_s2"), 0.5)
        self.assertEqual(pa.phi("dog", "dog"), 1.0)

    def test_empty_group(self):
        with self.assertRaises(EmptyGroup):
            disambiguate(self.t, self.ic, fixture_group())

    def test_group_from_tokens(self):
        group = WordGroup.from_tokens(self.t, ["Doctors", "nurse", "doctor", "cardinality", ""])
        self.assertEqual(group.words, ("doctor", "nurse"))
        self.assertEqual(group.skipped, ("cardinality",))

    def test_top_senses(self):
        pa = disambiguate(self.t, self.ic, fixture_group("doctor", "nurse", "teacher"))
        self.assertEqual(top_senses(pa, "doctor", 1), [("doctor_s1", 1.0)])
        self.assertEqual([s for s, _ in top_senses(pa, "doctor", 2)], ["doctor_s1", "doctor_s2"])
        self.assertEqual(top_senses(pa, "doctor", 0), [])

    def test_merge_order_does_not_matter(self):
        group = fixture_group("doctor", "nurse", "teacher", "dog")
        contributions = pair_contributions(self.t, self.ic, group)
        expected = merge_contributions(self.t, group, contributions)
        shuffled = list(contributions)
        random.Random(7).shuffle(shuffled)
        self.assertEqual(merge_contributions(self.t, group, shuffled), expected)

    def test_gold_grouping(self):
        gold = GoldGrouping(senses={"doctor": frozenset({"doctor_s1"})})
        gold.check(self.t)
        self.assertTrue(gold.contains("doctor", "doctor_s1"))
        self.assertFalse(gold.contains("nurse", "nurse_s1"))
        with self.assertRaises(InvalidTestCase):
            GoldGrouping(senses={"doctor": frozenset({"nurse_s1"})}).check(self.t)

    @PROPERTY_SETTINGS
    @given(scenario=scenarios(), credit_ties=st.booleans(), extend=st.booleans())
    def test_matches_reference_algorithm(self, scenario, credit_ties, extend):
        records, counts, group = scenario
        t = build(records)
        ic = ICTable.from_counts(t, LemmaCounts(counts))
        options = DisambiguationOptions(credit_ties=credit_ties, extend_ancestors=extend)
        phi = all_phi(disambiguate(t, ic, WordGroup(words=tuple(group)), options))
        expected = reference_disambiguation(t, ic, group, credit_ties, extend)
        self.assertEqual(set(phi), set(expected))
        for key, value in expected.items():
            self.assertAlmostEqual(phi[key], value, delta=1e-9)
            self.assertGreaterEqual(phi[key], 0.0)
            self.assertLessEqual(phi[key], 1.0)

    @PROPERTY_SETTINGS
    @given(scenario=scenarios(), seed=st.integers(min_value=0, max_value=1000))
    def test_word_order_does_not_matter(self, scenario, seed):
        records, counts, group = scenario
        t = build(records)
        ic = ICTable.from_counts(t, LemmaCounts(counts))
        permuted = list(group)
        random.Random(seed).shuffle(permuted)
        first = all_phi(disambiguate(t, ic, WordGroup(words=tuple(group))))
        second = all_phi(disambiguate(t, ic, WordGroup(words=tuple(permuted))))
        self.assertEqual(first, second)

    @PROPERTY_SETTINGS
    @given(scenario=scenarios())
    def test_supported_concepts_lie_above_a_sense(self, scenario):
        records, counts, group = scenario
        t = build(records)
        ic = ICTable.from_counts(t, LemmaCounts(counts))
        pa = disambiguate(t, ic, WordGroup(words=tuple(group)), EXTENDED)
        for entry in pa.words:
            for concept, value in entry.support.items():
                if value > 0:
                    self.assertTrue(any(t.subsumes(concept, s) for s in entry.direct_senses))


class AnnotationTests(SimpleTestCase):
    def test_fixture_annotation(self):
        t = five_nouns()
        pa = disambiguate(t, five_noun_ic(), fixture_group("doctor", "nurse", "teacher"), EXTENDED)
        self.assertAlmostEqual(pa.phi("doctor", "health_prof"), 1.0, places=12)
        self.assertEqual(
            annotate(t, pa),
            {"doctor": "health_prof", "nurse": "health_prof", "teacher": "person"},
        )

    def test_professional_pair(self):
        t = three_nouns()
        pa = disambiguate(t, three_noun_ic(), fixture_group("doctor", "lawyer"), EXTENDED)
        self.assertEqual(annotate(t, pa), {"doctor": "professional", "lawyer": "professional"})

    def test_medical_and_legal_professionals(self):
        t = professionals()
        pa = disambiguate(t, professional_ic(), fixture_group("doctor", "nurse", "lawyer"), EXTENDED)
        medical, legal = math.log(5 / 2), math.log(5 / 3)
        self.assertAlmostEqual(pa.phi("doctor", "health_prof"), 1.0, places=12)
        self.assertAlmostEqual(pa.phi("doctor", "doctor"), 1.0, places=12)
        self.assertAlmostEqual(pa.phi("doctor", "professional"), legal / (medical + legal), places=12)
        self.assertGreater(pa.phi("doctor", "professional"), 0.0)
        self.assertLess(pa.phi("doctor", "professional"), 1.0)
        self.assertEqual(pa.phi("doctor", "person"), 0.0)
        self.assertAlmostEqual(pa.phi("lawyer", "professional"), 1.0, places=12)
        self.assertEqual(
            annotate(t, pa),
            {"doctor": "health_prof", "nurse": "health_prof", "lawyer": "professional"},
        )

    def test_unsupported_word_keeps_its_own_sense(self):
        t = five_nouns()
        pa = disambiguate(t, five_noun_ic(), fixture_group("doctor", "dog"), EXTENDED)
        self.assertEqual(annotate(t, pa)["dog"], "dog")

    def test_requires_ancestor_extension(self):
        t = five_nouns()
        pa = disambiguate(t, five_noun_ic(), fixture_group("doctor", "nurse"))
        with self.assertRaises(RequiresAncestorExtension):
            annotate(t, pa)

    @PROPERTY_SETTINGS
    @given(scenario=scenarios())
    def test_annotation_is_never_below_the_best_sense(self, scenario):
        records, counts, group = scenario
        t = build(records)
        ic = ICTable.from_counts(t, LemmaCounts(counts))
        pa = disambiguate(t, ic, WordGroup(words=tuple(group)), EXTENDED)
        for lemma, concept in annotate(t, pa).items():
            entry = pa.word(lemma)
            self.assertNotEqual(concept, VIRTUAL_ROOT)
            self.assertTrue(any(t.subsumes(concept, s) for s in entry.direct_senses))
            best = max(entry.phi(s) for s in entry.direct_senses)
            self.assertGreaterEqual(entry.phi(concept), best - 1e-12)


class CommandTests(SimpleTestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = tmp.name
        self.ic_path = os.path.join(self.tmp, "five.ic")
        with open(self.ic_path, "w", encoding="utf-8") as handle:
            write_ic(five_noun_ic(), handle)
        self.common = {"taxonomy": fixture_path("five_nouns.syn"), "ic": self.ic_path}

    def run_command(self, name, *args, **options):
        stdout = io.StringIO()
        call_command(name, *args, stdout=stdout, **self.common, **options)
        return stdout.getvalue()

    def test_sim(self):
        output = self.run_command("sim", "doctor", "nurse")
        self.assertEqual(
            output.splitlines(),
            [
                "sim(doctor, nurse) = 0.9163",
                "mis: health_prof  health professional: a person who helps in identifying "
                "or preventing or treating illness",
                "tied=1",
            ],
        )

    def test_sim_unknown_word(self):
        self.assertEqual(self.run_command("sim", "doctor", "unicorn"), "'unicorn': Not in WordNet\n")

    def test_self_similarity_dominates(self):
        self_value = float(self.run_command("sim", "doctor", "doctor").splitlines()[0].split("= ")[1])
        for other in ("nurse", "teacher", "dog"):
            line = self.run_command("sim", "doctor", other).splitlines()[0]
            self.assertGreaterEqual(self_value, float(line.split("= ")[1]))

    def test_disambig_listing(self):
        output = self.run_command("disambig", group=["doctor,nurse,teacher,cardinality"])
        lines = output.splitlines()
        self.assertEqual(lines[0], "Group: doctor, nurse, teacher, cardinality")
        self.assertEqual(lines[1], "'cardinality': Not in WordNet")
        self.assertEqual(lines[2], "Word 'doctor'  (2 alternatives)")
        self.assertEqual(lines[3], "  1.0000  doctor_s1  doctor, physician: a licensed medical practitioner")
        self.assertEqual(lines[4], "  0.3579  doctor_s2  doctor: a person who holds a doctorate")
        self.assertIn("  1.0000  teacher_s1  teacher: a person whose occupation is teaching", lines)

    def test_disambig_top(self):
        output = self.run_command("disambig", group=["doctor,nurse"], top=1)
        self.assertEqual(sum(1 for line in output.splitlines() if line.startswith("  ")), 2)

    def test_disambig_is_reproducible(self):
        first = self.run_command("disambig", group=["doctor,nurse,teacher"], extend_ancestors=True)
        second = self.run_command("disambig", group=["doctor,nurse,teacher"], extend_ancestors=True)
        self.assertEqual(first, second)

    def test_sim_and_annotate_are_reproducible(self):
        for name, args, options in (
            ("sim", ("doctor", "nurse"), {}),
            ("annotate", (), {"group": "doctor,nurse,teacher,dog"}),
        ):
            first = self.run_command(name, *args, **options)
            self.assertEqual(first, self.run_command(name, *args, **options))
            self.assertTrue(first)

    def test_disambig_without_group(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_command("disambig")
        self.assertEqual(ctx.exception.returncode, 1)

    def test_disambig_all_unknown(self):
        with self.assertRaises(CommandError) as ctx:
            self.run_command("disambig", group=["unicorn,cardinality"])
        self.assertEqual(ctx.exception.returncode, 2)

    def test_annotate(self):
        output = self.run_command("annotate", group="doctor,nurse,teacher")
        self.assertEqual(
            [line.split("  ")[:3] for line in output.splitlines()],
            [
                ["doctor", "1.0000", "health_prof"],
                ["nurse", "1.0000", "health_prof"],
                ["teacher", "1.0000", "person"],
            ],
        )

    def test_missing_ic_table(self):
        with self.assertRaises(CommandError) as ctx:
            call_command(
                "sim", "doctor", "nurse",
                taxonomy=fixture_path("five_nouns.syn"), ic=os.path.join(self.tmp, "nope"),
                stdout=io.StringIO(),
            )
        self.assertEqual(ctx.exception.returncode, 2)

    def test_burglar_group_on_wordnet_excerpt(self):
        t = wordnet_excerpt()
        ic_path = os.path.join(self.tmp, "excerpt.ic")
        counts = LemmaCounts({"burglar": 1, "lookout": 1, "crate": 1, "structure": 2})
        with open(ic_path, "w", encoding="utf-8") as handle:
            write_ic(ICTable.from_counts(t, counts), handle)
        stdout = io.StringIO()
        call_command(
            "disambig",
            taxonomy=fixture_path("wordnet"),
            ic=ic_path,
            group_file=fixture_path("burglar_group.txt"),
            stdout=stdout,
        )
        lines = stdout.getvalue().splitlines()
        self.assertIn("'cardinality': Not in WordNet", lines)
        self.assertEqual(lines[lines.index("Word 'burglar'  (1 alternatives)") + 1].split()[:2],
                         ["1.0000", "00000566"])
        lookout = lines[lines.index("Word 'lookout'  (2 alternatives)") + 1]
        self.assertIn("00000707", lookout)
        crate = lines[lines.index("Word 'crate'  (2 alternatives)") + 1]
        self.assertIn("a rugged box", crate)
