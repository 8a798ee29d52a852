import io

import networkx as nx
from django.test import SimpleTestCase
from hypothesis import given

from taxonomy.exceptions import (
    CycleDetected,
    DanglingParent,
    DuplicateId,
    ParseError,
    UnknownSynset,
    WrongPartOfSpeech,
)
from taxonomy.graph import VIRTUAL_ROOT, Synset, ancestors, build, senses
from taxonomy.loaders import (
    dump_synthetic,
    load_synthetic,
    load_wordnet,
    parse_data_line,
    parse_index_noun,
    validate_index,
)
from taxonomy.sample_data import fixture_path, five_nouns, wordnet_excerpt
from taxonomy.strategies import PROPERTY_SETTINGS, synset_records

BURGLAR_LINE = (
    "00000566 18 n 01 burglar 0 003 @ 00000441 n 0000 + 01234567 v 0101 ~i 00001540 n 0000 "
    "| a thief who enters a building with intent to steal  \n"
)


def chain():
    return build(
        [
            Synset(id="person", words=("person",)),
            Synset(id="professional", words=("professional",), parents=("person",)),
            Synset(id="doctor_syn", words=("doctor",), parents=("professional",)),
        ]
    )


class BuildTests(SimpleTestCase):
    def test_parentless_synsets_hang_under_virtual_root(self):
        t = build([Synset(id="animal", words=("animal",)), Synset(id="artifact", words=("artifact",))])
        self.assertEqual(t.children(VIRTUAL_ROOT), ("animal", "artifact"))
        self.assertEqual(t.parents("animal"), (VIRTUAL_ROOT,))

    def test_empty_input_gives_root_only(self):
        t = build([])
        self.assertEqual(list(t.synsets), [VIRTUAL_ROOT])
        self.assertEqual(t.lemmas, ())

    def test_two_cycle_is_rejected(self):
        with self.assertRaises(CycleDetected) as ctx:
            build([Synset(id="a", words=("a",), parents=("b",)), Synset(id="b", words=("b",), parents=("a",))])
        self.assertEqual(sorted(ctx.exception.cycle), ["a", "b"])

    def test_self_parenting_is_a_cycle(self):
        with self.assertRaises(CycleDetected):
            build([Synset(id="a", words=("a",), parents=("a",))])

    def test_dangling_parent(self):
        with self.assertRaises(DanglingParent) as ctx:
            build([Synset(id="a", words=("a",), parents=("missing",))])
        self.assertEqual(ctx.exception.parent, "missing")

    def test_duplicate_id(self):
        with self.assertRaises(DuplicateId):
            build([Synset(id="a", words=("a",)), Synset(id="a", words=("b",))])

    def test_root_id_is_reserved(self):
        with self.assertRaises(DuplicateId):
            build([Synset(id=VIRTUAL_ROOT, words=("x",))])

    def test_lemma_index_is_ordered_by_synset_id(self):
        t = five_nouns()
        self.assertEqual(t.senses("doctor"), ["doctor_s1", "doctor_s2"])
        self.assertEqual(t.senses("nurse"), ["nurse_s1", "nurse_s2"])
        self.assertEqual(t.senses("cardinality"), [])

    def test_words_are_lowercased_and_deduplicated(self):
        synset = Synset(id="a", words=("Doctor", "doctor", "Physician"))
        self.assertEqual(synset.words, ("doctor", "physician"))


class AncestorTests(SimpleTestCase):
    def test_root_is_its_own_only_ancestor(self):
        self.assertEqual(ancestors(chain(), VIRTUAL_ROOT), (VIRTUAL_ROOT,))

    def test_chain(self):
        self.assertEqual(
            set(ancestors(chain(), "doctor_syn")),
            {"doctor_syn", "professional", "person", VIRTUAL_ROOT},
        )

    def test_diamond_grandparent_appears_once(self):
        t = build(
            [
                Synset(id="g", words=("g",)),
                Synset(id="p1", words=("p1",), parents=("g",)),
                Synset(id="p2", words=("p2",), parents=("g",)),
                Synset(id="s", words=("s",), parents=("p1", "p2")),
            ]
        )
        result = ancestors(t, "s")
        self.assertEqual(result.count("g"), 1)
        self.assertEqual(result, tuple(sorted(result)))

    def test_unknown_synset(self):
        with self.assertRaises(UnknownSynset):
            ancestors(chain(), "nope")

    def test_senses_normalizes_the_lemma(self):
        t = five_nouns()
        self.assertEqual(senses(t, "Doctors"), ["doctor_s1", "doctor_s2"])
        self.assertEqual(senses(t, "health professional"), ["health_prof"])
        self.assertEqual(senses(t, "Health Professionals"), ["health_prof"])

    def test_height_above_counts_upward_steps(self):
        heights = five_nouns().height_above(["doctor_s1", "doctor_s2"])
        self.assertEqual(heights["doctor_s1"], 0)
        self.assertEqual(heights["health_prof"], 1)
        self.assertEqual(heights["person"], 2)
        self.assertEqual(heights[VIRTUAL_ROOT], 3)

    def test_describe(self):
        t = five_nouns()
        self.assertEqual(t.describe("doctor_s1"), "doctor, physician: a licensed medical practitioner")
        self.assertEqual(t.describe("nurse_s2"), "nurse, nanny: subconcept of caregiver")
        self.assertEqual(t.describe(VIRTUAL_ROOT), "virtual root")

    @PROPERTY_SETTINGS
    @given(records=synset_records())
    def test_structural_invariants(self, records):
        t = build(records)
        self.assertTrue(nx.is_directed_acyclic_graph(t.graph))
        for synset_id in t.synsets:
            closure = set(ancestors(t, synset_id))
            self.assertIn(VIRTUAL_ROOT, closure)
            for parent in t.parents(synset_id):
                self.assertLessEqual(set(ancestors(t, parent)), closure)

    @PROPERTY_SETTINGS
    @given(records=synset_records())
    def test_ancestors_match_parent_walk(self, records):
        t = build(records)
        for synset_id in t.synsets:
            seen, frontier = {synset_id}, [synset_id]
            while frontier:
                for parent in t.synsets[frontier.pop()].parents:
                    if parent not in seen:
                        seen.add(parent)
                        frontier.append(parent)
            self.assertEqual(set(ancestors(t, synset_id)), seen)


class SyntheticFormatTests(SimpleTestCase):
    def test_five_noun_fixture(self):
        t = five_nouns()
        self.assertEqual(len(t), 12)
        self.assertEqual(t.children(VIRTUAL_ROOT), ("animal", "person"))
        self.assertEqual(t.synset("scholar").gloss, None)

    def test_empty_file(self):
        self.assertEqual(list(load_synthetic("").synsets), [VIRTUAL_ROOT])

    def test_comments_and_blank_lines_are_skipped(self):
        t = load_synthetic("# comment\n\nSYN a WORDS x PARENTS\n")
        self.assertEqual(t.senses("x"), ["a"])

    def test_duplicate_syn_id(self):
        with self.assertRaises(DuplicateId):
            load_synthetic("SYN a WORDS x PARENTS\nSYN a WORDS y PARENTS\n")

    def test_malformed_line_reports_line_number(self):
        with self.assertRaises(ParseError) as ctx:
            load_synthetic("SYN a WORDS x PARENTS\nSYN b PARENTS a\n")
        self.assertEqual(ctx.exception.line_number, 2)

    def test_gloss_without_parents(self):
        t = load_synthetic("SYN a WORDS x PARENTS GLOSS the top\n")
        self.assertEqual(t.synset("a").gloss, "the top")
        self.assertEqual(t.parents("a"), (VIRTUAL_ROOT,))

    def test_round_trip(self):
        t = five_nouns()
        reloaded = load_synthetic(dump_synthetic(t))
        self.assertEqual(dict(reloaded.synsets), dict(t.synsets))
        self.assertTrue(nx.utils.graphs_equal(reloaded.graph, t.graph))

    @PROPERTY_SETTINGS
    @given(records=synset_records())
    def test_round_trip_random(self, records):
        t = build(records)
        reloaded = load_synthetic(dump_synthetic(t))
        self.assertEqual(dict(reloaded.synsets), dict(t.synsets))


class WordnetLoaderTests(SimpleTestCase):
    def test_burglar_line(self):
        record = parse_data_line(BURGLAR_LINE, 1)
        self.assertEqual(record.synset_offset, "00000566")
        self.assertEqual(record.words, (("burglar", 0),))
        self.assertEqual(len(record.pointers), 3)
        self.assertEqual(record.hypernyms(), ("00000441",))
        synset = record.to_synset()
        self.assertEqual(synset.words, ("burglar",))
        self.assertEqual(synset.parents, ("00000441",))
        self.assertEqual(synset.gloss, "a thief who enters a building with intent to steal")

    def test_header_only_file(self):
        header = b"  1 This software and database is being provided to you\n  2 more text\n"
        self.assertEqual(list(load_wordnet(header).synsets), [VIRTUAL_ROOT])

    def test_pointer_to_missing_offset(self):
        with self.assertRaises(DanglingParent):
            load_wordnet(BURGLAR_LINE.encode("utf-8"))

    def test_non_noun_synset(self):
        line = "00001740 29 v 01 breathe 0 000 | draw air into, and expel out of, the lungs\n"
        with self.assertRaises(WrongPartOfSpeech):
            parse_data_line(line, 7)

    def test_word_count_mismatch(self):
        with self.assertRaises(ParseError):
            parse_data_line("00000548 18 n 03 burglar 0 000 | x\n", 1)

    def test_excerpt(self):
        t = wordnet_excerpt()
        self.assertEqual(t.senses("burglar"), ["00000566"])
        self.assertEqual(t.senses("lookout"), ["00000707", "00000963"])
        self.assertEqual(t.senses("crate"), ["00001075", "00001444"])
        self.assertEqual(t.children(VIRTUAL_ROOT), ("00000151",))
        # @i counts as IS-A
        self.assertEqual(t.parents("00001540"), ("00000566",))
        self.assertIn("00000151", t.closure("00000566"))
        self.assertIn("lookout_man", t)

    def test_offsets_match_byte_positions(self):
        with open(fixture_path("wordnet", "data.noun"), "rb") as data_noun:
            t = load_wordnet(data_noun, verify_offsets=True)
        self.assertEqual(len(t), 13)

    def test_offset_verification_catches_shifted_lines(self):
        with open(fixture_path("wordnet", "data.noun"), "rb") as data_noun:
            shifted = b"  extra header line\n" + data_noun.read()
        with self.assertRaises(ParseError):
            load_wordnet(shifted, verify_offsets=True)

    def test_index_matches_data(self):
        with open(fixture_path("wordnet", "index.noun"), "rb") as index_noun:
            index = parse_index_noun(index_noun)
        self.assertEqual(index["crate"], ("00001075", "00001444"))
        self.assertEqual(validate_index(wordnet_excerpt(), index), [])

    def test_index_problems_are_reported(self):
        index = parse_index_noun(b"burglar n 1 1 @ 1 0 00000707\nghost n 1 0 1 0 09999999\n")
        with self.assertLogs("taxonomy.loaders", level="WARNING"):
            problems = validate_index(wordnet_excerpt(), index)
        self.assertEqual(len(problems), 2)

    def test_index_synset_count_mismatch(self):
        with self.assertRaises(ParseError):
            parse_index_noun(io.BytesIO(b"burglar n 2 1 @ 1 0 00000566\n"))
