"""
Disambiguation Service - Gán độ tin cậy phi cho từng nghĩa trong nhóm danh từ

Every pair of words in the group is compared; the pair's most informative
subsumer c and similarity v credit v to each sense lying under c. A sense's
phi is the share of its word's possible support it actually received, with a
uniform fallback when the word got no evidence at all.

Optionally each word's sense list is widened to every ancestor of its senses,
so that phi is also assigned to higher-level concepts; annotate() then picks
the highest concept that does at least as well as the best direct sense.
"""

import logging
import math
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from corpus.services.infocontent import ICTable
from taxonomy.exceptions import (
    EmptyCorpus,
    EmptyGroup,
    InvalidTestCase,
    RequiresAncestorExtension,
)
from taxonomy.graph import SynsetId, Taxonomy
from taxonomy.lemmas import normalize

from .similarity import SimilarityResult, similarity_from_closures, word_closure

logger = logging.getLogger(__name__)

# phi values within this distance count as equal when annotating
PHI_TOLERANCE = 1e-12


class WordGroup(BaseModel):
    """The set W of nouns, plus the input tokens missing from the taxonomy"""

    model_config = ConfigDict(frozen=True)

    words: Tuple[str, ...]
    skipped: Tuple[str, ...] = ()

    @classmethod
    def from_tokens(cls, t: Taxonomy, tokens: Iterable[str]) -> "WordGroup":
        words: List[str] = []
        skipped: List[str] = []
        for token in tokens:
            if not token or not token.strip():
                continue
            lemma = normalize(token, t)
            if not t.senses(lemma):
                if token.strip() not in skipped:
                    skipped.append(token.strip())
                continue
            # W là tập hợp: bỏ từ trùng
            if lemma not in words:
                words.append(lemma)
        return cls(words=tuple(words), skipped=tuple(skipped))


class DisambiguationOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    credit_ties: bool = False
    extend_ancestors: bool = False


class PairRecord(BaseModel):
    """One pairwise comparison: v[i, j] and c[i, j]"""

    model_config = ConfigDict(frozen=True)

    i: int
    j: int
    value: float
    mis: SynsetId
    tied_mis: Tuple[SynsetId, ...]


class PairContribution(BaseModel):
    """Support a single pair adds: credited senses per word index"""

    model_config = ConfigDict(frozen=True)

    pair: PairRecord
    credited: Dict[int, Tuple[SynsetId, ...]]


class WordPhi(BaseModel):
    model_config = ConfigDict(frozen=True)

    lemma: str
    direct_senses: Tuple[SynsetId, ...]
    senses: Tuple[Tuple[SynsetId, float], ...]
    support: Dict[SynsetId, float]
    normalization: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_phi_range(self) -> "WordPhi":
        for sense, phi in self.senses:
            if not 0.0 <= phi <= 1.0:
                raise ValueError(f"phi({self.lemma}, {sense}) = {phi} is outside [0, 1]")
        return self

    def phi(self, sense: SynsetId) -> float:
        for candidate, value in self.senses:
            if candidate == sense:
                return value
        raise KeyError(sense)

    @property
    def num_senses(self) -> int:
        return len(self.senses)


class PhiAssignment(BaseModel):
    model_config = ConfigDict(frozen=True)

    words: Tuple[WordPhi, ...]
    pair_log: Tuple[PairRecord, ...]
    skipped: Tuple[str, ...] = ()
    extended: bool = False
    credit_ties: bool = False

    def word(self, lemma: str) -> WordPhi:
        for entry in self.words:
            if entry.lemma == lemma:
                return entry
        raise KeyError(lemma)

    def phi(self, lemma: str, sense: SynsetId) -> float:
        return self.word(lemma).phi(sense)

    @property
    def lemmas(self) -> Tuple[str, ...]:
        return tuple(entry.lemma for entry in self.words)


class GoldGrouping(BaseModel):
    """Human-judged senses W' that truly belong to the group, per word"""

    model_config = ConfigDict(frozen=True)

    senses: Dict[str, FrozenSet[SynsetId]]

    def check(self, t: Taxonomy) -> None:
        for lemma, chosen in self.senses.items():
            stray = sorted(chosen - set(t.senses(lemma)))
            if stray:
                raise InvalidTestCase(f"{stray} are not senses of {lemma!r}")

    def contains(self, lemma: str, sense: SynsetId) -> bool:
        return sense in self.senses.get(lemma, frozenset())


# ============== PAIRWISE LOOP ==============


def candidate_senses(t: Taxonomy, lemma: str, extend_ancestors: bool) -> Tuple[SynsetId, ...]:
    """S_i, or S_i widened with every ancestor of its members"""
    senses = t.senses(lemma)
    if not extend_ancestors:
        return tuple(senses)
    return tuple(sorted(frozenset().union(*(t.closure(s) for s in senses))))


def pair_contributions(
    t: Taxonomy,
    ic: ICTable,
    group: WordGroup,
    options: Optional[DisambiguationOptions] = None,
) -> List[PairContribution]:
    """
    Evaluate every unordered pair i < j independently.

    Contributions do not depend on each other, so they can be computed in any
    order (or in parallel) and merged with merge_contributions().
    """
    options = options or DisambiguationOptions()
    closures: Dict[str, FrozenSet[SynsetId]] = {w: word_closure(t, w) for w in group.words}
    sense_lists = {
        w: candidate_senses(t, w, options.extend_ancestors) for w in group.words
    }
    sense_closures: Dict[SynsetId, FrozenSet[SynsetId]] = {}

    def under(sense: SynsetId, concepts: Sequence[SynsetId]) -> bool:
        if sense not in sense_closures:
            sense_closures[sense] = t.closure(sense)
        return any(c in sense_closures[sense] for c in concepts)

    contributions: List[PairContribution] = []
    for i, j in combinations(range(len(group.words)), 2):
        w_i, w_j = group.words[i], group.words[j]
        result: SimilarityResult = similarity_from_closures(t, ic, closures[w_i], closures[w_j])
        credit = result.tied_mis if options.credit_ties else (result.mis,)
        credited = {
            index: tuple(s for s in sense_lists[word] if under(s, credit))
            for index, word in ((i, w_i), (j, w_j))
        }
        contributions.append(
            PairContribution(
                pair=PairRecord(
                    i=i, j=j, value=result.value, mis=result.mis, tied_mis=result.tied_mis
                ),
                credited=credited,
            )
        )
    return contributions


def merge_contributions(
    t: Taxonomy,
    group: WordGroup,
    contributions: Iterable[PairContribution],
    options: Optional[DisambiguationOptions] = None,
) -> PhiAssignment:
    """
    Fold pair contributions into support, normalization and phi.

    Sums use math.fsum, so the result does not depend on merge order.
    """
    options = options or DisambiguationOptions()
    contributions = sorted(contributions, key=lambda c: (c.pair.i, c.pair.j))
    support_terms: Dict[Tuple[int, SynsetId], List[float]] = {}
    normalization_terms: Dict[int, List[float]] = {i: [] for i in range(len(group.words))}

    for contribution in contributions:
        value = contribution.pair.value
        for index in (contribution.pair.i, contribution.pair.j):
            normalization_terms[index].append(value)
            for sense in contribution.credited.get(index, ()):
                support_terms.setdefault((index, sense), []).append(value)

    words: List[WordPhi] = []
    for index, lemma in enumerate(group.words):
        senses = candidate_senses(t, lemma, options.extend_ancestors)
        normalization = math.fsum(normalization_terms[index])
        support = {s: math.fsum(support_terms.get((index, s), ())) for s in senses}
        if normalization > 0.0:
            phis = tuple((s, support[s] / normalization) for s in senses)
        else:
            phis = tuple((s, 1.0 / len(senses)) for s in senses)
        words.append(
            WordPhi(
                lemma=lemma,
                direct_senses=tuple(t.senses(lemma)),
                senses=phis,
                support=support,
                normalization=normalization,
            )
        )

    return PhiAssignment(
        words=tuple(words),
        pair_log=tuple(c.pair for c in contributions),
        skipped=group.skipped,
        extended=options.extend_ancestors,
        credit_ties=options.credit_ties,
    )


def disambiguate(
    t: Taxonomy,
    ic: ICTable,
    group: WordGroup,
    options: Optional[DisambiguationOptions] = None,
) -> PhiAssignment:
    """
    Assign phi to every sense of every word in the group.

    Args:
        t: taxonomy
        ic: information content table (N > 0)
        group: the noun group W
        options: credit_ties / extend_ancestors switches

    Returns:
        PhiAssignment with per-sense phi, support, normalization and pair log

    Raises:
        EmptyGroup: no word of the group has taxonomy senses
        EmptyCorpus: the IC table has N = 0
    """
    if not group.words:
        raise EmptyGroup()
    if ic.total_N <= 0:
        raise EmptyCorpus()
    options = options or DisambiguationOptions()
    contributions = pair_contributions(t, ic, group, options)
    assignment = merge_contributions(t, group, contributions, options)
    logger.info(
        "Disambiguated %d words over %d pairs (%d not in taxonomy)",
        len(group.words),
        len(contributions),
        len(group.skipped),
    )
    return assignment


# ============== PRESENTATION ==============


def top_senses(pa: PhiAssignment, word: str, k: int) -> List[Tuple[SynsetId, float]]:
    """Senses ranked by phi descending, SynsetId ascending on ties"""
    if k <= 0:
        return []
    ranked = sorted(pa.word(word).senses, key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def best_sense(pa: PhiAssignment, word: str) -> SynsetId:
    """Argmax phi over the word's direct senses, smallest SynsetId on ties"""
    entry = pa.word(word)
    direct = [(s, entry.phi(s)) for s in entry.direct_senses]
    return min(direct, key=lambda item: (-item[1], item[0]))[0]


def annotate(t: Taxonomy, pa: PhiAssignment) -> Dict[str, SynsetId]:
    """
    Highest-level concept whose phi is at least the best direct-sense phi.

    "Highest" is the largest upward IS-A distance from the word's own senses;
    ties go to larger phi, then smaller SynsetId. The virtual root is never an
    annotation, and a word that received no evidence keeps its best sense.

    Raises:
        RequiresAncestorExtension: pa was built without extend_ancestors
    """
    if not pa.extended:
        raise RequiresAncestorExtension()

    annotations: Dict[str, SynsetId] = {}
    for entry in pa.words:
        if entry.normalization <= 0.0:
            annotations[entry.lemma] = best_sense(pa, entry.lemma)
            continue
        threshold = max(entry.phi(s) for s in entry.direct_senses) - PHI_TOLERANCE
        heights = t.height_above(entry.direct_senses)
        candidates = [
            (sense, phi)
            for sense, phi in entry.senses
            if phi >= threshold and sense != t.virtual_root
        ]
        sense, _ = min(candidates, key=lambda item: (-heights[item[0]], -item[1], item[0]))
        annotations[entry.lemma] = sense
    return annotations
