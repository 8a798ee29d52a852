"""
Similarity Service - Độ tương đồng dựa trên lượng thông tin (IC)

sim(w1, w2) is the largest information content among concepts subsuming
some sense of w1 and some sense of w2. The maximizing concept is the most
informative subsumer (MIS).
"""

from typing import FrozenSet, Tuple

from pydantic import BaseModel, ConfigDict

from corpus.services.infocontent import UNOBSERVED, ICTable
from taxonomy.exceptions import EmptyCorpus, NoSenses
from taxonomy.graph import SynsetId, Taxonomy
from taxonomy.lemmas import normalize


class SimilarityResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    mis: SynsetId
    tied_mis: Tuple[SynsetId, ...]


def word_closure(t: Taxonomy, lemma: str) -> FrozenSet[SynsetId]:
    """Union of ancestors-or-self over every sense of the lemma"""
    senses = t.senses(lemma)
    if not senses:
        raise NoSenses(lemma)
    return frozenset().union(*(t.closure(sense) for sense in senses))


def subsumers(t: Taxonomy, w1: str, w2: str) -> FrozenSet[SynsetId]:
    """Concepts subsuming both words, in any sense of either word"""
    return word_closure(t, normalize(w1, t)) & word_closure(t, normalize(w2, t))


def most_informative(
    t: Taxonomy, ic: ICTable, candidates: FrozenSet[SynsetId]
) -> Tuple[SynsetId, ...]:
    """
    Observed candidates with the smallest frequency, most specific first.

    Smallest freq is largest IC in any log base, so ties are exact integer ties.
    A tied concept lying under other tied concepts comes before them, and the
    SynsetId orders what is left.
    """
    observed = [c for c in candidates if ic.freq(c) > 0]
    if not observed:
        return ()
    lowest = min(ic.freq(c) for c in observed)
    tied = [c for c in observed if ic.freq(c) == lowest]

    def specificity(c: SynsetId) -> int:
        closure = t.closure(c)
        return sum(1 for other in tied if other != c and other in closure)

    return tuple(sorted(tied, key=lambda c: (-specificity(c), c)))


def similarity_from_closures(
    t: Taxonomy, ic: ICTable, closure_1: FrozenSet[SynsetId], closure_2: FrozenSet[SynsetId]
) -> SimilarityResult:
    """Core of sim(): works on precomputed word closures"""
    tied = most_informative(t, ic, closure_1 & closure_2)
    if not tied:
        # Only reachable with a table that never saw the root
        tied = (t.virtual_root,)
    mis = tied[0]
    value = ic.ic(mis)
    if value is UNOBSERVED or mis == t.virtual_root:
        value = 0.0
    return SimilarityResult(value=value, mis=mis, tied_mis=tied)


def similarity(t: Taxonomy, ic: ICTable, w1: str, w2: str) -> SimilarityResult:
    """
    Compute sim(w1, w2) and its most informative subsumer.

    Returns:
        SimilarityResult; value 0 with mis = virtual root when only the root
        is an observed common subsumer

    Raises:
        NoSenses: either word is absent from the taxonomy
    """
    if ic.total_N <= 0:
        raise EmptyCorpus()
    return similarity_from_closures(
        t, ic, word_closure(t, normalize(w1, t)), word_closure(t, normalize(w2, t))
    )
