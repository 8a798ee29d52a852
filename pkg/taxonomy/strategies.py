"""
Hypothesis strategies for random taxonomies, corpus counts and noun groups.

Synset i may only take parents among synsets 0..i-1, so every drawn
taxonomy is acyclic.
"""

from typing import Dict, List, Tuple

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from .graph import Synset

PROPERTY_SETTINGS = settings(
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

MAX_SYNSETS = 30
MAX_GROUP = 8
MAX_SENSES = 4

_LEMMAS = [f"w{i}" for i in range(14)]


@st.composite
def synset_records(draw: st.DrawFn, max_synsets: int = MAX_SYNSETS) -> List[Synset]:
    size = draw(st.integers(min_value=1, max_value=max_synsets))
    usage: Dict[str, int] = {}
    records: List[Synset] = []
    for index in range(size):
        synset_id = f"s{index:02d}"
        parents: Tuple[str, ...] = ()
        if index:
            parents = tuple(
                draw(
                    st.lists(
                        st.sampled_from([f"s{j:02d}" for j in range(index)]),
                        max_size=3,
                        unique=True,
                    )
                )
            )
        available = [lemma for lemma in _LEMMAS if usage.get(lemma, 0) < MAX_SENSES]
        if not available:
            available = [f"x{index}"]
        words = draw(st.lists(st.sampled_from(available), min_size=1, max_size=2, unique=True))
        for word in words:
            usage[word] = usage.get(word, 0) + 1
        records.append(Synset(id=synset_id, words=tuple(words), parents=parents))
    return records


def lemmas_of(records: List[Synset]) -> List[str]:
    return sorted({word for record in records for word in record.words})


@st.composite
def lemma_counts(draw: st.DrawFn, lemmas: List[str]) -> Dict[str, int]:
    counts = {
        lemma: draw(st.integers(min_value=0, max_value=6))
        for lemma in lemmas
    }
    if not any(counts.values()):
        counts[lemmas[0]] = 1
    return counts


@st.composite
def scenarios(draw: st.DrawFn) -> Tuple[List[Synset], Dict[str, int], List[str]]:
    """(synset records, positive-total lemma counts, noun group)"""
    records = draw(synset_records())
    lemmas = lemmas_of(records)
    counts = draw(lemma_counts(lemmas))
    group = draw(
        st.lists(st.sampled_from(lemmas), min_size=1, max_size=MAX_GROUP, unique=True)
    )
    return records, counts, group
