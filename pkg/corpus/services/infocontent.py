"""
Information Content Service - Lan truyền tần suất và tính IC

freq(c) sums count(n) over the distinct nouns having some sense under c,
Pr(c) = freq(c) / N, and ic(c) = -log Pr(c). Concepts never observed carry
UNOBSERVED instead of an infinite IC.
"""

import enum
import logging
import math
from types import MappingProxyType
from typing import Dict, Mapping, Optional, TextIO, Union

from taxonomy.exceptions import EmptyCorpus, LogBaseMismatch, ParseError, UnknownLemma
from taxonomy.graph import SynsetId, Taxonomy

from .counting import LemmaCounts

logger = logging.getLogger(__name__)

LOG_BASES = {"e": math.e, "2": 2.0}


class Unobserved(enum.Enum):
    UNOBSERVED = "unobserved"

    def __repr__(self) -> str:
        return "UNOBSERVED"


UNOBSERVED = Unobserved.UNOBSERVED

ICValue = Union[float, Unobserved]


class FrequencyTable:
    """Propagated integer frequencies freq(c) and the corpus total N"""

    def __init__(self, freq: Mapping[SynsetId, int], total_N: int):
        self._freq = MappingProxyType(dict(freq))
        self.total_N = total_N

    @property
    def freq(self) -> Mapping[SynsetId, int]:
        return self._freq

    def __getitem__(self, synset_id: SynsetId) -> int:
        return self._freq.get(synset_id, 0)

    def observed(self, synset_id: SynsetId) -> bool:
        return self[synset_id] > 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrequencyTable):
            return NotImplemented
        # Zero entries are implicit
        mine = {k: v for k, v in self._freq.items() if v}
        theirs = {k: v for k, v in other._freq.items() if v}
        return self.total_N == other.total_N and mine == theirs


def propagate(t: Taxonomy, counts: LemmaCounts) -> FrequencyTable:
    """
    Push lemma counts up the taxonomy.

    Each noun contributes count(n) at most once to a concept, even when
    several of its senses fall under that concept.

    Raises:
        UnknownLemma: a counted lemma is not in the taxonomy
    """
    freq: Dict[SynsetId, int] = {synset_id: 0 for synset_id in t.synsets}
    for lemma, count in counts.counts.items():
        senses = t.senses(lemma)
        if not senses:
            raise UnknownLemma(lemma)
        covered = frozenset().union(*(t.closure(sense) for sense in senses))
        for synset_id in covered:
            freq[synset_id] += count

    table = FrequencyTable(freq, counts.total_N)
    logger.info(
        "Propagated N=%d over %d synsets (%d observed)",
        table.total_N,
        len(freq),
        sum(1 for value in freq.values() if value > 0),
    )
    return table


def probability(ft: FrequencyTable, c: SynsetId) -> float:
    """Relative frequency freq(c) / N"""
    if ft.total_N <= 0:
        raise EmptyCorpus()
    return ft[c] / ft.total_N


def information_content(ft: FrequencyTable, c: SynsetId, log_base: str = "e") -> ICValue:
    """-log Pr(c), or UNOBSERVED when freq(c) is 0"""
    if ft.total_N <= 0:
        raise EmptyCorpus()
    frequency = ft[c]
    if frequency == 0:
        return UNOBSERVED
    if frequency == ft.total_N:
        return 0.0
    return -math.log(frequency / ft.total_N, LOG_BASES[log_base])


class ICTable:
    """Information content view over a frequency table in a fixed log base"""

    def __init__(self, frequencies: FrequencyTable, log_base: str = "e"):
        if log_base not in LOG_BASES:
            raise ValueError(f"log base must be one of {sorted(LOG_BASES)}, got {log_base!r}")
        if frequencies.total_N <= 0:
            raise EmptyCorpus()
        self.frequencies = frequencies
        self.log_base = log_base

    @classmethod
    def from_counts(cls, t: Taxonomy, counts: LemmaCounts, log_base: str = "e") -> "ICTable":
        return cls(propagate(t, counts), log_base)

    @property
    def total_N(self) -> int:
        return self.frequencies.total_N

    def freq(self, c: SynsetId) -> int:
        return self.frequencies[c]

    def probability(self, c: SynsetId) -> float:
        return probability(self.frequencies, c)

    def ic(self, c: SynsetId) -> ICValue:
        return information_content(self.frequencies, c, self.log_base)

    def with_log_base(self, log_base: str) -> "ICTable":
        return ICTable(self.frequencies, log_base)


# ============== PERSISTENCE ==============


def write_ic(table: ICTable, handle: TextIO) -> None:
    """<synset-id>\\t<freq> lines, then #N and #logbase records"""
    for synset_id in sorted(table.frequencies.freq):
        frequency = table.frequencies.freq[synset_id]
        if frequency:
            handle.write(f"{synset_id}\t{frequency}\n")
    handle.write(f"#N\t{table.total_N}\n")
    handle.write(f"#logbase\t{table.log_base}\n")


def read_ic(handle: TextIO, log_base: Optional[str] = None) -> ICTable:
    """
    Reload a persisted IC table without the corpus.

    Args:
        handle: text stream in the write_ic format
        log_base: expected base; a stored base that differs is an error

    Raises:
        ParseError: malformed line or missing #N
        LogBaseMismatch: stored base differs from the requested one
    """
    freq: Dict[SynsetId, int] = {}
    total = None
    stored_base = None
    for line_number, line in enumerate(handle, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(line_number, "expected <synset-id>\\t<freq>")
        key, value = fields
        if key == "#logbase":
            if value not in LOG_BASES:
                raise ParseError(line_number, f"unknown log base {value!r}")
            stored_base = value
            continue
        try:
            number = int(value)
        except ValueError:
            raise ParseError(line_number, f"bad frequency {value!r}") from None
        if number < 0:
            raise ParseError(line_number, "negative frequency")
        if key == "#N":
            total = number
        else:
            freq[key] = number

    if total is None:
        raise ParseError(None, "IC table has no #N record")
    if stored_base is None:
        raise ParseError(None, "IC table has no #logbase record")
    if log_base is not None and log_base != stored_base:
        raise LogBaseMismatch(stored_base, log_base)
    return ICTable(FrequencyTable(freq, total), stored_base)
