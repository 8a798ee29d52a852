"""
Corpus Counting Service - Đếm tần suất danh từ trong corpus

Tokens are lowercased and plural forms are folded onto taxonomy lemmas; only
tokens that end up on a taxonomy lemma are counted as noun instances.
"""

import logging
import re
from collections import Counter
from typing import Dict, Iterable, List, Mapping, Optional, TextIO

from taxonomy.exceptions import ParseError
from taxonomy.graph import Taxonomy
from taxonomy.lemmas import normalize, singularize

logger = logging.getLogger(__name__)

RAW_TEXT = "raw-text"
NOUN_LIST = "noun-list"
MODES = (RAW_TEXT, NOUN_LIST)

_TOKEN = re.compile(r"[A-Za-z]+(?:['-][A-Za-z]+)*")


def tokenize(text: str) -> List[str]:
    """Unigram tokens for raw-text mode"""
    return _TOKEN.findall(text)


class LemmaCounts:
    """count(n) per lemma plus the total N of accepted noun instances"""

    def __init__(
        self,
        counts: Optional[Mapping[str, int]] = None,
        skipped: Optional[Mapping[str, int]] = None,
    ):
        self._counts = Counter({k: v for k, v in (counts or {}).items() if v > 0})
        self._skipped = Counter(skipped or {})

    @property
    def counts(self) -> Dict[str, int]:
        return dict(sorted(self._counts.items()))

    @property
    def total_N(self) -> int:
        return sum(self._counts.values())

    @property
    def skipped(self) -> Dict[str, int]:
        return dict(sorted(self._skipped.items()))

    @property
    def skipped_total(self) -> int:
        return sum(self._skipped.values())

    def __getitem__(self, lemma: str) -> int:
        return self._counts.get(lemma, 0)

    def __len__(self) -> int:
        return len(self._counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LemmaCounts):
            return NotImplemented
        return self._counts == other._counts and self._skipped == other._skipped

    def __add__(self, other: "LemmaCounts") -> "LemmaCounts":
        return self.merge(other)

    def merge(self, other: "LemmaCounts") -> "LemmaCounts":
        """Shard merge: plain addition, so associative and commutative"""
        return LemmaCounts(self._counts + other._counts, self._skipped + other._skipped)

    def __repr__(self) -> str:
        return f"LemmaCounts(N={self.total_N}, vocabulary={len(self)})"


def count_tokens(t: Taxonomy, tokens: Iterable[str], mode: str = RAW_TEXT) -> LemmaCounts:
    """
    Tally noun instances.

    Args:
        t: taxonomy whose lemmas define what counts as a noun
        tokens: token stream (raw-text mode) or one noun per item (noun-list mode)
        mode: "raw-text" or "noun-list"

    Returns:
        LemmaCounts with the skipped-token report attached
    """
    if mode not in MODES:
        raise ValueError(f"unknown counting mode {mode!r}")

    counts: Counter = Counter()
    skipped: Counter = Counter()
    for token in tokens:
        if not token or not token.strip():
            continue
        if mode == RAW_TEXT:
            # Raw text is unigram-only; no collocations
            lemma = singularize(token.strip().lower(), t)
        else:
            lemma = normalize(token, t)
        if lemma in t:
            counts[lemma] += 1
        else:
            skipped[token.strip().lower()] += 1

    result = LemmaCounts(counts, skipped)
    if mode == NOUN_LIST and skipped:
        logger.warning("Skipped %d nouns not in the taxonomy", result.skipped_total)
    logger.info("Counted %d noun instances, %d skipped", result.total_N, result.skipped_total)
    return result


def count_stream(t: Taxonomy, stream: TextIO, mode: str = RAW_TEXT) -> LemmaCounts:
    """Count a text file: tokenized for raw-text, one noun per line for noun-list"""
    if mode == RAW_TEXT:
        tokens = (token for line in stream for token in tokenize(line))
    else:
        tokens = (line.strip() for line in stream)
    return count_tokens(t, tokens, mode)


# ============== PERSISTENCE ==============


def write_counts(counts: LemmaCounts, handle: TextIO) -> None:
    for lemma, count in counts.counts.items():
        handle.write(f"{lemma}\t{count}\n")
    handle.write(f"#N\t{counts.total_N}\n")


def read_counts(handle: TextIO) -> LemmaCounts:
    counts: Dict[str, int] = {}
    declared_total = None
    for line_number, line in enumerate(handle, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ParseError(line_number, "expected <lemma>\\t<count>")
        key, value = fields
        try:
            number = int(value)
        except ValueError:
            raise ParseError(line_number, f"bad count {value!r}") from None
        if key == "#N":
            declared_total = number
        elif key.startswith("#"):
            continue
        else:
            counts[key] = number
    result = LemmaCounts(counts)
    if declared_total is not None and declared_total != result.total_N:
        raise ParseError(None, f"#N is {declared_total} but counts sum to {result.total_N}")
    return result


def merge_counts(shards: Iterable[LemmaCounts]) -> LemmaCounts:
    merged = LemmaCounts()
    for shard in shards:
        merged = merged + shard
    return merged
