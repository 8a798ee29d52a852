"""
Exceptions dùng chung cho toàn bộ project WSD.

Every error raised by the taxonomy, corpus, disambiguation and evaluation
services derives from WsdError, so the management commands can map the whole
family to a data-error exit status.
"""

from typing import Optional, Sequence


class WsdError(Exception):
    """Base class for all domain errors"""


# ============== TAXONOMY ==============


class TaxonomyError(WsdError):
    """Structural problem with an IS-A taxonomy"""


class DuplicateId(TaxonomyError):
    def __init__(self, synset_id: str):
        self.synset_id = synset_id
        super().__init__(f"duplicate synset id {synset_id!r}")


class CycleDetected(TaxonomyError):
    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        path = " -> ".join(self.cycle + self.cycle[:1])
        super().__init__(f"IS-A cycle detected: {path}")


class DanglingParent(TaxonomyError):
    def __init__(self, child: str, parent: str):
        self.child = child
        self.parent = parent
        super().__init__(f"synset {child!r} names unknown parent {parent!r}")


class UnknownSynset(TaxonomyError):
    def __init__(self, synset_id: str):
        self.synset_id = synset_id
        super().__init__(f"unknown synset {synset_id!r}")


# ============== PARSING ==============


class ParseError(WsdError):
    def __init__(self, line_number: Optional[int], reason: str):
        self.line_number = line_number
        self.reason = reason
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{where}{reason}")


class WrongPartOfSpeech(ParseError):
    """A non-noun synset showed up in a noun data file"""


# ============== CORPUS / INFORMATION CONTENT ==============


class UnknownLemma(WsdError):
    def __init__(self, lemma: str):
        self.lemma = lemma
        super().__init__(f"lemma {lemma!r} is not in the taxonomy")


class NoSenses(WsdError):
    def __init__(self, lemma: str):
        self.lemma = lemma
        super().__init__(f"{lemma!r}: Not in WordNet")


class EmptyCorpus(WsdError):
    def __init__(self):
        super().__init__("empty corpus")


class LogBaseMismatch(WsdError):
    def __init__(self, stored: str, requested: str):
        self.stored = stored
        self.requested = requested
        super().__init__(
            f"IC table was built with log base {stored!r}, but {requested!r} was requested"
        )


# ============== DISAMBIGUATION ==============


class EmptyGroup(WsdError):
    def __init__(self):
        super().__init__("word group has no words with taxonomy senses")


class RequiresAncestorExtension(WsdError):
    def __init__(self):
        super().__init__("annotation needs a phi assignment built with extend_ancestors")


# ============== EVALUATION ==============


class AllCasesExcluded(WsdError):
    def __init__(self, excluded: int):
        self.excluded = excluded
        super().__init__(f"all test cases were excluded ({excluded} low-confidence)")


class TargetNotInGroup(WsdError):
    def __init__(self, target: str):
        self.target = target
        super().__init__(f"target {target!r} is not among the group's words")


class InvalidTestCase(WsdError):
    """Gold sense is not a sense of the target, or the record is malformed"""
