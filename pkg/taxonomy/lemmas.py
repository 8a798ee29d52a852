"""
Lemma normalization - Chuẩn hoá token về lemma của taxonomy

Shared by the taxonomy lookups and the corpus counter, so a word is folded
the same way whether it is counted or queried.
"""

from typing import Container, Iterator

IRREGULAR_PLURALS = {
    "men": "man",
    "women": "woman",
    "children": "child",
    "feet": "foot",
    "teeth": "tooth",
    "people": "person",
    "mice": "mouse",
    "geese": "goose",
}

_SIBILANT_ES = ("ses", "xes", "zes", "ches", "shes")


def _plural_candidates(token: str) -> Iterator[str]:
    if token in IRREGULAR_PLURALS:
        yield IRREGULAR_PLURALS[token]
    if token.endswith("ies") and len(token) > 3:
        yield token[:-3] + "y"
    if token.endswith(_SIBILANT_ES):
        yield token[:-2]
    if token.endswith("s") and not token.endswith("ss") and len(token) > 1:
        yield token[:-1]


def singularize(token: str, lemmas: Container[str]) -> str:
    """
    Fold an English plural onto its singular.

    The folded form is used only when it is a taxonomy lemma and the token
    itself is not; otherwise the token is returned unchanged.
    """
    if token in lemmas:
        return token
    for candidate in _plural_candidates(token):
        if candidate in lemmas:
            return candidate
    return token


def normalize(token: str, lemmas: Container[str]) -> str:
    """Lowercase, join collocations with underscores, fold plurals"""
    lemma = "_".join(token.strip().lower().split())
    if lemma in lemmas or "_" not in lemma:
        return singularize(lemma, lemmas)
    # Collocations fold on their last element: "health_professionals"
    head, _, last = lemma.rpartition("_")
    for candidate in _plural_candidates(last):
        if f"{head}_{candidate}" in lemmas:
            return f"{head}_{candidate}"
    return lemma

