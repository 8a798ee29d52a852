"""
Taxonomy - Cây phân loại IS-A cho danh từ

An immutable DAG of synsets joined by IS-A edges. Every input root is hung
under a synthesized virtual root, so any two synsets share at least one
upper bound.
"""

import logging
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, field_validator

from .exceptions import CycleDetected, DanglingParent, DuplicateId, UnknownSynset
from .lemmas import normalize

logger = logging.getLogger(__name__)

# Sorts before every digit and letter.
VIRTUAL_ROOT = "*root*"

SynsetId = str


class Synset(BaseModel):
    """One concept node: its lemmas, IS-A parents and optional gloss"""

    model_config = ConfigDict(frozen=True)

    id: SynsetId
    words: Tuple[str, ...] = ()
    parents: Tuple[SynsetId, ...] = ()
    gloss: Optional[str] = None

    @field_validator("words")
    @classmethod
    def _normalize_words(cls, words: Tuple[str, ...]) -> Tuple[str, ...]:
        # Giữ thứ tự gốc (từ đầu tiên là từ chính), bỏ trùng
        seen = []
        for word in words:
            lemma = word.strip().lower()
            if lemma and lemma not in seen:
                seen.append(lemma)
        return tuple(seen)

    @field_validator("parents")
    @classmethod
    def _normalize_parents(cls, parents: Tuple[SynsetId, ...]) -> Tuple[SynsetId, ...]:
        return tuple(sorted(set(parents)))


class Taxonomy:
    """Read-only IS-A graph with a lemma index.

    Edges in the underlying graph point from child to parent, so networkx
    "descendants" of a node are its taxonomic ancestors.
    """

    def __init__(
        self,
        synsets: Dict[SynsetId, Synset],
        graph: nx.DiGraph,
        lemma_index: Dict[str, Tuple[SynsetId, ...]],
    ):
        self._synsets = MappingProxyType(synsets)
        self._graph = nx.freeze(graph)
        self._lemma_index = MappingProxyType(lemma_index)

    @property
    def virtual_root(self) -> SynsetId:
        return VIRTUAL_ROOT

    @property
    def synsets(self) -> Mapping[SynsetId, Synset]:
        return self._synsets

    @property
    def lemma_index(self) -> Mapping[str, Tuple[SynsetId, ...]]:
        return self._lemma_index

    @property
    def lemmas(self) -> Tuple[str, ...]:
        return tuple(sorted(self._lemma_index))

    @property
    def graph(self) -> nx.DiGraph:
        return self._graph

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, lemma: object) -> bool:
        return lemma in self._lemma_index

    def synset(self, synset_id: SynsetId) -> Synset:
        try:
            return self._synsets[synset_id]
        except KeyError:
            raise UnknownSynset(synset_id) from None

    def senses(self, lemma: str) -> List[SynsetId]:
        """Sense list S_i of a lemma, ordered by SynsetId; empty when unknown"""
        return list(self._lemma_index.get(lemma, ()))

    def parents(self, synset_id: SynsetId) -> Tuple[SynsetId, ...]:
        return self.synset(synset_id).parents

    def children(self, synset_id: SynsetId) -> Tuple[SynsetId, ...]:
        self.synset(synset_id)
        return tuple(sorted(self._graph.predecessors(synset_id)))

    def closure(self, synset_id: SynsetId) -> frozenset:
        """Ancestors-or-self as a set (subsumption is reflexive)"""
        if synset_id not in self._synsets:
            raise UnknownSynset(synset_id)
        return frozenset(nx.descendants(self._graph, synset_id)) | {synset_id}

    def ancestors(self, synset_id: SynsetId) -> Tuple[SynsetId, ...]:
        """The synset itself plus every transitive parent, ordered by SynsetId"""
        return tuple(sorted(self.closure(synset_id)))

    def subsumes(self, ancestor: SynsetId, synset_id: SynsetId) -> bool:
        return ancestor in self.closure(synset_id)

    def height_above(self, sources: Iterable[SynsetId]) -> Dict[SynsetId, int]:
        """Shortest upward IS-A distance from the nearest source to each ancestor"""
        sources = set(sources)
        for source in sources:
            if source not in self._synsets:
                raise UnknownSynset(source)
        if not sources:
            return {}
        return dict(nx.multi_source_dijkstra_path_length(self._graph, sources))

    def describe(self, synset_id: SynsetId) -> str:
        """Listing label: lemmas, then gloss or "subconcept of <parent>" """
        synset = self.synset(synset_id)
        if synset_id == VIRTUAL_ROOT:
            return "virtual root"
        label = ", ".join(word.replace("_", " ") for word in synset.words) or synset_id
        if synset.gloss:
            return f"{label}: {synset.gloss}"
        parent_labels = []
        for parent in synset.parents:
            if parent == VIRTUAL_ROOT:
                continue
            words = self._synsets[parent].words
            parent_labels.append(", ".join(w.replace("_", " ") for w in words) or parent)
        if not parent_labels:
            return label
        return f"{label}: subconcept of {'; '.join(parent_labels)}"


def build(synsets: Iterable[Synset]) -> Taxonomy:
    """
    Build a Taxonomy from synset records.

    Parentless synsets are re-parented to a freshly created virtual root,
    the lemma index is built and the parent relation is checked for cycles.

    Raises:
        DuplicateId: two records share an id (or one claims the root id)
        DanglingParent: a parent id is not among the records
        CycleDetected: the parent relation has a cycle
    """
    by_id: Dict[SynsetId, Synset] = {}
    for synset in synsets:
        if synset.id in by_id or synset.id == VIRTUAL_ROOT:
            raise DuplicateId(synset.id)
        by_id[synset.id] = synset

    root = Synset(id=VIRTUAL_ROOT, gloss=None)
    resolved: Dict[SynsetId, Synset] = {VIRTUAL_ROOT: root}
    graph = nx.DiGraph()
    graph.add_node(VIRTUAL_ROOT)

    for synset_id in sorted(by_id):
        synset = by_id[synset_id]
        for parent in synset.parents:
            if parent not in by_id:
                raise DanglingParent(synset_id, parent)
        if not synset.parents:
            synset = synset.model_copy(update={"parents": (VIRTUAL_ROOT,)})
        resolved[synset_id] = synset
        graph.add_node(synset_id)
        for parent in synset.parents:
            graph.add_edge(synset_id, parent)

    try:
        cycle_edges = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        pass
    else:
        raise CycleDetected([child for child, _ in cycle_edges])

    lemma_index: Dict[str, List[SynsetId]] = {}
    for synset_id in sorted(resolved):
        for lemma in resolved[synset_id].words:
            lemma_index.setdefault(lemma, []).append(synset_id)

    logger.info(
        "Built taxonomy: %d synsets, %d lemmas, %d top-level concepts",
        len(resolved),
        len(lemma_index),
        graph.in_degree(VIRTUAL_ROOT),
    )
    return Taxonomy(
        resolved,
        graph,
        {lemma: tuple(ids) for lemma, ids in lemma_index.items()},
    )


def ancestors(t: Taxonomy, s: SynsetId) -> Tuple[SynsetId, ...]:
    return t.ancestors(s)


def senses(t: Taxonomy, lemma: str) -> List[SynsetId]:
    """Senses of a lemma after normalization (lowercase, plural folding)"""
    return t.senses(normalize(lemma, t))
