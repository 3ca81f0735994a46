"""Target-substitute relation analysis over a WordNet-style synset graph.

Labels, from most to least specific: synonym (shared synset), direct
hypernym/hyponym, co-hyponym (shared direct parent), transitive
hypernym/hyponym (any path length), co-hyponym-3 (common ancestor within
three hypernym hops of each word -- a --total-path flag switches to
summed path length), unknown-relation, and unknown-word when either side
has no synset for the queried POS.

The synset pair scored for a (target, substitute) query is the pair
producing the most specific label; ties between pairs at the same
resolution step fall back to sense-frequency order. The similarity
criterion behind "two most similar synsets" is unspecified upstream,
making this the most consequential interpretation choice in the module.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from typing import Iterable, Mapping, Sequence

from .core import POS_TAGS, LexSubInstance, LexsubError

RELATION_LABELS = (
    "synonym",
    "hypernym",
    "hyponym",
    "co-hyponym",
    "transitive-hypernym",
    "transitive-hyponym",
    "co-hyponym-3",
    "unknown-relation",
    "unknown-word",
)

# Resolution step per label; directions share a step so pair selection
# between them is decided by sense order, not by label name.
_STEP = {
    "synonym": 1,
    "hypernym": 2,
    "hyponym": 2,
    "co-hyponym": 3,
    "transitive-hypernym": 4,
    "transitive-hyponym": 4,
    "co-hyponym-3": 5,
    "unknown-relation": 6,
}


class UnknownPos(LexsubError):
    pass


@dataclasses.dataclass(frozen=True)
class Synset:
    synset_id: str
    pos: str
    lemmas: frozenset[str]


@dataclasses.dataclass
class SynsetGraph:
    """Immutable hypernym DAG with a sense-ordered lemma index."""

    synsets: dict[str, Synset]
    parents: dict[str, tuple[str, ...]]
    lemma_index: dict[tuple[str, str], tuple[str, ...]]

    def __post_init__(self):
        for child, parent_ids in self.parents.items():
            if child not in self.synsets:
                raise ValueError(f"edge child {child!r} is not a synset")
            for pid in parent_ids:
                if pid not in self.synsets:
                    raise ValueError(f"edge parent {pid!r} is not a synset")
        for key, ids in self.lemma_index.items():
            for sid in ids:
                if sid not in self.synsets:
                    raise ValueError(f"lemma index {key} references missing synset {sid!r}")
        self._assert_acyclic()

    def _assert_acyclic(self):
        state: dict[str, int] = {}  # 0 in-progress, 1 done
        for start in self.parents:
            if start in state:
                continue
            stack = [(start, iter(self.parents.get(start, ())))]
            state[start] = 0
            while stack:
                node, it = stack[-1]
                advanced = False
                for parent in it:
                    if state.get(parent) == 0:
                        raise ValueError(f"hypernym cycle through {parent!r}")
                    if parent not in state:
                        state[parent] = 0
                        stack.append((parent, iter(self.parents.get(parent, ()))))
                        advanced = True
                        break
                if not advanced:
                    state[node] = 1
                    stack.pop()

    def synsets_for(self, lemma: str, pos: str) -> tuple[str, ...]:
        return self.lemma_index.get((lemma.lower(), pos), ())

    def ancestor_distances(self, synset_id: str) -> dict[str, int]:
        """Minimum hypernym-hop count to every proper ancestor (BFS up)."""
        dist: dict[str, int] = {}
        queue = deque([(synset_id, 0)])
        while queue:
            node, d = queue.popleft()
            for parent in self.parents.get(node, ()):
                if parent not in dist or d + 1 < dist[parent]:
                    dist[parent] = d + 1
                    queue.append((parent, d + 1))
        return dist

    @classmethod
    def from_triples(
        cls,
        synsets: Iterable[tuple[str, str, Iterable[str]]],
        edges: Iterable[tuple[str, str]],
        sense_order: Mapping[tuple[str, str], Sequence[str]] | None = None,
    ) -> "SynsetGraph":
        """Fixture-friendly constructor: (id, pos, lemmas) plus child->parent edges.

        The lemma index defaults to synset insertion order per lemma;
        ``sense_order`` overrides it for specific (lemma, pos) keys.
        """
        table: dict[str, Synset] = {}
        index: dict[tuple[str, str], list[str]] = {}
        for synset_id, pos, lemmas in synsets:
            if pos not in POS_TAGS:
                raise UnknownPos(f"bad POS {pos!r} for synset {synset_id!r}")
            entry = Synset(synset_id=synset_id, pos=pos, lemmas=frozenset(l.lower() for l in lemmas))
            if synset_id in table:
                raise ValueError(f"duplicate synset id {synset_id!r}")
            table[synset_id] = entry
            for lemma in entry.lemmas:
                index.setdefault((lemma, pos), []).append(synset_id)
        parents: dict[str, list[str]] = {}
        for child, parent in edges:
            parents.setdefault(child, []).append(parent)
        if sense_order:
            for key, ids in sense_order.items():
                index[key] = list(ids)
        return cls(
            synsets=table,
            parents={c: tuple(ps) for c, ps in parents.items()},
            lemma_index={k: tuple(v) for k, v in index.items()},
        )


def _pair_label(
    graph: SynsetGraph, s_target: str, s_sub: str, cohyp3_total: bool
) -> str:
    if s_target == s_sub:
        return "synonym"
    target_parents = set(graph.parents.get(s_target, ()))
    sub_parents = set(graph.parents.get(s_sub, ()))
    if s_sub in target_parents:
        return "hypernym"
    if s_target in sub_parents:
        return "hyponym"
    if target_parents & sub_parents:
        return "co-hyponym"
    up_target = graph.ancestor_distances(s_target)
    up_sub = graph.ancestor_distances(s_sub)
    if s_sub in up_target:
        return "transitive-hypernym"
    if s_target in up_sub:
        return "transitive-hyponym"
    for common in set(up_target) & set(up_sub):
        if cohyp3_total:
            if up_target[common] + up_sub[common] <= 3:
                return "co-hyponym-3"
        elif up_target[common] <= 3 and up_sub[common] <= 3:
            return "co-hyponym-3"
    return "unknown-relation"


def classify(
    target_lemma: str,
    substitute_lemma: str,
    pos: str,
    graph: SynsetGraph,
    cohyp3_total: bool = False,
) -> str:
    """Most specific relation of substitute to target for one POS."""
    if pos not in POS_TAGS:
        raise UnknownPos(f"pos must be one of {POS_TAGS}, got {pos!r}")
    target_ids = graph.synsets_for(target_lemma, pos)
    sub_ids = graph.synsets_for(substitute_lemma, pos)
    if not sub_ids or not target_ids:
        # Either side missing for this POS (cross-POS annotations included).
        return "unknown-word"
    best: tuple[int, int, int] | None = None
    best_label = "unknown-relation"
    for t_rank, t_id in enumerate(target_ids):
        for s_rank, s_id in enumerate(sub_ids):
            label = _pair_label(graph, t_id, s_id, cohyp3_total)
            key = (_STEP[label], t_rank, s_rank)
            if best is None or key < best:
                best, best_label = key, label
            if best[0] == _STEP["synonym"]:
                return best_label
    return best_label


def relation_stats(
    per_model_substitutes: Mapping[str, Mapping[str, Sequence[str]]],
    instances: Sequence[LexSubInstance],
    graph: SynsetGraph,
    pos_filter: str | None = None,
    include_gold: bool = True,
    cohyp3_total: bool = False,
) -> dict[str, dict[str, float]]:
    """Percentage of (instance, substitute) pairs per relation label.

    ``per_model_substitutes`` maps model name -> instance_id -> top-k
    substitute list. The gold column applies the same counting to the
    gold substitutes so the annotator distribution is comparable.
    """
    by_id = {inst.instance_id: inst for inst in instances}
    columns: dict[str, Mapping[str, Sequence[str]]] = dict(per_model_substitutes)
    if include_gold:
        columns["gold"] = {
            inst.instance_id: sorted(inst.gold) for inst in instances if inst.gold
        }
    out: dict[str, dict[str, float]] = {}
    for model, by_instance in columns.items():
        counts = {label: 0 for label in RELATION_LABELS}
        total = 0
        for instance_id, substitutes in by_instance.items():
            inst = by_id.get(instance_id)
            if inst is None:
                continue
            if pos_filter is not None and inst.target_pos != pos_filter:
                continue
            for sub in substitutes:
                label = classify(inst.target_lemma, sub, inst.target_pos, graph, cohyp3_total)
                counts[label] += 1
                total += 1
        if total == 0:
            out[model] = {label: 0.0 for label in RELATION_LABELS}
        else:
            out[model] = {label: 100.0 * n / total for label, n in counts.items()}
    return out
