"""Word sense induction from substitute vectors.

Pipeline: generate substitutes per instance, lemmatize, keep the top-N
(default 200), embed instances as L2-normalized TF-IDF vectors (binary
TF; IDF = ln(M/df) + 1 with M the instance count *of this target* --
per-target IDF scope, chosen and noted since the convention is
unstated), then agglomerative clustering with average linkage over
cosine distance. The merge loop is written out here instead of calling
a library because the contract promises a deterministic, reproducible
merge order including tie-breaks.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Iterable, Mapping, Sequence

import numpy as np
from sklearn.metrics import silhouette_score, v_measure_score

from .core import LexSubInstance, LexsubError
from .estimators import EstimatorConfig, SubstituteEstimator, generate
from .postproc import PostprocVariant, postprocess

DEFAULT_TOP_N = 200
AUTO_K_RANGE = (2, 8)


class TooFewInstances(LexsubError):
    """Clustering needs at least two vectors."""


@dataclasses.dataclass(frozen=True)
class WsiInstance:
    instance_id: str
    tokens: tuple[str, ...]
    target_index: int
    target_lemma: str
    target_pos: str
    gold_sense: str | None = None

    def __post_init__(self):
        if not 0 <= self.target_index < len(self.tokens):
            raise ValueError(
                f"target_index {self.target_index} outside {len(self.tokens)} tokens"
            )

    def as_lexsub(self) -> LexSubInstance:
        return LexSubInstance(
            instance_id=self.instance_id,
            tokens=self.tokens,
            target_index=self.target_index,
            target_lemma=self.target_lemma,
            target_pos=self.target_pos,
        )


@dataclasses.dataclass
class SubstituteVector:
    instance_id: str
    tfidf: dict[str, float]


def top_substitute_lemmas(
    backend: SubstituteEstimator,
    instance: WsiInstance,
    config: EstimatorConfig,
    n: int,
    variant: PostprocVariant,
) -> list[str]:
    dist = postprocess(generate(backend, instance.as_lexsub(), config), instance.as_lexsub(), variant)
    ordered = sorted(dist.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ordered[:n]]


def build_substitute_vectors(
    instances: Sequence[WsiInstance],
    backend: SubstituteEstimator,
    config: EstimatorConfig | None = None,
    n: int = DEFAULT_TOP_N,
    variant: PostprocVariant | None = None,
) -> list[SubstituteVector]:
    """Binary-TF / ln(M/df)+1 IDF vectors over each instance's top-n lemmas."""
    if not instances:
        return []
    keys = {(inst.target_lemma, inst.target_pos) for inst in instances}
    if len(keys) > 1:
        raise ValueError(f"instances mix several targets: {sorted(keys)}")
    config = config if config is not None else EstimatorConfig(backend=backend.backend_type)
    variant = variant if variant is not None else PostprocVariant.default()

    bags = [set(top_substitute_lemmas(backend, inst, config, n, variant)) for inst in instances]
    m = len(instances)
    df: dict[str, int] = {}
    for bag in bags:
        for lemma in bag:
            df[lemma] = df.get(lemma, 0) + 1

    vectors = []
    for inst, bag in zip(instances, bags):
        weights = {lemma: math.log(m / df[lemma]) + 1.0 for lemma in bag}
        norm = math.sqrt(sum(w * w for w in weights.values()))
        if norm > 0:
            weights = {lemma: w / norm for lemma, w in weights.items()}
        vectors.append(SubstituteVector(instance_id=inst.instance_id, tfidf=weights))
    return vectors


def cosine_distance_matrix(vectors: Sequence[SubstituteVector]) -> np.ndarray:
    """Pairwise 1 - cosine over the sparse TF-IDF maps (already L2-normed)."""
    n = len(vectors)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a, b = vectors[i].tfidf, vectors[j].tfidf
            if len(b) < len(a):
                a, b = b, a
            sim = sum(w * b.get(lemma, 0.0) for lemma, w in a.items())
            dist[i, j] = dist[j, i] = max(0.0, 1.0 - sim)
    return dist


def merge_trace(
    dist: np.ndarray,
) -> list[tuple[int, int, float]]:
    """Full average-linkage merge sequence down to one cluster.

    Clusters are identified by their smallest member index; each step
    merges the pair with minimal average pairwise distance, ties broken
    by the smallest (i, j) representative pair. Returns
    [(rep_i, rep_j, linkage), ...] in merge order.
    """
    n = dist.shape[0]
    clusters: dict[int, list[int]] = {i: [i] for i in range(n)}
    trace: list[tuple[int, int, float]] = []
    while len(clusters) > 1:
        best: tuple[float, int, int] | None = None
        reps = sorted(clusters)
        for a_pos, rep_a in enumerate(reps):
            for rep_b in reps[a_pos + 1 :]:
                members_a, members_b = clusters[rep_a], clusters[rep_b]
                linkage = float(
                    np.mean([dist[x, y] for x in members_a for y in members_b])
                )
                key = (linkage, rep_a, rep_b)
                if best is None or key < best:
                    best = key
        linkage, rep_a, rep_b = best
        clusters[rep_a] = clusters[rep_a] + clusters[rep_b]
        del clusters[rep_b]
        trace.append((rep_a, rep_b, linkage))
    return trace


def _labels_at_k(n: int, trace: Sequence[tuple[int, int, float]], k: int) -> list[int]:
    clusters: dict[int, list[int]] = {i: [i] for i in range(n)}
    for rep_a, rep_b, _ in trace[: n - k]:
        clusters[rep_a] = clusters[rep_a] + clusters[rep_b]
        del clusters[rep_b]
    labels = [0] * n
    for label, rep in enumerate(sorted(clusters)):
        for member in clusters[rep]:
            labels[member] = label
    return labels


def choose_k_silhouette(dist: np.ndarray, trace, k_range=AUTO_K_RANGE) -> int:
    """k in [2,8] maximizing mean cosine silhouette, ties toward smaller k."""
    n = dist.shape[0]
    candidates = [k for k in range(k_range[0], k_range[1] + 1) if 2 <= k <= n - 1]
    if not candidates:
        return min(2, n)
    best_k, best_score = None, -math.inf
    for k in candidates:
        labels = _labels_at_k(n, trace, k)
        score = float(silhouette_score(dist, labels, metric="precomputed"))
        if score > best_score + 1e-12:
            best_k, best_score = k, score
    return best_k


def cluster(
    vectors: Sequence[SubstituteVector], k: int | str = "auto"
) -> dict[str, int]:
    """instance_id -> cluster label; labels ordered by smallest member index."""
    if len(vectors) < 2:
        raise TooFewInstances(f"need >= 2 vectors, got {len(vectors)}")
    dist = cosine_distance_matrix(vectors)
    trace = merge_trace(dist)
    if k == "auto":
        k = choose_k_silhouette(dist, trace)
    if not isinstance(k, int) or not 1 <= k <= len(vectors):
        raise ValueError(f"k must be in [1, {len(vectors)}] or 'auto', got {k!r}")
    labels = _labels_at_k(len(vectors), trace, k)
    return {vec.instance_id: label for vec, label in zip(vectors, labels)}


def _aligned(pred: Mapping[str, int], gold: Mapping[str, str]) -> tuple[list, list]:
    if set(pred) != set(gold):
        raise ValueError("pred and gold label different instance sets")
    ids = sorted(pred)
    return [gold[i] for i in ids], [pred[i] for i in ids]


def v_measure(pred: Mapping[str, int], gold: Mapping[str, str]) -> float:
    gold_labels, pred_labels = _aligned(pred, gold)
    return float(v_measure_score(gold_labels, pred_labels))


def paired_fscore(pred: Mapping[str, int], gold: Mapping[str, str]) -> float:
    """F1 over unordered instance pairs placed in one cluster.

    Empty pair sets: both empty scores 1.0 (vacuously perfect), exactly
    one empty scores 0.0.
    """

    def pairs(labels: Mapping[str, object]) -> set[tuple[str, str]]:
        out = set()
        ids = sorted(labels)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                if labels[a] == labels[b]:
                    out.add((a, b))
        return out

    if set(pred) != set(gold):
        raise ValueError("pred and gold label different instance sets")
    p_pairs, g_pairs = pairs(pred), pairs(gold)
    if not p_pairs and not g_pairs:
        return 1.0
    if not p_pairs or not g_pairs:
        return 0.0
    hit = len(p_pairs & g_pairs)
    precision = hit / len(p_pairs)
    recall = hit / len(g_pairs)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def avg_2010(pred: Mapping[str, int], gold: Mapping[str, str]) -> float:
    """Geometric mean of V-measure and paired F-score."""
    return math.sqrt(v_measure(pred, gold) * paired_fscore(pred, gold))


def export_semeval(
    pred: Mapping[str, int], lemma_pos: str, path
) -> None:
    """One line per instance: `<lemma.pos> <instance_id> <lemma.pos>.<cluster>`."""
    with open(path, "w", encoding="utf-8") as fh:
        for instance_id in sorted(pred):
            fh.write(f"{lemma_pos} {instance_id} {lemma_pos}.{pred[instance_id]}\n")


def read_wsi_jsonl(path) -> list[WsiInstance]:
    """Canonical JSONL with an optional per-record `gold_sense` field."""
    import json

    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            out.append(
                WsiInstance(
                    instance_id=rec["id"],
                    tokens=tuple(rec["tokens"]),
                    target_index=rec["target_index"],
                    target_lemma=rec["lemma"],
                    target_pos=rec["pos"],
                    gold_sense=rec.get("gold_sense"),
                )
            )
    return out


def group_by_target(instances: Iterable[WsiInstance]) -> dict[tuple[str, str], list[WsiInstance]]:
    grouped: dict[tuple[str, str], list[WsiInstance]] = {}
    for inst in instances:
        grouped.setdefault((inst.target_lemma, inst.target_pos), []).append(inst)
    return grouped
