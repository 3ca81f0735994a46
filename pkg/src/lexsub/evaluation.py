"""Intrinsic evaluation: GAP on candidate ranking, P@k and R@10 all-words.

Two protocols share the machinery:

* candidate ranking -- rank a pooled candidate list for each instance,
  score with Generalized Average Precision against weighted gold;
* all-words -- rank the full (post-processed) vocabulary, report
  precision at 1 and 3 and recall of the gold set within the top 10.

Rankings are deterministic: ties in probability break lexicographically.
"""

from __future__ import annotations

import dataclasses
import json
import math
from typing import Callable, Iterable, Mapping, Sequence

from .core import LexSubInstance, LexsubError, SubstituteDistribution
from .estimators import EstimatorConfig, SubstituteEstimator, generate
from .postproc import EmptyAfterFilteringError, PostprocVariant, postprocess


class EmptyGoldError(LexsubError):
    """Instance has no usable gold substitutes."""


class MissingPoolEntry(LexsubError):
    """No candidate pool entry for the instance's (lemma, pos)."""


def gap(ranked: Sequence[str], gold: Mapping[str, float]) -> float:
    """Generalized Average Precision of a ranking against weighted gold.

    GAP = sum_i I[ranked_i in gold] * pbar(i) / sum_j qbar(j), where
    pbar(i) averages the accumulated gold weight over the first i ranks
    and qbar(j) does the same for the ideal (weight-descending) ranking.
    1.0 iff every gold item is ranked before every non-gold item in
    non-increasing weight order.
    """
    if not gold:
        raise EmptyGoldError("gold is empty")
    if any(w <= 0 for w in gold.values()):
        raise EmptyGoldError("gold weights must be positive")

    numer = 0.0
    acc = 0.0
    for i, word in enumerate(ranked, start=1):
        weight = gold.get(word, 0.0)
        acc += weight
        if weight > 0:
            numer += acc / i

    denom = 0.0
    acc = 0.0
    for j, weight in enumerate(sorted(gold.values(), reverse=True), start=1):
        acc += weight
        denom += acc / j
    return numer / denom


def precision_at_k(ranked: Sequence[str], gold: Mapping[str, float], k: int) -> float:
    """|top-k intersect gold| / k. Defined even when fewer than k are ranked."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not gold:
        raise EmptyGoldError("gold is empty")
    top = ranked[:k]
    return sum(1 for w in top if w in gold) / k


def recall_at_10(ranked: Sequence[str], gold: Mapping[str, float]) -> float:
    """|top-10 intersect gold| / |gold|."""
    if not gold:
        raise EmptyGoldError("gold is empty")
    top = set(ranked[:10])
    return sum(1 for w in gold if w in top) / len(gold)


class CandidatePool:
    """Candidates per (lemma, pos), pooled from gold across instances."""

    def __init__(self, entries: Mapping[tuple[str, str], Sequence[str]]):
        self.entries = {key: tuple(words) for key, words in entries.items()}

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self.entries

    def __getitem__(self, key: tuple[str, str]) -> tuple[str, ...]:
        if key not in self.entries:
            raise MissingPoolEntry(f"no candidates pooled for {key}")
        return self.entries[key]

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_instances(cls, instances: Iterable[LexSubInstance]) -> "CandidatePool":
        pooled: dict[tuple[str, str], set[str]] = {}
        for inst in instances:
            if not inst.gold:
                continue
            key = (inst.target_lemma, inst.target_pos)
            pooled.setdefault(key, set()).update(inst.gold)
        return cls({key: tuple(sorted(words)) for key, words in pooled.items()})


def build_candidate_pool(instances: Iterable[LexSubInstance]) -> CandidatePool:
    return CandidatePool.from_instances(instances)


def rank_candidates(
    dist: SubstituteDistribution, candidates: Sequence[str]
) -> list[str]:
    """Order a fixed candidate list by model score, missing words at 0."""
    return sorted(set(candidates), key=lambda w: (-dist.get(w), w))


@dataclasses.dataclass
class InstanceResult:
    instance_id: str
    gap: float | None = None
    p_at_1: float | None = None
    p_at_3: float | None = None
    r_at_10: float | None = None
    top: tuple[str, ...] = ()
    # 1-indexed position of each gold word inside the ranking (absent if unranked)
    gold_ranks: dict[str, int] = dataclasses.field(default_factory=dict)

    def to_record(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


def _gold_ranks(ranked: Sequence[str], gold: Mapping[str, float]) -> dict[str, int]:
    positions = {w: i for i, w in enumerate(ranked, start=1)}
    return {w: positions[w] for w in sorted(gold) if w in positions}


@dataclasses.dataclass
class EvalReport:
    """Aggregate metrics plus per-instance rows; serializes to plain JSON."""

    protocol: str
    model: str
    injection: str
    variant: str
    n_scored: int
    n_skipped: int
    mean_gap: float | None = None
    mean_p_at_1: float | None = None
    mean_p_at_3: float | None = None
    mean_r_at_10: float | None = None
    per_instance: list[InstanceResult] = dataclasses.field(default_factory=list)
    notes: list[str] = dataclasses.field(default_factory=list)

    def to_json(self, path=None, indent: int = 2) -> str:
        doc = dataclasses.asdict(self)
        doc["per_instance"] = [r.to_record() for r in self.per_instance]
        text = json.dumps(doc, indent=indent, sort_keys=True)
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        return text


def _mean(values: Sequence[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _postprocessed(
    backend: SubstituteEstimator,
    instance: LexSubInstance,
    config: EstimatorConfig,
    variant: PostprocVariant,
) -> SubstituteDistribution:
    return postprocess(generate(backend, instance, config), instance, variant)


def evaluate_candidate_ranking(
    backend: SubstituteEstimator,
    instances: Sequence[LexSubInstance],
    pool: CandidatePool,
    config: EstimatorConfig | None = None,
    variant: PostprocVariant | None = None,
    model_name: str = "?",
) -> EvalReport:
    """GAP over pooled candidates; instances without gold or pool entry skip."""
    config = config if config is not None else EstimatorConfig(backend=backend.backend_type)
    variant = variant if variant is not None else PostprocVariant.default()
    rows: list[InstanceResult] = []
    skipped = 0
    notes = list(backend.notes)
    for inst in instances:
        if not inst.gold:
            skipped += 1
            continue
        key = (inst.target_lemma, inst.target_pos)
        if key not in pool:
            skipped += 1
            continue
        try:
            dist = _postprocessed(backend, inst, config, variant)
        except EmptyAfterFilteringError:
            skipped += 1
            continue
        ranked = rank_candidates(dist, pool[key])
        rows.append(
            InstanceResult(
                instance_id=inst.instance_id,
                gap=gap(ranked, inst.gold),
                top=tuple(ranked[:3]),
                gold_ranks=_gold_ranks(ranked, inst.gold),
            )
        )
    return EvalReport(
        protocol="candidate-ranking",
        model=model_name,
        injection=config.injection,
        variant=variant.name,
        n_scored=len(rows),
        n_skipped=skipped,
        mean_gap=_mean([r.gap for r in rows]),
        per_instance=rows,
        notes=notes,
    )


def evaluate_all_words(
    backend: SubstituteEstimator,
    instances: Sequence[LexSubInstance],
    config: EstimatorConfig | None = None,
    variant: PostprocVariant | None = None,
    model_name: str = "?",
) -> EvalReport:
    """P@1, P@3 and R@10 with the whole post-processed vocabulary ranked."""
    config = config if config is not None else EstimatorConfig(backend=backend.backend_type)
    variant = variant if variant is not None else PostprocVariant.default()
    rows: list[InstanceResult] = []
    skipped = 0
    for inst in instances:
        if not inst.gold:
            skipped += 1
            continue
        try:
            dist = _postprocessed(backend, inst, config, variant)
        except EmptyAfterFilteringError:
            skipped += 1
            continue
        ranked = [w for w, _ in sorted(dist.items(), key=lambda kv: (-kv[1], kv[0]))]
        rows.append(
            InstanceResult(
                instance_id=inst.instance_id,
                p_at_1=precision_at_k(ranked, inst.gold, 1),
                p_at_3=precision_at_k(ranked, inst.gold, 3),
                r_at_10=recall_at_10(ranked, inst.gold),
                top=tuple(ranked[:3]),
                gold_ranks=_gold_ranks(ranked[:50], inst.gold),
            )
        )
    return EvalReport(
        protocol="all-words",
        model=model_name,
        injection=config.injection,
        variant=variant.name,
        n_scored=len(rows),
        n_skipped=skipped,
        mean_p_at_1=_mean([r.p_at_1 for r in rows]),
        mean_p_at_3=_mean([r.p_at_3 for r in rows]),
        mean_r_at_10=_mean([r.r_at_10 for r in rows]),
        per_instance=rows,
        notes=list(backend.notes),
    )


def grid_search_hyperparams(
    backend: SubstituteEstimator,
    instances: Sequence[LexSubInstance],
    pool: CandidatePool,
    temperatures: Sequence[float] = (0.1, 0.25, 0.5, 1.0, 2.0),
    betas: Sequence[float] = (0.0, 0.5, 1.0, 2.0),
    injection: str = "embs",
    variant: PostprocVariant | None = None,
) -> tuple[EstimatorConfig, list[dict]]:
    """Mean dev GAP over a (temperature, beta) grid.

    Returns the winning config plus the full table, best first; exact
    ties prefer smaller (temperature, beta) so reruns pick the same cell.
    """
    table: list[dict] = []
    for temperature in temperatures:
        for beta in betas:
            config = EstimatorConfig(
                backend=backend.backend_type,
                injection=injection,
                temperature=temperature,
                beta=beta,
            )
            report = evaluate_candidate_ranking(
                backend, instances, pool, config=config, variant=variant
            )
            table.append(
                {
                    "temperature": temperature,
                    "beta": beta,
                    "mean_gap": report.mean_gap,
                    "n_scored": report.n_scored,
                }
            )
    table.sort(
        key=lambda row: (
            -(row["mean_gap"] if row["mean_gap"] is not None else -math.inf),
            row["temperature"],
            row["beta"],
        )
    )
    best = table[0]
    best_config = EstimatorConfig(
        backend=backend.backend_type,
        injection=injection,
        temperature=best["temperature"],
        beta=best["beta"],
    )
    return best_config, table
