"""Shared domain types plus deterministic normalization and ranking helpers.

All types here are immutable after construction and safe to share across
parallel workers. Probabilities are stored in linear space; the single
log-space path is :func:`normalize_log`, used by the distribution
combination code where products of peaky distributions would underflow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

POS_TAGS = ("noun", "verb", "adj", "adv")

PROB_SUM_TOL = 1e-6


class LexsubError(Exception):
    """Base class for all package errors."""


class AllZeroError(LexsubError):
    """Every weight handed to normalize() was zero."""


class NegativeWeightError(LexsubError):
    """A negative weight was handed to normalize()."""


@dataclass(frozen=True)
class LexSubInstance:
    """One target occurrence: tokenized context, target span, optional gold.

    The context decomposes as left = tokens[:target_index], target word =
    tokens[target_index], right = tokens[target_index + 1:]. Gold weights
    are annotator counts (positive integers); multiword gold entries must
    be dropped by loaders before construction.
    """

    instance_id: str
    tokens: tuple[str, ...]
    target_index: int
    target_lemma: str
    target_pos: str
    gold: Mapping[str, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not 0 <= self.target_index < len(self.tokens):
            raise ValueError(
                f"target_index {self.target_index} out of range for {len(self.tokens)} tokens"
            )
        if self.target_pos not in POS_TAGS:
            raise ValueError(f"target_pos must be one of {POS_TAGS}, got {self.target_pos!r}")
        if self.gold is not None:
            for sub, weight in self.gold.items():
                if " " in sub:
                    raise ValueError(f"multiword gold entry {sub!r}; filter before construction")
                if weight < 1:
                    raise ValueError(f"gold weight for {sub!r} must be >= 1, got {weight}")
            object.__setattr__(self, "gold", dict(self.gold))

    @property
    def left(self) -> tuple[str, ...]:
        return self.tokens[: self.target_index]

    @property
    def target_word(self) -> str:
        return self.tokens[self.target_index]

    @property
    def right(self) -> tuple[str, ...]:
        return self.tokens[self.target_index + 1 :]


@dataclass(frozen=True)
class SubstituteDistribution:
    """A normalized probability mapping over candidate substitute strings."""

    probs: Mapping[str, float]

    def __post_init__(self):
        probs = dict(self.probs)
        total = 0.0
        for word, p in probs.items():
            if not word:
                raise ValueError("empty string key in distribution")
            if p < 0:
                raise ValueError(f"negative probability {p} for {word!r}")
            total += p
        if probs and abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, word: str) -> float:
        return self.probs[word]

    def get(self, word: str, default: float = 0.0) -> float:
        return self.probs.get(word, default)

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)

    def items(self):
        return self.probs.items()

    def support(self) -> set[str]:
        return set(self.probs)


@dataclass(frozen=True)
class UnigramPrior:
    """Smoothed word prior P(s); lookups never return zero."""

    probs: Mapping[str, float]
    smoothing_mass: float

    def __post_init__(self):
        probs = dict(self.probs)
        if self.smoothing_mass <= 0:
            raise ValueError("smoothing_mass must be positive")
        if any(p < 0 for p in probs.values()):
            raise ValueError("negative prior probability")
        if sum(probs.values()) > 1.0 + PROB_SUM_TOL:
            raise ValueError("prior probabilities sum to more than 1")
        object.__setattr__(self, "probs", probs)

    def lookup(self, word: str) -> float:
        p = self.probs.get(word, 0.0)
        return p if p > 0 else self.smoothing_mass

    @classmethod
    def uniform(cls, vocab_size: int) -> "UnigramPrior":
        if vocab_size < 1:
            raise ValueError("vocab_size must be >= 1")
        return cls(probs={}, smoothing_mass=1.0 / vocab_size)

    @classmethod
    def from_counts(cls, counts: Mapping[str, int], alpha: float = 1.0) -> "UnigramPrior":
        """Add-alpha smoothed prior; one extra alpha is reserved for unseen words."""
        total = sum(counts.values()) + alpha * (len(counts) + 1)
        probs = {w: (c + alpha) / total for w, c in counts.items()}
        return cls(probs=probs, smoothing_mass=alpha / total)


@dataclass(frozen=True)
class EmbeddingTable:
    """Fixed-dimension word vectors keyed by surface form."""

    dim: int
    vectors: Mapping[str, np.ndarray] = field(repr=False)

    def __post_init__(self):
        vectors = {}
        for word, vec in self.vectors.items():
            arr = np.asarray(vec, dtype=float)
            if arr.shape != (self.dim,):
                raise ValueError(f"vector for {word!r} has shape {arr.shape}, expected ({self.dim},)")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite components in vector for {word!r}")
            arr.flags.writeable = False
            vectors[word] = arr
        object.__setattr__(self, "vectors", vectors)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __getitem__(self, word: str) -> np.ndarray:
        return self.vectors[word]

    def __len__(self) -> int:
        return len(self.vectors)

    @classmethod
    def from_word2vec_text(cls, path) -> "EmbeddingTable":
        """Read word2vec text format; a leading `count dim` header line is optional."""
        vectors: dict[str, np.ndarray] = {}
        dim = None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.rstrip("\n").split(" ")
                if len(parts) == 2 and dim is None:
                    continue  # header
                word, comps = parts[0], parts[1:]
                if dim is None:
                    dim = len(comps)
                vectors[word] = np.array([float(c) for c in comps])
        if dim is None:
            raise ValueError(f"no vectors found in {path}")
        return cls(dim=dim, vectors=vectors)


def normalize(weights: Mapping[str, float]) -> SubstituteDistribution:
    """Scale non-negative weights so they sum to one, preserving order."""
    for word, w in weights.items():
        if w < 0:
            raise NegativeWeightError(f"negative weight {w} for {word!r}")
    total = math.fsum(weights.values())
    if total <= 0:
        raise AllZeroError("all weights are zero")
    return SubstituteDistribution({w: v / total for w, v in weights.items()})


def normalize_log(log_weights: Mapping[str, float]) -> SubstituteDistribution:
    """Normalize weights given in log space (the documented log-space path).

    Products of peaky distributions underflow in linear space, so the
    combination operators accumulate log terms and renormalize here via
    the usual max-subtraction trick. Entries at -inf are dropped.
    """
    finite = {w: lw for w, lw in log_weights.items() if lw > float("-inf")}
    if not finite:
        raise AllZeroError("all log weights are -inf")
    peak = max(finite.values())
    linear = {w: math.exp(lw - peak) for w, lw in finite.items()}
    total = math.fsum(linear.values())
    return SubstituteDistribution({w: v / total for w, v in linear.items()})


def rank(dist: SubstituteDistribution | Mapping[str, float], k: int) -> list[tuple[str, float]]:
    """Top-k (word, prob) pairs, descending by probability.

    Ties break by ascending lexicographic order of the word, which makes
    every ranking in the package reproducible.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    items = dist.items() if hasattr(dist, "items") else dict(dist).items()
    ordered = sorted(items, key=lambda kv: (-kv[1], kv[0]))
    return ordered[: min(k, len(ordered))]


def read_instances_jsonl(path) -> list[LexSubInstance]:
    """Load the canonical one-record-per-line instance format."""
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                instances.append(instance_from_record(rec))
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad instance record: {exc}") from exc
    return instances


def instance_from_record(rec: Mapping) -> LexSubInstance:
    gold = rec.get("gold")
    if gold is not None:
        gold = {sub: int(w) for sub, w in gold.items() if " " not in sub}
        if not gold:
            gold = None
    return LexSubInstance(
        instance_id=str(rec["id"]),
        tokens=tuple(rec["tokens"]),
        target_index=int(rec["target_index"]),
        target_lemma=rec["lemma"],
        target_pos=rec["pos"],
        gold=gold,
    )


def instance_to_record(inst: LexSubInstance) -> dict:
    rec = {
        "id": inst.instance_id,
        "tokens": list(inst.tokens),
        "target_index": inst.target_index,
        "lemma": inst.target_lemma,
        "pos": inst.target_pos,
    }
    if inst.gold is not None:
        rec["gold"] = dict(inst.gold)
    return rec


def write_instances_jsonl(instances: Iterable[LexSubInstance], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_to_record(inst), ensure_ascii=False) + "\n")
