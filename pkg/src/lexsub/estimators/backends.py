"""Substitute-probability backends behind one estimator interface.

Neural LMs are consumed as opaque adapters (see ``hf.py``); everything in
this module runs at desk scale: a deterministic toy table, recording
stubs that emulate masked/permutation input preparation for tests, a
bigram forward/backward LM trained from a plain corpus file, and the
embedding-based baselines (OOC, nPIC, context2vec-style ranking).
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from collections import Counter
from typing import Callable, Mapping, Sequence

import numpy as np

from ..core import (
    EmbeddingTable,
    LexSubInstance,
    SubstituteDistribution,
    UnigramPrior,
    normalize,
)
from .config import (
    BLANK_TOKEN,
    BackendUnavailableError,
    EstimatorConfig,
    TargetOutOfRangeError,
)
from .ops import c2v_rank, filter_vocabulary, forward_backward_combine, npic_scores, ooc_scores

Scorer = Callable[[tuple[str, ...], int], Mapping[str, float]]

SENT_START = "<s>"
SENT_END = "</s>"


class SubstituteEstimator(ABC):
    """One backend: a deterministic mapping (instance, config) -> distribution.

    Every emitted distribution is over a subset of ``vocabulary``.
    Backends declaring ``reentrant = False`` are serialized by the service
    work queue; all bundled backends are pure and reentrant.
    """

    backend_type: str
    default_injection: str
    supported_injections: tuple[str, ...]
    reentrant: bool = True

    def __init__(
        self,
        vocabulary: Sequence[str],
        prior: UnigramPrior | None = None,
        target_embeddings: EmbeddingTable | None = None,
    ):
        self.vocabulary = filter_vocabulary(vocabulary)
        if not self.vocabulary:
            raise BackendUnavailableError("backend vocabulary is empty after filtering")
        self.prior = prior if prior is not None else UnigramPrior.uniform(len(self.vocabulary))
        self.target_embeddings = target_embeddings
        self.notes: list[str] = []

    @abstractmethod
    def context_distribution(
        self, instance: LexSubInstance, config: EstimatorConfig, hide_target: bool
    ) -> SubstituteDistribution:
        """P(s|C) over the backend vocabulary."""

    def _check_target(self, instance: LexSubInstance) -> None:
        if not 0 <= instance.target_index < len(instance.tokens):
            raise TargetOutOfRangeError(
                f"target index {instance.target_index} outside {len(instance.tokens)} tokens"
            )


class ToyTableBackend(SubstituteEstimator):
    """Distributions looked up from a (left-context, right-context) table.

    Lookup tries the full joined context first, then the immediate
    neighbor words, then the table default, then uniform. The table never
    sees the target, so base and notgt coincide.
    """

    backend_type = "toy-table"
    default_injection = "notgt"
    supported_injections = ("notgt", "base", "embs", "pattern")

    def __init__(
        self,
        entries: Mapping[tuple[str, str], Mapping[str, float]],
        default: Mapping[str, float] | None = None,
        vocabulary: Sequence[str] | None = None,
        prior: UnigramPrior | None = None,
        target_embeddings: EmbeddingTable | None = None,
    ):
        self.entries = {k: dict(v) for k, v in entries.items()}
        self.default = dict(default) if default else None
        if vocabulary is None:
            words: set[str] = set()
            for weights in self.entries.values():
                words.update(weights)
            if self.default:
                words.update(self.default)
            vocabulary = sorted(words)
        super().__init__(vocabulary, prior=prior, target_embeddings=target_embeddings)

    @classmethod
    def from_json(cls, path) -> "ToyTableBackend":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        entries = {
            (row["left"], row["right"]): row["weights"] for row in doc.get("entries", [])
        }
        emb = None
        if "embeddings" in doc:
            emb = EmbeddingTable(
                dim=doc["embeddings"]["dim"],
                vectors={w: np.array(v, dtype=float) for w, v in doc["embeddings"]["vectors"].items()},
            )
        prior = None
        if "prior" in doc:
            prior = UnigramPrior.from_counts(doc["prior"])
        return cls(
            entries,
            default=doc.get("default"),
            vocabulary=doc.get("vocabulary"),
            prior=prior,
            target_embeddings=emb,
        )

    def context_distribution(self, instance, config, hide_target):
        self._check_target(instance)
        left, right = instance.left, instance.right
        for key in (
            (" ".join(left), " ".join(right)),
            (left[-1] if left else "", right[0] if right else ""),
        ):
            if key in self.entries:
                return normalize(self.entries[key])
        if self.default:
            return normalize(self.default)
        return normalize({w: 1.0 for w in self.vocabulary})


class RecordingMaskedBackend(SubstituteEstimator):
    """Masked-LM stand-in that records the exact token sequence it receives.

    Under target hiding, every occurrence of the target token is replaced
    by the mask symbol, so the delivered sequence carries no trace of the
    target; the pattern blank is always masked. Scores come from an
    injected callable (uniform when absent) keyed on the prepared input.
    """

    backend_type = "masked-lm"
    default_injection = "base"
    supported_injections = ("notgt", "base", "embs", "pattern")
    mask_token = "[MASK]"

    def __init__(self, vocabulary, scorer: Scorer | None = None, **kwargs):
        super().__init__(vocabulary, **kwargs)
        self.scorer = scorer
        self.calls: list[tuple[tuple[str, ...], int]] = []

    def context_distribution(self, instance, config, hide_target):
        self._check_target(instance)
        target_tok = instance.target_word
        prepared = list(instance.tokens)
        if hide_target:
            prepared = [self.mask_token if tok == target_tok else tok for tok in prepared]
            prepared[instance.target_index] = self.mask_token
        if prepared[instance.target_index] == BLANK_TOKEN:
            prepared[instance.target_index] = self.mask_token
        prepared = tuple(prepared)
        self.calls.append((prepared, instance.target_index))
        return self._score(prepared, instance.target_index)

    def _score(self, prepared, index):
        if self.scorer is not None:
            return normalize(dict(self.scorer(prepared, index)))
        return normalize({w: 1.0 for w in self.vocabulary})


class RecordingPermutationBackend(SubstituteEstimator):
    """Permutation-LM stand-in recording the tokens visible to the model.

    The attention mask is emulated by removing blinded positions from the
    recorded sequence: under target hiding no occurrence of the target
    word is visible, and the prediction slot itself is never visible.
    """

    backend_type = "permutation-lm"
    default_injection = "base"
    supported_injections = ("notgt", "base", "embs", "pattern")

    def __init__(self, vocabulary, scorer: Scorer | None = None, **kwargs):
        super().__init__(vocabulary, **kwargs)
        self.scorer = scorer
        self.calls: list[tuple[str, ...]] = []

    def context_distribution(self, instance, config, hide_target):
        self._check_target(instance)
        target_tok = instance.target_word
        visible = []
        for i, tok in enumerate(instance.tokens):
            if i == instance.target_index and (hide_target or tok == BLANK_TOKEN):
                continue
            if hide_target and tok == target_tok:
                continue
            visible.append(tok)
        visible = tuple(visible)
        self.calls.append(visible)
        if self.scorer is not None:
            return normalize(dict(self.scorer(visible, instance.target_index)))
        return normalize({w: 1.0 for w in self.vocabulary})


class NgramForwardBackwardBackend(SubstituteEstimator):
    """Independent forward and backward bigram LMs fused over a beta prior.

    A small, fully testable stand-in with the same structure as a
    forward/backward neural LM pair: P(s|L) conditions on the last left
    token, P(s|R) on the first right token, and the two are combined as
    P(s|L) * P(s|R) / P(s)^beta. The model never sees the target.
    """

    backend_type = "forward-backward-lm"
    default_injection = "notgt"
    supported_injections = ("notgt", "embs", "pattern")

    def __init__(
        self,
        sentences: Sequence[Sequence[str]],
        add_k: float = 0.1,
        target_embeddings: EmbeddingTable | None = None,
    ):
        unigrams: Counter = Counter()
        forward: dict[str, Counter] = {}
        backward: dict[str, Counter] = {}
        for sent in sentences:
            toks = [t.lower() for t in sent]
            unigrams.update(toks)
            padded = [SENT_START, *toks, SENT_END]
            for prev, nxt in zip(padded, padded[1:]):
                forward.setdefault(prev, Counter())[nxt] += 1
                backward.setdefault(nxt, Counter())[prev] += 1
        vocabulary = filter_vocabulary(sorted(unigrams))
        prior = UnigramPrior.from_counts({w: unigrams[w] for w in vocabulary})
        super().__init__(vocabulary, prior=prior, target_embeddings=target_embeddings)
        self.add_k = add_k
        self._forward = forward
        self._backward = backward

    @classmethod
    def from_corpus(cls, path, **kwargs) -> "NgramForwardBackwardBackend":
        with open(path, encoding="utf-8") as fh:
            sentences = [line.split() for line in fh if line.strip()]
        if not sentences:
            raise BackendUnavailableError(f"empty corpus file {path}")
        return cls(sentences, **kwargs)

    def _bigram(self, table: Mapping[str, Counter], given: str) -> SubstituteDistribution:
        counts = table.get(given, Counter())
        total = sum(counts[w] for w in self.vocabulary)
        denom = total + self.add_k * len(self.vocabulary)
        return SubstituteDistribution(
            {w: (counts[w] + self.add_k) / denom for w in self.vocabulary}
        )

    def left_distribution(self, left: Sequence[str]) -> SubstituteDistribution:
        given = left[-1].lower() if left else SENT_START
        return self._bigram(self._forward, given)

    def right_distribution(self, right: Sequence[str]) -> SubstituteDistribution:
        given = right[0].lower() if right else SENT_END
        return self._bigram(self._backward, given)

    def context_distribution(self, instance, config, hide_target):
        self._check_target(instance)
        return forward_backward_combine(
            self.left_distribution(instance.left),
            self.right_distribution(instance.right),
            self.prior,
            config.beta,
        )


class DependencyEmbeddingBackend(SubstituteEstimator):
    """OOC and nPIC estimators over dependency-style word/context embeddings.

    The canonical instance format carries no parse, so nPIC falls back to
    a +-2 token window for the context elements; the fallback is recorded
    in ``notes`` and surfaces in evaluation reports.
    """

    backend_type = "dependency-embedding"
    default_injection = "base"
    supported_injections = ("base",)

    def __init__(
        self,
        word_embeddings: EmbeddingTable,
        context_embeddings: EmbeddingTable | None = None,
        variant: str = "ooc",
    ):
        if variant not in ("ooc", "npic"):
            raise ValueError(f"variant must be ooc or npic, got {variant!r}")
        if variant == "npic" and context_embeddings is None:
            raise BackendUnavailableError("npic needs context embeddings")
        keep = filter_vocabulary(sorted(word_embeddings.vectors))
        self.word_embeddings = EmbeddingTable(
            dim=word_embeddings.dim,
            vectors={w: word_embeddings[w] for w in keep},
        )
        self.context_embeddings = context_embeddings
        self.variant = variant
        super().__init__(keep, target_embeddings=self.word_embeddings)
        if variant == "npic":
            self.notes.append("npic context elements: +-2 token window fallback (no dependency parse)")

    def context_distribution(self, instance, config, hide_target):
        self._check_target(instance)
        if self.variant == "ooc":
            return ooc_scores(instance, self.word_embeddings)
        return npic_scores(instance, self.word_embeddings, self.context_embeddings)


class ContextEmbeddingBackend(SubstituteEstimator):
    """context2vec-style ranking: candidates scored against a context vector.

    The context representation is the mean of the context-word embeddings
    (the target token itself is never part of it), so the model is
    target-blind by construction.
    """

    backend_type = "context-embedding"
    default_injection = "notgt"
    supported_injections = ("notgt", "embs")

    def __init__(self, embeddings: EmbeddingTable):
        keep = filter_vocabulary(sorted(embeddings.vectors))
        self.embeddings = EmbeddingTable(dim=embeddings.dim, vectors={w: embeddings[w] for w in keep})
        super().__init__(keep, target_embeddings=self.embeddings)

    def context_vector(self, instance: LexSubInstance) -> np.ndarray:
        vecs = [
            self.embeddings[tok.lower()]
            for i, tok in enumerate(instance.tokens)
            if i != instance.target_index and tok.lower() in self.embeddings
        ]
        if not vecs:
            return np.zeros(self.embeddings.dim)
        return np.mean(vecs, axis=0)

    def context_distribution(self, instance, config, hide_target):
        self._check_target(instance)
        return c2v_rank(instance, self.context_vector(instance), self.embeddings)
