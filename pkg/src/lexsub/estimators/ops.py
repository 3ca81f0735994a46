"""Target-injection mechanisms and distribution-combination operators.

Combinations of a context distribution P(s|C) with target information are
what lift plain language-model substitute generation: either multiply in a
temperature-softmaxed embedding-similarity distribution P(s|T) divided by
a beta-powered unigram prior, or rewrite the context with a dynamic
pattern so the model sees the target while predicting a blank. Products
are accumulated in log space (see :func:`lexsub.core.normalize_log`)
because the inputs are typically very peaky.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Mapping, Sequence

import numpy as np

from ..core import (
    EmbeddingTable,
    LexSubInstance,
    SubstituteDistribution,
    UnigramPrior,
    normalize_log,
)
from .config import (
    BLANK_TOKEN,
    DimensionMismatchError,
    EstimatorConfig,
    TargetEmbeddingMissingError,
    UnsupportedInjectionError,
    VocabMismatchError,
    validate_pattern,
)

_PAD_PUNCT = ".,!?;:"


def apply_pattern(instance: LexSubInstance, pattern: str) -> LexSubInstance:
    """Replace the target token by the expanded pattern, e.g. "T and then _".

    "T" expands to the original target word and "_" marks the new
    prediction slot; the returned instance has target_index repositioned
    onto the slot. A pattern without "T" leaves the target word in the
    slot, so the bare pattern "_" is the identity.
    """
    slots = validate_pattern(pattern)
    has_target = "T" in slots
    expansion = []
    for tok in slots:
        if tok == "T":
            expansion.append(instance.target_word)
        elif tok == BLANK_TOKEN:
            expansion.append(BLANK_TOKEN if has_target else instance.target_word)
        else:
            expansion.append(tok)
    return dataclasses.replace(
        instance,
        tokens=instance.left + tuple(expansion) + instance.right,
        target_index=instance.target_index + slots.index(BLANK_TOKEN),
    )


def padding_tokens(padding_text: str) -> list[str]:
    """Tokenize padding text, splitting sentence punctuation off words."""
    out: list[str] = []
    for chunk in padding_text.split():
        if chunk.startswith("<") and chunk.endswith(">"):
            out.append(chunk)
            continue
        tail: list[str] = []
        while chunk and chunk[0] in _PAD_PUNCT:
            out.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _PAD_PUNCT:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        if chunk:
            out.append(chunk)
        out.extend(reversed(tail))
    return out


def prepend_padding(
    instance: LexSubInstance, padding_text: str, threshold: int | None = 50
) -> LexSubInstance:
    """Prepend neutral padding ending in the end-of-document symbol.

    Permutation LMs produce erroneous distributions on very short
    contexts; padding is applied only when the context has fewer than
    ``threshold`` tokens (pass None to force).
    """
    if not padding_text:
        raise ValueError("padding_text must be non-empty")
    if threshold is not None and len(instance.tokens) >= threshold:
        return instance
    pad = tuple(padding_tokens(padding_text))
    return dataclasses.replace(
        instance,
        tokens=pad + instance.tokens,
        target_index=instance.target_index + len(pad),
    )


def strip_padding(instance: LexSubInstance, padding_text: str) -> LexSubInstance:
    """Inverse of :func:`prepend_padding` for a padded instance."""
    pad = tuple(padding_tokens(padding_text))
    if instance.tokens[: len(pad)] != pad or instance.target_index < len(pad):
        raise ValueError("instance does not start with the given padding")
    return dataclasses.replace(
        instance,
        tokens=instance.tokens[len(pad) :],
        target_index=instance.target_index - len(pad),
    )


def _combine_product(
    p_first: SubstituteDistribution,
    p_second: SubstituteDistribution,
    prior: UnigramPrior,
    beta: float,
) -> SubstituteDistribution:
    shared = [w for w, p in p_first.items() if p > 0 and p_second.get(w) > 0]
    if not shared:
        raise VocabMismatchError("distributions share no support")
    log_w = {
        w: math.log(p_first[w]) + math.log(p_second[w]) - beta * math.log(prior.lookup(w))
        for w in shared
    }
    return normalize_log(log_w)


def forward_backward_combine(
    p_left: SubstituteDistribution,
    p_right: SubstituteDistribution,
    prior: UnigramPrior,
    beta: float,
) -> SubstituteDistribution:
    """Fuse independent forward and backward LM distributions.

    Returns the renormalized P(s|L) * P(s|R) / P(s)^beta over the shared
    support of the two inputs.
    """
    return _combine_product(p_left, p_right, prior, beta)


def inject_target(
    p_context: SubstituteDistribution,
    p_target: SubstituteDistribution,
    prior: UnigramPrior,
    beta: float,
) -> SubstituteDistribution:
    """Combine a context distribution with target-proximity information.

    Returns the renormalized P(s|C) * P(s|T) / P(s)^beta; beta = 0 with a
    uniform P(s|T) reduces to P(s|C) restricted to the shared support.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    return _combine_product(p_context, p_target, prior, beta)


def target_similarity(
    target: str,
    emb: EmbeddingTable,
    temperature: float,
    vocab: Sequence[str],
) -> SubstituteDistribution:
    """Inner-product proximity to the target, softmaxed with temperature.

    Vocabulary words missing from the table receive the minimum
    pre-softmax score in the batch, so they can never outrank an embedded
    word.
    """
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    if not vocab:
        raise ValueError("empty vocabulary")
    if target not in emb:
        raise TargetEmbeddingMissingError(f"no embedding for target {target!r}")
    target_vec = emb[target]
    scored = {w: float(np.dot(emb[w], target_vec)) for w in vocab if w in emb}
    floor = min(scored.values()) if scored else 0.0
    return normalize_log({w: scored.get(w, floor) / temperature for w in vocab})


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    denom = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    if denom == 0:
        return 0.0
    return float(np.dot(a, b)) / denom


def ooc_scores(instance: LexSubInstance, emb: EmbeddingTable) -> SubstituteDistribution:
    """Out-of-context estimator: cosine similarity to the target, context ignored."""
    target = _embedding_key(instance, emb)
    target_vec = emb[target]
    return normalize_log({w: _cosine(vec, target_vec) for w, vec in emb.vectors.items()})


def npic_scores(
    instance: LexSubInstance,
    word_emb: EmbeddingTable,
    ctx_emb: EmbeddingTable,
    attached_indices: Sequence[int] | None = None,
) -> SubstituteDistribution:
    """Product of target-fit and context-fit softmax components.

    The context component sums substitute/context-element inner products
    over the elements attached to the target: dependency-attached words
    when ``attached_indices`` is supplied, otherwise a +-2 token window.
    """
    target = _embedding_key(instance, word_emb)
    target_vec = word_emb[target]
    vocab = sorted(word_emb.vectors)

    if attached_indices is None:
        lo = max(0, instance.target_index - 2)
        hi = min(len(instance.tokens), instance.target_index + 3)
        attached_indices = [i for i in range(lo, hi) if i != instance.target_index]
    context_vecs = [
        ctx_emb[instance.tokens[i].lower()]
        for i in attached_indices
        if instance.tokens[i].lower() in ctx_emb
    ]

    log_target = _log_softmax({w: float(np.dot(word_emb[w], target_vec)) for w in vocab})
    if context_vecs:
        ctx_sum = np.sum(context_vecs, axis=0)
        log_ctx = _log_softmax({w: float(np.dot(word_emb[w], ctx_sum)) for w in vocab})
    else:
        log_ctx = {w: -math.log(len(vocab)) for w in vocab}

    return normalize_log({w: log_target[w] + log_ctx[w] for w in vocab})


def c2v_rank(
    instance: LexSubInstance,
    context_vector: np.ndarray,
    candidate_emb: EmbeddingTable,
) -> SubstituteDistribution:
    """Rank candidates by dot product with a context representation."""
    context_vector = np.asarray(context_vector, dtype=float)
    if context_vector.shape != (candidate_emb.dim,):
        raise DimensionMismatchError(
            f"context vector has shape {context_vector.shape}, embeddings have dim {candidate_emb.dim}"
        )
    return normalize_log(
        {w: float(np.dot(vec, context_vector)) for w, vec in candidate_emb.vectors.items()}
    )


def _log_softmax(scores: Mapping[str, float]) -> dict[str, float]:
    peak = max(scores.values())
    total = math.log(math.fsum(math.exp(s - peak) for s in scores.values())) + peak
    return {w: s - total for w, s in scores.items()}


def _embedding_key(instance: LexSubInstance, emb: EmbeddingTable) -> str:
    for key in (instance.target_word.lower(), instance.target_lemma.lower()):
        if key in emb:
            return key
    raise TargetEmbeddingMissingError(
        f"no embedding for target {instance.target_word!r} (lemma {instance.target_lemma!r})"
    )


def filter_vocabulary(words) -> tuple[str, ...]:
    """Drop non-word vocabulary entries (subword pieces, symbols, numbers).

    Substitute candidates are restricted to single-token alphabetic
    entries; multi-token generation is out of scope.
    """
    seen = set()
    kept = []
    for w in words:
        if w.isalpha() and w not in seen:
            seen.add(w)
            kept.append(w)
    return tuple(kept)


def estimate_context(backend, instance: LexSubInstance, config: EstimatorConfig) -> SubstituteDistribution:
    """P(s|C) from a backend, with or without target visibility.

    For injection="notgt" the backend provably receives no target
    information: masked LMs mask every occurrence of the target token,
    permutation LMs blind context positions to it via the attention mask,
    and forward/backward LMs never see it by construction. Permutation
    backends additionally get short contexts padded (see
    :func:`prepend_padding`).
    """
    if config.injection not in ("notgt", "base"):
        raise ValueError(f"estimate_context expects injection notgt or base, got {config.injection!r}")
    _check_supported(backend, config.injection)
    work = instance
    if backend.backend_type == "permutation-lm":
        work = prepend_padding(work, config.padding_text, config.padding_threshold)
    return backend.context_distribution(work, config, hide_target=config.injection == "notgt")


def generate(backend, instance: LexSubInstance, config: EstimatorConfig) -> SubstituteDistribution:
    """The facade: pattern/masking/padding per config, then target injection."""
    _check_supported(backend, config.injection)
    work = instance
    if config.injection == "pattern":
        work = apply_pattern(work, config.pattern)
        effective = "base" if "base" in backend.supported_injections else backend.default_injection
    elif config.injection == "embs":
        effective = backend.default_injection
    else:
        effective = config.injection
    p_context = estimate_context(backend, work, dataclasses.replace(config, injection=effective))
    if config.injection == "embs":
        if backend.target_embeddings is None:
            raise TargetEmbeddingMissingError(
                f"backend {backend.backend_type} has no target embeddings attached"
            )
        key = _embedding_key(instance, backend.target_embeddings)
        p_target = target_similarity(
            key, backend.target_embeddings, config.temperature, list(backend.vocabulary)
        )
        p_context = inject_target(p_context, p_target, backend.prior, config.beta)
    return p_context


def _check_supported(backend, injection: str) -> None:
    if injection not in backend.supported_injections:
        raise UnsupportedInjectionError(
            f"backend {backend.backend_type} supports {backend.supported_injections}, not {injection!r}"
        )
