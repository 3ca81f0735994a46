"""Config-driven backend construction.

A model entry is a plain mapping (usually parsed from the service YAML):

    name: demo-fb
    backend: forward-backward-lm
    corpus: assets/corpus.txt          # forward-backward-lm
    table: assets/toy_table.json       # toy-table
    embeddings: assets/vectors.txt     # embedding backends / embs injection
    context_embeddings: assets/ctx.txt # npic only
    variant: ooc | npic                # dependency-embedding
    hf_model: bert-base-uncased        # masked-lm / permutation-lm adapters

Relative paths resolve against ``base_dir``. Construction is eager so a
bad path fails at startup, not on the first request.
"""

from __future__ import annotations

import os
from typing import Mapping

from ..core import EmbeddingTable
from .config import BackendUnavailableError
from .backends import (
    ContextEmbeddingBackend,
    DependencyEmbeddingBackend,
    NgramForwardBackwardBackend,
    RecordingMaskedBackend,
    RecordingPermutationBackend,
    SubstituteEstimator,
    ToyTableBackend,
)


def _resolve(path: str, base_dir: str | None) -> str:
    if base_dir is not None and not os.path.isabs(path):
        return os.path.join(base_dir, path)
    return path


def _require(entry: Mapping, key: str) -> str:
    if key not in entry:
        raise BackendUnavailableError(
            f"model entry {entry.get('name', '?')!r} is missing required key {key!r}"
        )
    return entry[key]


def build_backend(entry: Mapping, base_dir: str | None = None) -> SubstituteEstimator:
    backend_type = _require(entry, "backend")
    emb = None
    if "embeddings" in entry:
        emb = EmbeddingTable.from_word2vec_text(_resolve(entry["embeddings"], base_dir))

    if backend_type == "toy-table":
        backend = ToyTableBackend.from_json(_resolve(_require(entry, "table"), base_dir))
        if emb is not None:
            backend.target_embeddings = emb
        return backend

    if backend_type == "forward-backward-lm":
        return NgramForwardBackwardBackend.from_corpus(
            _resolve(_require(entry, "corpus"), base_dir),
            add_k=float(entry.get("add_k", 0.1)),
            target_embeddings=emb,
        )

    if backend_type == "dependency-embedding":
        if emb is None:
            raise BackendUnavailableError("dependency-embedding needs an embeddings file")
        ctx = None
        if "context_embeddings" in entry:
            ctx = EmbeddingTable.from_word2vec_text(_resolve(entry["context_embeddings"], base_dir))
        return DependencyEmbeddingBackend(emb, ctx, variant=entry.get("variant", "ooc"))

    if backend_type == "context-embedding":
        if emb is None:
            raise BackendUnavailableError("context-embedding needs an embeddings file")
        return ContextEmbeddingBackend(emb)

    if backend_type in ("masked-lm", "permutation-lm"):
        if "hf_model" in entry:
            from . import hf  # deferred: transformers is an optional extra

            return hf.build_hf_backend(backend_type, entry, target_embeddings=emb)
        if "vocabulary" not in entry:
            raise BackendUnavailableError(
                f"{backend_type} needs either hf_model or an explicit vocabulary list"
            )
        cls = RecordingMaskedBackend if backend_type == "masked-lm" else RecordingPermutationBackend
        return cls(entry["vocabulary"], target_embeddings=emb)

    raise BackendUnavailableError(f"unknown backend type {backend_type!r}")


def build_registry(
    entries: list[Mapping], base_dir: str | None = None
) -> dict[str, SubstituteEstimator]:
    registry: dict[str, SubstituteEstimator] = {}
    for entry in entries:
        name = _require(entry, "name")
        if name in registry:
            raise BackendUnavailableError(f"duplicate model name {name!r}")
        registry[name] = build_backend(entry, base_dir)
    return registry
