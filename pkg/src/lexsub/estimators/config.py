"""Estimator configuration and estimator-specific errors."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import LexsubError

BACKEND_TYPES = (
    "forward-backward-lm",
    "masked-lm",
    "permutation-lm",
    "context-embedding",
    "dependency-embedding",
    "toy-table",
)

INJECTIONS = ("notgt", "base", "embs", "pattern")

# Placeholder token left in the prediction slot by pattern expansion;
# backends swap it for their own mask symbol when scoring.
BLANK_TOKEN = "_"

DEFAULT_PATTERN = "T and then _"
DEFAULT_PADDING_TEXT = "The following sentences are given without any further context . <eod>"
DEFAULT_PADDING_THRESHOLD = 50


class BackendUnavailableError(LexsubError):
    """The requested backend cannot be constructed or reached."""


class TargetOutOfRangeError(LexsubError):
    """A target position does not address a token of the given context."""


class VocabMismatchError(LexsubError):
    """Two distributions being combined share no support."""


class TargetEmbeddingMissingError(LexsubError):
    """No embedding is available for the target word."""


class DimensionMismatchError(LexsubError):
    """Vector dimensionalities disagree."""


class MalformedPatternError(LexsubError):
    """Pattern template violates the one-blank/at-most-one-target rule."""


class UnsupportedInjectionError(LexsubError):
    """The backend does not implement the requested injection mode."""


def validate_pattern(pattern: str) -> list[str]:
    """Split a pattern template into tokens, enforcing placeholder rules."""
    slots = pattern.split()
    if slots.count(BLANK_TOKEN) != 1:
        raise MalformedPatternError(f"pattern {pattern!r} must contain exactly one '_' token")
    if slots.count("T") > 1:
        raise MalformedPatternError(f"pattern {pattern!r} must contain at most one 'T' token")
    return slots


@dataclass(frozen=True)
class EstimatorConfig:
    """Backend identity plus injection mode and its hyperparameters.

    ``temperature`` sharpens or flattens the target-similarity softmax;
    ``beta`` controls how strongly frequent words are penalized by the
    unigram prior during combination. Shipped defaults are 1.0 / 1.0; use
    :func:`lexsub.evaluation.grid_search_hyperparams` to fit them on a dev
    split.
    """

    backend: str
    injection: str = "base"
    temperature: float = 1.0
    beta: float = 1.0
    pattern: str = DEFAULT_PATTERN
    padding_text: str = DEFAULT_PADDING_TEXT
    padding_threshold: int = DEFAULT_PADDING_THRESHOLD

    def __post_init__(self):
        if self.backend not in BACKEND_TYPES:
            raise ValueError(f"backend must be one of {BACKEND_TYPES}, got {self.backend!r}")
        if self.injection not in INJECTIONS:
            raise ValueError(f"injection must be one of {INJECTIONS}, got {self.injection!r}")
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        validate_pattern(self.pattern)
        if not self.padding_text:
            raise ValueError("padding_text must be non-empty")
