"""Substitute estimators: backends, injection modes, combination math."""

from .config import (
    BACKEND_TYPES,
    BLANK_TOKEN,
    DEFAULT_PADDING_TEXT,
    DEFAULT_PATTERN,
    INJECTIONS,
    BackendUnavailableError,
    DimensionMismatchError,
    EstimatorConfig,
    MalformedPatternError,
    TargetEmbeddingMissingError,
    TargetOutOfRangeError,
    UnsupportedInjectionError,
    VocabMismatchError,
    validate_pattern,
)
from .ops import (
    apply_pattern,
    c2v_rank,
    estimate_context,
    filter_vocabulary,
    forward_backward_combine,
    generate,
    inject_target,
    npic_scores,
    ooc_scores,
    prepend_padding,
    strip_padding,
    target_similarity,
)
from .backends import (
    ContextEmbeddingBackend,
    DependencyEmbeddingBackend,
    NgramForwardBackwardBackend,
    RecordingMaskedBackend,
    RecordingPermutationBackend,
    SubstituteEstimator,
    ToyTableBackend,
)
from .registry import build_backend, build_registry

__all__ = [
    "BACKEND_TYPES",
    "BLANK_TOKEN",
    "DEFAULT_PADDING_TEXT",
    "DEFAULT_PATTERN",
    "INJECTIONS",
    "BackendUnavailableError",
    "ContextEmbeddingBackend",
    "DependencyEmbeddingBackend",
    "DimensionMismatchError",
    "EstimatorConfig",
    "MalformedPatternError",
    "NgramForwardBackwardBackend",
    "RecordingMaskedBackend",
    "RecordingPermutationBackend",
    "SubstituteEstimator",
    "TargetEmbeddingMissingError",
    "TargetOutOfRangeError",
    "ToyTableBackend",
    "UnsupportedInjectionError",
    "VocabMismatchError",
    "apply_pattern",
    "build_backend",
    "build_registry",
    "c2v_rank",
    "estimate_context",
    "filter_vocabulary",
    "forward_backward_combine",
    "generate",
    "inject_target",
    "npic_scores",
    "ooc_scores",
    "prepend_padding",
    "strip_padding",
    "target_similarity",
    "validate_pattern",
]
