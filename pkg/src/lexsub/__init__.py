"""lexsub: lexical substitution workbench.

Generation and ranking of in-context word substitutes from pluggable
probability backends, with evaluation (GAP / P@k), substitute-vector
word-sense induction, dataset augmentation for intent classifiers, and
a WordNet-based relation census over generated substitutes.
"""

from .core import (
    EmbeddingTable,
    LexSubInstance,
    LexsubError,
    SubstituteDistribution,
    UnigramPrior,
    normalize,
    normalize_log,
    rank,
    read_instances_jsonl,
    write_instances_jsonl,
)

__version__ = "0.1.0"

__all__ = [
    "EmbeddingTable",
    "LexSubInstance",
    "LexsubError",
    "SubstituteDistribution",
    "UnigramPrior",
    "normalize",
    "normalize_log",
    "rank",
    "read_instances_jsonl",
    "write_instances_jsonl",
    "__version__",
]
