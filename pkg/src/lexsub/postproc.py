"""Post-processing of raw substitute distributions before evaluation.

Four named variants cover the ablation grid: the default pipeline
(lemmatize candidates, drop the target lemma), the same without
lemmatization, the same without target exclusion, and the context2vec
style (lemmatize candidates but exclude the target by exact form only).
Post-processing has a large effect on ranking metrics, so the variant is
always an explicit argument, never ambient state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import lemmas
from .core import LexsubError, LexSubInstance, SubstituteDistribution, normalize

Lemmatizer = Callable[[str, str], str]

EXCLUSION_MODES = ("lemma-based", "stem-based", "exact-form", "none")
VARIANT_NAMES = ("default", "no-lemmatization", "no-target-exclusion", "c2v-style")


class EmptyAfterFilteringError(LexsubError):
    """Nothing survived lemma merging and target exclusion."""


@dataclass(frozen=True)
class PostprocVariant:
    name: str
    lemmatize: bool
    exclusion: str
    lemmatizer: Lemmatizer = lemmas.lemmatize

    def __post_init__(self):
        if self.exclusion not in EXCLUSION_MODES:
            raise ValueError(f"exclusion must be one of {EXCLUSION_MODES}")

    @classmethod
    def default(cls, lemmatizer: Lemmatizer = lemmas.lemmatize) -> "PostprocVariant":
        return cls("default", lemmatize=True, exclusion="lemma-based", lemmatizer=lemmatizer)

    @classmethod
    def no_lemmatization(cls, lemmatizer: Lemmatizer = lemmas.lemmatize) -> "PostprocVariant":
        return cls("no-lemmatization", lemmatize=False, exclusion="lemma-based", lemmatizer=lemmatizer)

    @classmethod
    def no_target_exclusion(cls, lemmatizer: Lemmatizer = lemmas.lemmatize) -> "PostprocVariant":
        return cls("no-target-exclusion", lemmatize=True, exclusion="none", lemmatizer=lemmatizer)

    @classmethod
    def c2v_style(cls, lemmatizer: Lemmatizer = lemmas.lemmatize) -> "PostprocVariant":
        # lemmatizes candidates only; the target is excluded by exact form
        return cls("c2v-style", lemmatize=True, exclusion="exact-form", lemmatizer=lemmatizer)

    @classmethod
    def by_name(cls, name: str, lemmatizer: Lemmatizer = lemmas.lemmatize) -> "PostprocVariant":
        factories = {
            "default": cls.default,
            "no-lemmatization": cls.no_lemmatization,
            "no-lemma": cls.no_lemmatization,
            "no-target-exclusion": cls.no_target_exclusion,
            "no-target-excl": cls.no_target_exclusion,
            "c2v-style": cls.c2v_style,
            "c2v": cls.c2v_style,
        }
        name = name.replace("_", "-")
        if name not in factories:
            raise ValueError(f"unknown postproc variant {name!r}")
        return factories[name](lemmatizer=lemmatizer)


def postprocess(
    dist: SubstituteDistribution,
    instance: LexSubInstance,
    variant: PostprocVariant,
) -> SubstituteDistribution:
    """Lemmatize/merge candidates, drop target forms, renormalize.

    Candidates are lemmatized with the target's POS as hint (they are meant
    to fill the target slot). Colliding forms have their probabilities
    summed. Exclusion compares per the variant: lemma-based against the
    target lemma (and surface form), stem-based against the target stem,
    exact-form against the raw target token.
    """
    target_form = instance.target_word.lower()
    target_lemma = instance.target_lemma.lower()
    pos = instance.target_pos

    entries: dict[str, float] = {}
    for word, p in dist.items():
        form = word.lower()
        if variant.exclusion == "exact-form" and form in (target_form, target_lemma):
            continue
        key = variant.lemmatizer(form, pos) if variant.lemmatize else form
        entries[key] = entries.get(key, 0.0) + p

    if variant.exclusion == "lemma-based":
        excluded = {target_lemma, target_form}
        entries = {w: p for w, p in entries.items() if w not in excluded}
    elif variant.exclusion == "stem-based":
        target_stem = lemmas.stem(target_form)
        entries = {w: p for w, p in entries.items() if lemmas.stem(w) != target_stem}

    if not entries or sum(entries.values()) <= 0:
        raise EmptyAfterFilteringError(
            f"no candidates left for instance {instance.instance_id} after {variant.name} post-processing"
        )
    return normalize(entries)
