"""Contextual augmentation of slot-annotated intent datasets.

One random slot token per utterance is replaced by a substitute sampled
from the (post-processed) substitute distribution. Reproducibility is
per-example: each augmented copy gets an RNG seeded from
``f"{seed}/{example_index}/{copy}"`` so results are independent of
scheduling or dataset slicing.

Slot values are mostly names, so the default post-processing here skips
lemmatization and excludes the target by surface form only.
"""

from __future__ import annotations

import dataclasses
import random
from typing import Sequence

from .core import LexSubInstance, LexsubError
from .estimators import EstimatorConfig, SubstituteEstimator, generate
from .postproc import EmptyAfterFilteringError, PostprocVariant, postprocess


class NoSlotTokens(LexsubError):
    """Utterance has no token covered by a slot span."""


class EmptyDistribution(LexsubError):
    """No substitute candidates survived post-processing."""


@dataclasses.dataclass(frozen=True)
class SlotUtterance:
    """Tokenized utterance with (start, end, label) slot spans, end exclusive."""

    tokens: tuple[str, ...]
    slots: tuple[tuple[int, int, str], ...]
    intent: str
    provenance: dict | None = None

    def __post_init__(self):
        last_end = 0
        for start, end, label in sorted(self.slots, key=lambda s: s[0]):
            if not 0 <= start < end <= len(self.tokens):
                raise ValueError(f"slot ({start},{end},{label}) outside {len(self.tokens)} tokens")
            if start < last_end:
                raise ValueError(f"slot ({start},{end},{label}) overlaps a previous span")
            last_end = end

    @property
    def slot_token_indices(self) -> list[int]:
        return [i for start, end, _ in self.slots for i in range(start, end)]

    def slot_label_at(self, index: int) -> str | None:
        for start, end, label in self.slots:
            if start <= index < end:
                return label
        return None


def derive_seed(rng_seed, example_index: int, copy: int) -> str:
    return f"{rng_seed}/{example_index}/{copy}"


def sample_substitute(
    backend: SubstituteEstimator,
    utt: SlotUtterance,
    token_index: int,
    rng: random.Random,
    config: EstimatorConfig,
    variant: PostprocVariant,
) -> str:
    instance = LexSubInstance(
        instance_id=f"aug.{utt.intent}.{token_index}",
        tokens=utt.tokens,
        target_index=token_index,
        target_lemma=utt.tokens[token_index].lower(),
        target_pos="noun",  # slot fillers are nominal; POS only steers lemmatization
    )
    try:
        dist = postprocess(generate(backend, instance, config), instance, variant)
    except EmptyAfterFilteringError as exc:
        raise EmptyDistribution(str(exc)) from exc
    words = sorted(dist.support())
    weights = [dist.get(w) for w in words]
    return rng.choices(words, weights=weights, k=1)[0]


def augment_one(
    utt: SlotUtterance,
    backend: SubstituteEstimator,
    config: EstimatorConfig | None = None,
    rng_seed=0,
    variant: PostprocVariant | None = None,
) -> SlotUtterance:
    """Replace one uniformly-chosen slot token by a sampled substitute.

    Spans and labels are untouched (substitutes are single tokens), the
    intent is unchanged, and the draw is a pure function of rng_seed.
    """
    config = config if config is not None else EstimatorConfig(backend=backend.backend_type)
    variant = variant if variant is not None else PostprocVariant.no_lemmatization()
    positions = utt.slot_token_indices
    if not positions:
        raise NoSlotTokens(f"utterance {utt.tokens!r} has no slot tokens")
    rng = random.Random(rng_seed)
    index = positions[rng.randrange(len(positions))]
    substitute = sample_substitute(backend, utt, index, rng, config, variant)
    tokens = list(utt.tokens)
    original = tokens[index]
    tokens[index] = substitute
    return SlotUtterance(
        tokens=tuple(tokens),
        slots=utt.slots,
        intent=utt.intent,
        provenance={
            "source_tokens": list(utt.tokens),
            "replaced_index": index,
            "replaced_word": original,
            "substitute": substitute,
            "seed": str(rng_seed),
        },
    )


def augment_dataset(
    dataset: Sequence[SlotUtterance],
    backend: SubstituteEstimator,
    multiplier: int = 1,
    rng_seed=0,
    config: EstimatorConfig | None = None,
    variant: PostprocVariant | None = None,
) -> list[SlotUtterance]:
    """Originals plus ``multiplier`` augmented copies of each.

    Utterances that cannot be augmented (no slot tokens, empty
    distribution) contribute verbatim copies so per-intent counts always
    scale by exactly multiplier + 1.
    """
    if multiplier < 0:
        raise ValueError(f"multiplier must be >= 0, got {multiplier}")
    out = list(dataset)
    for copy in range(1, multiplier + 1):
        for index, utt in enumerate(dataset):
            seed = derive_seed(rng_seed, index, copy)
            try:
                out.append(
                    augment_one(utt, backend, config=config, rng_seed=seed, variant=variant)
                )
            except (NoSlotTokens, EmptyDistribution):
                out.append(
                    dataclasses.replace(
                        utt, provenance={"copied": True, "seed": str(seed)}
                    )
                )
    return out


def subsample_train(
    dataset: Sequence[SlotUtterance], fraction: float, rng_seed=0
) -> list[SlotUtterance]:
    """Per-intent stratified subsample without replacement, original order.

    Each intent contributes round(fraction * n_intent) examples (at
    least one, so no class vanishes); fraction 1.0 is the identity.
    """
    if not 0 < fraction <= 1:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    if fraction == 1.0:
        return list(dataset)
    by_intent: dict[str, list[int]] = {}
    for i, utt in enumerate(dataset):
        by_intent.setdefault(utt.intent, []).append(i)
    selected: list[int] = []
    for intent in sorted(by_intent):
        indices = by_intent[intent]
        n_pick = max(1, round(fraction * len(indices)))
        rng = random.Random(f"{rng_seed}/subsample/{intent}")
        selected.extend(rng.sample(indices, min(n_pick, len(indices))))
    return [dataset[i] for i in sorted(selected)]
