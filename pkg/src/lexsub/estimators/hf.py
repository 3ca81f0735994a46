"""Optional Hugging Face adapters for the masked and permutation backends.

Everything here needs the ``neural`` extra (torch + transformers) and
real pretrained weights, so imports are deferred and the module is only
exercised by the opt-in integration test. The adapters reuse the exact
input-preparation rules of the recording stubs: the stubs are the tested
specification of what the neural models are fed.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from ..core import EmbeddingTable, LexSubInstance, SubstituteDistribution, UnigramPrior, normalize_log
from .config import BLANK_TOKEN, BackendUnavailableError, EstimatorConfig
from .backends import SubstituteEstimator
from .ops import filter_vocabulary, prepend_padding


def _import_torch():
    try:
        import torch  # noqa: F401
        import transformers  # noqa: F401
    except ImportError as exc:  # pragma: no cover - exercised only without extras
        raise BackendUnavailableError(
            "masked-lm/permutation-lm adapters need the 'neural' extra "
            "(pip install lexsub[neural])"
        ) from exc
    return torch, transformers


class HfMaskedLmBackend(SubstituteEstimator):
    """BERT-family adapter: score the mask position, one forward pass."""

    backend_type = "masked-lm"
    default_injection = "base"
    supported_injections = ("notgt", "base", "embs", "pattern")
    reentrant = False  # shared model state; serialized by the service pool

    def __init__(self, model_name: str, target_embeddings: EmbeddingTable | None = None):
        torch, transformers = _import_torch()
        self._torch = torch
        self.tokenizer = transformers.AutoTokenizer.from_pretrained(model_name)
        self.model = transformers.AutoModelForMaskedLM.from_pretrained(model_name)
        self.model.eval()
        vocab = self.tokenizer.get_vocab()
        keep = filter_vocabulary(sorted(vocab))
        self._word_ids = {w: vocab[w] for w in keep}
        super().__init__(keep, target_embeddings=target_embeddings)
        if target_embeddings is None:
            # Input embedding rows double as the substitute/target space.
            matrix = self.model.get_input_embeddings().weight.detach().numpy()
            self.target_embeddings = EmbeddingTable(
                dim=matrix.shape[1],
                vectors={w: np.array(matrix[i]) for w, i in self._word_ids.items()},
            )

    def context_distribution(
        self, instance: LexSubInstance, config: EstimatorConfig, hide_target: bool
    ) -> SubstituteDistribution:
        self._check_target(instance)
        target_tok = instance.target_word
        mask = self.tokenizer.mask_token
        prepared = list(instance.tokens)
        if hide_target:
            prepared = [mask if tok == target_tok else tok for tok in prepared]
            prepared[instance.target_index] = mask
        if prepared[instance.target_index] == BLANK_TOKEN:
            prepared[instance.target_index] = mask
        text_left = " ".join(prepared[: instance.target_index])
        text_right = " ".join(prepared[instance.target_index + 1 :])
        slot = prepared[instance.target_index]
        encoding = self.tokenizer(
            (text_left + " " + slot + " " + text_right).strip(), return_tensors="pt"
        )
        ids = encoding["input_ids"][0].tolist()
        if slot == mask:
            position = ids.index(self.tokenizer.mask_token_id)
        else:
            slot_ids = self.tokenizer(slot, add_special_tokens=False)["input_ids"]
            position = _find_subsequence(ids, slot_ids)
        with self._torch.no_grad():
            logits = self.model(**encoding).logits[0, position]
        logits = logits.numpy()
        return normalize_log({w: float(logits[i]) for w, i in self._word_ids.items()})


class HfPermutationLmBackend(SubstituteEstimator):
    """XLNet-family adapter: permutation mask hides the prediction slot.

    Under target hiding the attention mask additionally blinds every
    occurrence of the target token. Short inputs are prepended with the
    padding text, mirroring the published XLNet evaluation recipe.
    """

    backend_type = "permutation-lm"
    default_injection = "base"
    supported_injections = ("notgt", "base", "embs", "pattern")
    reentrant = False

    def __init__(self, model_name: str, target_embeddings: EmbeddingTable | None = None):
        torch, transformers = _import_torch()
        self._torch = torch
        self.tokenizer = transformers.AutoTokenizer.from_pretrained(model_name)
        self.model = transformers.AutoModelForCausalLM.from_pretrained(model_name)
        self.model.eval()
        vocab = self.tokenizer.get_vocab()
        keep = filter_vocabulary(sorted(w.lstrip("▁") for w in vocab if w.startswith("▁")))
        self._word_ids = {w: vocab["▁" + w] for w in keep if "▁" + w in vocab}
        super().__init__(sorted(self._word_ids), target_embeddings=target_embeddings)
        if target_embeddings is None:
            matrix = self.model.get_input_embeddings().weight.detach().numpy()
            self.target_embeddings = EmbeddingTable(
                dim=matrix.shape[1],
                vectors={w: np.array(matrix[i]) for w, i in self._word_ids.items()},
            )

    def context_distribution(
        self, instance: LexSubInstance, config: EstimatorConfig, hide_target: bool
    ) -> SubstituteDistribution:
        self._check_target(instance)
        work = prepend_padding(instance, config.padding_text, config.padding_threshold)
        torch = self._torch
        target_tok = work.target_word
        pieces: list[int] = []
        spans: list[tuple[int, int, str]] = []
        for tok in work.tokens:
            ids = self.tokenizer(" " + tok, add_special_tokens=False)["input_ids"]
            spans.append((len(pieces), len(pieces) + len(ids), tok))
            pieces.extend(ids)
        input_ids = torch.tensor([pieces])
        n = len(pieces)
        perm_mask = torch.zeros((1, n, n))
        slot_start, slot_end, _ = spans[work.target_index]
        blind = set(range(slot_start, slot_end))
        if hide_target:
            for start, end, tok in spans:
                if tok == target_tok:
                    blind.update(range(start, end))
        for j in blind:
            perm_mask[0, :, j] = 1.0
        target_mapping = torch.zeros((1, 1, n))
        target_mapping[0, 0, slot_start] = 1.0
        with torch.no_grad():
            out = self.model(
                input_ids=input_ids, perm_mask=perm_mask, target_mapping=target_mapping
            )
        logits = out.logits[0, 0].numpy()
        scores: dict[str, float] = {}
        for w, idx in self._word_ids.items():
            scores[w] = float(logits[idx])
        return normalize_log(scores)


def build_hf_backend(
    backend_type: str, entry: Mapping, target_embeddings: EmbeddingTable | None = None
) -> SubstituteEstimator:
    model_name = entry["hf_model"]
    if backend_type == "masked-lm":
        return HfMaskedLmBackend(model_name, target_embeddings=target_embeddings)
    if backend_type == "permutation-lm":
        return HfPermutationLmBackend(model_name, target_embeddings=target_embeddings)
    raise BackendUnavailableError(f"no HF adapter for backend type {backend_type!r}")


def _find_subsequence(haystack: list[int], needle: list[int]) -> int:
    for i in range(len(haystack) - len(needle) + 1):
        if haystack[i : i + len(needle)] == needle:
            return i
    raise ValueError("slot tokens not found in encoded input")
