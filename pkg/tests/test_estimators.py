import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pytest import approx

from lexsub.core import EmbeddingTable, LexSubInstance, SubstituteDistribution, UnigramPrior, rank
from lexsub.estimators.config import (
    EstimatorConfig,
    MalformedPatternError,
    TargetEmbeddingMissingError,
    UnsupportedInjectionError,
    VocabMismatchError,
    validate_pattern,
)
from lexsub.estimators.backends import (
    ContextEmbeddingBackend,
    DependencyEmbeddingBackend,
    NgramForwardBackwardBackend,
    RecordingMaskedBackend,
    RecordingPermutationBackend,
    ToyTableBackend,
)
from lexsub.estimators.ops import (
    apply_pattern,
    c2v_rank,
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
from lexsub.estimators.registry import build_backend, build_registry

E = math.e


def inst(tokens, idx, lemma=None, pos="noun"):
    return LexSubInstance("t1", tuple(tokens), idx, lemma or tokens[idx].lower(), pos)


# ---------------------------------------------------------------- patterns


def test_apply_pattern_expansion():
    out = apply_pattern(inst(["he", "bought", "a", "car"], 3), "T and then _")
    assert out.tokens == ("he", "bought", "a", "car", "and", "then", "_")
    assert out.target_index == 6


def test_apply_pattern_identity():
    original = inst(["he", "bought", "a", "car"], 3)
    out = apply_pattern(original, "_")
    assert out.tokens == original.tokens
    assert out.target_index == original.target_index


def test_apply_pattern_t_and():
    out = apply_pattern(inst(["the", "bank"], 1), "T and _")
    assert out.tokens == ("the", "bank", "and", "_")
    assert out.target_index == 3


def test_apply_pattern_preserves_flanks():
    out = apply_pattern(inst(["a", "b", "c"], 1), "T or _")
    assert out.tokens[:1] == ("a",)
    assert out.tokens[-1:] == ("c",)


@pytest.mark.parametrize("bad", ["", "T and then", "_ and _", "no slots here", "T T _"])
def test_validate_pattern_rejects(bad):
    with pytest.raises(MalformedPatternError):
        validate_pattern(bad)


def test_validate_pattern_accepts():
    validate_pattern("T and then _")
    validate_pattern("_")
    validate_pattern("_ ( or even T )")


# ---------------------------------------------------------------- padding


def test_prepend_padding_shifts_index():
    out = prepend_padding(inst(["go", "home"], 0, pos="verb"), "Books . <eod>")
    assert out.tokens == ("Books", ".", "<eod>", "go", "home")
    assert out.target_index == 3


def test_prepend_padding_threshold_gate():
    long = inst(["w"] * 200, 5)
    out = prepend_padding(long, "Books . <eod>", threshold=50)
    assert out == long


def test_padding_roundtrip():
    original = inst(["go", "home"], 0, pos="verb")
    padded = prepend_padding(original, "Books . <eod>")
    assert strip_padding(padded, "Books . <eod>") == original


# ---------------------------------------------------------------- combination math


def test_forward_backward_uniform_symmetry():
    u = SubstituteDistribution({"a": 0.5, "b": 0.5})
    prior = UnigramPrior.uniform(2)
    for beta in (0.0, 1.0, 2.0):
        out = forward_backward_combine(u, u, prior, beta)
        assert out.get("a") == approx(0.5)


def test_forward_backward_hand_example():
    left = SubstituteDistribution({"a": 0.8, "b": 0.2})
    right = SubstituteDistribution({"a": 0.5, "b": 0.5})
    prior = UnigramPrior({"a": 0.5, "b": 0.5}, smoothing_mass=1e-6)
    out = forward_backward_combine(left, right, prior, beta=1.0)
    assert out.get("a") == approx(0.8)
    assert out.get("b") == approx(0.2)


def test_forward_backward_beta_zero_is_product():
    left = SubstituteDistribution({"a": 0.8, "b": 0.2})
    right = SubstituteDistribution({"a": 0.2, "b": 0.8})
    prior = UnigramPrior({"a": 0.9, "b": 0.1}, smoothing_mass=1e-6)
    out = forward_backward_combine(left, right, prior, beta=0.0)
    assert out.get("a") == approx(0.5)
    assert out.get("b") == approx(0.5)


def test_forward_backward_empty_support():
    left = SubstituteDistribution({"a": 1.0})
    right = SubstituteDistribution({"b": 1.0})
    with pytest.raises(VocabMismatchError):
        forward_backward_combine(left, right, UnigramPrior.uniform(2), 1.0)


def test_inject_target_neutral():
    ctx = SubstituteDistribution({"a": 0.5, "b": 0.3, "c": 0.2})
    uniform = SubstituteDistribution({"a": 1 / 3, "b": 1 / 3, "c": 1 / 3})
    out = inject_target(ctx, uniform, UnigramPrior.uniform(3), beta=0.0)
    for w in ("a", "b", "c"):
        assert out.get(w) == approx(ctx.get(w), abs=1e-9)


def test_inject_target_hand_example():
    ctx = SubstituteDistribution({"a": 0.5, "b": 0.3, "c": 0.2})
    uniform = SubstituteDistribution({"a": 1 / 3, "b": 1 / 3, "c": 1 / 3})
    prior = UnigramPrior({"a": 0.5, "b": 0.25, "c": 0.25}, smoothing_mass=1e-9)
    out = inject_target(ctx, uniform, prior, beta=1.0)
    assert out.get("a") == approx(1 / 3)
    assert out.get("b") == approx(0.4)
    assert out.get("c") == approx(4 / 15)


def test_inject_target_opposing():
    ctx = SubstituteDistribution({"a": 0.9, "b": 0.1})
    tgt = SubstituteDistribution({"a": 0.1, "b": 0.9})
    out = inject_target(ctx, tgt, UnigramPrior.uniform(2), beta=0.0)
    assert out.get("a") == approx(0.5)
    assert out.get("b") == approx(0.5)


def test_inject_target_support_restriction():
    ctx = SubstituteDistribution({"a": 0.5, "b": 0.5})
    tgt = SubstituteDistribution({"b": 0.5, "c": 0.5})
    out = inject_target(ctx, tgt, UnigramPrior.uniform(3), beta=0.0)
    assert out.probs == {"b": 1.0}


vocab_st = st.lists(
    st.text(st.characters(min_codepoint=97, max_codepoint=122), min_size=1, max_size=4),
    min_size=2,
    max_size=8,
    unique=True,
)


@given(vocab_st, st.floats(min_value=0.0, max_value=2.0), st.integers(0, 2**32 - 1))
@settings(max_examples=50)
def test_combination_normalized_and_permutation_invariant(vocab, beta, seed):
    rng = np.random.RandomState(seed)
    left = dict(zip(vocab, rng.dirichlet(np.ones(len(vocab)))))
    right = dict(zip(vocab, rng.dirichlet(np.ones(len(vocab)))))
    prior = UnigramPrior.from_counts({w: int(c) for w, c in zip(vocab, rng.randint(1, 50, len(vocab)))})
    out = inject_target(
        SubstituteDistribution(left), SubstituteDistribution(right), prior, beta
    )
    assert math.fsum(out.probs.values()) == approx(1.0, abs=1e-9)
    # permute insertion order: results identical
    perm_left = SubstituteDistribution(dict(reversed(list(left.items()))))
    perm_right = SubstituteDistribution(dict(reversed(list(right.items()))))
    out2 = inject_target(perm_left, perm_right, prior, beta)
    for w in vocab:
        assert out2.get(w) == approx(out.get(w), abs=1e-9)


# ---------------------------------------------------------------- target similarity


def axis_table():
    return EmbeddingTable(
        dim=2, vectors={"T": np.array([1.0, 0.0]), "a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])}
    )


def test_target_similarity_hand_softmax():
    out = target_similarity("T", axis_table(), 1.0, ["a", "b"])
    assert out.get("a") == approx(E / (E + 1), abs=1e-4)
    assert out.get("b") == approx(1 / (E + 1), abs=1e-4)


def test_target_similarity_equal_products_uniform():
    table = EmbeddingTable(
        dim=2, vectors={"T": np.array([0.0, 0.0]), "a": np.array([1.0, 1.0]), "b": np.array([-2.0, 5.0])}
    )
    out = target_similarity("T", table, 1.0, ["a", "b"])
    assert out.get("a") == approx(0.5)


def test_target_similarity_high_temperature_limit():
    out = target_similarity("T", axis_table(), 1e6, ["a", "b"])
    assert out.get("a") == approx(0.5, abs=1e-4)
    assert out.get("b") == approx(0.5, abs=1e-4)


def test_target_similarity_missing_target():
    with pytest.raises(TargetEmbeddingMissingError):
        target_similarity("zzz", axis_table(), 1.0, ["a"])


def test_target_similarity_missing_vocab_word_gets_min_score():
    out = target_similarity("T", axis_table(), 1.0, ["a", "b", "unseen"])
    assert out.get("unseen") == approx(out.get("b"))


@given(st.floats(min_value=0.05, max_value=20.0), st.floats(min_value=0.05, max_value=20.0))
def test_target_similarity_argmax_temperature_invariant(t1, t2):
    table = EmbeddingTable(
        dim=3,
        vectors={
            "T": np.array([1.0, 0.5, -0.25]),
            "a": np.array([0.9, 0.4, 0.0]),
            "b": np.array([-1.0, 2.0, 0.5]),
            "c": np.array([0.0, 0.0, 1.0]),
        },
    )
    top1 = rank(target_similarity("T", table, t1, ["a", "b", "c"]), 1)
    top2 = rank(target_similarity("T", table, t2, ["a", "b", "c"]), 1)
    assert top1[0][0] == top2[0][0]


@given(st.floats(min_value=0.1, max_value=10.0), st.floats(min_value=0.1, max_value=10.0))
def test_target_similarity_scale_temperature_equivalence(temp, c):
    base = EmbeddingTable(
        dim=2, vectors={"T": np.array([1.0, 0.4]), "a": np.array([0.3, 0.9]), "b": np.array([-0.2, 0.1])}
    )
    # scaling the *target* vector by c scales every inner product by c
    scaled = EmbeddingTable(
        dim=2, vectors={"T": np.array([c, 0.4 * c]), "a": np.array([0.3, 0.9]), "b": np.array([-0.2, 0.1])}
    )
    ref = target_similarity("T", base, temp, ["a", "b"])
    out = target_similarity("T", scaled, c * temp, ["a", "b"])
    for w in ("a", "b"):
        assert out.get(w) == approx(ref.get(w), abs=1e-9)


# ---------------------------------------------------------------- baselines


def test_ooc_parallel_first():
    table = EmbeddingTable(
        dim=2,
        vectors={"cat": np.array([1.0, 0.0]), "a": np.array([2.0, 0.0]), "b": np.array([0.0, 3.0])},
    )
    out = ooc_scores(inst(["the", "cat", "sat"], 1), table)
    # "a" is parallel (cosine 1, ties with the target itself), "b" orthogonal
    assert rank(out, 1)[0][0] == "a"
    assert out.get("a") > out.get("b")


def test_ooc_context_invariant():
    table = EmbeddingTable(
        dim=2,
        vectors={"cat": np.array([1.0, 0.0]), "a": np.array([2.0, 0.0]), "b": np.array([0.0, 3.0])},
    )
    out1 = ooc_scores(inst(["the", "cat", "sat"], 1), table)
    out2 = ooc_scores(inst(["completely", "cat", "different", "words"], 1), table)
    assert out1.probs == out2.probs


def test_ooc_missing_target():
    table = EmbeddingTable(dim=2, vectors={"a": np.array([1.0, 0.0])})
    with pytest.raises(TargetEmbeddingMissingError):
        ooc_scores(inst(["the", "zzz"], 1), table)


def test_npic_opposing_components():
    # two-word vocab; target component prefers a (the target itself),
    # context component prefers b, scores symmetric -> uniform product
    word = EmbeddingTable(dim=2, vectors={"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])})
    ctx = EmbeddingTable(dim=2, vectors={"c": np.array([0.0, 1.0])})
    out = npic_scores(inst(["c", "a"], 1), word, ctx)
    assert out.get("a") == approx(0.5, abs=1e-9)
    assert out.get("b") == approx(0.5, abs=1e-9)


def test_npic_uniform_context_equals_target_softmax():
    word = EmbeddingTable(dim=2, vectors={"a": np.array([1.0, 0.0]), "b": np.array([0.0, 1.0])})
    ctx = EmbeddingTable(dim=2, vectors={"c": np.array([0.0, 0.0])})
    out = npic_scores(inst(["c", "a"], 1), word, ctx)
    ref = target_similarity("a", word, 1.0, ["a", "b"])
    assert out.get("a") == approx(ref.get("a"), abs=1e-9)
    assert out.get("b") == approx(ref.get("b"), abs=1e-9)


def test_c2v_rank_hand_softmax():
    table = EmbeddingTable(dim=2, vectors={"a": np.array([2.0, 0.0]), "b": np.array([0.0, 5.0])})
    out = c2v_rank(inst(["x", "y"], 0), np.array([1.0, 0.0]), table)
    assert out.get("a") == approx(E**2 / (E**2 + 1), abs=1e-4)
    assert out.get("b") == approx(1 / (E**2 + 1), abs=1e-4)


def test_c2v_rank_zero_vector_uniform():
    table = EmbeddingTable(dim=2, vectors={"a": np.array([2.0, 0.0]), "b": np.array([0.0, 5.0])})
    out = c2v_rank(inst(["x", "y"], 0), np.zeros(2), table)
    assert out.get("a") == approx(0.5)


def test_c2v_rank_dimension_mismatch():
    from lexsub.estimators.config import DimensionMismatchError

    table = EmbeddingTable(dim=2, vectors={"a": np.array([2.0, 0.0])})
    with pytest.raises(DimensionMismatchError):
        c2v_rank(inst(["x", "y"], 0), np.zeros(3), table)


def test_filter_vocabulary():
    kept = filter_vocabulary(["cat", "Cat", "##ing", "[MASK]", "it's", "na1ve", "dog", ""])
    assert "cat" in kept and "dog" in kept
    assert all(w.isalpha() for w in kept)


# ---------------------------------------------------------------- toy table backend


def test_toy_table_exact_lookup(toy_backend):
    out = toy_backend.context_distribution(inst(["the", "X", "sat"], 1), EstimatorConfig("toy-table"), hide_target=True)
    assert out.get("cat") == approx(0.7)
    assert out.get("dog") == approx(0.3)


def test_toy_table_neighbor_fallback(toy_backend):
    # full join fails ("big . the" vs "sat down"), immediate neighbors match
    out = toy_backend.context_distribution(
        inst(["big", ".", "the", "X", "sat", "down"], 3), EstimatorConfig("toy-table"), hide_target=True
    )
    assert out.get("cat") == approx(0.7)


def test_toy_table_default_fallback(toy_backend):
    out = toy_backend.context_distribution(inst(["no", "match", "here"], 1), EstimatorConfig("toy-table"), hide_target=True)
    assert out.get("cat") == approx(0.5)
    assert out.get("bird") == approx(0.2)


def test_toy_table_uniform_when_no_default():
    backend = ToyTableBackend(entries={}, vocabulary=("a", "b"))
    out = backend.context_distribution(inst(["x", "y"], 0), EstimatorConfig("toy-table"), hide_target=True)
    assert out.get("a") == approx(0.5)


def test_toy_table_from_json(tmp_path):
    import json

    path = tmp_path / "table.json"
    path.write_text(
        json.dumps(
            {
                "vocabulary": ["cat", "dog"],
                "entries": [{"left": "the", "right": "sat", "weights": {"cat": 7, "dog": 3}}],
                "default": {"cat": 1, "dog": 1},
                "embeddings": {"dim": 2, "vectors": {"cat": [1, 0], "dog": [0, 1], "feline": [1, 0.2]}},
                "prior": {"cat": 5, "dog": 5},
            }
        )
    )
    backend = ToyTableBackend.from_json(path)
    out = backend.context_distribution(inst(["the", "X", "sat"], 1), EstimatorConfig("toy-table"), hide_target=True)
    assert out.get("cat") == approx(0.7)
    assert backend.target_embeddings is not None and "feline" in backend.target_embeddings


# ---------------------------------------------------------------- recording stubs


def test_masked_stub_masks_target_under_notgt():
    backend = RecordingMaskedBackend(vocabulary=("cat", "dog"))
    instance = inst(["the", "cat", "sat", "cat"], 1)
    backend.context_distribution(instance, EstimatorConfig("masked-lm", injection="notgt"), hide_target=True)
    tokens, idx = backend.calls[-1]
    assert tokens[idx] == backend.mask_token
    assert "cat" not in tokens


def test_masked_stub_keeps_target_under_base():
    backend = RecordingMaskedBackend(vocabulary=("cat", "dog"))
    instance = inst(["the", "cat", "sat", "cat"], 1)
    backend.context_distribution(instance, EstimatorConfig("masked-lm", injection="base"), hide_target=False)
    tokens, idx = backend.calls[-1]
    # base injection scores with the target word left in place
    assert tokens == ("the", "cat", "sat", "cat")
    assert idx == 1


def test_masked_stub_pattern_blank_becomes_mask():
    backend = RecordingMaskedBackend(vocabulary=("cat", "dog"))
    instance = apply_pattern(inst(["the", "cat", "sat"], 1), "T and then _")
    backend.context_distribution(instance, EstimatorConfig("masked-lm", injection="pattern"), hide_target=False)
    tokens, idx = backend.calls[-1]
    assert tokens[idx] == backend.mask_token
    assert "cat" in tokens  # pattern leaves the target word visible


def test_permutation_stub_excludes_target_when_hidden():
    backend = RecordingPermutationBackend(vocabulary=("cat", "dog"))
    instance = inst(["the", "cat", "sat", "cat"], 1)
    backend.context_distribution(instance, EstimatorConfig("permutation-lm", injection="notgt"), hide_target=True)
    visible = backend.calls[-1]
    assert "cat" not in visible


def test_permutation_stub_shows_target_in_pattern_mode():
    backend = RecordingPermutationBackend(vocabulary=("cat", "dog"))
    instance = apply_pattern(inst(["the", "cat", "sat"], 1), "T and _")
    backend.context_distribution(instance, EstimatorConfig("permutation-lm", injection="pattern"), hide_target=False)
    visible = backend.calls[-1]
    assert "cat" in visible  # pattern shows the target
    assert "_" not in visible  # but never the prediction slot


def test_stub_scorer_output_used():
    backend = RecordingMaskedBackend(
        vocabulary=("cat", "dog"), scorer=lambda tokens, idx: {"cat": 3.0, "dog": 1.0}
    )
    out = backend.context_distribution(inst(["the", "X", "sat"], 1), EstimatorConfig("masked-lm"), hide_target=True)
    assert out.get("cat") == approx(0.75)


# ---------------------------------------------------------------- n-gram forward/backward


CORPUS = [
    ["the", "cat", "sat"],
    ["the", "cat", "ran"],
    ["the", "dog", "sat"],
    ["a", "dog", "ran"],
]


def test_ngram_left_right_distributions():
    backend = NgramForwardBackwardBackend(CORPUS, add_k=0.1)
    left = backend.left_distribution(("the",))
    right = backend.right_distribution(("sat",))
    # forward: "cat" follows "the" twice, "dog" once
    assert left.get("cat") > left.get("dog") > 0
    # backward: both "cat" and "dog" precede "sat" once
    assert right.get("cat") == approx(right.get("dog"))


def test_ngram_forward_hand_computation():
    backend = NgramForwardBackwardBackend(CORPUS, add_k=0.5)
    left = backend.left_distribution(("ignored", "the"))
    # vocab counts after "the": cat 2, dog 1; add-k over the 6 vocab types
    denom = 3 + 0.5 * len(backend.vocabulary)
    assert len(backend.vocabulary) == 6
    assert left.get("cat") == approx((2 + 0.5) / denom, abs=1e-12)
    assert left.get("dog") == approx((1 + 0.5) / denom, abs=1e-12)
    assert left.get("sat") == approx(0.5 / denom, abs=1e-12)


def test_ngram_combines_both_sides():
    backend = NgramForwardBackwardBackend(CORPUS, add_k=0.01)
    out = backend.context_distribution(
        inst(["a", "X", "ran"], 1), EstimatorConfig("forward-backward-lm", beta=0.0), hide_target=True
    )
    assert rank(out, 1)[0][0] == "dog"  # "a dog ran" seen; "a cat" never


def test_ngram_sentence_boundaries():
    backend = NgramForwardBackwardBackend(CORPUS, add_k=0.1)
    start = backend.left_distribution(())
    assert start.get("the") > start.get("cat")  # "the" starts 3 of 4 sentences


# ---------------------------------------------------------------- other backends


def test_dependency_backend_ooc_variant_is_context_invariant():
    emb = EmbeddingTable(
        dim=2,
        vectors={"cat": np.array([1.0, 0.0]), "kitten": np.array([0.9, 0.1]), "sofa": np.array([0.0, 1.0])},
    )
    backend = DependencyEmbeddingBackend(emb, variant="ooc")
    cfg = EstimatorConfig("dependency-embedding", injection="base")
    out1 = backend.context_distribution(inst(["the", "cat", "sat"], 1), cfg, hide_target=False)
    out2 = backend.context_distribution(inst(["my", "cat", "left", "early"], 1), cfg, hide_target=False)
    assert out1.probs == out2.probs
    assert backend.supported_injections == ("base",)


def test_context_embedding_backend_uses_mean_context():
    emb = EmbeddingTable(
        dim=2,
        vectors={
            "the": np.array([1.0, 0.0]),
            "mat": np.array([1.0, 0.0]),
            "cat": np.array([5.0, 5.0]),
            "rug": np.array([1.0, 0.0]),
            "sky": np.array([0.0, 1.0]),
        },
    )
    backend = ContextEmbeddingBackend(emb)
    out = backend.context_distribution(inst(["the", "cat", "mat"], 1), EstimatorConfig("context-embedding"), hide_target=True)
    # context mean is (1,0); "rug" aligned, "sky" orthogonal
    assert out.get("rug") > out.get("sky")


# ---------------------------------------------------------------- generate facade


def toy_with_embeddings():
    emb = EmbeddingTable(
        dim=2,
        vectors={"cat": np.array([3.0, 0.0]), "dog": np.array([0.0, 3.0]), "bird": np.array([0.0, 2.0])},
    )
    return ToyTableBackend(
        entries={("the", "sat"): {"cat": 0.4, "dog": 0.4, "bird": 0.2}},
        vocabulary=("cat", "dog", "bird"),
        target_embeddings=emb,
    )


def test_generate_embs_boosts_target_neighbors():
    backend = toy_with_embeddings()
    instance = inst(["the", "cat", "sat"], 1)
    base = generate(backend, instance, EstimatorConfig("toy-table", injection="notgt"))
    embs = generate(backend, instance, EstimatorConfig("toy-table", injection="embs", beta=0.0))
    assert embs.get("cat") > base.get("cat")


def test_generate_embs_neutral_composition():
    # uniform p_target + beta=0 reproduces the context distribution
    emb = EmbeddingTable(
        dim=2, vectors={w: np.zeros(2) for w in ("cat", "dog", "bird", "x")}
    )
    backend = ToyTableBackend(
        entries={("the", "sat"): {"cat": 0.5, "dog": 0.3, "bird": 0.2}},
        vocabulary=("cat", "dog", "bird"),
        target_embeddings=emb,
    )
    instance = inst(["the", "X", "sat"], 1)
    base = generate(backend, instance, EstimatorConfig("toy-table", injection="notgt"))
    embs = generate(backend, instance, EstimatorConfig("toy-table", injection="embs", beta=0.0))
    for w in ("cat", "dog", "bird"):
        assert embs.get(w) == approx(base.get(w), abs=1e-9)


def test_generate_pattern_reaches_backend():
    backend = RecordingMaskedBackend(vocabulary=("cat", "dog"))
    instance = inst(["the", "cat", "sat"], 1)
    generate(backend, instance, EstimatorConfig("masked-lm", injection="pattern", pattern="T and then _"))
    tokens, idx = backend.calls[-1]
    assert tokens == ("the", "cat", "and", "then", backend.mask_token, "sat")
    assert idx == 4


def test_generate_unsupported_injection():
    backend = DependencyEmbeddingBackend(
        EmbeddingTable(dim=2, vectors={"cat": np.array([1.0, 0.0])}), variant="ooc"
    )
    with pytest.raises(UnsupportedInjectionError):
        generate(backend, inst(["the", "cat"], 1), EstimatorConfig("dependency-embedding", injection="embs"))


def test_generate_notgt_output_normalized(toy_backend):
    out = generate(toy_backend, inst(["the", "X", "sat"], 1), EstimatorConfig("toy-table", injection="notgt"))
    assert math.fsum(out.probs.values()) == approx(1.0, abs=1e-9)


# ---------------------------------------------------------------- registry


def test_registry_builds_toy_table(tmp_path):
    import json

    (tmp_path / "t.json").write_text(
        json.dumps({"vocabulary": ["a", "b"], "entries": [], "default": {"a": 1, "b": 1}})
    )
    backend = build_backend({"name": "x", "backend": "toy-table", "table": "t.json"}, base_dir=tmp_path)
    assert backend.backend_type == "toy-table"


def test_registry_builds_ngram(tmp_path):
    (tmp_path / "c.txt").write_text("the cat sat\nthe dog sat\n")
    backend = build_backend(
        {"name": "x", "backend": "forward-backward-lm", "corpus": "c.txt"}, base_dir=tmp_path
    )
    assert backend.backend_type == "forward-backward-lm"
    assert "cat" in backend.vocabulary


def test_registry_rejects_duplicates(tmp_path):
    from lexsub.estimators.config import BackendUnavailableError

    (tmp_path / "c.txt").write_text("a b\n")
    entries = [
        {"name": "m", "backend": "forward-backward-lm", "corpus": "c.txt"},
        {"name": "m", "backend": "forward-backward-lm", "corpus": "c.txt"},
    ]
    with pytest.raises(BackendUnavailableError):
        build_registry(entries, base_dir=tmp_path)


def test_registry_unknown_backend(tmp_path):
    from lexsub.estimators.config import BackendUnavailableError

    with pytest.raises(BackendUnavailableError):
        build_backend({"name": "x", "backend": "quantum-lm"}, base_dir=tmp_path)
