import math

import numpy as np
import pytest
from pytest import approx

from lexsub.core import normalize
from lexsub.estimators import SubstituteEstimator
from lexsub.wsi import (
    SubstituteVector,
    TooFewInstances,
    WsiInstance,
    avg_2010,
    build_substitute_vectors,
    choose_k_silhouette,
    cluster,
    cosine_distance_matrix,
    export_semeval,
    group_by_target,
    merge_trace,
    paired_fscore,
    read_wsi_jsonl,
    v_measure,
)


class ScriptedBackend(SubstituteEstimator):
    """Fixed substitute sets per instance id, for fully scripted pipelines."""

    backend_type = "toy-table"
    default_injection = "notgt"
    supported_injections = ("notgt", "base")

    def __init__(self, script):
        self.script = {k: dict(v) for k, v in script.items()}
        vocab = sorted({w for d in self.script.values() for w in d})
        super().__init__(vocab)

    def context_distribution(self, instance, config, hide_target):
        return normalize(self.script[instance.instance_id])


def wsi_inst(i, sense=None, lemma="bank"):
    return WsiInstance(f"{lemma}.{i}", ("the", lemma, "here"), 1, lemma, "noun", gold_sense=sense)


# ---------------------------------------------------------------- vectors


def test_vectors_identical_bags_distance_zero():
    script = {
        "bank.1": {"shore": 0.6, "slope": 0.4},
        "bank.2": {"shore": 0.5, "slope": 0.5},  # same support, other weights
    }
    vectors = build_substitute_vectors([wsi_inst(1), wsi_inst(2)], ScriptedBackend(script), n=5)
    dist = cosine_distance_matrix(vectors)
    assert dist[0, 1] == approx(0.0, abs=1e-12)  # binary TF ignores the weights


def test_vectors_disjoint_bags_distance_one():
    script = {
        "bank.1": {"shore": 1.0},
        "bank.2": {"firm": 1.0},
    }
    vectors = build_substitute_vectors([wsi_inst(1), wsi_inst(2)], ScriptedBackend(script), n=5)
    dist = cosine_distance_matrix(vectors)
    assert dist[0, 1] == approx(1.0)


def test_vectors_idf_downweights_ubiquitous_lemma():
    script = {
        "bank.1": {"shore": 0.5, "money": 0.5},
        "bank.2": {"firm": 0.5, "money": 0.5},
        "bank.3": {"slope": 0.5, "money": 0.5},
    }
    vectors = build_substitute_vectors(
        [wsi_inst(1), wsi_inst(2), wsi_inst(3)], ScriptedBackend(script), n=5
    )
    v1 = vectors[0].tfidf
    # df(money)=3 -> idf 1; df(shore)=1 -> idf ln(3)+1
    assert v1["shore"] / v1["money"] == approx(math.log(3) + 1)
    assert math.fsum(w * w for w in v1.values()) == approx(1.0)


def test_vectors_top_n_truncates():
    script = {
        "bank.1": {"a": 0.4, "b": 0.3, "c": 0.2, "d": 0.1},
        "bank.2": {"a": 0.4, "b": 0.3, "c": 0.2, "d": 0.1},
    }
    vectors = build_substitute_vectors([wsi_inst(1), wsi_inst(2)], ScriptedBackend(script), n=2)
    assert set(vectors[0].tfidf) == {"a", "b"}


def test_vectors_reject_mixed_targets():
    script = {"bank.1": {"a": 1.0}, "coast.2": {"a": 1.0}}
    with pytest.raises(ValueError):
        build_substitute_vectors(
            [wsi_inst(1), wsi_inst(2, lemma="coast")], ScriptedBackend(script)
        )


# ---------------------------------------------------------------- merge trace


def hand_matrix():
    dist = np.zeros((4, 4))
    pairs = {(0, 1): 0.1, (2, 3): 0.1, (0, 2): 0.8, (0, 3): 0.85, (1, 2): 0.9, (1, 3): 0.95}
    for (i, j), d in pairs.items():
        dist[i, j] = dist[j, i] = d
    return dist


def test_merge_trace_hand_dendrogram():
    trace = merge_trace(hand_matrix())
    # the two 0.1 merges tie; smallest representative pair goes first
    assert trace[0] == (0, 1, approx(0.1))
    assert trace[1] == (2, 3, approx(0.1))
    rep_a, rep_b, linkage = trace[2]
    assert (rep_a, rep_b) == (0, 2)
    assert linkage == approx((0.8 + 0.85 + 0.9 + 0.95) / 4)


def test_merge_trace_deterministic():
    assert merge_trace(hand_matrix()) == merge_trace(hand_matrix())


def vector_from_words(instance_id, words):
    weights = {w: 1.0 for w in words}
    norm = math.sqrt(len(words))
    return SubstituteVector(instance_id, {w: v / norm for w, v in weights.items()})


def test_cluster_k2_recovers_separated_groups():
    vectors = [
        vector_from_words("i1", ["shore", "slope", "hill"]),
        vector_from_words("i2", ["shore", "slope", "ridge"]),
        vector_from_words("i3", ["firm", "money", "lender"]),
        vector_from_words("i4", ["firm", "money", "teller"]),
    ]
    labels = cluster(vectors, k=2)
    assert labels["i1"] == labels["i2"]
    assert labels["i3"] == labels["i4"]
    assert labels["i1"] != labels["i3"]


def test_cluster_k_equals_n_gives_singletons():
    vectors = [vector_from_words(f"i{i}", [f"w{i}"]) for i in range(3)]
    labels = cluster(vectors, k=3)
    assert sorted(labels.values()) == [0, 1, 2]


def test_cluster_k_one_single_cluster():
    vectors = [vector_from_words(f"i{i}", [f"w{i}"]) for i in range(3)]
    labels = cluster(vectors, k=1)
    assert set(labels.values()) == {0}


def test_cluster_rejects_bad_k():
    vectors = [vector_from_words(f"i{i}", [f"w{i}"]) for i in range(3)]
    with pytest.raises(ValueError):
        cluster(vectors, k=4)
    with pytest.raises(ValueError):
        cluster(vectors, k="three")


def test_cluster_too_few():
    with pytest.raises(TooFewInstances):
        cluster([vector_from_words("i1", ["a"])])


def test_cluster_permutation_equivariant():
    vectors = [
        vector_from_words("i1", ["shore", "slope"]),
        vector_from_words("i2", ["shore", "hill"]),
        vector_from_words("i3", ["firm", "money"]),
        vector_from_words("i4", ["money", "lender"]),
    ]
    a = cluster(vectors, k=2)
    b = cluster(list(reversed(vectors)), k=2)

    def partition(labels):
        groups = {}
        for instance_id, label in labels.items():
            groups.setdefault(label, set()).add(instance_id)
        return {frozenset(g) for g in groups.values()}

    assert partition(a) == partition(b)


def test_choose_k_silhouette_three_groups():
    words = {0: ["a", "b"], 1: ["c", "d"], 2: ["e", "f"]}
    vectors = []
    for g in range(3):
        for i in range(3):
            vectors.append(vector_from_words(f"g{g}i{i}", words[g] + [f"noise{g}{i}"]))
    dist = cosine_distance_matrix(vectors)
    trace = merge_trace(dist)
    assert choose_k_silhouette(dist, trace) == 3


def test_auto_k_end_to_end_two_senses():
    vectors = [
        vector_from_words("i1", ["shore", "slope", "hill"]),
        vector_from_words("i2", ["shore", "slope", "ridge"]),
        vector_from_words("i3", ["shore", "hill", "ridge"]),
        vector_from_words("i4", ["firm", "money", "lender"]),
        vector_from_words("i5", ["firm", "money", "teller"]),
        vector_from_words("i6", ["money", "lender", "teller"]),
    ]
    labels = cluster(vectors, k="auto")
    assert len(set(labels.values())) == 2
    assert labels["i1"] == labels["i2"] == labels["i3"]
    assert labels["i4"] == labels["i5"] == labels["i6"]


# ---------------------------------------------------------------- metrics


def test_v_measure_perfect_and_permuted():
    gold = {"a": "s1", "b": "s1", "c": "s2"}
    assert v_measure({"a": 0, "b": 0, "c": 1}, gold) == approx(1.0)
    assert v_measure({"a": 5, "b": 5, "c": 2}, gold) == approx(1.0)  # label names irrelevant


def test_v_measure_degenerate():
    gold = {"a": "s1", "b": "s1", "c": "s2"}
    assert v_measure({"a": 0, "b": 0, "c": 0}, gold) == approx(0.0)


def test_paired_fscore_perfect():
    gold = {"a": "s1", "b": "s1", "c": "s2"}
    assert paired_fscore({"a": 0, "b": 0, "c": 1}, gold) == approx(1.0)


def test_paired_fscore_hand_half():
    # all-in-one clustering: pred pairs {ab, ac, bc}, gold pairs {ab}
    # precision 1/3, recall 1 -> F = 0.5
    gold = {"a": "s1", "b": "s1", "c": "s2"}
    assert paired_fscore({"a": 0, "b": 0, "c": 0}, gold) == approx(0.5)


def test_paired_fscore_empty_conventions():
    # all singletons on both sides: no pairs anywhere, vacuously perfect
    assert paired_fscore({"a": 0, "b": 1}, {"a": "x", "b": "y"}) == 1.0
    # singleton prediction vs paired gold: one side empty -> 0
    assert paired_fscore({"a": 0, "b": 1}, {"a": "x", "b": "x"}) == 0.0


def test_metric_instance_set_mismatch():
    with pytest.raises(ValueError):
        paired_fscore({"a": 0}, {"a": "x", "b": "y"})
    with pytest.raises(ValueError):
        v_measure({"a": 0}, {"a": "x", "b": "y"})


def test_avg_2010_geometric_mean():
    gold = {"a": "s1", "b": "s1", "c": "s2"}
    pred = {"a": 0, "b": 0, "c": 0}
    expected = math.sqrt(v_measure(pred, gold) * paired_fscore(pred, gold))
    assert avg_2010(pred, gold) == approx(expected)
    assert avg_2010({"a": 0, "b": 0, "c": 1}, gold) == approx(1.0)


# ---------------------------------------------------------------- pipeline + io


def test_scripted_pipeline_recovers_senses():
    script = {
        "bank.1": {"shore": 0.5, "slope": 0.3, "hill": 0.2},
        "bank.2": {"shore": 0.4, "slope": 0.4, "ridge": 0.2},
        "bank.3": {"firm": 0.5, "money": 0.3, "lender": 0.2},
        "bank.4": {"firm": 0.4, "money": 0.4, "teller": 0.2},
    }
    instances = [
        wsi_inst(1, "river"),
        wsi_inst(2, "river"),
        wsi_inst(3, "finance"),
        wsi_inst(4, "finance"),
    ]
    vectors = build_substitute_vectors(instances, ScriptedBackend(script), n=10)
    pred = cluster(vectors, k=2)
    gold = {i.instance_id: i.gold_sense for i in instances}
    assert v_measure(pred, gold) == approx(1.0)
    assert paired_fscore(pred, gold) == approx(1.0)
    assert avg_2010(pred, gold) == approx(1.0)


def test_export_semeval_format(tmp_path):
    path = tmp_path / "keys.txt"
    export_semeval({"bank.2": 1, "bank.1": 0}, "bank.n", path)
    assert path.read_text() == "bank.n bank.1 bank.n.0\nbank.n bank.2 bank.n.1\n"


def test_read_wsi_jsonl(tmp_path):
    path = tmp_path / "wsi.jsonl"
    path.write_text(
        '{"id": "bank.1", "tokens": ["the", "bank"], "target_index": 1, "lemma": "bank", "pos": "noun", "gold_sense": "river"}\n'
        '{"id": "bank.2", "tokens": ["a", "bank"], "target_index": 1, "lemma": "bank", "pos": "noun"}\n'
    )
    instances = read_wsi_jsonl(path)
    assert instances[0].gold_sense == "river"
    assert instances[1].gold_sense is None


def test_group_by_target():
    instances = [wsi_inst(1), wsi_inst(2), wsi_inst(3, lemma="coast")]
    grouped = group_by_target(instances)
    assert set(grouped) == {("bank", "noun"), ("coast", "noun")}
    assert len(grouped[("bank", "noun")]) == 2
