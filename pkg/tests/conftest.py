"""Shared fixtures: a tiny instance, a hand-built synset graph, toy backends."""

import numpy as np
import pytest

from lexsub.core import EmbeddingTable, LexSubInstance, UnigramPrior
from lexsub.estimators.backends import ToyTableBackend
from lexsub.relations import SynsetGraph


@pytest.fixture
def cat_instance():
    return LexSubInstance(
        instance_id="cat.n.1",
        tokens=("the", "cat", "sat", "on", "the", "mat"),
        target_index=1,
        target_lemma="cat",
        target_pos="noun",
        gold={"kitten": 3, "feline": 1},
    )


@pytest.fixture
def toy_backend():
    # the worked lookup-table example: ("the", "sat") context around the target
    return ToyTableBackend(
        entries={("the", "sat"): {"cat": 0.7, "dog": 0.3}},
        default={"cat": 0.5, "dog": 0.3, "bird": 0.2},
        vocabulary=("cat", "dog", "bird"),
    )


@pytest.fixture
def animal_graph():
    """entity > animal > {canine > {dog, wolf}, feline > cat}, plus an adj pair."""
    synsets = [
        ("n1", "noun", ["entity"]),
        ("n2", "noun", ["animal", "creature"]),
        ("n3", "noun", ["canine"]),
        ("n4", "noun", ["dog", "domestic_dog"]),
        ("n5", "noun", ["wolf"]),
        ("n6", "noun", ["feline"]),
        ("n7", "noun", ["cat"]),
        ("a1", "adj", ["bright", "luminous"]),
    ]
    edges = [
        ("n2", "n1"),
        ("n3", "n2"),
        ("n4", "n3"),
        ("n5", "n3"),
        ("n6", "n2"),
        ("n7", "n6"),
    ]
    return SynsetGraph.from_triples(synsets, edges)


def unit_embeddings(words, dim=4, seed=0):
    rng = np.random.default_rng(seed)
    vectors = {}
    for w in words:
        v = rng.normal(size=dim)
        vectors[w] = v / np.linalg.norm(v)
    return EmbeddingTable(dim=dim, vectors=vectors)


@pytest.fixture
def uniform_prior():
    return UnigramPrior.uniform(4)
