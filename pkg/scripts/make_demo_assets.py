#!/usr/bin/env python3
"""Generate the self-contained demo assets referenced by lexsub.yaml.

Everything is synthetic and deterministic: a small sentence corpus for
the bigram forward/backward backend, clustered word vectors, a toy
context table, a mini WordNet in database file format, demo instances
with weighted gold, a WSI instance file with two senses of "bright",
and a SNIPS-format slot dataset with matching slot-type vectors.

Usage: python scripts/make_demo_assets.py [--dest assets] [--seed 13]
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from lexsub.core import EmbeddingTable, LexSubInstance, write_instances_jsonl
from lexsub.snips import synthetic_snips, write_snips, write_word2vec_text
from lexsub.wordnet_db import write_wndb

CORPUS = [
    "the bright girl reads a book",
    "the clever girl reads a novel",
    "the intelligent student reads the story",
    "a smart boy reads the book",
    "the gifted scientist reads a paper",
    "the bright lamp glows in the room",
    "a shiny lamp glows near the window",
    "the luminous star shines at night",
    "the radiant sun shines on the river",
    "the glittering light shines on the shore",
    "the dog runs along the river",
    "a puppy runs in the garden",
    "the cat sits on the mat",
    "a kitten sits near the lamp",
    "the animal sleeps in the house",
    "the pet sleeps on the bed",
    "the dog sat on the mat",
    "the cat sat near the window",
    "the student studies at the school",
    "the scientist studies the star",
    "the girl saves money at the bank",
    "the boy saves cash at the bank",
    "the bank holds the money",
    "the river bank is near the shore",
    "the boat floats near the bank",
    "the bright boy studies the book",
    "a brilliant scientist studies the light",
    "the dull lamp glows dimly",
    "the dim light glows in the house",
    "the smart student reads a story",
    "the clever scientist reads the novel",
    "a bright star shines above the shore",
    "the shiny coin sits on the table",
    "the dog walks to the school",
    "the cat walks along the shore",
    "a dog sleeps near the house",
    "the girl walks to the bank",
    "the boy runs to the school",
    "the sun glows above the river",
    "the moon shines above the house",
]

CLUSTERS = {
    "luminosity": ["shiny", "glittering", "luminous", "radiant", "dim", "dull"],
    "intellect": ["intelligent", "clever", "smart", "brilliant", "gifted"],
    "animal": ["dog", "cat", "puppy", "kitten", "pet", "animal"],
    "person": ["girl", "boy", "student", "scientist"],
    "finance": ["bank", "money", "cash", "coin"],
    "nature": ["river", "shore", "star", "sun", "moon", "light"],
    "reading": ["book", "novel", "story", "paper"],
    "motion": ["runs", "walks", "swims", "run", "walk", "swim"],
}

# synset rows: (offset, pos, lemmas, hypernym offsets)
WORDNET_ROWS = [
    (1, "noun", ["entity"], []),
    (2, "noun", ["object"], [1]),
    (3, "noun", ["living thing"], [1]),
    (4, "noun", ["animal"], [3]),
    (5, "noun", ["person"], [3]),
    (6, "noun", ["dog", "canine"], [4]),
    (7, "noun", ["cat", "feline"], [4]),
    (8, "noun", ["puppy"], [6]),
    (9, "noun", ["kitten"], [7]),
    (10, "noun", ["girl"], [5]),
    (11, "noun", ["boy"], [5]),
    (12, "noun", ["student"], [5]),
    (13, "noun", ["scientist"], [5]),
    (14, "noun", ["bank", "depository"], [2]),
    (15, "noun", ["bank", "slope"], [2]),
    (16, "noun", ["money"], [2]),
    (17, "noun", ["cash"], [16]),
    (18, "noun", ["coin"], [17]),
    (19, "noun", ["book", "volume"], [2]),
    (20, "noun", ["novel"], [19]),
    (21, "noun", ["story"], [19]),
    (22, "noun", ["star"], [2]),
    (23, "noun", ["sun"], [22]),
    (24, "noun", ["lamp"], [2]),
    (25, "noun", ["light"], [2]),
    (26, "verb", ["move"], []),
    (27, "verb", ["run"], [26]),
    (28, "verb", ["walk"], [26]),
    (29, "verb", ["swim"], [26]),
    (30, "verb", ["read"], []),
    (31, "verb", ["study", "read"], [30]),
    (32, "adj", ["bright", "shiny", "luminous"], []),
    (33, "adj", ["bright", "intelligent", "clever"], []),
    (34, "adj", ["smart", "clever"], []),
    (35, "adj", ["dull", "dim"], []),
    (36, "adj", ["brilliant", "gifted"], []),
    (37, "noun", ["glitter"], [25]),
    (38, "adj", ["glittering", "radiant"], []),
]

SENSE_ORDER = {
    ("bright", "adj"): [32, 33],
    ("clever", "adj"): [33, 34],
    ("bank", "noun"): [14, 15],
    ("read", "verb"): [30, 31],
}

DEMO_INSTANCES = [
    ("bright.a.1", "the bright girl reads a book", 1, "bright", "adj",
     {"intelligent": 3, "clever": 2, "smart": 1}),
    ("bright.a.2", "the bright lamp glows in the room", 1, "bright", "adj",
     {"shiny": 3, "luminous": 2, "glittering": 1}),
    ("bright.a.3", "a bright star shines above the shore", 1, "bright", "adj",
     {"luminous": 2, "shiny": 2, "radiant": 1}),
    ("bright.a.4", "the bright boy studies the book", 1, "bright", "adj",
     {"clever": 3, "intelligent": 1, "gifted": 1}),
    ("dog.n.1", "the dog runs along the river", 1, "dog", "noun",
     {"puppy": 2, "animal": 1, "pet": 1}),
    ("dog.n.2", "a dog sleeps near the house", 1, "dog", "noun",
     {"pet": 2, "puppy": 1}),
    ("cat.n.1", "the cat sits on the mat", 1, "cat", "noun",
     {"kitten": 2, "pet": 2, "animal": 1}),
    ("bank.n.1", "the girl saves money at the bank", 6, "bank", "noun",
     {"depository": 2, "money": 1}),
    ("bank.n.2", "the river bank is near the shore", 2, "bank", "noun",
     {"shore": 3, "slope": 1}),
    ("book.n.1", "a smart boy reads the book", 5, "book", "noun",
     {"novel": 2, "story": 2, "paper": 1}),
    ("reads.v.1", "the clever girl reads a novel", 3, "read", "verb",
     {"study": 2}),
    ("star.n.1", "the luminous star shines at night", 2, "star", "noun",
     {"sun": 2, "light": 1}),
]

WSI_INSTANCES = [
    ("wsi.bright.1", "the bright girl reads a book", 1, "intellect"),
    ("wsi.bright.2", "the bright boy studies the book", 1, "intellect"),
    ("wsi.bright.3", "the bright student reads the novel", 1, "intellect"),
    ("wsi.bright.4", "the bright lamp glows in the room", 1, "luminosity"),
    ("wsi.bright.5", "a bright star shines above the shore", 1, "luminosity"),
    ("wsi.bright.6", "the bright light shines on the shore", 1, "luminosity"),
]


def build_embeddings(seed: int, dim: int = 16, scale: float = 2.5) -> EmbeddingTable:
    rng = np.random.default_rng(seed)
    bases = {name: rng.normal(size=dim) for name in sorted(CLUSTERS)}
    for name, base in bases.items():
        bases[name] = base / np.linalg.norm(base)
    vectors: dict[str, np.ndarray] = {}
    for name in sorted(CLUSTERS):
        for word in CLUSTERS[name]:
            jitter = rng.normal(size=dim) * 0.2
            vec = bases[name] + jitter
            vectors[word] = scale * vec / np.linalg.norm(vec)
    # "bright" participates in both the luminosity and intellect senses.
    mix = bases["luminosity"] + bases["intellect"]
    vectors["bright"] = scale * mix / np.linalg.norm(mix)
    # function/context words get their own directions so c2v has context.
    for word in ["the", "a", "reads", "glows", "shines", "sits", "sleeps", "studies",
                 "saves", "lamp", "house", "school", "shore", "mat", "window",
                 "garden", "room", "night", "table", "bed", "paper"]:
        if word not in vectors:
            vec = rng.normal(size=dim)
            vectors[word] = vec / np.linalg.norm(vec)
    return EmbeddingTable(dim=dim, vectors=vectors)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="assets")
    parser.add_argument("--seed", type=int, default=13)
    parser.add_argument("--snips-train", type=int, default=13084)
    args = parser.parse_args(argv)

    dest = args.dest
    os.makedirs(dest, exist_ok=True)

    with open(os.path.join(dest, "corpus.txt"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(CORPUS) + "\n")

    emb = build_embeddings(args.seed)
    write_word2vec_text(emb, os.path.join(dest, "vectors.txt"))

    toy = {
        "vocabulary": sorted({w for ws in CLUSTERS.values() for w in ws} | {"bright"}),
        "entries": [
            {"left": "the", "right": "sat", "weights": {"cat": 0.7, "dog": 0.3}},
            {"left": "the", "right": "girl", "weights": {"bright": 0.4, "clever": 0.3, "smart": 0.2, "tall": 0.1}},
            {"left": "the", "right": "lamp", "weights": {"bright": 0.5, "shiny": 0.3, "dull": 0.2}},
        ],
        "default": {"bright": 0.25, "clever": 0.25, "shiny": 0.25, "smart": 0.25},
        "prior": {"bright": 40, "clever": 20, "shiny": 20, "smart": 20, "cat": 30, "dog": 30},
    }
    with open(os.path.join(dest, "toy_table.json"), "w", encoding="utf-8") as fh:
        json.dump(toy, fh, indent=2, sort_keys=True)
        fh.write("\n")

    write_wndb(os.path.join(dest, "wndb"), WORDNET_ROWS, sense_order=SENSE_ORDER)

    instances = [
        LexSubInstance(
            instance_id=iid,
            tokens=tuple(sentence.split()),
            target_index=index,
            target_lemma=lemma,
            target_pos=pos,
            gold=gold,
        )
        for iid, sentence, index, lemma, pos, gold in DEMO_INSTANCES
    ]
    write_instances_jsonl(instances, os.path.join(dest, "demo_instances.jsonl"))

    with open(os.path.join(dest, "wsi_instances.jsonl"), "w", encoding="utf-8") as fh:
        for iid, sentence, index, sense in WSI_INSTANCES:
            rec = {
                "id": iid,
                "tokens": sentence.split(),
                "target_index": index,
                "lemma": "bright",
                "pos": "adj",
                "gold_sense": sense,
            }
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    bundle = synthetic_snips(seed=args.seed, n_train=args.snips_train)
    write_snips(bundle.train, os.path.join(dest, "snips_train.json"))
    write_snips(bundle.dev, os.path.join(dest, "snips_dev.json"))
    write_snips(bundle.test, os.path.join(dest, "snips_test.json"))
    write_word2vec_text(bundle.embeddings, os.path.join(dest, "snips_vectors.txt"))
    # Uniform context table over the slot vocabulary: with injection=embs
    # the substitute distribution is driven purely by the slot-type vectors.
    snips_table = {
        "vocabulary": sorted(bundle.embeddings.vectors),
        "entries": [],
    }
    with open(os.path.join(dest, "snips_table.json"), "w", encoding="utf-8") as fh:
        json.dump(snips_table, fh, indent=2, sort_keys=True)
        fh.write("\n")

    print(f"assets written under {dest}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
