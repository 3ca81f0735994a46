"""SNIPS-format intent data: JSON reader/writer and a synthetic stand-in.

File schema (one JSON object per split)::

    {"PlayMusic": [{"data": [{"text": "play songs by "},
                             {"text": "meldor", "entity": "artist"}]}, ...],
     "GetWeather": [...]}

Chunks are whitespace-tokenized on read; augmented utterances carry
their provenance dict alongside "data" on write.

The synthetic generator exists because the corpus itself cannot be
bundled: seven intents, templated utterances, disjoint single-token
slot lexicons, and a companion embedding table whose vectors cluster by
slot type (so embedding-based substitution proposes in-type words).
"""

from __future__ import annotations

import dataclasses
import json
import random
from typing import Sequence

import numpy as np

from .augment import SlotUtterance
from .core import EmbeddingTable

INTENTS = (
    "AddToPlaylist",
    "BookRestaurant",
    "GetWeather",
    "PlayMusic",
    "RateBook",
    "SearchCreativeWork",
    "SearchScreeningEvent",
)


def read_snips(path) -> list[SlotUtterance]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    out = []
    for intent in sorted(doc):
        for row in doc[intent]:
            tokens: list[str] = []
            slots: list[tuple[int, int, str]] = []
            for chunk in row["data"]:
                words = chunk["text"].split()
                if not words:
                    continue
                start = len(tokens)
                tokens.extend(words)
                if "entity" in chunk:
                    slots.append((start, len(tokens), chunk["entity"]))
            if tokens:
                out.append(
                    SlotUtterance(
                        tokens=tuple(tokens),
                        slots=tuple(slots),
                        intent=intent,
                        provenance=row.get("provenance"),
                    )
                )
    return out


def write_snips(utterances: Sequence[SlotUtterance], path) -> None:
    doc: dict[str, list] = {}
    for utt in utterances:
        chunks: list[dict] = []
        spans = {start: (end, label) for start, end, label in utt.slots}
        i = 0
        while i < len(utt.tokens):
            if i in spans:
                end, label = spans[i]
                chunks.append({"text": " ".join(utt.tokens[i:end]), "entity": label})
                i = end
            else:
                j = i
                while j < len(utt.tokens) and j not in spans:
                    j += 1
                chunks.append({"text": " ".join(utt.tokens[i:j])})
                i = j
        row: dict = {"data": chunks}
        if utt.provenance is not None:
            row["provenance"] = utt.provenance
        doc.setdefault(utt.intent, []).append(row)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def write_word2vec_text(emb: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(emb)} {emb.dim}\n")
        for word in sorted(emb.vectors):
            comps = " ".join(f"{c:.6f}" for c in emb.vectors[word])
            fh.write(f"{word} {comps}\n")


def _compose(prefixes: Sequence[str], suffixes: Sequence[str]) -> tuple[str, ...]:
    return tuple(p + s for p in prefixes for s in suffixes)


SLOT_LEXICONS: dict[str, tuple[str, ...]] = {
    "artist": _compose(
        ("mel", "ran", "lor", "kai", "zan", "vee"), ("dor", "ina", "ski", "son", "ora", "ez")
    ),
    "track": _compose(
        ("sol", "lun", "ember", "echo", "vel", "nim"), ("aria", "fall", "light", "ida", "um", "esse")
    ),
    "playlist": _compose(
        ("work", "chill", "road", "study", "dance", "gym"), ("mix", "beats", "set", "hour", "tape", "list")
    ),
    "genre": (
        "rock", "jazz", "pop", "blues", "metal", "folk", "reggae", "techno",
        "country", "disco", "soul", "funk", "opera", "punk", "indie", "house",
        "gospel", "salsa", "swing", "grunge", "ska", "ambient", "trance", "dub",
    ),
    "city": _compose(
        ("nor", "sud", "est", "wes", "mid", "alt"), ("ton", "ville", "burg", "ford", "port", "dale")
    ),
    "restaurant_type": (
        "bistro", "diner", "pizzeria", "steakhouse", "brasserie", "tavern",
        "cafe", "bakery", "pub", "grill", "trattoria", "deli", "chophouse",
        "teahouse", "taqueria", "creperie", "buffet", "cantina", "osteria", "smokehouse",
    ),
    "party_size": ("two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "twelve"),
    "weather": (
        "snow", "rain", "wind", "fog", "sun", "storms", "hail", "heat", "frost",
        "clouds", "drizzle", "sleet", "thunder", "mist", "gusts", "humidity",
    ),
    "time": (
        "today", "tomorrow", "tonight", "monday", "tuesday", "wednesday",
        "thursday", "friday", "saturday", "sunday", "noon", "midnight",
    ),
    "book": _compose(
        ("iron", "silver", "last", "lost", "red", "wild"), ("crown", "river", "garden", "letter", "tower", "road")
    ),
    "movie": _compose(
        ("dark", "final", "broken", "hidden", "silent", "burning"), ("dawn", "empire", "signal", "harbor", "mirror", "voyage")
    ),
    "work_type": ("song", "movie", "book", "album", "show", "poem", "painting", "novel", "trailer", "podcast"),
    "rating": ("zero", "one", "two", "three", "four", "five", "six"),
}

# Templates keep deliberate lexical overlap across intents so that slot
# vocabulary carries real classification signal at small training sizes.
TEMPLATES: dict[str, tuple[str, ...]] = {
    "AddToPlaylist": (
        "add {track} to {playlist}",
        "put {artist} on {playlist}",
        "add {artist} to the {playlist} collection",
        "{track} to {playlist} please",
        "add the song {track} to {playlist}",
    ),
    "BookRestaurant": (
        "get a table at the {restaurant_type} for {party_size}",
        "book the {restaurant_type} in {city}",
        "table for {party_size} at the {restaurant_type}",
        "reserve the {restaurant_type} for {party_size} tonight",
        "find a {restaurant_type} in {city} for {party_size}",
    ),
    "GetWeather": (
        "what about {weather} in {city}",
        "weather for {city} {time}",
        "{weather} in {city} {time}",
        "forecast for {city} {time}",
        "will there be {weather} {time}",
    ),
    "PlayMusic": (
        "play {artist}",
        "play some {genre}",
        "i want to hear {track}",
        "put on {genre}",
        "play {track} by {artist}",
    ),
    "RateBook": (
        "give {book} {rating} stars",
        "rate {book} a {rating}",
        "{book} deserves {rating}",
        "score {book} at {rating}",
        "rate the {work_type} {book} {rating}",
    ),
    "SearchCreativeWork": (
        "find the {work_type} {track}",
        "show the {work_type} {book}",
        "search for the {work_type} {movie}",
        "look up the {work_type} {track}",
        "find a {work_type} called {book}",
    ),
    "SearchScreeningEvent": (
        "when is {movie} playing in {city}",
        "screenings of {movie} {time}",
        "show times for {movie} in {city}",
        "is {movie} on {time}",
        "where can i watch {movie} {time}",
    ),
}

DEFAULT_TRAIN = 13084
DEFAULT_DEV = 700
DEFAULT_TEST = 700


@dataclasses.dataclass
class SnipsBundle:
    train: list[SlotUtterance]
    dev: list[SlotUtterance]
    test: list[SlotUtterance]
    embeddings: EmbeddingTable


def _fill_template(
    template: str, rng: random.Random
) -> tuple[list[str], list[tuple[int, int, str]]]:
    tokens: list[str] = []
    slots: list[tuple[int, int, str]] = []
    for piece in template.split():
        if piece.startswith("{") and piece.endswith("}"):
            slot_type = piece[1:-1]
            word = rng.choice(SLOT_LEXICONS[slot_type])
            slots.append((len(tokens), len(tokens) + 1, slot_type))
            tokens.append(word)
        else:
            tokens.append(piece)
    return tokens, slots


def _make_split(n: int, rng: random.Random) -> list[SlotUtterance]:
    out: list[SlotUtterance] = []
    base, extra = divmod(n, len(INTENTS))
    for index, intent in enumerate(INTENTS):
        count = base + (1 if index < extra else 0)
        templates = TEMPLATES[intent]
        for _ in range(count):
            tokens, slots = _fill_template(rng.choice(templates), rng)
            out.append(
                SlotUtterance(tokens=tuple(tokens), slots=tuple(slots), intent=intent)
            )
    return out


def slot_type_embeddings(dim: int = 32, seed: int = 13, scale: float = 3.0) -> EmbeddingTable:
    """One near-orthogonal direction per slot type, jittered per word.

    Inner products are ~scale^2 within a type and near zero across
    types, so a temperature-1 softmax over inner products concentrates
    on same-type words while keeping within-type diversity.
    """
    rng = np.random.default_rng(seed)
    vectors: dict[str, np.ndarray] = {}
    for slot_type in sorted(SLOT_LEXICONS):
        base = rng.normal(size=dim)
        base /= np.linalg.norm(base)
        for word in SLOT_LEXICONS[slot_type]:
            jitter = rng.normal(size=dim) * 0.25
            vec = base + jitter
            vec = scale * vec / np.linalg.norm(vec)
            vectors[word] = vec
    return EmbeddingTable(dim=dim, vectors=vectors)


def synthetic_snips(
    seed: int = 0,
    n_train: int = DEFAULT_TRAIN,
    n_dev: int = DEFAULT_DEV,
    n_test: int = DEFAULT_TEST,
) -> SnipsBundle:
    rng = random.Random(f"snips/{seed}")
    return SnipsBundle(
        train=_make_split(n_train, rng),
        dev=_make_split(n_dev, rng),
        test=_make_split(n_test, rng),
        embeddings=slot_type_embeddings(),
    )
