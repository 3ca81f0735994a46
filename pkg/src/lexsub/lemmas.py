"""Bundled rule-based English lemmatizer and a light suffix stemmer.

The post-processing stage needs word -> lemma with a POS hint. Shipping a
small rule table keeps the pipeline free of heavyweight model downloads;
external lemmatizers (e.g. spaCy) plug into the same ``(word, pos)``
callable slot, see :func:`make_spacy_lemmatizer`.
"""

from __future__ import annotations

VOWELS = set("aeiou")

NOUN_EXCEPTIONS = {
    "men": "man", "women": "woman", "children": "child", "feet": "foot",
    "teeth": "tooth", "geese": "goose", "mice": "mouse", "lice": "louse",
    "people": "person", "oxen": "ox", "wives": "wife", "knives": "knife",
    "lives": "life", "leaves": "leaf", "wolves": "wolf", "halves": "half",
    "loaves": "loaf", "shelves": "shelf", "thieves": "thief",
    "indices": "index", "matrices": "matrix", "vertices": "vertex",
    "analyses": "analysis", "crises": "crisis", "theses": "thesis",
    "phenomena": "phenomenon", "criteria": "criterion", "data": "datum",
    "buses": "bus", "gases": "gas", "lenses": "lens",
}

VERB_EXCEPTIONS = {
    "am": "be", "is": "be", "are": "be", "was": "be", "were": "be", "been": "be",
    "being": "be", "has": "have", "had": "have", "having": "have", "does": "do",
    "did": "do", "done": "do", "goes": "go", "went": "go", "gone": "go",
    "said": "say", "made": "make", "got": "get", "gotten": "get", "took": "take",
    "taken": "take", "saw": "see", "seen": "see", "came": "come", "gave": "give",
    "given": "give", "found": "find", "told": "tell", "thought": "think",
    "bought": "buy", "brought": "bring", "taught": "teach", "caught": "catch",
    "fought": "fight", "sought": "seek", "felt": "feel", "kept": "keep",
    "left": "leave", "meant": "mean", "met": "meet", "paid": "pay", "sent": "send",
    "spent": "spend", "built": "build", "held": "hold", "stood": "stand",
    "understood": "understand", "heard": "hear", "led": "lead", "read": "read",
    "ran": "run", "run": "run", "sat": "sit", "set": "set", "put": "put",
    "lost": "lose", "won": "win", "wrote": "write", "written": "write",
    "spoke": "speak", "spoken": "speak", "drove": "drive", "driven": "drive",
    "broke": "break", "broken": "break", "chose": "choose", "chosen": "choose",
    "froze": "freeze", "frozen": "freeze", "knew": "know", "known": "know",
    "grew": "grow", "grown": "grow", "threw": "throw", "thrown": "throw",
    "flew": "fly", "flown": "fly", "drew": "draw", "drawn": "draw",
    "wore": "wear", "worn": "wear", "ate": "eat", "eaten": "eat",
    "fell": "fall", "fallen": "fall", "began": "begin", "begun": "begin",
    "sang": "sing", "sung": "sing", "swam": "swim", "swum": "swim",
    "rose": "rise", "risen": "rise", "rode": "ride", "ridden": "ride",
    "hid": "hide", "hidden": "hide", "bit": "bite", "bitten": "bite",
    "lay": "lie", "lain": "lie", "laid": "lay", "slept": "sleep",
    "dying": "die", "lying": "lie", "tying": "tie",
}

ADJ_EXCEPTIONS = {
    "better": "good", "best": "good", "worse": "bad", "worst": "bad",
    "further": "far", "furthest": "far", "farther": "far", "farthest": "far",
    "elder": "old", "eldest": "old", "less": "little", "least": "little",
    "more": "many", "most": "many",
}

# Words that end in -er/-est without being comparative or superlative.
# Suffix rules over-strip these without a dictionary to check against;
# the list covers the frequent offenders, not the long tail.
NOT_GRADED = frozenset(
    """clever bitter eager tender slender proper sober meager utter inner
    outer upper silver amber somber sheer queer sinister dapper super
    honest modest earnest manifest west east bereft
    other another after over under never ever rather either neither
    river paper water mother father sister brother number summer winter
    dinner center member offer order power flower tower answer butter
    letter matter corner finger tiger monster weather leather feather
    chapter master computer quarter shoulder daughter character""".split()
)

# Adjectives whose base form ends in -e: "nicer" strips to "nic" unless we
# restore the e, so the rule checks the stripped stem against this table.
E_FINAL_BASES = frozenset(
    """nice large simple safe wide late fine rare wise brave cute huge pale
    rude strange close loose dense pure sure white blue gentle humble idle
    little noble pale polite ripe scarce sparse stale subtle tame vague
    feeble fierce free sore severe""".split()
)

ADV_EXCEPTIONS = {"better": "well", "best": "well", "worse": "badly", "worst": "badly"}

DOUBLED_KEEP = {"ll", "ss", "zz", "ee", "oo"}  # fell, pass, buzz, free, too


def _undouble(stem: str) -> str:
    if len(stem) >= 3 and stem[-1] == stem[-2] and stem[-2:] not in DOUBLED_KEEP:
        return stem[:-1]
    return stem


def _cvc(stem: str) -> bool:
    # consonant-vowel-consonant ending suggests a dropped silent e (mak-ing -> make)
    if len(stem) < 3:
        return False
    a, b, c = stem[-3], stem[-2], stem[-1]
    return a not in VOWELS and b in VOWELS and c not in VOWELS and c not in "wxy"


def _noun_lemma(word: str) -> str:
    if word in NOUN_EXCEPTIONS:
        return NOUN_EXCEPTIONS[word]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ches", "shes", "xes", "zes", "sses")):
        return word[:-2]
    if word.endswith("s") and not word.endswith(("ss", "us", "is")) and len(word) > 3:
        return word[:-1]
    return word


def _verb_lemma(word: str) -> str:
    if word in VERB_EXCEPTIONS:
        return VERB_EXCEPTIONS[word]
    if word.endswith("ies") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith(("ches", "shes", "xes", "zes", "sses", "oes")):
        return word[:-2]
    if word.endswith("s") and not word.endswith("ss") and len(word) > 3:
        return word[:-1]
    if word.endswith("ing") and len(word) > 5:
        stem = word[:-3]
        undoubled = _undouble(stem)
        if undoubled != stem:
            return undoubled
        if _cvc(stem):
            return stem + "e"
        return stem
    if word.endswith("ied") and len(word) > 4:
        return word[:-3] + "y"
    if word.endswith("ed") and len(word) > 4:
        stem = word[:-2]
        if stem.endswith("e"):  # agreed -> agree
            return stem
        undoubled = _undouble(stem)
        if undoubled != stem:
            return undoubled
        if _cvc(stem):
            return stem + "e"
        return stem
    return word


def _adj_lemma(word: str) -> str:
    if word in ADJ_EXCEPTIONS:
        return ADJ_EXCEPTIONS[word]
    if word in NOT_GRADED:
        return word
    for suffix, strip in (("iest", 4), ("ier", 3), ("est", 3), ("er", 2)):
        if word.endswith(suffix) and len(word) > strip + 2:
            stem = word[: len(word) - strip]
            if suffix.startswith("i"):
                return stem + "y"
            if stem + "e" in E_FINAL_BASES:
                return stem + "e"
            return _undouble(stem)
    return word


def lemmatize(word: str, pos: str = "noun") -> str:
    """Map an English word form to its lemma given a coarse POS hint."""
    word = word.lower()
    if pos == "noun":
        return _noun_lemma(word)
    if pos == "verb":
        return _verb_lemma(word)
    if pos == "adj":
        return _adj_lemma(word)
    if pos == "adv":
        return ADV_EXCEPTIONS.get(word, word)
    return word


def stem(word: str) -> str:
    """Crude suffix stemmer, only used for stem-based target exclusion."""
    word = word.lower()
    for suffix in ("ingly", "edly", "fully", "ing", "est", "ers", "ies", "ed", "er", "ly", "es", "s"):
        if word.endswith(suffix) and len(word) - len(suffix) >= 3:
            word = word[: len(word) - len(suffix)]
            break
    return _undouble(word)


def make_spacy_lemmatizer(model: str = "en_core_web_sm"):
    """Adapter returning a ``(word, pos) -> lemma`` callable backed by spaCy.

    Reproduces the external-lemmatizer setting when spaCy and the model are
    installed; raises ImportError otherwise.
    """
    import spacy  # local import: optional dependency

    nlp = spacy.load(model, disable=["parser", "ner"])
    pos_map = {"noun": "NOUN", "verb": "VERB", "adj": "ADJ", "adv": "ADV"}

    def _lemma(word: str, pos: str = "noun") -> str:
        doc = spacy.tokens.Doc(nlp.vocab, words=[word])
        doc[0].pos_ = pos_map.get(pos, "NOUN")
        for proc in nlp.pipeline:
            doc = proc[1](doc)
        return doc[0].lemma_.lower() or word.lower()

    return _lemma
