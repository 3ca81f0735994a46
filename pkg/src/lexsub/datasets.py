"""Dataset ingestion: SemEval-2007 LS, CoInCo, and the canonical JSONL.

XML ingestion converts to canonical JSONL once (``lexsub convert``), so
everything downstream handles exactly one format. The SemEval gold file
is also parseable on its own: it fully determines the candidate pools
and the weighted gold, which is all the candidate-ranking task needs.

Gold line format::

    bright.a 1 :: intelligent 3;clever 1;

Multiword substitutes (internal whitespace) are discarded, and instances
whose gold becomes empty are omitted.
"""

from __future__ import annotations

import hashlib
import xml.etree.ElementTree as ET
from typing import Iterable, Sequence

from .core import LexSubInstance, LexsubError, write_instances_jsonl

_POS_LETTER = {"n": "noun", "v": "verb", "a": "adj", "j": "adj", "r": "adv"}
# Penn-style prefixes used by the CoInCo token annotations.
_POS_PENN = {"NN": "noun", "VB": "verb", "JJ": "adj", "RB": "adv"}


class ParseError(LexsubError):
    def __init__(self, message: str, lineno: int | None = None, path=None):
        self.lineno = lineno
        self.path = path
        where = f"{path or '<input>'}:{lineno}" if lineno is not None else str(path or "<input>")
        super().__init__(f"{where}: {message}")


def _parse_pos_letter(letter: str, lineno: int, path=None) -> str:
    if letter not in _POS_LETTER:
        raise ParseError(f"unknown POS letter {letter!r}", lineno, path)
    return _POS_LETTER[letter]


def parse_gold_line(line: str, lineno: int = 0, path=None) -> tuple[str, str, str, dict[str, float]]:
    """One gold line -> (lemma, pos, instance_id, gold weights).

    Multiword substitutes are dropped here; the gold may come back empty.
    """
    if "::" not in line:
        raise ParseError("missing '::' separator", lineno, path)
    head, _, tail = line.partition("::")
    fields = head.split()
    if len(fields) != 2:
        raise ParseError(f"expected 'lemma.pos id' before '::', got {head.strip()!r}", lineno, path)
    item, instance_id = fields
    if "." not in item:
        raise ParseError(f"item {item!r} has no POS suffix", lineno, path)
    lemma, _, pos_letter = item.rpartition(".")
    pos = _parse_pos_letter(pos_letter, lineno, path)
    gold: dict[str, float] = {}
    for chunk in tail.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        sub, _, weight_text = chunk.rpartition(" ")
        sub = sub.strip()
        if not sub or not weight_text:
            raise ParseError(f"malformed substitute entry {chunk!r}", lineno, path)
        try:
            weight = float(weight_text)
        except ValueError:
            raise ParseError(f"non-numeric weight in {chunk!r}", lineno, path) from None
        if " " in sub:
            continue  # multiword expression, discarded
        if weight > 0:
            gold[sub] = gold.get(sub, 0.0) + weight
    return lemma, pos, instance_id, gold


def load_semeval_gold(path) -> list[LexSubInstance]:
    """Instances from a gold file alone (single-token placeholder context).

    Contexts live in the sentence XML; join them with
    :func:`convert_semeval` when ranking in context. The placeholder form
    is sufficient for pool construction and gold-only analyses.
    """
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            lemma, pos, instance_id, gold = parse_gold_line(line, lineno, path)
            if not gold:
                continue
            instances.append(
                LexSubInstance(
                    instance_id=f"{lemma}.{pos}.{instance_id}",
                    tokens=(lemma,),
                    target_index=0,
                    target_lemma=lemma,
                    target_pos=pos,
                    gold=gold,
                )
            )
    return instances


def _semeval_context_tokens(context: ET.Element) -> tuple[list[str], int]:
    head = context.find("head")
    if head is None or head.text is None:
        raise ParseError("instance context has no <head> element")
    left = (context.text or "").split()
    right = (head.tail or "").split()
    return [*left, head.text.strip(), *right], len(left)


def convert_semeval(xml_path, gold_path, out_path) -> int:
    """Join SemEval sentence XML with its gold file into canonical JSONL.

    Returns the number of instances written. Instances missing from the
    gold file, or left without single-word gold, are dropped (mirroring
    the gold-side filtering).
    """
    gold_by_id: dict[str, dict[str, float]] = {}
    meta_by_id: dict[str, tuple[str, str]] = {}
    with open(gold_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            lemma, pos, instance_id, gold = parse_gold_line(line, lineno, gold_path)
            gold_by_id[instance_id] = gold
            meta_by_id[instance_id] = (lemma, pos)

    tree = ET.parse(xml_path)
    instances = []
    for lexelt in tree.getroot().iter("lexelt"):
        item = lexelt.get("item", "")
        lemma, _, pos_letter = item.rpartition(".")
        for node in lexelt.iter("instance"):
            instance_id = node.get("id", "")
            context = node.find("context")
            if context is None:
                raise ParseError(f"instance {instance_id!r} has no <context>", path=xml_path)
            tokens, target_index = _semeval_context_tokens(context)
            gold = gold_by_id.get(instance_id)
            if not gold:
                continue
            g_lemma, g_pos = meta_by_id[instance_id]
            instances.append(
                LexSubInstance(
                    instance_id=f"{g_lemma}.{g_pos}.{instance_id}",
                    tokens=tuple(tokens),
                    target_index=target_index,
                    target_lemma=g_lemma if g_lemma else lemma,
                    target_pos=g_pos,
                    gold=gold,
                )
            )
    write_instances_jsonl(instances, out_path)
    return len(instances)


def _penn_to_pos(tag: str) -> str | None:
    for prefix, pos in _POS_PENN.items():
        if tag.startswith(prefix):
            return pos
    return None


def _split_side(sentence_id: str, fraction: float = 0.35) -> str:
    """Deterministic 35/65 assignment by hashing the sentence id.

    The published split file is not redistributable, so the converter
    offers a stable stand-in plus --split-file for the real assignment;
    which side is the test side is a flag, never a guess.
    """
    digest = hashlib.sha256(sentence_id.encode("utf-8")).digest()
    return "35" if digest[0] / 256.0 < fraction else "65"


def convert_coinco(
    xml_path,
    out_path,
    split: str = "all",
    split_file=None,
) -> int:
    """CoInCo (MASC) XML to canonical JSONL.

    Tokens marked problematic and tokens without substitutions are
    skipped. ``split`` selects "35", "65" or "all"; ``split_file`` maps
    sentence ids to sides (lines: ``<sent_id> <35|65>``) and overrides
    the hash-based assignment.
    """
    if split not in ("all", "35", "65"):
        raise ValueError(f"split must be all, 35 or 65, got {split!r}")
    sides: dict[str, str] = {}
    if split_file is not None:
        with open(split_file, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                fields = line.split()
                if not fields:
                    continue
                if len(fields) != 2 or fields[1] not in ("35", "65"):
                    raise ParseError("expected '<sent_id> <35|65>'", lineno, split_file)
                sides[fields[0]] = fields[1]

    tree = ET.parse(xml_path)
    instances = []
    for s_index, sent in enumerate(tree.getroot().iter("sent")):
        sent_id = sent.get("id") or str(s_index)
        token_nodes = list(sent.iter("token"))
        if not token_nodes:
            continue
        side = sides.get(sent_id) or _split_side(sent_id)
        if split != "all" and side != split:
            continue
        tokens = tuple((node.get("wordform") or "").strip() or "?" for node in token_nodes)
        for t_index, node in enumerate(token_nodes):
            if node.get("problematic", "no") == "yes":
                continue
            pos = _penn_to_pos(node.get("posMASC", node.get("pos", "")))
            if pos is None:
                continue
            gold: dict[str, float] = {}
            for subst in node.iter("subst"):
                sub = (subst.get("lemma") or "").strip()
                if not sub or " " in sub:
                    continue
                try:
                    freq = float(subst.get("freq", "1"))
                except ValueError:
                    continue
                if freq > 0:
                    gold[sub] = gold.get(sub, 0.0) + freq
            if not gold:
                continue
            lemma = (node.get("lemma") or tokens[t_index]).strip().lower()
            instances.append(
                LexSubInstance(
                    instance_id=f"coinco.{sent_id}.{node.get('id', t_index)}",
                    tokens=tokens,
                    target_index=t_index,
                    target_lemma=lemma,
                    target_pos=pos,
                    gold=gold,
                )
            )
    write_instances_jsonl(instances, out_path)
    return len(instances)
