"""WordNet database file format (wndb) ingestion.

Reads the standard ``index.{noun,verb,adj,adv}`` / ``data.*`` pairs and
builds a :class:`~lexsub.relations.SynsetGraph`: synset membership,
hypernym edges ('@' and instance-hypernym '@i'), and the sense-frequency
lemma order exactly as listed in the index files. Only those three
ingredients are consumed; glosses, verb frames and the other pointer
types are skipped.

A matching writer emits the same subset of the format. It exists for
test fixtures and demo assets (a real WordNet installation is neither
assumed nor bundled), and gives the parser a round-trip check.
"""

from __future__ import annotations

import os
from typing import Iterable, Mapping, Sequence

from .relations import Synset, SynsetGraph

_POS_FILES = {"noun": "n", "verb": "v", "adj": "a", "adv": "r"}
_SS_TYPE_TO_POS = {"n": "noun", "v": "verb", "a": "adj", "s": "adj", "r": "adv"}
_HYPERNYM_POINTERS = ("@", "@i")


def _synset_id(pos_letter: str, offset: int) -> str:
    return f"{pos_letter}{offset:08d}"


def _parse_data_line(line: str, pos_letter: str):
    fields = line.split()
    offset = int(fields[0])
    ss_type = fields[2]
    w_cnt = int(fields[3], 16)
    lemmas = []
    cursor = 4
    for _ in range(w_cnt):
        word = fields[cursor]
        # strip adjective syntactic markers like galore(ip)
        if word.endswith(")") and "(" in word:
            word = word[: word.index("(")]
        lemmas.append(word.replace("_", " ").lower())
        cursor += 2  # word, lex_id
    p_cnt = int(fields[cursor])
    cursor += 1
    parents = []
    for _ in range(p_cnt):
        symbol, target_offset, target_pos, _source = fields[cursor : cursor + 4]
        if symbol in _HYPERNYM_POINTERS:
            parents.append(_synset_id(target_pos if target_pos != "s" else "a", int(target_offset)))
        cursor += 4
    sid = _synset_id("a" if ss_type == "s" else ss_type, offset)
    return sid, _SS_TYPE_TO_POS[ss_type], lemmas, parents


def _parse_index_line(line: str):
    fields = line.split()
    lemma = fields[0].replace("_", " ").lower()
    pos_letter = fields[1]
    synset_cnt = int(fields[2])
    p_cnt = int(fields[3])
    offsets = fields[4 + p_cnt + 2 : 4 + p_cnt + 2 + synset_cnt]
    return lemma, pos_letter, [int(o) for o in offsets]


def load_wndb(root: str) -> SynsetGraph:
    """Build a SynsetGraph from a wndb directory (dict/ of a WordNet install)."""
    synsets: dict[str, Synset] = {}
    parents: dict[str, tuple[str, ...]] = {}
    lemma_index: dict[tuple[str, str], tuple[str, ...]] = {}
    seen_any = False
    for pos, letter in _POS_FILES.items():
        data_path = os.path.join(root, f"data.{pos}")
        index_path = os.path.join(root, f"index.{pos}")
        if not os.path.exists(data_path):
            continue
        seen_any = True
        with open(data_path, encoding="utf-8") as fh:
            for line in fh:
                if line.startswith(" ") or not line.strip():
                    continue  # license header / blanks
                sid, ss_pos, lemmas, parent_ids = _parse_data_line(line, letter)
                synsets[sid] = Synset(synset_id=sid, pos=ss_pos, lemmas=frozenset(lemmas))
                if parent_ids:
                    parents[sid] = tuple(parent_ids)
        if os.path.exists(index_path):
            with open(index_path, encoding="utf-8") as fh:
                for line in fh:
                    if line.startswith(" ") or not line.strip():
                        continue
                    lemma, pos_letter, offsets = _parse_index_line(line)
                    sense_ids = tuple(
                        _synset_id("a" if pos_letter == "s" else pos_letter, off) for off in offsets
                    )
                    lemma_index[(lemma, pos)] = tuple(
                        sid for sid in sense_ids if sid in synsets
                    )
    if not seen_any:
        raise FileNotFoundError(f"no data.{{pos}} files under {root!r}")
    # Synsets whose lemmas never appear in an index file (fixture shortcuts)
    # still need to be reachable by lemma.
    for sid, synset in synsets.items():
        for lemma in synset.lemmas:
            key = (lemma, synset.pos)
            if key not in lemma_index:
                lemma_index[key] = (sid,)
            elif sid not in lemma_index[key]:
                lemma_index[key] = (*lemma_index[key], sid)
    return SynsetGraph(synsets=synsets, parents=parents, lemma_index=lemma_index)


def write_wndb(
    root: str,
    synsets: Iterable[tuple[int, str, Sequence[str], Sequence[int]]],
    sense_order: Mapping[tuple[str, str], Sequence[int]] | None = None,
) -> None:
    """Emit wndb files from (offset, pos, lemmas, hypernym offsets) rows.

    Hypernym offsets must reference synsets of the same POS. The index
    lists each lemma's offsets in first-seen order unless ``sense_order``
    supplies an explicit ranking.
    """
    os.makedirs(root, exist_ok=True)
    by_pos: dict[str, list[tuple[int, Sequence[str], Sequence[int]]]] = {}
    for offset, pos, lemmas, parent_offsets in synsets:
        if pos not in _POS_FILES:
            raise ValueError(f"bad pos {pos!r}")
        by_pos.setdefault(pos, []).append((offset, lemmas, parent_offsets))
    for pos, letter in _POS_FILES.items():
        rows = sorted(by_pos.get(pos, ()))
        if not rows:
            continue
        with open(os.path.join(root, f"data.{pos}"), "w", encoding="utf-8") as fh:
            for offset, lemmas, parent_offsets in rows:
                words = " ".join(f"{lemma.replace(' ', '_')} 0" for lemma in lemmas)
                pointers = " ".join(
                    f"@ {parent:08d} {letter} 0000" for parent in parent_offsets
                )
                p_cnt = f"{len(parent_offsets):03d}"
                line = f"{offset:08d} 00 {letter} {len(lemmas):02x} {words} {p_cnt}"
                if pointers:
                    line += f" {pointers}"
                fh.write(line + " | synthetic gloss\n")
        index: dict[str, list[int]] = {}
        for offset, lemmas, _ in rows:
            for lemma in lemmas:
                index.setdefault(lemma.replace(" ", "_").lower(), []).append(offset)
        with open(os.path.join(root, f"index.{pos}"), "w", encoding="utf-8") as fh:
            for lemma in sorted(index):
                offsets = index[lemma]
                if sense_order and (lemma, pos) in sense_order:
                    offsets = list(sense_order[(lemma, pos)])
                offs = " ".join(f"{o:08d}" for o in offsets)
                fh.write(f"{lemma} {letter} {len(offsets)} 1 @ {len(offsets)} 0 {offs}\n")
