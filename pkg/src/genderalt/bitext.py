"""Extract gender-assignment-tagged fine-tuning bi-text from G-Trans records.

Every ambiguous head word gets a <M>/<F> tag token appended right after it;
the target side is the alternative derived under that assignment.  Besides
the all-masculine and all-feminine rows, up to ``max_extra`` mixed
assignments are sampled without replacement (seeded, so runs are
reproducible byte for byte).
"""

from __future__ import annotations

import random
from itertools import product
from typing import Mapping, Sequence

from .corpus import AnnotatedSource, GTransRecord
from .derive import MissingAssignment, derive_record

TAG_MASC = "<M>"
TAG_FEM = "<F>"


def tag_source(source: AnnotatedSource, assignment: Mapping[int, str]) -> tuple[str, ...]:
    """Insert a gender tag token after each ambiguous head word."""
    heads = source.ambiguous_head_indices()
    for head in heads:
        if head not in assignment:
            raise MissingAssignment(head)
    out: list[str] = []
    for i, tok in enumerate(source.tokens):
        out.append(tok)
        if i in assignment and i in heads:
            out.append(TAG_MASC if assignment[i] == "M" else TAG_FEM)
    return tuple(out)


def extract_bitext(
    rec: GTransRecord, max_extra: int = 3, seed: int = 0
) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """(tagged source, target) rows for one record.

    Always contains the all-masculine and all-feminine rows first, then
    min(max_extra, 2^d - 2) mixed assignments in canonical order (entities
    by head index, M before F), where d is the number of ambiguous
    entities.  With d = 0 the two uniform rows coincide and only one is kept.
    """
    heads = rec.source.ambiguous_head_indices()
    d = len(heads)

    def row(assignment: dict[int, str]):
        return tag_source(rec.source, assignment), derive_record(rec, assignment)

    all_masc = {h: "M" for h in heads}
    all_fem = {h: "F" for h in heads}
    rows = [row(all_masc)]
    if d > 0:
        rows.append(row(all_fem))

    mixed = [
        dict(zip(heads, choices))
        for choices in product("MF", repeat=d)
        if len(set(choices)) > 1
    ]
    n_extra = min(max_extra, len(mixed))
    if n_extra > 0:
        rng = random.Random(seed)
        sampled = rng.sample(mixed, n_extra)
        sampled.sort(key=lambda g: tuple(0 if g[h] == "M" else 1 for h in heads))
        rows.extend(row(g) for g in sampled)
    return rows


def write_bitext_tsv(rows: Sequence[tuple[tuple[str, ...], tuple[str, ...]]], path) -> None:
    """TSV rows: space-joined tagged source, TAB, space-joined target."""
    with open(path, "w", encoding="utf-8") as fh:
        for src, tgt in rows:
            fh.write(f"{' '.join(src)}\t{' '.join(tgt)}\n")
