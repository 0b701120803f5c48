"""Record types and JSONL I/O for G-Tag / G-Trans style corpora.

JSONL schemas (one object per line, UTF-8):

* G-Tag:   ``{"src": [tok...], "entities": [{"i": int, "g": "M"|"F"|"A"}...]}``
* G-Trans: ``{"src": [...], "entities": [...], "tgt": [seg...], "align": [int...]}``
  where ``seg`` is a plain-token string or ``{"m": [tok...], "f": [tok...]}``
  and ``align[j]`` is the entity-list index governing the j-th structure.

Unknown fields are ignored.  Records violating an invariant are rejected at
read time with the offending line number, never silently normalized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .structure import GenderStructure, StructuredTranslation, check_plain_tokens

MASCULINE = "M"
FEMININE = "F"
AMBIGUOUS = "A"
LABELS = (MASCULINE, FEMININE, AMBIGUOUS)


class CorpusError(ValueError):
    """Invalid record contents or malformed corpus file."""


@dataclass(frozen=True)
class EntityAnnotation:
    """A single entity, represented by its head word position and gender label."""

    head_index: int
    label: str

    def __post_init__(self):
        if self.label not in LABELS:
            raise CorpusError(f"unknown gender label {self.label!r}")


@dataclass(frozen=True)
class AnnotatedSource:
    """Tokenized source sentence with entity head-word annotations."""

    tokens: tuple[str, ...]
    entities: tuple[EntityAnnotation, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "entities", tuple(self.entities))
        n = len(self.tokens)
        seen: set[int] = set()
        for ent in self.entities:
            if not 0 <= ent.head_index < n:
                raise CorpusError(
                    f"head index {ent.head_index} out of range for {n} tokens"
                )
            if ent.head_index in seen:
                raise CorpusError(f"duplicate head index {ent.head_index}")
            seen.add(ent.head_index)

    def ambiguous_head_indices(self) -> tuple[int, ...]:
        """Head indices of gender-ambiguous entities, in sentence order."""
        return tuple(
            sorted(e.head_index for e in self.entities if e.label == AMBIGUOUS)
        )

    def ambiguous_entities(self) -> tuple[EntityAnnotation, ...]:
        return tuple(
            sorted(
                (e for e in self.entities if e.label == AMBIGUOUS),
                key=lambda e: e.head_index,
            )
        )


@dataclass(frozen=True)
class GTagRecord:
    """Source-side annotation record: labeled head words only."""

    source: AnnotatedSource

    def __post_init__(self):
        if not self.source.entities:
            raise CorpusError("G-Tag record must annotate at least one entity")


@dataclass(frozen=True)
class GTransRecord:
    """Structured translation with gender alignments for one sentence pair."""

    source: AnnotatedSource
    target: StructuredTranslation
    alignments: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alignments", tuple(self.alignments))
        k = self.target.num_structures
        if len(self.alignments) != k:
            raise CorpusError(
                f"{len(self.alignments)} alignments for {k} structures"
            )
        for a in self.alignments:
            if not 0 <= a < len(self.source.entities):
                raise CorpusError(f"alignment {a} does not name an entity")
            if self.source.entities[a].label != AMBIGUOUS:
                raise CorpusError(
                    f"structure aligned to non-ambiguous entity at index {a}"
                )


@dataclass(frozen=True)
class EvalPair:
    """Reference / hypothesis record pair over the same source sentence."""

    reference: GTransRecord
    hypothesis: GTransRecord

    def __post_init__(self):
        if self.reference.source.tokens != self.hypothesis.source.tokens:
            raise CorpusError("reference and hypothesis source tokens differ")


# --- JSON (de)serialization ---------------------------------------------


def _entities_to_json(entities: Sequence[EntityAnnotation]) -> list[dict]:
    return [{"i": e.head_index, "g": e.label} for e in entities]


def _entities_from_json(items) -> tuple[EntityAnnotation, ...]:
    if not isinstance(items, list):
        raise CorpusError("'entities' must be a list")
    out = []
    for item in items:
        if not isinstance(item, dict) or "i" not in item or "g" not in item:
            raise CorpusError(f"bad entity entry: {item!r}")
        if not isinstance(item["i"], int) or isinstance(item["i"], bool):
            raise CorpusError(f"entity index must be an integer: {item!r}")
        out.append(EntityAnnotation(head_index=item["i"], label=item["g"]))
    return tuple(out)


def _target_to_json(target: StructuredTranslation) -> list:
    segs: list = []
    for seg in target.segments:
        if isinstance(seg, str):
            segs.append(seg)
        else:
            segs.append({"m": list(seg.masculine), "f": list(seg.feminine)})
    return segs


def _target_from_json(items) -> StructuredTranslation:
    if not isinstance(items, list):
        raise CorpusError("'tgt' must be a list")
    segments: list = []
    for seg in items:
        if isinstance(seg, str):
            segments.append(seg)
        elif isinstance(seg, dict) and "m" in seg and "f" in seg:
            segments.append(GenderStructure(tuple(seg["m"]), tuple(seg["f"])))
        else:
            raise CorpusError(f"bad target segment: {seg!r}")
    return StructuredTranslation(tuple(segments))


def _tokens_from_json(value, field: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(t, str) for t in value):
        raise CorpusError(f"{field!r} must be a list of strings")
    return tuple(value)


def gtag_to_json(rec: GTagRecord) -> dict:
    return {
        "src": list(rec.source.tokens),
        "entities": _entities_to_json(rec.source.entities),
    }


def gtag_from_json(obj: dict) -> GTagRecord:
    source = AnnotatedSource(
        tokens=_tokens_from_json(obj.get("src"), "src"),
        entities=_entities_from_json(obj.get("entities")),
    )
    return GTagRecord(source=source)


def gtrans_to_json(rec: GTransRecord) -> dict:
    return {
        "src": list(rec.source.tokens),
        "entities": _entities_to_json(rec.source.entities),
        "tgt": _target_to_json(rec.target),
        "align": list(rec.alignments),
    }


def gtrans_from_json(obj: dict) -> GTransRecord:
    source = AnnotatedSource(
        tokens=_tokens_from_json(obj.get("src"), "src"),
        entities=_entities_from_json(obj.get("entities")),
    )
    align = obj.get("align")
    if not isinstance(align, list) or not all(
        isinstance(a, int) and not isinstance(a, bool) for a in align
    ):
        raise CorpusError("'align' must be a list of integers")
    return GTransRecord(
        source=source,
        target=_target_from_json(obj.get("tgt")),
        alignments=tuple(align),
    )


_KINDS = {
    "gtag": (gtag_from_json, gtag_to_json),
    "gtrans": (gtrans_from_json, gtrans_to_json),
}


def read_jsonl(path: str | Path, kind: str) -> list:
    """Read one record per line; ``kind`` is ``"gtag"`` or ``"gtrans"``.

    Errors carry the 1-based line number of the offending line.
    """
    if kind not in _KINDS:
        raise ValueError(f"unknown record kind {kind!r}")
    from_json = _KINDS[kind][0]
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed JSON: {exc}") from exc
            try:
                records.append(from_json(obj))
            except (CorpusError, ValueError) as exc:
                raise CorpusError(f"{path}:{lineno}: {exc}") from exc
    return records


def write_jsonl(records: Iterable, path: str | Path, kind: str) -> None:
    """Write records to ``path``, one JSON object per line."""
    if kind not in _KINDS:
        raise ValueError(f"unknown record kind {kind!r}")
    to_json = _KINDS[kind][1]
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(to_json(rec), ensure_ascii=False))
            fh.write("\n")


def read_eval_pairs(ref_path: str | Path, hyp_path: str | Path) -> list[EvalPair]:
    """Load two parallel G-Trans JSONL files matched by line number."""
    refs = read_jsonl(ref_path, "gtrans")
    hyps = read_jsonl(hyp_path, "gtrans")
    if len(refs) != len(hyps):
        raise CorpusError(
            f"reference has {len(refs)} records, hypothesis has {len(hyps)}"
        )
    return [EvalPair(reference=r, hypothesis=h) for r, h in zip(refs, hyps)]


def make_plain(tokens: Iterable[str]) -> tuple[str, ...]:
    """Validate and freeze a plain (marker-free) token sequence."""
    return check_plain_tokens(tokens)
