"""Read-only HTTP service over a G-Trans corpus.

Endpoints (JSON bodies mirror the corpus JSONL schemas):

* ``GET /records`` — ids plus source tokens
* ``GET /records/{id}`` — the full record
* ``POST /derive`` — ``{"id": int, "assignment": {"<head>": "M"|"F"}}`` ->
  the derived plain translation
* ``POST /augment`` — ``{"src": [tok...], "yB": [tok...]}`` -> an augmented
  record or a passthrough

The corpus is loaded once and shared immutably across requests.
"""

from __future__ import annotations

from typing import Sequence

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .bitext import extract_bitext
from .corpus import GTransRecord, gtrans_to_json, read_jsonl
from .derive import MissingAssignment, aligned_head_indices, derive_record
from .group import InflectionLexicon
from .pipeline import (
    HeuristicAligner,
    LatticeTransformer,
    Passthrough,
    RuleDetector,
    augment,
    ngram_scorer_factory,
)


class DeriveRequest(BaseModel):
    id: int
    assignment: dict[int, str]


class AugmentRequest(BaseModel):
    src: list[str]
    yB: list[str]


def record_summary(idx: int, rec: GTransRecord) -> dict:
    return {
        "id": idx,
        "src": list(rec.source.tokens),
        "entities": [
            {"i": e.head_index, "g": e.label} for e in rec.source.entities
        ],
        "num_structures": rec.target.num_structures,
    }


def create_app(
    records: Sequence[GTransRecord], lexicon: InflectionLexicon
) -> FastAPI:
    app = FastAPI(title="genderalt", version="0.1.0")
    records = list(records)

    # scorer training rows: uniform-assignment tagged bi-text from the corpus
    rows = []
    for rec in records:
        for src, tgt in extract_bitext(rec, max_extra=0):
            rows.append(src + (";",) + tgt)
    detector = RuleDetector.with_default_nouns()
    aligner = HeuristicAligner()
    transformer = (
        LatticeTransformer(lexicon, ngram_scorer_factory(rows, k=0.01))
        if rows
        else None
    )

    def get_record(idx: int) -> GTransRecord:
        if not 0 <= idx < len(records):
            raise HTTPException(status_code=404, detail=f"unknown record id {idx}")
        return records[idx]

    @app.get("/records")
    def list_records():
        return [record_summary(i, rec) for i, rec in enumerate(records)]

    @app.get("/records/{idx}")
    def show_record(idx: int):
        rec = get_record(idx)
        body = gtrans_to_json(rec)
        body["id"] = idx
        body["aligned_heads"] = list(
            aligned_head_indices(rec.alignments, rec.source.entities)
        )
        return body

    @app.post("/derive")
    def derive_endpoint(req: DeriveRequest):
        rec = get_record(req.id)
        for head, gender in req.assignment.items():
            if gender not in ("M", "F"):
                raise HTTPException(
                    status_code=422,
                    detail=f"assignment for entity {head} must be 'M' or 'F'",
                )
        try:
            tokens = derive_record(rec, req.assignment)
        except MissingAssignment as exc:
            raise HTTPException(
                status_code=422,
                detail=f"missing assignment for entity at head index {exc.head_index}",
            )
        return {"tokens": list(tokens), "text": " ".join(tokens)}

    @app.post("/augment")
    def augment_endpoint(req: AugmentRequest):
        if transformer is None:
            raise HTTPException(
                status_code=503, detail="no corpus surfaces to train the scorer on"
            )
        result = augment(
            tuple(req.src), tuple(req.yB), detector, transformer, aligner, lexicon
        )
        if isinstance(result, Passthrough):
            return {
                "passthrough": {
                    "src": list(result.source_tokens),
                    "tgt": list(result.target_tokens),
                    "reason": result.reason,
                }
            }
        return {"record": gtrans_to_json(result)}

    return app


def load_app(corpus_path: str, lexicon_path: str) -> FastAPI:
    records = read_jsonl(corpus_path, "gtrans")
    lexicon = InflectionLexicon.from_tsv(lexicon_path)
    return create_app(records, lexicon)
