"""Command-line entry point.

Subcommands: expand, group, extract-bitext, augment, evaluate, collapse,
serve.  Exit codes: 0 on success, 1 when individual records failed (an
error report is printed), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import bitext as bitext_mod
from .adapters import HttpAdapter, SubprocessAdapter
from .corpus import gtrans_to_json, read_eval_pairs, read_jsonl
from .derive import enumerate_record
from .group import InflectionLexicon, UngroupableError, group
from .lattice import NgramScorer, collapse
from .metrics import evaluate_pairs
from .pipeline import (
    AdapterAligner,
    AdapterDetector,
    AdapterTransformer,
    GoldAligner,
    GoldDetector,
    HeuristicAligner,
    LatticeTransformer,
    OracleTransformer,
    Passthrough,
    RecordFailure,
    RuleDetector,
    augment,
    ngram_scorer_factory,
)
from .structure import split

log = logging.getLogger("genderalt")


def _setup_logging():
    level = os.environ.get("GENDERALT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _out(path: str | None):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _read_token_lines(path: str) -> list[tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        return [tuple(line.split()) for line in fh.read().splitlines()]


def _make_adapter(spec: str):
    if spec.startswith("http://") or spec.startswith("https://"):
        return HttpAdapter(spec)
    return SubprocessAdapter(spec.split())


def cmd_expand(args) -> int:
    records = read_jsonl(args.input, "gtrans")
    with _out(args.output) as out:
        for rec in records:
            alts = [
                {
                    "assignment": {str(h): g for h, g in assignment.items()},
                    "tokens": list(tokens),
                    "text": " ".join(tokens),
                }
                for assignment, tokens in enumerate_record(rec)
            ]
            obj = {"src": list(rec.source.tokens), "alternatives": alts}
            out.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return 0


def cmd_group(args) -> int:
    lexicon = InflectionLexicon.from_tsv(args.lexicon)
    masc = _read_token_lines(args.masc)
    fem = _read_token_lines(args.fem)
    if len(masc) != len(fem):
        print("error: masculine and feminine files differ in length", file=sys.stderr)
        return 2
    failures = 0
    with _out(args.output) as out:
        for y_m, y_f in zip(masc, fem):
            obj = {"yM": list(y_m), "yF": list(y_f)}
            try:
                structured = group(y_m, y_f, lexicon)
                obj["tgt"] = [
                    seg if isinstance(seg, str) else {"m": list(seg.masculine), "f": list(seg.feminine)}
                    for seg in structured.segments
                ]
            except UngroupableError as exc:
                obj["error"] = str(exc)
                failures += 1
            out.write(json.dumps(obj, ensure_ascii=False) + "\n")
    if failures:
        print(f"{failures} sentence pair(s) were ungroupable", file=sys.stderr)
        return 1
    return 0


def cmd_extract_bitext(args) -> int:
    records = read_jsonl(args.input, "gtrans")
    with _out(args.output) as out:
        for i, rec in enumerate(records):
            rows = bitext_mod.extract_bitext(
                rec, max_extra=args.max_extra, seed=args.seed + i
            )
            for src, tgt in rows:
                out.write(f"{' '.join(src)}\t{' '.join(tgt)}\n")
    return 0


def _build_scorer_factory(args):
    sentences: list[tuple[str, ...]] = []
    with open(args.scorer_corpus, encoding="utf-8") as fh:
        for line in fh.read().splitlines():
            if not line.strip():
                continue
            if "\t" in line:
                src, tgt = line.split("\t", 1)
                sentences.append(tuple(src.split()) + (";",) + tuple(tgt.split()))
            else:
                sentences.append(tuple(line.split()))
    return ngram_scorer_factory(sentences, order=args.ngram_order, k=args.ngram_k)


def cmd_augment(args) -> int:
    lexicon = InflectionLexicon.from_tsv(args.lexicon)
    gold_modes = args.detector == "gold" or args.aligner == "gold" or args.transformer == "oracle"
    if gold_modes and args.format != "gtrans":
        print("error: gold/oracle components need --format gtrans input", file=sys.stderr)
        return 2

    if args.format == "gtrans":
        records = read_jsonl(args.input, "gtrans")
        items = [(rec.source.tokens, split(rec.target)[0], rec) for rec in records]
    else:
        items = []
        with open(args.input, encoding="utf-8") as fh:
            for line in fh.read().splitlines():
                if not line.strip():
                    continue
                src, tgt = line.split("\t", 1)
                items.append((tuple(src.split()), tuple(tgt.split()), None))

    if args.detector == "rules":
        detector = RuleDetector.with_default_nouns(window=args.pronoun_window)
    elif args.detector == "adapter":
        detector = AdapterDetector(_make_adapter(args.detector_adapter))
    else:
        detector = None  # per-record gold

    if args.transformer == "lattice":
        transformer = LatticeTransformer(
            lexicon, _build_scorer_factory(args), beam=args.beam
        )
    elif args.transformer == "adapter":
        transformer = AdapterTransformer(_make_adapter(args.transformer_adapter))
    else:
        transformer = None  # per-record oracle

    if args.aligner == "heuristic":
        aligner = HeuristicAligner()
    elif args.aligner == "adapter":
        aligner = AdapterAligner(_make_adapter(args.aligner_adapter))
    else:
        aligner = None  # per-record gold

    failures = 0
    with _out(args.output) as out:
        for tokens, y_base, rec in items:
            det = detector or GoldDetector(rec.source.entities)
            tra = transformer or OracleTransformer(rec.target)
            ali = aligner or GoldAligner(rec.alignments, rec.target)
            try:
                result = augment(tokens, y_base, det, tra, ali, lexicon)
            except Exception as exc:  # per-record errors never abort the batch
                result = RecordFailure(tuple(tokens), tuple(y_base), error=str(exc))
            if isinstance(result, RecordFailure):
                failures += 1
                obj = {
                    "src": list(result.source_tokens),
                    "tgt": list(result.target_tokens),
                    "error": result.error,
                }
            elif isinstance(result, Passthrough):
                obj = {
                    "src": list(result.source_tokens),
                    "tgt": list(result.target_tokens),
                    "passthrough": True,
                }
            else:
                obj = gtrans_to_json(result)
            out.write(json.dumps(obj, ensure_ascii=False) + "\n")
    if failures:
        print(f"{failures} record(s) failed", file=sys.stderr)
        return 1
    return 0


def cmd_evaluate(args) -> int:
    pairs = read_eval_pairs(args.ref, args.hyp)
    report = evaluate_pairs(pairs)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2)
            fh.write("\n")
    print(report.table())
    return 0


def cmd_collapse(args) -> int:
    records = read_jsonl(args.input, "gtrans")
    sentences = _read_token_lines(args.scorer_corpus) if args.scorer_corpus else None
    if sentences is None:
        surfaces = []
        for rec in records:
            masc, fem = split(rec.target)
            surfaces.append(masc)
            if fem != masc:
                surfaces.append(fem)
        sentences = surfaces
    scorer = NgramScorer(sentences, order=args.ngram_order, k=args.ngram_k)
    with _out(args.output) as out:
        for rec in records:
            tokens = collapse(
                rec.target,
                scorer,
                alignments=rec.alignments,
                entity_consistent=args.entity_consistent,
            )
            out.write(" ".join(tokens) + "\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import load_app

    app = load_app(args.corpus, args.lexicon)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genderalt",
        description="Entity-level gendered translation alternatives toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="enumerate all alternatives of G-Trans records")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("group", help="combine parallel masculine/feminine surfaces")
    p.add_argument("--masc", required=True, help="all-masculine sentences, one per line")
    p.add_argument("--fem", required=True, help="all-feminine sentences, one per line")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("extract-bitext", help="gender-tagged fine-tuning rows as TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--max-extra", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_extract_bitext)

    p = sub.add_parser("augment", help="add gender structures to sentence pairs")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["gtrans", "tsv"], default="gtrans")
    p.add_argument("--output")
    p.add_argument("--lexicon", required=True)
    p.add_argument("--detector", choices=["gold", "rules", "adapter"], default="rules")
    p.add_argument("--transformer", choices=["lattice", "adapter", "oracle"], default="lattice")
    p.add_argument("--aligner", choices=["gold", "heuristic", "adapter"], default="heuristic")
    p.add_argument("--detector-adapter", help="command line or http(s) URL")
    p.add_argument("--transformer-adapter", help="command line or http(s) URL")
    p.add_argument("--aligner-adapter", help="command line or http(s) URL")
    p.add_argument("--scorer-corpus", help="text or TSV corpus for the n-gram scorer")
    p.add_argument("--ngram-order", type=int, default=3)
    p.add_argument("--ngram-k", type=float, default=0.1)
    p.add_argument("--beam", type=int, default=5)
    p.add_argument("--pronoun-window", type=int, default=6)
    p.add_argument(
        "--seed",
        type=int,
        default=0,
        help="reproducibility seed; the bundled components are deterministic "
        "and ignore it, stochastic adapters may consume it",
    )
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("evaluate", help="metric suite over ref/hyp G-Trans files")
    p.add_argument("--ref", required=True)
    p.add_argument("--hyp", required=True)
    p.add_argument("--json", help="also write the report as JSON to this path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("collapse", help="flatten structures by scorer likelihood")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--scorer-corpus")
    p.add_argument("--ngram-order", type=int, default=3)
    p.add_argument("--ngram-k", type=float, default=0.1)
    p.add_argument("--entity-consistent", action="store_true")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", required=True)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "detector", None) == "adapter" and not args.detector_adapter:
        parser.error("--detector adapter requires --detector-adapter")
    if getattr(args, "transformer", None) == "adapter" and not args.transformer_adapter:
        parser.error("--transformer adapter requires --transformer-adapter")
    if getattr(args, "transformer", None) == "lattice" and not args.scorer_corpus:
        parser.error("--transformer lattice requires --scorer-corpus")
    if getattr(args, "aligner", None) == "adapter" and not args.aligner_adapter:
        parser.error("--aligner adapter requires --aligner-adapter")
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
