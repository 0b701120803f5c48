"""Corpus-level evaluation: alternatives P/R, structure P/R, alignment
accuracy, masculine/feminine BLEU with their absolute difference, and
rewrite precision/recall/F0.5.

Ratios with a zero denominator are reported as None so "no predictions"
stays distinguishable from "all wrong".  Raw counts are kept for audit.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import EvalPair, GTransRecord
from .structure import StructuredTranslation, split

BLEU_ORDER = 4


@dataclass(frozen=True)
class MetricsReport:
    alternatives_precision: float | None
    alternatives_recall: float | None
    structure_precision: float | None
    structure_recall: float | None
    alignment_accuracy: float | None
    bleu_masc: float
    bleu_fem: float
    delta_bleu: float
    counts: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "alternatives_precision": self.alternatives_precision,
            "alternatives_recall": self.alternatives_recall,
            "structure_precision": self.structure_precision,
            "structure_recall": self.structure_recall,
            "alignment_accuracy": self.alignment_accuracy,
            "bleu_masc": self.bleu_masc,
            "bleu_fem": self.bleu_fem,
            "delta_bleu": self.delta_bleu,
            "counts": self.counts,
        }

    def table(self) -> str:
        def fmt(v, scale=100.0):
            return "-" if v is None else f"{v * scale:.1f}" if scale == 100.0 else f"{v:.1f}"

        rows = [
            ("Alternatives Precision%", fmt(self.alternatives_precision)),
            ("Alternatives Recall%", fmt(self.alternatives_recall)),
            ("delta-BLEU", f"{self.delta_bleu:.1f}"),
            ("Structure Precision%", fmt(self.structure_precision)),
            ("Structure Recall%", fmt(self.structure_recall)),
            (
                "Alignment Accuracy%",
                fmt(self.alignment_accuracy),
            ),
            ("BLEU (masculine)", f"{self.bleu_masc:.1f}"),
            ("BLEU (feminine)", f"{self.bleu_fem:.1f}"),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {value:>7}" for name, value in rows)


def _has_structures(rec: GTransRecord) -> bool:
    return rec.target.has_structures()


def alternatives_pr(pairs: Sequence[EvalPair]) -> tuple[float | None, float | None]:
    """Sentence-level overlap of "produced alternatives" indicators."""
    if not pairs:
        raise ValueError("need at least one evaluation pair")
    both = sum(
        1
        for p in pairs
        if _has_structures(p.reference) and _has_structures(p.hypothesis)
    )
    hyp = sum(1 for p in pairs if _has_structures(p.hypothesis))
    ref = sum(1 for p in pairs if _has_structures(p.reference))
    precision = both / hyp if hyp else None
    recall = both / ref if ref else None
    return precision, recall


def _structure_multiset(translation: StructuredTranslation) -> Counter:
    return Counter((s.masculine, s.feminine) for s in translation.structures)


def structure_counts(
    pairs: Sequence[EvalPair], positional: bool = False
) -> tuple[int, int, int]:
    """(correct, predicted, total) over pairs where both sides have structures.

    By default a hypothesis structure is correct when its (masculine,
    feminine) token pair also occurs in the reference, position-independent
    multiset intersection.  ``positional=True`` instead requires equal
    content at the same structure index.
    """
    correct = predicted = total = 0
    for pair in pairs:
        if not (_has_structures(pair.reference) and _has_structures(pair.hypothesis)):
            continue
        ref_structs = pair.reference.target.structures
        hyp_structs = pair.hypothesis.target.structures
        predicted += len(hyp_structs)
        total += len(ref_structs)
        if positional:
            correct += sum(1 for r, h in zip(ref_structs, hyp_structs) if r == h)
        else:
            ref_ms = _structure_multiset(pair.reference.target)
            hyp_ms = _structure_multiset(pair.hypothesis.target)
            correct += sum((ref_ms & hyp_ms).values())
    return correct, predicted, total


def structure_pr(
    pairs: Sequence[EvalPair], positional: bool = False
) -> tuple[float | None, float | None]:
    correct, predicted, total = structure_counts(pairs, positional=positional)
    precision = correct / predicted if predicted else None
    recall = correct / total if total else None
    return precision, recall


def alignment_accuracy(pairs: Sequence[EvalPair]) -> float | None:
    """Fraction of content-matched structures aligned to the same head word.

    Structures are matched between hypothesis and reference by identical
    (masculine, feminine) content, duplicates paired in order of occurrence;
    alignment identity is compared on the aligned entity's head index.
    """
    matched = correct = 0
    for pair in pairs:
        ref_by_content: dict[tuple, list[int]] = {}
        for struct, a in zip(pair.reference.target.structures, pair.reference.alignments):
            key = (struct.masculine, struct.feminine)
            head = pair.reference.source.entities[a].head_index
            ref_by_content.setdefault(key, []).append(head)
        for struct, a in zip(
            pair.hypothesis.target.structures, pair.hypothesis.alignments
        ):
            key = (struct.masculine, struct.feminine)
            heads = ref_by_content.get(key)
            if not heads:
                continue
            ref_head = heads.pop(0)
            matched += 1
            hyp_head = pair.hypothesis.source.entities[a].head_index
            if hyp_head == ref_head:
                correct += 1
    return correct / matched if matched else None


def _ngram_counts(tokens: Sequence[str], order: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def corpus_bleu(
    hypotheses: Sequence[Sequence[str]], references: Sequence[Sequence[str]]
) -> float:
    """Corpus BLEU in [0, 100] over pre-tokenized text, no smoothing.

    Geometric mean of clipped 1..4-gram precisions times the brevity
    penalty exp(1 - r/c) when c < r.  Orders with no hypothesis n-grams at
    all (corpus shorter than the order) are excluded from the mean; a zero
    precision at any included order yields 0.
    """
    if len(hypotheses) != len(references):
        raise ValueError("hypothesis and reference corpora differ in length")
    if not hypotheses:
        raise ValueError("empty hypothesis corpus")
    correct = [0] * BLEU_ORDER
    totals = [0] * BLEU_ORDER
    sys_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp, ref = tuple(hyp), tuple(ref)
        sys_len += len(hyp)
        ref_len += len(ref)
        hyp_counts = _ngram_counts(hyp, BLEU_ORDER)
        ref_counts = _ngram_counts(ref, BLEU_ORDER)
        for gram, count in hyp_counts.items():
            n = len(gram)
            totals[n - 1] += count
            correct[n - 1] += min(count, ref_counts.get(gram, 0))
    log_precisions = []
    for n in range(BLEU_ORDER):
        if totals[n] == 0:
            continue  # degenerate short corpus: drop orders beyond max length
        if correct[n] == 0:
            return 0.0
        log_precisions.append(math.log(correct[n] / totals[n]))
    if not log_precisions or sys_len == 0:
        return 0.0
    brevity = 1.0 if sys_len >= ref_len else math.exp(1.0 - ref_len / sys_len)
    return 100.0 * brevity * math.exp(sum(log_precisions) / len(log_precisions))


def delta_bleu(pairs: Sequence[EvalPair]) -> tuple[float, float, float]:
    """(masculine BLEU, feminine BLEU, absolute difference) over all pairs.

    Both sides are projected onto their all-masculine and all-feminine
    surfaces first; structure-free sentences contribute identically to both.
    """
    hyp_m, hyp_f, ref_m, ref_f = [], [], [], []
    for pair in pairs:
        hm, hf = split(pair.hypothesis.target)
        rm, rf = split(pair.reference.target)
        hyp_m.append(hm)
        hyp_f.append(hf)
        ref_m.append(rm)
        ref_f.append(rf)
    bleu_m = corpus_bleu(hyp_m, ref_m)
    bleu_f = corpus_bleu(hyp_f, ref_f)
    return bleu_m, bleu_f, abs(bleu_m - bleu_f)


def rewrite_pr_f05(
    attempts: Iterable[tuple[bool, bool]]
) -> tuple[float | None, float, float | None]:
    """Gender-rewrite scoring over (did_rewrite, matches_reference) flags.

    Precision counts correct rewrites over attempted ones, recall over all
    examples; F0.5 weighs precision twice as much as recall.
    """
    attempts = list(attempts)
    if not attempts:
        raise ValueError("need at least one example")
    total = len(attempts)
    attempted = sum(1 for did, _ in attempts if did)
    correct = sum(1 for did, ok in attempts if did and ok)
    precision = correct / attempted if attempted else None
    recall = correct / total
    f05 = None
    if precision is not None and (precision + recall) > 0:
        f05 = f05_score(precision, recall)
    return precision, recall, f05


def f05_score(precision: float, recall: float) -> float:
    if 0.25 * precision + recall == 0:
        return 0.0
    return 1.25 * precision * recall / (0.25 * precision + recall)


def evaluate_pairs(pairs: Sequence[EvalPair]) -> MetricsReport:
    """Full metric suite over aligned reference/hypothesis records."""
    alt_p, alt_r = alternatives_pr(pairs)
    correct, predicted, total = structure_counts(pairs)
    struct_p = correct / predicted if predicted else None
    struct_r = correct / total if total else None
    align_acc = alignment_accuracy(pairs)
    bleu_m, bleu_f, delta = delta_bleu(pairs)
    counts = {
        "pairs": len(pairs),
        "both_have_structures": sum(
            1
            for p in pairs
            if _has_structures(p.reference) and _has_structures(p.hypothesis)
        ),
        "hyp_with_structures": sum(1 for p in pairs if _has_structures(p.hypothesis)),
        "ref_with_structures": sum(1 for p in pairs if _has_structures(p.reference)),
        "structures_correct": correct,
        "structures_predicted": predicted,
        "structures_total": total,
    }
    return MetricsReport(
        alternatives_precision=alt_p,
        alternatives_recall=alt_r,
        structure_precision=struct_p,
        structure_recall=struct_r,
        alignment_accuracy=align_acc,
        bleu_masc=bleu_m,
        bleu_fem=bleu_f,
        delta_bleu=delta,
        counts=counts,
    )
