"""Gender-structure alignment: argmax inference, the alignment loss term,
marker-based aligner inputs, and a deterministic model-free aligner.

The alignment of structure i is read off an attention-style probability
matrix at the row of its <MID> token.  The loss value combines cross
entropy with the negative log-probability mass put on the gold source
positions; only the value is computed here, training belongs elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .corpus import AMBIGUOUS, AnnotatedSource
from .structure import StructuredTranslation, split

ALIGN_MARKER = "|"
CONCAT_SEPARATOR = ";"


@dataclass(frozen=True)
class LossConfig:
    """Scaling factor for the alignment loss term (lambda >= 0)."""

    lam: float = 0.05

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("scaling factor must be non-negative")


def validate_score_matrix(matrix: np.ndarray) -> np.ndarray:
    """Check an (m, n) row-stochastic probability matrix (rows sum to 1 ± 1e-6)."""
    P = np.asarray(matrix, dtype=float)
    if P.ndim != 2:
        raise ValueError("score matrix must be 2-dimensional")
    if np.any(P < 0) or np.any(P > 1):
        raise ValueError("score matrix entries must lie in [0, 1]")
    sums = P.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > 1e-6):
        raise ValueError("score matrix rows must sum to 1 within 1e-6")
    return P


def infer_alignments(
    matrix: np.ndarray, mid_positions: Sequence[int]
) -> list[int]:
    """Per-structure source position: argmax of the <MID>-token row.

    Ties break to the smallest source index.
    """
    P = validate_score_matrix(matrix)
    m = P.shape[0]
    out = []
    for mid in mid_positions:
        if not 0 <= mid < m:
            raise IndexError(f"mid position {mid} out of range for {m} rows")
        out.append(int(np.argmax(P[mid])))
    return out


def alignment_loss(
    matrix: np.ndarray,
    mid_positions: Sequence[int],
    gold: Sequence[int],
    cross_entropy: float,
    cfg: LossConfig,
) -> float:
    """Total loss: cross entropy minus (lam / k) * sum of log P[mid_i, gold_i]."""
    P = validate_score_matrix(matrix)
    if len(mid_positions) != len(gold) or not mid_positions:
        raise ValueError("need equally many mid positions and gold alignments (k >= 1)")
    k = len(mid_positions)
    total = 0.0
    for mid, a in zip(mid_positions, gold):
        p = P[mid, a]
        if p <= 0.0:
            raise ValueError(
                f"zero probability at supervised cell ({mid}, {a}); loss undefined"
            )
        total += math.log(p)
    return cross_entropy - (cfg.lam / k) * total


def loss_gradient_wrt_cell(
    matrix: np.ndarray, mid: int, gold: int, k: int, cfg: LossConfig
) -> float:
    """Analytic d(loss)/d P[mid, gold] = -lam / (k * P[mid, gold])."""
    P = np.asarray(matrix, dtype=float)
    return -cfg.lam / (k * P[mid, gold])


def prepare_marker_inputs(
    source: AnnotatedSource,
    target: StructuredTranslation,
    separator: str = CONCAT_SEPARATOR,
) -> list[tuple[str, ...]]:
    """Aligner inputs: one tagged sequence per structure.

    Output i is the source tokens, a separator token, then the masculine
    surface with structure i's phrase enclosed in '|' marker tokens, e.g.
    ``... ; | El doctor | estaba enojado con el paciente``.
    """
    if target.num_structures < 1:
        raise ValueError("translation has no structures to align")
    outputs = []
    for i in range(target.num_structures):
        tagged: list[str] = list(source.tokens)
        tagged.append(separator)
        struct_idx = 0
        for seg in target.segments:
            if isinstance(seg, str):
                tagged.append(seg)
            else:
                if struct_idx == i:
                    tagged.append(ALIGN_MARKER)
                    tagged.extend(seg.masculine)
                    tagged.append(ALIGN_MARKER)
                else:
                    tagged.extend(seg.masculine)
                struct_idx += 1
        outputs.append(tuple(tagged))
    return outputs


class NoAmbiguousEntities(ValueError):
    """Source sentence offers no ambiguous entity to align to."""


def heuristic_align(
    source: AnnotatedSource,
    target: StructuredTranslation,
    bilex: Mapping[str, Sequence[str]] | None = None,
) -> tuple[int, ...]:
    """Deterministic aligner used when no trained model is plugged in.

    A bilingual hint (source head word -> target word forms) wins when one
    of its forms occurs in a structure's phrases; remaining structures fall
    back to a monotone ordinal assignment, mapping the i-th of k structures
    to the floor(i * d / k)-th of d ambiguous entities.
    """
    ambiguous = source.ambiguous_entities()
    if not ambiguous:
        raise NoAmbiguousEntities("no ambiguous entities in the source")
    k = target.num_structures
    d = len(ambiguous)
    ent_index = {e.head_index: i for i, e in enumerate(source.entities)}

    hints: dict[int, set[str]] = {}
    if bilex:
        for ent in ambiguous:
            head = source.tokens[ent.head_index].lower()
            if head in bilex:
                hints[ent.head_index] = {w.lower() for w in bilex[head]}

    alignments: list[int] = []
    for i, struct in enumerate(target.structures):
        tokens = {t.lower() for t in struct.masculine} | {
            t.lower() for t in struct.feminine
        }
        chosen = None
        for ent in ambiguous:
            if hints.get(ent.head_index) and hints[ent.head_index] & tokens:
                chosen = ent
                break
        if chosen is None:
            chosen = ambiguous[min(i * d // k, d - 1)]
        alignments.append(ent_index[chosen.head_index])
    return tuple(alignments)


class AdapterResponseError(ValueError):
    """External aligner returned an unusable aligned/not-aligned vector."""


def make_adapter_request(
    source: AnnotatedSource, target: StructuredTranslation, structure_index: int
) -> dict:
    """JSON request body for the external-aligner wire protocol."""
    y_masc, _ = split(target)
    tagged = prepare_marker_inputs(source, target)[structure_index]
    sep = tagged.index(CONCAT_SEPARATOR)
    return {"x": list(source.tokens), "yA": list(tagged[sep + 1 :])}


def entity_from_adapter_mask(source: AnnotatedSource, mask: Sequence[int]) -> int:
    """Convert a 0/1 per-source-token vector to the marked entity's index.

    Exactly one ambiguous head word must be marked.
    """
    if len(mask) != len(source.tokens):
        raise AdapterResponseError(
            f"mask length {len(mask)} != source length {len(source.tokens)}"
        )
    marked_heads = [
        i
        for i, ent in enumerate(source.entities)
        if ent.label == AMBIGUOUS and mask[ent.head_index]
    ]
    if not marked_heads:
        raise AdapterResponseError("no ambiguous head word marked as aligned")
    if len(marked_heads) > 1:
        raise AdapterResponseError("multiple ambiguous head words marked as aligned")
    return marked_heads[0]
