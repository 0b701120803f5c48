"""Constrained search over gender-inflection variants of a base translation.

The lattice fixes every token of the base translation except at "sites":
spans that match an inflection-lexicon phrase, where the path may choose
among the matched phrase and its counterparts.  Decoding maximizes the
total log-probability of a pluggable sequence scorer; with a beam at least
as wide as the number of paths this is exact argmax.

Beam pruning keeps the per-width beams nested (a path records the smallest
width at which it survives), so widening the beam never returns a worse
path and per-width results are reproducible.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .group import InflectionLexicon, Phrase
from .structure import StructuredTranslation


class SequenceScorer:
    """Log-probability of the next token given the decoded prefix.

    The conditioning context (e.g. the gender-tagged source sentence) is
    fixed at construction.  Implementations must be deterministic and
    return finite scores for in-vocabulary tokens.
    """

    def score(self, prefix: Sequence[str], token: str) -> float:
        raise NotImplementedError


def score_sequence(scorer: SequenceScorer, tokens: Sequence[str]) -> float:
    """Total scorer log-probability of a full token sequence."""
    total = 0.0
    for i, tok in enumerate(tokens):
        total += scorer.score(tokens[:i], tok)
    return total


@dataclass(frozen=True)
class Site:
    """One variable span: base[start:end] plus its variant phrases."""

    start: int
    end: int
    original: Phrase
    variants: tuple[Phrase, ...]  # sorted, always includes the original

    def __post_init__(self):
        if len(set(self.variants)) < 2:
            raise ValueError("a site needs at least two distinct variants")
        if self.original not in self.variants:
            raise ValueError("site variants must include the original span")


@dataclass(frozen=True)
class InflectionLattice:
    base: tuple[str, ...]
    sites: tuple[Site, ...]

    def __post_init__(self):
        prev_end = 0
        for site in self.sites:
            if site.start < prev_end:
                raise ValueError("sites overlap or are unsorted")
            prev_end = site.end

    @property
    def num_paths(self) -> int:
        n = 1
        for site in self.sites:
            n *= len(site.variants)
        return n

    def realize(self, choices: Sequence[Phrase]) -> tuple[str, ...]:
        """Token sequence for one variant choice per site."""
        out: list[str] = []
        pos = 0
        for site, phrase in zip(self.sites, choices):
            out.extend(self.base[pos : site.start])
            out.extend(phrase)
            pos = site.end
        out.extend(self.base[pos:])
        return tuple(out)

    def paths(self) -> Iterable[tuple[str, ...]]:
        for choices in product(*(site.variants for site in self.sites)):
            yield self.realize(choices)


def _match_case(variant: Phrase, matched_surface: Phrase) -> Phrase:
    # Sentence-initial "El doctor" should swap to "La doctora" even when the
    # lexicon stores lowercase entries.
    if (
        matched_surface
        and matched_surface[0][:1].isupper()
        and variant
        and variant[0][:1].islower()
    ):
        first = variant[0][0].upper() + variant[0][1:]
        return (first,) + variant[1:]
    return variant


def build_lattice(y_base: Sequence[str], lexicon: InflectionLexicon) -> InflectionLattice:
    """Find all maximal lexicon matches in the base translation.

    Scanning is leftmost-longest: at each position the longest phrase that
    matches either side of some lexicon pair wins, and shorter overlapping
    matches are subsumed.  Variants at a site are the matched surface plus
    the opposite-side counterpart of every pair the match participates in.
    """
    base = tuple(y_base)
    lowered = [t.lower() for t in base]

    by_side: dict[Phrase, set[Phrase]] = {}
    max_len = 0
    for masc, fem in lexicon.pairs:
        lm, lf = tuple(t.lower() for t in masc), tuple(t.lower() for t in fem)
        by_side.setdefault(lm, set()).add(fem)
        by_side.setdefault(lf, set()).add(masc)
        max_len = max(max_len, len(lm), len(lf))

    sites: list[Site] = []
    pos = 0
    while pos < len(base):
        found = None
        for length in range(min(max_len, len(base) - pos), 0, -1):
            key = tuple(lowered[pos : pos + length])
            if key in by_side:
                found = (length, by_side[key])
                break
        if found is None:
            pos += 1
            continue
        length, counterparts = found
        surface = base[pos : pos + length]
        variants = {surface}
        for phrase in counterparts:
            variants.add(_match_case(phrase, surface))
        variants.discard(())
        if len(variants) >= 2:
            sites.append(
                Site(
                    start=pos,
                    end=pos + length,
                    original=surface,
                    variants=tuple(sorted(variants)),
                )
            )
        pos += length
    return InflectionLattice(base=base, sites=tuple(sites))


@dataclass
class _Hyp:
    tokens: tuple[str, ...]
    score: float
    min_width: int  # smallest beam width at which this hypothesis survives


def _extend(hyp: _Hyp, phrase: Phrase, scorer: SequenceScorer) -> _Hyp:
    tokens = hyp.tokens
    score = hyp.score
    for tok in phrase:
        score += scorer.score(tokens, tok)
        tokens = tokens + (tok,)
    return _Hyp(tokens=tokens, score=score, min_width=hyp.min_width)


def _prune(children: list[_Hyp], beam: int) -> list[_Hyp]:
    """Assign each child the smallest width at which it survives pruning.

    Simulates plain beam search at every width w <= beam in one pass: the
    width-w survivors are the top-w scored children among those whose parent
    survived at width w.  Children surviving at no width <= beam are dropped.
    """
    order = sorted(children, key=lambda h: (-h.score, h.tokens))
    inherited = {id(h): h.min_width for h in order}
    for h in order:
        h.min_width = beam + 1
    for width in range(1, beam + 1):
        kept = 0
        for h in order:
            if inherited[id(h)] <= width:
                kept += 1
                if kept <= width:
                    h.min_width = min(h.min_width, width)
                else:
                    break
    return [h for h in order if h.min_width <= beam]


def beam_decode(
    lattice: InflectionLattice, scorer: SequenceScorer, beam: int
) -> tuple[str, ...]:
    """Best path through the lattice under the scorer, beam width ``beam``.

    Exact argmax when ``beam >= lattice.num_paths``; ties break to the
    lexicographically smallest token sequence.
    """
    if beam < 1:
        raise ValueError("beam width must be >= 1")
    hyps = [_Hyp(tokens=(), score=0.0, min_width=1)]
    pos = 0
    for site in lattice.sites:
        gap = lattice.base[pos : site.start]
        hyps = [_extend(h, gap, scorer) for h in hyps]
        children = [_extend(h, v, scorer) for h in hyps for v in site.variants]
        hyps = _prune(children, beam)
        pos = site.end
    hyps = [_extend(h, lattice.base[pos:], scorer) for h in hyps]
    best = min(hyps, key=lambda h: (-h.score, h.tokens))
    return best.tokens


def make_variants(
    y_base: Sequence[str],
    lexicon: InflectionLexicon,
    scorer_masc: SequenceScorer,
    scorer_fem: SequenceScorer,
    beam: int,
) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Decode the all-masculine and all-feminine variants of the base.

    ``scorer_masc`` must be conditioned on the masculine-tagged source and
    ``scorer_fem`` on the feminine-tagged one.  Both decodes share one
    lattice, so the outputs differ from the base only at inflection sites.
    """
    lattice = build_lattice(y_base, lexicon)
    y_masc = beam_decode(lattice, scorer_masc, beam)
    y_fem = beam_decode(lattice, scorer_fem, beam)
    return y_masc, y_fem


def collapse(
    translation: StructuredTranslation,
    scorer: SequenceScorer,
    alignments: Sequence[int] | None = None,
    entity_consistent: bool = False,
) -> tuple[str, ...]:
    """Flatten a structured translation by per-structure likelihood.

    Each structure independently contributes the side with the higher
    average per-token log-probability (ties go masculine).  This literal
    rule can pick different genders for structures governed by the same
    entity; pass ``entity_consistent=True`` with the alignments to decide
    once per entity instead (majority of per-structure average scores).
    """
    sides: list[str] = []
    prefix: list[str] = []
    margins: list[float] = []  # masc average minus fem average, per structure
    for seg in translation.segments:
        if isinstance(seg, str):
            prefix.append(seg)
            continue
        masc_avg = _avg_logprob(scorer, prefix, seg.masculine)
        fem_avg = _avg_logprob(scorer, prefix, seg.feminine)
        margins.append(masc_avg - fem_avg)
        side = "M" if masc_avg >= fem_avg else "F"
        sides.append(side)
        prefix.extend(seg.side(side))

    if entity_consistent:
        if alignments is None:
            raise ValueError("entity_consistent collapse needs the alignments")
        by_entity: dict[int, float] = {}
        for a, margin in zip(alignments, margins):
            by_entity[a] = by_entity.get(a, 0.0) + margin
        sides = ["M" if by_entity[a] >= 0.0 else "F" for a in alignments]

    out: list[str] = []
    struct_idx = 0
    for seg in translation.segments:
        if isinstance(seg, str):
            out.append(seg)
        else:
            out.extend(seg.side(sides[struct_idx]))
            struct_idx += 1
    return tuple(out)


def _avg_logprob(scorer: SequenceScorer, prefix: list[str], phrase: Phrase) -> float:
    ctx = tuple(prefix)
    total = 0.0
    for tok in phrase:
        total += scorer.score(ctx, tok)
        ctx = ctx + (tok,)
    return total / len(phrase)


BOS = "<s>"
EOS = "</s>"


class NgramScorer(SequenceScorer):
    """Add-k smoothed n-gram language model over whitespace tokens.

    Stands in for the fine-tuned MT model: the conditioning context (a
    tagged source sentence) is simply concatenated in front of the decoded
    prefix as a pseudo-sentence, so gender tags in the context steer the
    n-gram histories.
    """

    def __init__(
        self,
        corpus: Iterable[Sequence[str]],
        order: int = 3,
        k: float = 0.1,
        context: Sequence[str] = (),
    ):
        if order < 1:
            raise ValueError("order must be >= 1")
        if k <= 0:
            raise ValueError("smoothing constant k must be > 0")
        self.order = order
        self.k = k
        self.context = tuple(context)
        self._ngrams: Counter = Counter()
        self._history: Counter = Counter()
        vocab: set[str] = set()
        n_sentences = 0
        for sentence in corpus:
            sentence = tuple(sentence)
            n_sentences += 1
            vocab.update(sentence)
            padded = (BOS,) * (order - 1) + sentence + (EOS,)
            for i in range(order - 1, len(padded)):
                gram = padded[i - order + 1 : i + 1]
                self._ngrams[gram] += 1
                self._history[gram[:-1]] += 1
        if n_sentences == 0:
            raise ValueError("training corpus is empty")
        vocab.add(EOS)
        self.vocab = frozenset(vocab)

    def with_context(self, context: Sequence[str]) -> "NgramScorer":
        """Copy of this scorer conditioned on a different context."""
        clone = object.__new__(NgramScorer)
        clone.__dict__.update(self.__dict__)
        clone.context = tuple(context)
        return clone

    def score(self, prefix: Sequence[str], token: str) -> float:
        history = (BOS,) * (self.order - 1) + self.context + tuple(prefix)
        history = history[len(history) - self.order + 1 :]
        num = self._ngrams[history + (token,)] + self.k
        den = self._history[history] + self.k * len(self.vocab)
        return math.log(num / den)
