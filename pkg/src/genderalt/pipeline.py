"""Data augmentation: enrich (source, reference translation) pairs with
gender structures and alignments.

Per record: detect ambiguous entities, produce all-masculine/all-feminine
variants of the reference, diff-and-group them into a structured
translation, then align each structure to its entity.  Sentences with no
ambiguity, no surviving structures, or non-inflection differences pass
through unchanged; per-record failures never abort the batch.

Detector, transformer and aligner are pluggable; deterministic model-free
implementations ship here, and external neural models attach over the JSON
adapter protocol.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .adapters import AdapterError, JsonAdapter
from .align import NoAmbiguousEntities, entity_from_adapter_mask, heuristic_align
from .bitext import tag_source
from .corpus import (
    AMBIGUOUS,
    AnnotatedSource,
    EntityAnnotation,
    FEMININE,
    GTransRecord,
    MASCULINE,
)
from .group import InflectionLexicon, UngroupableError, group
from .lattice import NgramScorer, make_variants
from .structure import StructuredTranslation, split

NOT_ENTITY = "N"

MASCULINE_PRONOUNS = frozenset({"he", "him", "his", "himself"})
FEMININE_PRONOUNS = frozenset({"she", "her", "hers", "herself"})


@dataclass(frozen=True)
class Passthrough:
    """Record left unaugmented: no ambiguity or no usable structures."""

    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    reason: str = ""


@dataclass(frozen=True)
class RecordFailure:
    """A component failed on this record; the batch keeps going."""

    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    error: str


# --- detectors -------------------------------------------------------------


class Detector:
    """Per-token labels: A (ambiguous), M, F, or N (not a head word)."""

    def annotate(self, tokens: Sequence[str]) -> list[str]:
        raise NotImplementedError


class GoldDetector(Detector):
    """Replays known annotations; used for oracle pipelines and tests."""

    def __init__(self, entities: Sequence[EntityAnnotation]):
        self.entities = {e.head_index: e.label for e in entities}

    def annotate(self, tokens: Sequence[str]) -> list[str]:
        return [self.entities.get(i, NOT_ENTITY) for i in range(len(tokens))]


class RuleDetector(Detector):
    """Noun-list head words gendered by nearby pronouns, else ambiguous.

    A gendered pronoun assigns its gender to the nearest preceding noun in
    the window, falling back to the nearest following one ("She is a boss"
    genders "boss").  The noun list itself never forces a gender: masculine
    generic nouns stay ambiguous without pronoun evidence.
    """

    def __init__(self, nouns: Iterable[str], window: int = 6):
        if window < 0:
            raise ValueError("window must be >= 0")
        self.nouns = {n.lower() for n in nouns}
        self.window = window

    @classmethod
    def with_default_nouns(cls, window: int = 6) -> "RuleDetector":
        text = (
            importlib.resources.files("genderalt.data")
            .joinpath("detector_nouns.txt")
            .read_text(encoding="utf-8")
        )
        nouns = [line.strip() for line in text.splitlines() if line.strip()]
        return cls(nouns, window=window)

    def annotate(self, tokens: Sequence[str]) -> list[str]:
        labels = [NOT_ENTITY] * len(tokens)
        noun_positions = [
            i for i, tok in enumerate(tokens) if tok.lower() in self.nouns
        ]
        for i in noun_positions:
            labels[i] = AMBIGUOUS
        for j, tok in enumerate(tokens):
            low = tok.lower()
            if low in MASCULINE_PRONOUNS:
                gender = MASCULINE
            elif low in FEMININE_PRONOUNS:
                gender = FEMININE
            else:
                continue
            target = self._nearest_noun(noun_positions, j)
            if target is not None:
                labels[target] = gender
        return labels

    def _nearest_noun(self, noun_positions: list[int], pronoun_pos: int) -> int | None:
        preceding = [
            i for i in noun_positions if i < pronoun_pos and pronoun_pos - i <= self.window
        ]
        if preceding:
            return preceding[-1]
        following = [
            i for i in noun_positions if i > pronoun_pos and i - pronoun_pos <= self.window
        ]
        return following[0] if following else None


class AdapterDetector(Detector):
    """Wire format: {"tokens": [...]} -> {"labels": ["A"|"M"|"F"|"N", ...]}."""

    def __init__(self, adapter: JsonAdapter):
        self.adapter = adapter

    def annotate(self, tokens: Sequence[str]) -> list[str]:
        resp = self.adapter.request({"tokens": list(tokens)})
        labels = resp.get("labels")
        if not isinstance(labels, list) or len(labels) != len(tokens):
            raise AdapterError(f"detector returned bad labels: {resp!r}")
        return list(labels)


def entities_from_labels(labels: Sequence[str]) -> tuple[EntityAnnotation, ...]:
    return tuple(
        EntityAnnotation(head_index=i, label=lab)
        for i, lab in enumerate(labels)
        if lab != NOT_ENTITY
    )


# --- transformers ----------------------------------------------------------


class Transformer:
    """Produce the all-masculine / all-feminine variants of a base translation."""

    def variants(
        self,
        x_masc: Sequence[str],
        x_fem: Sequence[str],
        y_base: Sequence[str],
    ) -> tuple[tuple[str, ...], tuple[str, ...]]:
        raise NotImplementedError


class LatticeTransformer(Transformer):
    """Constrained rescoring over inflection variants of the base.

    ``scorer_factory`` maps a tagged source to a conditioned scorer; see
    :func:`ngram_scorer_factory` for the bundled n-gram one.
    """

    def __init__(
        self,
        lexicon: InflectionLexicon,
        scorer_factory: Callable[[Sequence[str]], "NgramScorer"],
        beam: int = 5,
    ):
        self.lexicon = lexicon
        self.scorer_factory = scorer_factory
        self.beam = beam

    def variants(self, x_masc, x_fem, y_base):
        return make_variants(
            y_base,
            self.lexicon,
            self.scorer_factory(x_masc),
            self.scorer_factory(x_fem),
            self.beam,
        )


def ngram_scorer_factory(
    corpus: Iterable[Sequence[str]], order: int = 3, k: float = 0.1
) -> Callable[[Sequence[str]], NgramScorer]:
    """Train once, condition per call on the tagged source.

    The context is terminated with the same ";" separator that joins
    tagged-source / target halves in training rows, so decode histories
    line up with the trained n-grams.
    """
    base = NgramScorer(corpus, order=order, k=k)
    return lambda context: base.with_context(tuple(context) + (";",))


class OracleTransformer(Transformer):
    """Replays the two surfaces of a known structured translation."""

    def __init__(self, target: StructuredTranslation):
        self.target = target

    def variants(self, x_masc, x_fem, y_base):
        return split(self.target)


class AdapterTransformer(Transformer):
    """Wire format: {"xM": [...], "xF": [...], "yB": [...]} -> {"yM": [...], "yF": [...]}."""

    def __init__(self, adapter: JsonAdapter):
        self.adapter = adapter

    def variants(self, x_masc, x_fem, y_base):
        resp = self.adapter.request(
            {"xM": list(x_masc), "xF": list(x_fem), "yB": list(y_base)}
        )
        y_m, y_f = resp.get("yM"), resp.get("yF")
        if not isinstance(y_m, list) or not isinstance(y_f, list):
            raise AdapterError(f"transformer returned bad variants: {resp!r}")
        return tuple(y_m), tuple(y_f)


# --- aligners --------------------------------------------------------------


class Aligner:
    def align(
        self, source: AnnotatedSource, target: StructuredTranslation
    ) -> tuple[int, ...]:
        raise NotImplementedError


class HeuristicAligner(Aligner):
    def __init__(self, bilex: Mapping[str, Sequence[str]] | None = None):
        self.bilex = bilex

    def align(self, source, target):
        return heuristic_align(source, target, self.bilex)


class GoldAligner(Aligner):
    """Replays known alignments; valid only for the matching target."""

    def __init__(self, alignments: Sequence[int], expected_target: StructuredTranslation):
        self.alignments = tuple(alignments)
        self.expected_target = expected_target

    def align(self, source, target):
        if target != self.expected_target:
            raise ValueError("gold alignments do not apply to this target")
        return self.alignments


class AdapterAligner(Aligner):
    """One request per structure; see align.entity_from_adapter_mask."""

    def __init__(self, adapter: JsonAdapter):
        self.adapter = adapter

    def align(self, source, target):
        from .align import make_adapter_request

        alignments = []
        for i in range(target.num_structures):
            resp = self.adapter.request(make_adapter_request(source, target, i))
            mask = resp.get("aligned")
            if not isinstance(mask, list):
                raise AdapterError(f"aligner returned bad mask: {resp!r}")
            alignments.append(entity_from_adapter_mask(source, mask))
        return tuple(alignments)


# --- the pipeline ----------------------------------------------------------


def augment(
    tokens: Sequence[str],
    y_base: Sequence[str],
    detector: Detector,
    transformer: Transformer,
    aligner: Aligner,
    lexicon: InflectionLexicon,
) -> GTransRecord | Passthrough:
    """Run detect -> transform -> group -> align on one sentence pair."""
    tokens = tuple(tokens)
    y_base = tuple(y_base)
    labels = detector.annotate(tokens)
    if len(labels) != len(tokens):
        raise AdapterError("detector label count does not match token count")
    entities = entities_from_labels(labels)
    source = AnnotatedSource(tokens=tokens, entities=entities)
    if not source.ambiguous_head_indices():
        return Passthrough(tokens, y_base, reason="no ambiguous entities")

    assignment_m = {h: "M" for h in source.ambiguous_head_indices()}
    assignment_f = {h: "F" for h in source.ambiguous_head_indices()}
    x_masc = tag_source(source, assignment_m)
    x_fem = tag_source(source, assignment_f)
    y_masc, y_fem = transformer.variants(x_masc, x_fem, y_base)

    try:
        target = group(y_masc, y_fem, lexicon)
    except UngroupableError as exc:
        return Passthrough(
            tokens, y_base, reason=f"ungroupable variants: {exc}"
        )
    if not target.has_structures():
        return Passthrough(tokens, y_base, reason="variants are identical")

    alignments = aligner.align(source, target)
    return GTransRecord(source=source, target=target, alignments=alignments)


def augment_corpus(
    pairs: Iterable[tuple[Sequence[str], Sequence[str]]],
    detector: Detector,
    transformer: Transformer,
    aligner: Aligner,
    lexicon: InflectionLexicon,
) -> list[GTransRecord | Passthrough | RecordFailure]:
    """Augment a batch; input order is preserved and failures are per-record."""
    out: list[GTransRecord | Passthrough | RecordFailure] = []
    for tokens, y_base in pairs:
        try:
            out.append(
                augment(tokens, y_base, detector, transformer, aligner, lexicon)
            )
        except (AdapterError, NoAmbiguousEntities, ValueError) as exc:
            out.append(RecordFailure(tuple(tokens), tuple(y_base), error=str(exc)))
    return out


# --- LLM prompt construction ------------------------------------------------

PROMPT_PRESETS = ("editor", "generator")


@dataclass(frozen=True)
class EditorAdapterConfig:
    """How to talk to an LLM rewriting translations into a target gender.

    ``examples`` are G-Trans records rendered as in-context demonstrations;
    the editor preset shows the base translation to be rewritten, the
    generator preset asks for the translation from scratch.
    """

    preset: str = "editor"
    examples: tuple[GTransRecord, ...] = ()
    endpoint: str | None = None
    command: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.preset not in PROMPT_PRESETS:
            raise ValueError(f"unknown prompt preset {self.preset!r}")
        if not self.examples:
            raise ValueError("LLM prompting needs at least one in-context example")


GENDER_WORD = {"M": "masculine", "F": "feminine"}

DEFAULT_EXAMPLE_COUNT = 6


def pick_examples(
    records: Sequence[GTransRecord],
    count: int = DEFAULT_EXAMPLE_COUNT,
    seed: int = 0,
) -> tuple[GTransRecord, ...]:
    """Sample in-context demonstrations (structured records only)."""
    import random

    pool = [rec for rec in records if rec.target.has_structures()]
    if not pool:
        raise ValueError("no structured records to sample examples from")
    rng = random.Random(seed)
    if len(pool) <= count:
        return tuple(pool)
    return tuple(rng.sample(pool, count))


def build_editor_prompt(
    cfg: EditorAdapterConfig,
    tokens: Sequence[str],
    y_base: Sequence[str],
    direction: str,
) -> str:
    """Deterministic prompt: instructions, in-context examples, then the query."""
    if direction not in GENDER_WORD:
        raise ValueError("direction must be 'M' or 'F'")
    wanted = GENDER_WORD[direction]
    lines: list[str] = []
    if cfg.preset == "editor":
        lines.append(
            "Rewrite the given translation so that every gender-ambiguous "
            f"entity of the source uses its {wanted} form. Change gender "
            "inflections only; keep all other words exactly as they are."
        )
    else:
        lines.append(
            "Translate the source sentence using the "
            f"{wanted} form for every gender-ambiguous entity."
        )
    lines.append("")
    for rec in cfg.examples:
        masc_surface, fem_surface = split(rec.target)
        rewrite = masc_surface if direction == "M" else fem_surface
        lines.append(f"Source: {' '.join(rec.source.tokens)}")
        if cfg.preset == "editor":
            lines.append(f"Translation: {' '.join(masc_surface)}")
        lines.append(f"{wanted.capitalize()} translation: {' '.join(rewrite)}")
        lines.append("")
    lines.append(f"Source: {' '.join(tokens)}")
    if cfg.preset == "editor":
        lines.append(f"Translation: {' '.join(y_base)}")
    lines.append(f"{wanted.capitalize()} translation:")
    return "\n".join(lines)
