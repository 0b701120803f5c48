import pytest

from genderalt.corpus import GTransRecord
from genderalt.pipeline import (
    EditorAdapterConfig,
    GoldAligner,
    GoldDetector,
    HeuristicAligner,
    LatticeTransformer,
    OracleTransformer,
    Passthrough,
    RecordFailure,
    RuleDetector,
    Transformer,
    augment,
    augment_corpus,
    build_editor_prompt,
    entities_from_labels,
    ngram_scorer_factory,
)
from genderalt.structure import split

from .conftest import doctor_patient_record

NOUNS = ["doctor", "patient", "secretary", "boss", "lawyer", "child", "judge"]


@pytest.fixture
def rules():
    return RuleDetector(NOUNS, window=6)


def test_rule_detector_table2(rules):
    labels = rules.annotate("The doctor was angry with the patient".split())
    assert labels[1] == "A" and labels[6] == "A"
    assert labels[0] == "N"


def test_rule_detector_pronoun_genders_preceding_noun(rules):
    labels = rules.annotate("The lawyer fought to keep his child".split())
    assert labels[1] == "M"  # co-referring "his"
    assert labels[6] == "A"  # the child itself stays ambiguous


def test_rule_detector_following_fallback(rules):
    labels = rules.annotate("She is a boss".split())
    assert labels[3] == "F"


def test_rule_detector_empty(rules):
    assert rules.annotate([]) == []


def test_rule_detector_noun_list_never_forces_masculine(rules):
    # masculine generic nouns stay ambiguous without pronoun evidence
    labels = rules.annotate("The judge read the case".split())
    assert labels[1] == "A"


def test_default_noun_list_loads():
    det = RuleDetector.with_default_nouns()
    labels = det.annotate("The doctor was angry".split())
    assert labels[1] == "A"


def _oracle_parts(rec: GTransRecord, lexicon):
    return (
        GoldDetector(rec.source.entities),
        OracleTransformer(rec.target),
        GoldAligner(rec.alignments, rec.target),
        lexicon,
    )


def test_augment_reproduces_table2(toy_lexicon):
    rec = doctor_patient_record()
    detector, transformer, aligner, lexicon = _oracle_parts(rec, toy_lexicon)
    y_base, _ = split(rec.target)
    result = augment(rec.source.tokens, y_base, detector, transformer, aligner, lexicon)
    assert result == rec


def test_augment_passthrough_when_disambiguated(toy_lexicon):
    detector = RuleDetector(NOUNS)
    transformer = OracleTransformer(None)  # never reached
    result = augment(
        tuple("She is a boss".split()),
        tuple("Ella es una jefa".split()),
        detector,
        transformer,
        HeuristicAligner(),
        toy_lexicon,
    )
    assert isinstance(result, Passthrough)
    assert result.target_tokens == tuple("Ella es una jefa".split())


def test_augment_passthrough_on_identical_variants(toy_lexicon):
    class IdentityTransformer(Transformer):
        def variants(self, x_masc, x_fem, y_base):
            return tuple(y_base), tuple(y_base)

    rec = doctor_patient_record()
    result = augment(
        rec.source.tokens,
        split(rec.target)[0],
        GoldDetector(rec.source.entities),
        IdentityTransformer(),
        HeuristicAligner(),
        toy_lexicon,
    )
    assert isinstance(result, Passthrough)
    assert result.reason == "variants are identical"


def test_augment_passthrough_on_ungroupable(toy_lexicon):
    class RewordingTransformer(Transformer):
        def variants(self, x_masc, x_fem, y_base):
            return tuple(y_base), tuple(y_base[:-1]) + ("reescrito",)

    rec = doctor_patient_record()
    result = augment(
        rec.source.tokens,
        split(rec.target)[0],
        GoldDetector(rec.source.entities),
        RewordingTransformer(),
        HeuristicAligner(),
        toy_lexicon,
    )
    assert isinstance(result, Passthrough)
    assert "ungroupable" in result.reason


def test_augment_corpus_isolates_failures(toy_lexicon):
    class ExplodingTransformer(Transformer):
        def variants(self, x_masc, x_fem, y_base):
            raise ValueError("boom")

    rec = doctor_patient_record()
    results = augment_corpus(
        [(rec.source.tokens, split(rec.target)[0])] * 2,
        GoldDetector(rec.source.entities),
        ExplodingTransformer(),
        HeuristicAligner(),
        toy_lexicon,
    )
    assert len(results) == 2
    assert all(isinstance(r, RecordFailure) for r in results)
    assert "boom" in results[0].error


def test_augment_identity_over_toy_corpus(toy_corpus, toy_lexicon):
    for rec in toy_corpus:
        detector, transformer, aligner, lexicon = _oracle_parts(rec, toy_lexicon)
        y_base, _ = split(rec.target)
        result = augment(
            rec.source.tokens, y_base, detector, transformer, aligner, lexicon
        )
        if rec.target.has_structures():
            assert result == rec
        else:
            assert isinstance(result, Passthrough)
            assert result.target_tokens == rec.target.plain_tokens


def test_lattice_transformer_with_tagged_bitext(toy_lexicon, doctor_patient):
    # scorer corpus: uniform-assignment "tagged source ; target" rows
    # (mixed rows would blur the tag signal at the context boundary)
    from genderalt.bitext import extract_bitext, tag_source

    rows = extract_bitext(doctor_patient, max_extra=0, seed=0)
    corpus = [src + (";",) + tgt for src, tgt in rows]
    transformer = LatticeTransformer(
        toy_lexicon, ngram_scorer_factory(corpus, order=3, k=0.01), beam=8
    )
    y_base, _ = split(doctor_patient.target)
    x_m = tag_source(doctor_patient.source, {1: "M", 6: "M"})
    x_f = tag_source(doctor_patient.source, {1: "F", 6: "F"})
    y_m, y_f = transformer.variants(x_m, x_f, y_base)
    assert y_m == y_base  # masculine base stays untouched
    assert " ".join(y_f) == "La doctora estaba enojada con la paciente"


def test_entities_from_labels():
    ents = entities_from_labels(["N", "A", "N", "M"])
    assert [(e.head_index, e.label) for e in ents] == [(1, "A"), (3, "M")]


def test_editor_prompt_contains_example_and_query(doctor_patient):
    cfg = EditorAdapterConfig(preset="editor", examples=(doctor_patient,))
    prompt = build_editor_prompt(
        cfg, ("The", "boss", "left"), ("El", "jefe", "se", "fue"), "F"
    )
    assert "La doctora estaba enojada con la paciente" in prompt
    assert "El jefe se fue" in prompt  # query keeps the base translation
    assert prompt.count("Source:") == 2


def test_generator_prompt_omits_base(doctor_patient):
    cfg = EditorAdapterConfig(preset="generator", examples=(doctor_patient,))
    prompt = build_editor_prompt(
        cfg, ("The", "boss", "left"), ("El", "jefe", "se", "fue"), "F"
    )
    assert "El jefe se fue" not in prompt


def test_prompt_requires_examples():
    with pytest.raises(ValueError):
        EditorAdapterConfig(preset="editor", examples=())


def test_prompt_is_deterministic(doctor_patient):
    cfg = EditorAdapterConfig(preset="editor", examples=(doctor_patient,))
    args = (cfg, ("A", "b"), ("x", "y"), "M")
    assert build_editor_prompt(*args) == build_editor_prompt(*args)


def test_unknown_preset_rejected():
    with pytest.raises(ValueError):
        EditorAdapterConfig(preset="chat", examples=(doctor_patient_record(),))


def test_pick_examples_defaults_to_six(toy_corpus):
    from genderalt.pipeline import pick_examples

    examples = pick_examples(toy_corpus)
    assert len(examples) == 6
    assert all(rec.target.has_structures() for rec in examples)
    assert pick_examples(toy_corpus, seed=1) == pick_examples(toy_corpus, seed=1)
