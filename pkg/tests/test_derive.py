import random

import pytest

from genderalt.corpus import AnnotatedSource, EntityAnnotation
from genderalt.derive import (
    MissingAssignment,
    TooManyEntities,
    check_agreement,
    derive,
    derive_record,
    enumerate_alternatives,
    enumerate_record,
)
from genderalt.structure import GenderStructure, StructuredTranslation

from .conftest import random_structure

SECRETARY_BOSS_SENTENCES = [
    "El secretario estaba enojado con el jefe",
    "El secretario estaba enojado con la jefa",
    "La secretaria estaba enojada con el jefe",
    "La secretaria estaba enojada con la jefa",
]


def test_derive_mixed_assignment(secretary_boss):
    tokens = derive_record(secretary_boss, {1: "M", 6: "F"})
    assert " ".join(tokens) == "El secretario estaba enojado con la jefa"


def test_derive_structure_free_empty_assignment():
    y = StructuredTranslation(("hola", "mundo"))
    assert derive(y, (), (), {}) == ("hola", "mundo")


def test_enumerate_secretary_boss_matches_bullets(secretary_boss):
    alts = enumerate_record(secretary_boss)
    assert [" ".join(tokens) for _, tokens in alts] == SECRETARY_BOSS_SENTENCES
    # deterministic order: secretary varies slowest, M before F
    assert [a for a, _ in alts] == [
        {1: "M", 6: "M"},
        {1: "M", 6: "F"},
        {1: "F", 6: "M"},
        {1: "F", 6: "F"},
    ]


def test_enumerate_no_entities():
    y = StructuredTranslation(("hola",))
    alts = enumerate_alternatives(y, (), ())
    assert alts == [({}, ("hola",))]


def test_enumerate_table1_lawyer_fixed(lawyer_child_judge):
    alts = enumerate_record(lawyer_child_judge)
    assert len(alts) == 4  # d = 2: child, judge
    for _, tokens in alts:
        assert " ".join(tokens).startswith("El abogado")


def test_missing_assignment_error(secretary_boss):
    with pytest.raises(MissingAssignment) as exc:
        derive_record(secretary_boss, {1: "M"})
    assert exc.value.head_index == 6


def test_check_agreement_recovers_assignment(secretary_boss):
    got = check_agreement(
        secretary_boss.target,
        secretary_boss.alignments,
        secretary_boss.source.entities,
        tuple("El secretario estaba enojado con el jefe".split()),
    )
    assert got == {1: "M", 6: "M"}


def test_check_agreement_rejects_disagreement(secretary_boss):
    got = check_agreement(
        secretary_boss.target,
        secretary_boss.alignments,
        secretary_boss.source.entities,
        tuple("El secretario estaba enojada con el jefe".split()),
    )
    assert got is None


def test_check_agreement_rejects_plain_edit(secretary_boss):
    got = check_agreement(
        secretary_boss.target,
        secretary_boss.alignments,
        secretary_boss.source.entities,
        tuple("El secretario estaba enojado contra el jefe".split()),
    )
    assert got is None


def _random_case(rng):
    """Structured translation + alignments over a small entity set."""
    n_entities = rng.randint(1, 3)
    entities = tuple(EntityAnnotation(i, "A") for i in range(n_entities))
    segments: list = []
    alignments: list[int] = []
    for _ in range(rng.randint(1, 6)):
        if rng.random() < 0.5:
            segments.append(rng.choice(["a", "b", "c", "d"]))
        else:
            segments.append(random_structure(rng))
            alignments.append(rng.randrange(n_entities))
    source = AnnotatedSource(
        tokens=tuple(f"t{i}" for i in range(n_entities)), entities=entities
    )
    return StructuredTranslation(tuple(segments)), tuple(alignments), source


def test_count_and_consistency_properties():
    rng = random.Random(11)
    for _ in range(200):
        target, alignments, source = _random_case(rng)
        alts = enumerate_alternatives(target, alignments, source.entities)
        aligned = {source.entities[a].head_index for a in alignments}
        assert len(alts) == 2 ** len(aligned)
        assert len({tuple(sorted(g.items())) for g, _ in alts}) == len(alts)
        for assignment, tokens in alts:
            got = check_agreement(target, alignments, source.entities, tokens)
            if got is not None:
                # greedy side matching can mistake ambiguous prefixes; the
                # derived assignment must still re-derive the same surface
                rederived = derive(target, alignments, source.entities, got)
                assert rederived == tokens
            else:
                # candidate derived from an assignment must parse back
                raise AssertionError(f"derived surface judged inconsistent: {tokens}")


def test_same_entity_structures_agree(secretary_boss):
    # structures 1 and 2 are both governed by the secretary
    for assignment, tokens in enumerate_record(secretary_boss):
        text = " ".join(tokens)
        assert ("secretario" in text) == ("enojado" in text)


def test_minimal_difference_between_alternatives(secretary_boss):
    alts = enumerate_record(secretary_boss)
    # plain tokens identical across alternatives
    for _, tokens in alts:
        assert "estaba" in tokens and "con" in tokens


def test_entity_cap():
    entities = tuple(EntityAnnotation(i, "A") for i in range(9))
    segments = []
    alignments = []
    for i in range(9):
        segments.append(GenderStructure((f"m{i}",), (f"f{i}",)))
        segments.append("x")
        alignments.append(i)
    y = StructuredTranslation(tuple(segments))
    with pytest.raises(TooManyEntities):
        enumerate_alternatives(y, tuple(alignments), entities)
