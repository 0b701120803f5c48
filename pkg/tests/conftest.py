import importlib.resources
import random
from pathlib import Path

import pytest

from genderalt.corpus import (
    AnnotatedSource,
    EntityAnnotation,
    GTransRecord,
    read_jsonl,
)
from genderalt.group import InflectionLexicon
from genderalt.structure import GenderStructure, StructuredTranslation

DATA = importlib.resources.files("genderalt.data")


@pytest.fixture(scope="session")
def toy_corpus_path() -> Path:
    return Path(str(DATA.joinpath("toy_gtrans.jsonl")))


@pytest.fixture(scope="session")
def toy_lexicon_path() -> Path:
    return Path(str(DATA.joinpath("toy_lexicon.tsv")))


@pytest.fixture(scope="session")
def toy_corpus(toy_corpus_path):
    return read_jsonl(toy_corpus_path, "gtrans")


@pytest.fixture(scope="session")
def toy_lexicon(toy_lexicon_path):
    return InflectionLexicon.from_tsv(toy_lexicon_path)


def doctor_patient_record() -> GTransRecord:
    """Doctor/patient sentence with three structures, two entities."""
    return GTransRecord(
        source=AnnotatedSource(
            tokens=("The", "doctor", "was", "angry", "with", "the", "patient"),
            entities=(EntityAnnotation(1, "A"), EntityAnnotation(6, "A")),
        ),
        target=StructuredTranslation(
            (
                GenderStructure(("El", "doctor"), ("La", "doctora")),
                "estaba",
                GenderStructure(("enojado",), ("enojada",)),
                "con",
                GenderStructure(("el",), ("la",)),
                "paciente",
            )
        ),
        alignments=(0, 0, 1),
    )


def secretary_boss_record() -> GTransRecord:
    return GTransRecord(
        source=AnnotatedSource(
            tokens=("The", "secretary", "was", "angry", "with", "the", "boss"),
            entities=(EntityAnnotation(1, "A"), EntityAnnotation(6, "A")),
        ),
        target=StructuredTranslation(
            (
                GenderStructure(("El", "secretario"), ("La", "secretaria")),
                "estaba",
                GenderStructure(("enojado",), ("enojada",)),
                "con",
                GenderStructure(("el", "jefe"), ("la", "jefa")),
            )
        ),
        alignments=(0, 0, 1),
    )


def lawyer_child_judge_record() -> GTransRecord:
    """Lawyer fixed masculine; child and judge ambiguous (three structures)."""
    source = AnnotatedSource(
        tokens=(
            "The", "lawyer", "fought", "to", "keep", "his", "child", ",",
            "who", "is", "a", "gangster", ",", "safe", "from", "the",
            "judge", ".",
        ),
        entities=(
            EntityAnnotation(1, "M"),
            EntityAnnotation(6, "A"),
            EntityAnnotation(16, "A"),
        ),
    )
    target = StructuredTranslation(
        (
            "El", "abogado", "luchó", "para", "mantener", "a", "su",
            GenderStructure(("hijo",), ("hija",)),
            ",", "que", "es",
            GenderStructure(("un",), ("una",)),
            "gángster", ",", "a", "salvo",
            GenderStructure(("del", "juez"), ("de", "la", "jueza")),
            ".",
        )
    )
    return GTransRecord(source=source, target=target, alignments=(1, 1, 2))


@pytest.fixture
def doctor_patient():
    return doctor_patient_record()


@pytest.fixture
def secretary_boss():
    return secretary_boss_record()


@pytest.fixture
def lawyer_child_judge():
    return lawyer_child_judge_record()


# --- random generators for property tests ----------------------------------

PLAIN_VOCAB = [f"w{i}" for i in range(40)]


def random_structure(rng: random.Random) -> GenderStructure:
    while True:
        masc = tuple(rng.choice(PLAIN_VOCAB) for _ in range(rng.randint(1, 3)))
        fem = tuple(rng.choice(PLAIN_VOCAB) for _ in range(rng.randint(1, 3)))
        if masc != fem:
            return GenderStructure(masc, fem)


def random_structured_translation(rng: random.Random) -> StructuredTranslation:
    segments = []
    for _ in range(rng.randint(0, 10)):
        if rng.random() < 0.35:
            segments.append(random_structure(rng))
        else:
            segments.append(rng.choice(PLAIN_VOCAB))
    return StructuredTranslation(tuple(segments))


def random_groupable_pair(rng: random.Random):
    """(y_M, y_F, gold structured translation, lexicon pairs used).

    Uses disjoint alphabets for plain/masculine/feminine tokens and keeps at
    least one plain token between structures, so the diff is unambiguous and
    grouping must reconstruct the original exactly.
    """
    plain = [f"p{i}" for i in range(20)]
    pairs = [
        (
            tuple(f"m{i}_{j}" for j in range(rng.randint(1, 3))),
            tuple(f"f{i}_{j}" for j in range(rng.randint(1, 3))),
        )
        for i in range(rng.randint(1, 4))
    ]
    segments: list = [rng.choice(plain)]
    for masc, fem in rng.sample(pairs, rng.randint(1, len(pairs))):
        segments.append(GenderStructure(masc, fem))
        segments.append(rng.choice(plain))
    translation = StructuredTranslation(tuple(segments))
    return translation, InflectionLexicon.from_pairs(pairs)
