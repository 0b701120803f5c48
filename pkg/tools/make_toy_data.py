#!/usr/bin/env python3
"""Generate the bundled toy G-Trans corpus, inflection lexicon, and
detector noun list under src/genderalt/data/.

The corpus is synthetic English->Spanish with hand-picked inflection pairs.
Every record is checked to survive the split -> group roundtrip, so oracle
pipelines reproduce it exactly.
"""

import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from genderalt.corpus import (
    AnnotatedSource,
    EntityAnnotation,
    GTransRecord,
    write_jsonl,
)
from genderalt.group import InflectionLexicon, group
from genderalt.structure import GenderStructure, StructuredTranslation, split

DATA_DIR = Path(__file__).resolve().parents[1] / "src" / "genderalt" / "data"

S = GenderStructure

# English noun -> Spanish realization. Inflecting nouns carry the article in
# the structure; epicene nouns only toggle the article.
NOUNS = {
    "doctor": [S(("El", "doctor"), ("La", "doctora"))],
    "secretary": [S(("El", "secretario"), ("La", "secretaria"))],
    "boss": [S(("el", "jefe"), ("la", "jefa"))],
    "lawyer": [S(("el", "abogado"), ("la", "abogada"))],
    "teacher": [S(("el", "maestro"), ("la", "maestra"))],
    "nurse": [S(("el", "enfermero"), ("la", "enfermera"))],
    "judge": [S(("el", "juez"), ("la", "jueza"))],
    "neighbor": [S(("el", "vecino"), ("la", "vecina"))],
    "cook": [S(("el", "cocinero"), ("la", "cocinera"))],
    "writer": [S(("el", "escritor"), ("la", "escritora"))],
    "engineer": [S(("el", "ingeniero"), ("la", "ingeniera"))],
    "farmer": [S(("el", "granjero"), ("la", "granjera"))],
    "waiter": [S(("el", "camarero"), ("la", "camarera"))],
    "patient": [S(("el",), ("la",)), "paciente"],
    "student": [S(("el",), ("la",)), "estudiante"],
    "artist": [S(("el",), ("la",)), "artista"],
    "journalist": [S(("el",), ("la",)), "periodista"],
    "singer": [S(("el",), ("la",)), "cantante"],
}

ADJECTIVES = {
    "angry": S(("enojado",), ("enojada",)),
    "tired": S(("cansado",), ("cansada",)),
    "busy": S(("ocupado",), ("ocupada",)),
    "happy": S(("contento",), ("contenta",)),
    "famous": S(("famoso",), ("famosa",)),
    "worried": S(("preocupado",), ("preocupada",)),
}

# Feminine-fixed realizations for pronoun-disambiguated sentences.
FEM_SURFACE = {
    "boss": ("una", "jefa"),
    "doctor": ("una", "doctora"),
    "teacher": ("una", "maestra"),
    "judge": ("una", "jueza"),
    "writer": ("una", "escritora"),
    "engineer": ("una", "ingeniera"),
}


def cap(seg):
    if isinstance(seg, str):
        return seg[0].upper() + seg[1:]
    def cap_side(side):
        return (side[0][0].upper() + side[0][1:],) + side[1:]
    return S(cap_side(seg.masculine), cap_side(seg.feminine))


def noun_segments(noun, sentence_initial=False):
    segs = list(NOUNS[noun])
    if sentence_initial:
        segs = [cap(segs[0])] + segs[1:]
    else:
        first = segs[0]
        if isinstance(first, GenderStructure) and first.masculine[0][0].isupper():
            segs = [
                S(
                    (first.masculine[0].lower(),) + first.masculine[1:],
                    (first.feminine[0].lower(),) + first.feminine[1:],
                )
            ] + segs[1:]
    return segs


def record_two_entities(noun_a, adj, noun_b):
    """'The A was ADJ with the B' -> '(El A) estaba (ADJo) con (el B)'."""
    src = ("The", noun_a, "was", adj, "with", "the", noun_b)
    entities = (EntityAnnotation(1, "A"), EntityAnnotation(6, "A"))
    segs = noun_segments(noun_a, sentence_initial=True)
    segs += ["estaba", ADJECTIVES[adj], "con"]
    segs += noun_segments(noun_b)
    align = [0, 0, 1]
    return make_record(src, entities, segs, align)


def record_talked(noun_a, noun_b):
    """'The A talked to the B' -> '(El A) habló con (el B)'."""
    src = ("The", noun_a, "talked", "to", "the", noun_b)
    entities = (EntityAnnotation(1, "A"), EntityAnnotation(5, "A"))
    segs = noun_segments(noun_a, sentence_initial=True)
    segs += ["habló", "con"]
    segs += noun_segments(noun_b)
    return make_record(src, entities, segs, [0, 1])


def record_single(noun, adj):
    """'The N is ADJ today' -> '(El N) está (ADJo) hoy'."""
    src = ("The", noun, "is", adj, "today")
    entities = (EntityAnnotation(1, "A"),)
    segs = noun_segments(noun, sentence_initial=True)
    segs += ["está", ADJECTIVES[adj], "hoy"]
    return make_record(src, entities, segs, [0, 0])


def record_three(noun_a, noun_b, noun_c):
    """'The A helped the B and the C' -> '(El A) ayudó a (el B) y a (el C)'."""
    src = ("The", noun_a, "helped", "the", noun_b, "and", "the", noun_c)
    entities = (
        EntityAnnotation(1, "A"),
        EntityAnnotation(4, "A"),
        EntityAnnotation(7, "A"),
    )
    segs = noun_segments(noun_a, sentence_initial=True)
    segs += ["ayudó", "a"]
    segs += noun_segments(noun_b)
    segs += ["y", "a"]
    segs += noun_segments(noun_c)
    return make_record(src, entities, segs, [0, 1, 2])


def record_fixed_feminine(noun):
    """'She is a N' -> 'Ella es una Na': disambiguated, no structures."""
    src = ("She", "is", "a", noun)
    entities = (EntityAnnotation(3, "F"),)
    segs = ["Ella", "es"] + list(FEM_SURFACE[noun])
    return make_record(src, entities, segs, [])


def record_mixed(noun_masc, noun_amb, adj):
    """'The A said that the B was ADJ': A fixed masculine via 'he'."""
    src = ("The", noun_masc, "said", "that", "the", noun_amb, "was", adj,
           "because", "of", "what", "he", "saw")
    entities = (EntityAnnotation(1, "M"), EntityAnnotation(5, "A"))
    masc_fixed = NOUNS[noun_masc][0]
    fixed_tokens = [cap(masc_fixed).masculine[0]] + list(masc_fixed.masculine[1:])
    segs = fixed_tokens + ["dijo", "que"]
    segs += noun_segments(noun_amb)
    segs += ["estaba", ADJECTIVES[adj], "por", "lo", "que", "vio"]
    return make_record(src, entities, segs, [1, 1])


def make_record(src, entities, segs, align):
    segments = []
    for seg in segs:
        if isinstance(seg, GenderStructure):
            segments.append(seg)
        else:
            segments.append(seg)
    target = StructuredTranslation(tuple(segments))
    return GTransRecord(
        source=AnnotatedSource(tokens=src, entities=entities),
        target=target,
        alignments=tuple(align),
    )


def build_lexicon(records, extra_pairs):
    pairs = set(extra_pairs)
    for rec in records:
        for struct in rec.target.structures:
            pairs.add((struct.masculine, struct.feminine))
    return InflectionLexicon.from_pairs(sorted(pairs))


def main():
    rng = random.Random(20240501)
    inflecting = [n for n, segs in NOUNS.items() if len(segs) == 1]
    epicene = [n for n in NOUNS if n not in inflecting]
    adjs = list(ADJECTIVES)

    records = []
    # Table-style anchors first.
    records.append(record_two_entities("doctor", "angry", "patient"))
    records.append(record_two_entities("secretary", "angry", "boss"))

    while len(records) < 38:
        kind = rng.choice(["two", "two", "talked", "single", "three"])
        if kind == "two":
            a = rng.choice(inflecting + epicene)
            b = rng.choice([n for n in inflecting + epicene if n != a])
            records.append(record_two_entities(a, rng.choice(adjs), b))
        elif kind == "talked":
            a = rng.choice(inflecting + epicene)
            b = rng.choice([n for n in inflecting + epicene if n != a])
            records.append(record_talked(a, b))
        elif kind == "single":
            records.append(record_single(rng.choice(inflecting + epicene), rng.choice(adjs)))
        else:
            a, b, c = rng.sample(inflecting + epicene, 3)
            records.append(record_three(a, b, c))

    for noun in ["boss", "doctor", "teacher", "judge", "writer", "engineer"]:
        records.append(record_fixed_feminine(noun))

    while len(records) < 50:
        a = rng.choice(inflecting)
        b = rng.choice([n for n in inflecting + epicene if n != a])
        records.append(record_mixed(a, b, rng.choice(adjs)))

    # Sanity: oracle split -> group must reproduce every structured record.
    extra = [
        (("el", "bailarín"), ("la", "bailarina")),
        (("un",), ("una",)),
        (("del", "juez"), ("de", "la", "jueza")),
        (("hijo",), ("hija",)),
        (("solo",), ("sola",)),
    ]
    lexicon = build_lexicon(records, extra)
    for i, rec in enumerate(records):
        if not rec.target.has_structures():
            continue
        y_m, y_f = split(rec.target)
        regrouped = group(y_m, y_f, lexicon)
        assert regrouped == rec.target, f"record {i} does not roundtrip"

    DATA_DIR.mkdir(parents=True, exist_ok=True)
    write_jsonl(records, DATA_DIR / "toy_gtrans.jsonl", "gtrans")
    lexicon.to_tsv(DATA_DIR / "toy_lexicon.tsv")

    nouns_txt = "\n".join(sorted(NOUNS)) + "\n"
    (DATA_DIR / "detector_nouns.txt").write_text(nouns_txt, encoding="utf-8")
    n_structured = sum(1 for r in records if r.target.has_structures())
    print(f"wrote {len(records)} records ({n_structured} with structures), "
          f"{len(lexicon)} lexicon pairs")


if __name__ == "__main__":
    main()
