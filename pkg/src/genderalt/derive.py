"""Deriving concrete alternatives from a structured translation.

A gender assignment maps ambiguous-entity head indices to 'M' or 'F'.
Every structure surfaces the side chosen for its aligned entity, so two
structures governed by the same entity can never disagree.
"""

from __future__ import annotations

from itertools import product
from typing import Mapping, Sequence

from .corpus import EntityAnnotation, GTransRecord
from .structure import GenderStructure, StructuredTranslation

# 2^8 = 256 alternatives; the test sets max out at 5 ambiguous entities.
MAX_ENTITIES = 8


class MissingAssignment(ValueError):
    """An entity aligned to some structure was left unassigned."""

    def __init__(self, head_index: int):
        super().__init__(f"no gender assigned to entity at head index {head_index}")
        self.head_index = head_index


class TooManyEntities(ValueError):
    """More distinct aligned entities than the enumeration cap allows."""


def aligned_head_indices(
    alignments: Sequence[int], entities: Sequence[EntityAnnotation]
) -> tuple[int, ...]:
    """Distinct head indices of entities that govern at least one structure."""
    heads = {entities[a].head_index for a in alignments}
    return tuple(sorted(heads))


def derive(
    target: StructuredTranslation,
    alignments: Sequence[int],
    entities: Sequence[EntityAnnotation],
    assignment: Mapping[int, str],
) -> tuple[str, ...]:
    """Realize the alternative selected by ``assignment``.

    ``alignments[i]`` is the entity-list index governing structure i;
    ``assignment`` maps entity head indices to 'M'/'F'.  Raises
    :class:`MissingAssignment` if an aligned entity is unassigned.
    """
    out: list[str] = []
    struct_idx = 0
    for seg in target.segments:
        if isinstance(seg, str):
            out.append(seg)
        else:
            head = entities[alignments[struct_idx]].head_index
            if head not in assignment:
                raise MissingAssignment(head)
            out.extend(seg.side(assignment[head]))
            struct_idx += 1
    return tuple(out)


def derive_record(rec: GTransRecord, assignment: Mapping[int, str]) -> tuple[str, ...]:
    return derive(rec.target, rec.alignments, rec.source.entities, assignment)


def enumerate_alternatives(
    target: StructuredTranslation,
    alignments: Sequence[int],
    entities: Sequence[EntityAnnotation],
) -> list[tuple[dict[int, str], tuple[str, ...]]]:
    """All 2^d alternatives, d = number of distinct aligned entities.

    Deterministic order: entities sorted by head index, masculine before
    feminine (so the first alternative is the all-masculine one).
    """
    heads = aligned_head_indices(alignments, entities)
    if len(heads) > MAX_ENTITIES:
        raise TooManyEntities(
            f"{len(heads)} aligned entities exceed the cap of {MAX_ENTITIES}"
        )
    alternatives = []
    for choices in product("MF", repeat=len(heads)):
        assignment = dict(zip(heads, choices))
        alternatives.append((assignment, derive(target, alignments, entities, assignment)))
    return alternatives


def enumerate_record(rec: GTransRecord):
    return enumerate_alternatives(rec.target, rec.alignments, rec.source.entities)


def check_agreement(
    target: StructuredTranslation,
    alignments: Sequence[int],
    entities: Sequence[EntityAnnotation],
    candidate: Sequence[str],
) -> dict[int, str] | None:
    """Recover the assignment that derives ``candidate``, or None.

    Returns None (inconsistent) when the candidate breaks gender agreement,
    picks a phrase that is neither side of a structure, or differs in any
    plain token.  Side choices are resolved by exact token-sequence match
    with backtracking; when one side is a prefix of a longer valid parse
    the masculine-preferring leftmost parse wins, so results stay
    deterministic.
    """
    cand = tuple(candidate)
    segments = target.segments
    struct_heads = [entities[a].head_index for a in alignments]

    def parse_from(seg_idx: int, pos: int, struct_idx: int, assignment):
        while seg_idx < len(segments) and isinstance(segments[seg_idx], str):
            if pos >= len(cand) or cand[pos] != segments[seg_idx]:
                return None
            seg_idx += 1
            pos += 1
        if seg_idx == len(segments):
            return dict(assignment) if pos == len(cand) else None
        seg: GenderStructure = segments[seg_idx]
        head = struct_heads[struct_idx]
        for gender in ("M", "F"):
            prior = assignment.get(head)
            if prior is not None and prior != gender:
                continue  # same entity already surfaced the other gender
            side = seg.side(gender)
            if cand[pos : pos + len(side)] != side:
                continue
            assignment[head] = gender
            result = parse_from(
                seg_idx + 1, pos + len(side), struct_idx + 1, assignment
            )
            if result is not None:
                return result
            if prior is None:
                del assignment[head]
        return None

    return parse_from(0, 0, 0, {})
