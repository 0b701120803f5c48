"""Structured translations: plain tokens interleaved with gender structures.

A gender structure is a (masculine phrase, feminine phrase) pair occupying a
single slot in the translation.  The flat serialization wraps each structure
in reserved marker tokens::

    <BEG> masculine-tokens <MID> feminine-tokens <END>

which is the exact token stream a decoder would emit.  ``parse`` inverts
``serialize`` and validates marker well-formedness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

BEG = "<BEG>"
MID = "<MID>"
END = "<END>"
MARKER_TOKENS = frozenset({BEG, MID, END})


class MarkerError(ValueError):
    """Base class for malformed marker sequences."""


class UnbalancedMarkers(MarkerError):
    """A structure was opened but never closed (missing <MID> or <END>)."""


class NestedMarkers(MarkerError):
    """<BEG> encountered while already inside a structure."""


class EmptySide(MarkerError):
    """No tokens between <BEG> and <MID>, or between <MID> and <END>."""


class StrayMarker(MarkerError):
    """<MID> or <END> encountered outside a structure, or out of order."""


def check_plain_tokens(tokens: Iterable[str]) -> tuple[str, ...]:
    """Return tokens as a tuple, rejecting reserved marker strings.

    Corpus tokens that collide with a marker are rejected outright: markers
    are reserved vocabulary items and silently escaping them would corrupt
    the serialized form.
    """
    out = tuple(tokens)
    for tok in out:
        if tok in MARKER_TOKENS:
            raise StrayMarker(f"reserved marker token {tok!r} used as a plain token")
    return out


@dataclass(frozen=True)
class GenderStructure:
    """One gendered slot: masculine and feminine surface phrases."""

    masculine: tuple[str, ...]
    feminine: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "masculine", check_plain_tokens(self.masculine))
        object.__setattr__(self, "feminine", check_plain_tokens(self.feminine))
        if not self.masculine or not self.feminine:
            raise EmptySide("gender structure sides must be non-empty")
        if self.masculine == self.feminine:
            raise ValueError("masculine and feminine sides must differ")

    def side(self, gender: str) -> tuple[str, ...]:
        if gender == "M":
            return self.masculine
        if gender == "F":
            return self.feminine
        raise ValueError(f"gender must be 'M' or 'F', got {gender!r}")


Segment = Union[str, GenderStructure]


@dataclass(frozen=True)
class StructuredTranslation:
    """Ordered mix of plain tokens and :class:`GenderStructure` segments."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        for seg in segs:
            if isinstance(seg, str):
                if seg in MARKER_TOKENS:
                    raise StrayMarker(
                        f"reserved marker token {seg!r} used as a plain token"
                    )
            elif not isinstance(seg, GenderStructure):
                raise TypeError(f"segment must be str or GenderStructure: {seg!r}")
        object.__setattr__(self, "segments", segs)

    @property
    def structures(self) -> tuple[GenderStructure, ...]:
        return tuple(s for s in self.segments if isinstance(s, GenderStructure))

    @property
    def num_structures(self) -> int:
        return sum(1 for s in self.segments if isinstance(s, GenderStructure))

    @property
    def plain_tokens(self) -> tuple[str, ...]:
        return tuple(s for s in self.segments if isinstance(s, str))

    def has_structures(self) -> bool:
        return self.num_structures > 0


@dataclass(frozen=True)
class SerializedStructured:
    """Flat token stream plus the positions of the <MID> markers."""

    tokens: tuple[str, ...]
    mid_positions: tuple[int, ...]

    def text(self) -> str:
        return " ".join(self.tokens)


def serialize(translation: StructuredTranslation) -> SerializedStructured:
    """Flatten a structured translation into marker-delimited tokens.

    Each structure becomes ``<BEG> M <MID> F <END>``; plain tokens pass
    through unchanged.  The returned mid positions index into the flat
    token list, one per structure, strictly increasing.
    """
    tokens: list[str] = []
    mids: list[int] = []
    for seg in translation.segments:
        if isinstance(seg, str):
            tokens.append(seg)
        else:
            tokens.append(BEG)
            tokens.extend(seg.masculine)
            mids.append(len(tokens))
            tokens.append(MID)
            tokens.extend(seg.feminine)
            tokens.append(END)
    return SerializedStructured(tokens=tuple(tokens), mid_positions=tuple(mids))


def parse(tokens: Sequence[str]) -> StructuredTranslation:
    """Parse a flat marker-delimited token stream back into segments.

    Raises :class:`UnbalancedMarkers`, :class:`NestedMarkers`,
    :class:`EmptySide` or :class:`StrayMarker` on malformed input.
    Structures cannot nest; out-of-place markers are rejected, not repaired.
    """
    segments: list[Segment] = []
    # state: None = outside, "m" = reading masculine side, "f" = feminine side
    state: str | None = None
    masc: list[str] = []
    fem: list[str] = []
    for pos, tok in enumerate(tokens):
        if tok == BEG:
            if state is not None:
                raise NestedMarkers(f"<BEG> at position {pos} inside a structure")
            state, masc, fem = "m", [], []
        elif tok == MID:
            if state != "m":
                raise StrayMarker(f"<MID> at position {pos} outside a structure")
            if not masc:
                raise EmptySide(f"empty masculine side ending at position {pos}")
            state = "f"
        elif tok == END:
            if state is None:
                raise StrayMarker(f"<END> at position {pos} outside a structure")
            if state == "m":
                raise StrayMarker(f"<END> at position {pos} before <MID>")
            if not fem:
                raise EmptySide(f"empty feminine side ending at position {pos}")
            segments.append(GenderStructure(tuple(masc), tuple(fem)))
            state = None
        else:
            if state is None:
                segments.append(tok)
            elif state == "m":
                masc.append(tok)
            else:
                fem.append(tok)
    if state is not None:
        raise UnbalancedMarkers("input ends inside an unclosed structure")
    return StructuredTranslation(tuple(segments))


def split(translation: StructuredTranslation) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """Project onto the all-masculine and all-feminine plain surfaces."""
    masc: list[str] = []
    fem: list[str] = []
    for seg in translation.segments:
        if isinstance(seg, str):
            masc.append(seg)
            fem.append(seg)
        else:
            masc.extend(seg.masculine)
            fem.extend(seg.feminine)
    return tuple(masc), tuple(fem)


def surface(translation: StructuredTranslation, gender: str) -> tuple[str, ...]:
    """Uniform single-gender surface ('M' or 'F') of a structured translation."""
    masc, fem = split(translation)
    return masc if gender == "M" else fem
