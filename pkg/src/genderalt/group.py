"""Combine all-masculine and all-feminine surfaces into one structured translation.

The two surfaces are diffed token-wise via an LCS alignment; maximal
contiguous differing spans become gender structures.  Every produced
(masculine, feminine) span pair must appear in the inflection lexicon,
otherwise the whole sentence is rejected: a difference that is not a known
gender inflection means the inputs differ in wording, not just gender.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import _kernels
from ._kernels import encode_tokens
from .structure import GenderStructure, StructuredTranslation

Phrase = tuple[str, ...]


class UngroupableError(ValueError):
    """Differing span pair not covered by the inflection lexicon."""

    def __init__(self, masculine: Phrase, feminine: Phrase):
        super().__init__(
            f"span pair not in lexicon: {' '.join(masculine) or '<empty>'!r} / "
            f"{' '.join(feminine) or '<empty>'!r}"
        )
        self.masculine = masculine
        self.feminine = feminine


def _lower(phrase: Iterable[str]) -> Phrase:
    return tuple(t.lower() for t in phrase)


@dataclass(frozen=True)
class InflectionLexicon:
    """Set of (masculine phrase, feminine phrase) token-sequence pairs.

    Matching is exact on lowercased token sequences; the stored casing is
    kept so lattice sites can surface the cased counterpart.
    """

    pairs: tuple[tuple[Phrase, Phrase], ...]
    _lowered: frozenset[tuple[Phrase, Phrase]] = field(init=False, repr=False)

    def __post_init__(self):
        clean = []
        for masc, fem in self.pairs:
            masc, fem = tuple(masc), tuple(fem)
            if not masc or not fem:
                raise ValueError("lexicon phrases must be non-empty")
            if _lower(masc) == _lower(fem):
                raise ValueError(
                    f"lexicon pair with equal sides: {' '.join(masc)!r}"
                )
            clean.append((masc, fem))
        object.__setattr__(self, "pairs", tuple(clean))
        object.__setattr__(
            self,
            "_lowered",
            frozenset((_lower(m), _lower(f)) for m, f in clean),
        )

    def __len__(self) -> int:
        return len(self.pairs)

    def contains(self, masculine: Sequence[str], feminine: Sequence[str]) -> bool:
        return (_lower(masculine), _lower(feminine)) in self._lowered

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Sequence[str], Sequence[str]]]):
        return cls(tuple((tuple(m), tuple(f)) for m, f in pairs))

    @classmethod
    def from_tsv(cls, path: str | Path) -> "InflectionLexicon":
        """Load 'masculine phrase<TAB>feminine phrase' lines, space-tokenized."""
        pairs = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 2 tab-separated fields")
                pairs.append((tuple(parts[0].split()), tuple(parts[1].split())))
        return cls.from_pairs(pairs)

    def to_tsv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for masc, fem in sorted(self.pairs):
                fh.write(f"{' '.join(masc)}\t{' '.join(fem)}\n")


def lcs_align(a: Sequence[str], b: Sequence[str]) -> list[tuple]:
    """Diff two token sequences into ('common', toks) / ('diff', a_toks, b_toks) blocks.

    Blocks reconstruct the inputs exactly.  The walk matches equal tokens as
    early as possible under an optimal LCS alignment, which keeps common
    runs leftmost-longest and merges adjacent differing spans automatically
    (a diff block is always delimited by common tokens or sequence ends).
    """
    a = tuple(a)
    b = tuple(b)
    a_ids, b_ids = encode_tokens(a, b)
    table = _kernels.lcs_suffix_table(a_ids, b_ids)

    blocks: list[tuple] = []
    common: list[str] = []
    diff_a: list[str] = []
    diff_b: list[str] = []

    def flush_diff():
        if diff_a or diff_b:
            blocks.append(("diff", tuple(diff_a), tuple(diff_b)))
            diff_a.clear()
            diff_b.clear()

    def flush_common():
        if common:
            blocks.append(("common", tuple(common)))
            common.clear()

    i = j = 0
    n, m = len(a), len(b)
    while i < n and j < m:
        if a[i] == b[j]:
            flush_diff()
            common.append(a[i])
            i += 1
            j += 1
        else:
            flush_common()
            # advance the side whose suffix keeps the longer LCS; tie -> a
            if table[i + 1, j] >= table[i, j + 1]:
                diff_a.append(a[i])
                i += 1
            else:
                diff_b.append(b[j])
                j += 1
    flush_common()
    diff_a.extend(a[i:])
    diff_b.extend(b[j:])
    flush_diff()
    return blocks


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    a_ids, b_ids = encode_tokens(tuple(a), tuple(b))
    return int(_kernels.lcs_suffix_table(a_ids, b_ids)[0, 0])


def group(
    y_masc: Sequence[str], y_fem: Sequence[str], lexicon: InflectionLexicon
) -> StructuredTranslation:
    """Merge the two surfaces into a structured translation.

    Raises :class:`UngroupableError` on the first differing span pair that
    the lexicon does not license (whole-sentence rejection; no partial
    structuring).  Equal inputs yield a structure-free translation.
    """
    segments: list = []
    for block in lcs_align(y_masc, y_fem):
        if block[0] == "common":
            segments.extend(block[1])
        else:
            _, masc_span, fem_span = block
            if not masc_span or not fem_span or not lexicon.contains(masc_span, fem_span):
                raise UngroupableError(masc_span, fem_span)
            segments.append(GenderStructure(masc_span, fem_span))
    return StructuredTranslation(tuple(segments))
