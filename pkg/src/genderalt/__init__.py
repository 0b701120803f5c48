"""Entity-level gendered translation alternatives.

A single structured translation carries (masculine | feminine) phrase
pairs plus alignments to the gender-ambiguous source entities; all 2^n
grammatically consistent alternatives derive from it.  The package covers
the representation, the data-augmentation pipeline that produces it from
plain sentence pairs, and the evaluation metric suite.
"""

from .corpus import (
    AMBIGUOUS,
    AnnotatedSource,
    EntityAnnotation,
    EvalPair,
    FEMININE,
    GTagRecord,
    GTransRecord,
    MASCULINE,
    read_eval_pairs,
    read_jsonl,
    write_jsonl,
)
from .derive import (
    check_agreement,
    derive,
    derive_record,
    enumerate_alternatives,
    enumerate_record,
)
from .group import InflectionLexicon, UngroupableError, group, lcs_align
from .lattice import (
    InflectionLattice,
    NgramScorer,
    SequenceScorer,
    beam_decode,
    build_lattice,
    collapse,
    make_variants,
)
from .metrics import MetricsReport, corpus_bleu, delta_bleu, evaluate_pairs
from .structure import (
    GenderStructure,
    SerializedStructured,
    StructuredTranslation,
    parse,
    serialize,
    split,
)

__version__ = "0.1.0"
