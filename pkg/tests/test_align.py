import math
import random

import numpy as np
import pytest

from genderalt.align import (
    AdapterResponseError,
    LossConfig,
    NoAmbiguousEntities,
    alignment_loss,
    entity_from_adapter_mask,
    heuristic_align,
    infer_alignments,
    loss_gradient_wrt_cell,
    make_adapter_request,
    prepare_marker_inputs,
    validate_score_matrix,
)
from genderalt.corpus import AnnotatedSource, EntityAnnotation
from genderalt.structure import GenderStructure, StructuredTranslation


def rows_to_matrix(rows):
    return np.asarray(rows, dtype=float)


def random_stochastic(rng, m, n):
    mat = np.array([[rng.random() + 1e-9 for _ in range(n)] for _ in range(m)])
    return mat / mat.sum(axis=1, keepdims=True)


def test_infer_alignment_forced():
    P = rows_to_matrix([[0.1, 0.7, 0.2]])
    assert infer_alignments(P, [0]) == [1]


def test_infer_alignment_one_hot():
    P = np.eye(4)
    assert infer_alignments(P, [2, 0]) == [2, 0]


def test_infer_alignment_matches_linear_scan():
    rng = random.Random(21)
    for _ in range(100):
        m, n = rng.randint(1, 6), rng.randint(1, 8)
        P = random_stochastic(rng, m, n)
        mids = [rng.randrange(m) for _ in range(rng.randint(1, 3))]
        got = infer_alignments(P, mids)
        for mid, a in zip(mids, got):
            best, best_idx = -1.0, 0
            for s in range(n):
                if P[mid, s] > best:
                    best, best_idx = P[mid, s], s
            assert a == best_idx


def test_infer_alignment_scale_invariance():
    rng = random.Random(22)
    for _ in range(1000):
        n = rng.randint(2, 8)
        row = np.array([rng.random() + 1e-9 for _ in range(n)])
        row = row / row.sum()
        scaled = row * (rng.random() * 9 + 0.5)
        scaled = scaled / scaled.sum()
        P1 = row.reshape(1, -1)
        P2 = scaled.reshape(1, -1)
        assert infer_alignments(P1, [0]) == infer_alignments(P2, [0])


def test_infer_alignment_tie_breaks_low_index():
    P = rows_to_matrix([[0.4, 0.4, 0.2]])
    assert infer_alignments(P, [0]) == [0]


def test_infer_alignment_mid_out_of_range():
    P = rows_to_matrix([[1.0]])
    with pytest.raises(IndexError):
        infer_alignments(P, [3])


def test_score_matrix_validation():
    with pytest.raises(ValueError):
        validate_score_matrix(rows_to_matrix([[0.5, 0.4]]))
    with pytest.raises(ValueError):
        validate_score_matrix(rows_to_matrix([[1.5, -0.5]]))


def test_loss_lambda_zero_equals_cross_entropy():
    P = rows_to_matrix([[0.25, 0.75], [0.5, 0.5]])
    loss = alignment_loss(P, [0, 1], [1, 0], cross_entropy=3.7, cfg=LossConfig(0.0))
    assert loss == 3.7


def test_loss_probability_one_adds_nothing():
    P = rows_to_matrix([[1.0, 0.0]])
    loss = alignment_loss(P, [0], [0], cross_entropy=2.5, cfg=LossConfig(0.05))
    assert loss == pytest.approx(2.5, abs=0)


def test_loss_worked_example_k2():
    # direct arithmetic oracle: L = 2 - (0.05/2) * (ln 0.5 + ln 0.25)
    P = rows_to_matrix([[0.5, 0.5, 0.0], [0.25, 0.5, 0.25]])
    loss = alignment_loss(P, [0, 1], [0, 0], cross_entropy=2.0, cfg=LossConfig(0.05))
    expected = 2.0 - 0.025 * (math.log(0.5) + math.log(0.25))
    assert loss == pytest.approx(expected, abs=1e-12)


def test_loss_zero_probability_guard():
    P = rows_to_matrix([[1.0, 0.0]])
    with pytest.raises(ValueError, match="zero probability"):
        alignment_loss(P, [0], [1], cross_entropy=1.0, cfg=LossConfig(0.05))


def test_loss_strictly_decreasing_in_supervised_cell():
    cfg = LossConfig(0.05)
    lo = rows_to_matrix([[0.3, 0.7]])
    hi = rows_to_matrix([[0.6, 0.4]])
    assert alignment_loss(hi, [0], [0], 1.0, cfg) < alignment_loss(lo, [0], [0], 1.0, cfg)


def test_loss_finite_difference_slope():
    # numeric slope of the loss in P[mid, gold] vs the analytic -lam/(k*P)
    rng = random.Random(30)
    cfg = LossConfig(0.05)
    for _ in range(20):
        P = random_stochastic(rng, 3, 4)
        mids, gold = [0, 2], [1, 3]
        k = len(mids)
        eps = 1e-6
        for mid, a in zip(mids, gold):
            up, down = P.copy(), P.copy()
            up[mid, a] += eps
            down[mid, a] -= eps
            # central difference in the raw cell (no renormalization),
            # matching the analytic formula's partial derivative
            plus = _loss_unchecked(up, mids, gold, 1.0, cfg)
            minus = _loss_unchecked(down, mids, gold, 1.0, cfg)
            numeric = (plus - minus) / (2 * eps)
            analytic = loss_gradient_wrt_cell(P, mid, a, k, cfg)
            assert abs(numeric - analytic) / abs(analytic) < 1e-4


def _loss_unchecked(P, mids, gold, ce, cfg):
    total = sum(math.log(P[m, a]) for m, a in zip(mids, gold))
    return ce - (cfg.lam / len(mids)) * total


def test_negative_lambda_rejected():
    with pytest.raises(ValueError):
        LossConfig(-0.1)


def test_prepare_marker_inputs_table2(doctor_patient):
    outputs = prepare_marker_inputs(doctor_patient.source, doctor_patient.target)
    assert len(outputs) == 3
    first = " ".join(outputs[0])
    assert first == (
        "The doctor was angry with the patient ; "
        "| El doctor | estaba enojado con el paciente"
    )
    for out in outputs:
        assert list(out).count("|") == 2


def test_prepare_marker_inputs_single_structure():
    source = AnnotatedSource(tokens=("hi",), entities=(EntityAnnotation(0, "A"),))
    target = StructuredTranslation((GenderStructure(("x",), ("y",)),))
    outputs = prepare_marker_inputs(source, target)
    assert outputs == [("hi", ";", "|", "x", "|")]


def test_prepare_marker_inputs_requires_structures():
    source = AnnotatedSource(tokens=("hi",), entities=())
    with pytest.raises(ValueError):
        prepare_marker_inputs(source, StructuredTranslation(("x",)))


def test_heuristic_single_entity_takes_all():
    source = AnnotatedSource(
        tokens=("The", "doctor"), entities=(EntityAnnotation(1, "A"),)
    )
    target = StructuredTranslation(
        (
            GenderStructure(("el",), ("la",)),
            "y",
            GenderStructure(("doctor",), ("doctora",)),
        )
    )
    assert heuristic_align(source, target) == (0, 0)


def test_heuristic_bilex_hint(lawyer_child_judge):
    got = heuristic_align(
        lawyer_child_judge.source,
        lawyer_child_judge.target,
        bilex={"judge": ["juez", "jueza"]},
    )
    assert got == lawyer_child_judge.alignments


def test_heuristic_monotone_fallback(secretary_boss):
    got = heuristic_align(secretary_boss.source, secretary_boss.target)
    assert got == (0, 0, 1)  # structures 1-2 -> secretary, structure 3 -> boss


def test_heuristic_no_ambiguous_entities():
    source = AnnotatedSource(tokens=("a",), entities=(EntityAnnotation(0, "M"),))
    target = StructuredTranslation((GenderStructure(("x",), ("y",)),))
    with pytest.raises(NoAmbiguousEntities):
        heuristic_align(source, target)


def test_adapter_request_shape(doctor_patient):
    req = make_adapter_request(doctor_patient.source, doctor_patient.target, 0)
    assert req["x"] == list(doctor_patient.source.tokens)
    assert req["yA"][0] == "|"
    assert req["yA"].count("|") == 2


def test_adapter_mask_roundtrip(doctor_patient):
    mask = [0, 1, 0, 0, 0, 0, 0]
    assert entity_from_adapter_mask(doctor_patient.source, mask) == 0
    mask = [0, 0, 0, 0, 0, 0, 1]
    assert entity_from_adapter_mask(doctor_patient.source, mask) == 1


def test_adapter_mask_errors(doctor_patient):
    with pytest.raises(AdapterResponseError, match="no ambiguous"):
        entity_from_adapter_mask(doctor_patient.source, [0] * 7)
    with pytest.raises(AdapterResponseError, match="multiple"):
        entity_from_adapter_mask(doctor_patient.source, [0, 1, 0, 0, 0, 0, 1])
    with pytest.raises(AdapterResponseError, match="length"):
        entity_from_adapter_mask(doctor_patient.source, [1])
