from __future__ import annotations

from fractions import Fraction

import pytest

from isingcx.classify import TutteSignPoint, Verdict, classify_ising, classify_ising_field, classify_tutte_sign
from isingcx.numerics import ROU, PolarPi, Real, Rect, WeightSpecError

F = Fraction

ISING_TABLE = [
    (Real(F(0)), Verdict.EXACT_FP, 1),
    (ROU(1, 4), Verdict.EXACT_FP, 1),
    (Real(F(-1)), Verdict.EXACT_FP, 1),
    (Real(F(3)), Verdict.NORM_RP_ARG_FP, 2),
    (Real(F(1, 2)), Verdict.NORM_NPHARD_ARG_FP, 3),
    (Real(F(-2)), Verdict.PM_EQUIVALENT, 4),
    (Real(F(-1, 2)), Verdict.SHARP_P_HARD, 5),
    (PolarPi(F(1), 1, 5), Verdict.SHARP_P_HARD, 6),
    (PolarPi(F(2), 1, 2), Verdict.SHARP_P_HARD, 7),
    (PolarPi(F(1, 2), 1, 4), Verdict.SHARP_P_HARD, 8),
    (PolarPi(F(1, 2), 1, 3), Verdict.NP_HARD, 9),
    (PolarPi(F(2), 1, 3), Verdict.NP_HARD, 10),
]


@pytest.mark.parametrize("spec,verdict,item", ISING_TABLE)
def test_ising_table(spec, verdict, item):
    c = classify_ising(spec)
    assert (c.verdict, c.item, c.table) == (verdict, item, "ising")
    if item in (6, 7, 8):
        assert c.witness is not None
        w = c.witness.effective_weight
        assert w.is_real() and w.sign() < 0 and (w + 1).sign() > 0


def test_item_eight_note_and_item_three_note():
    assert "theta = 1*pi/(2*2)" in classify_ising(PolarPi(F(1, 2), 1, 4)).notes
    assert any("item 9" in n for n in classify_ising(Real(F(1, 3))).notes)


def test_ising_rejects_ball_inputs():
    with pytest.raises(WeightSpecError):
        classify_ising(Rect("0.5", "0"))


FIELD_TABLE = [
    (ROU(1, 4), ROU(1, 4), Verdict.EXACT_FP),
    (ROU(1, 4), ROU(1, 8), Verdict.SHARP_P_HARD),
    (ROU(1, 3), Real(F(-1)), Verdict.SHARP_P_HARD),
    (Real(F(1)), ROU(1, 7), Verdict.EXACT_FP),
    (Real(F(-1)), ROU(2, 5), Verdict.EXACT_FP),
]


@pytest.mark.parametrize("y,z,verdict", FIELD_TABLE)
def test_field_table(y, z, verdict):
    assert classify_ising_field(y, z).verdict == verdict


def test_field_requires_unit_inputs():
    with pytest.raises(WeightSpecError):
        classify_ising_field(Real(F(2)), ROU(1, 4))


@pytest.mark.parametrize(
    "a,b,verdict",
    [(3, 5, Verdict.SHARP_P_HARD), (1, 2, Verdict.EXACT_FP), (2, 5, Verdict.NOT_COVERED),
     (1, 5, Verdict.NOT_COVERED), (6, 10, Verdict.SHARP_P_HARD), (2, 2, Verdict.EXACT_FP)],
)
def test_tutte_sign(a, b, verdict):
    assert classify_tutte_sign(TutteSignPoint(a, b)).verdict == verdict


def test_tutte_sign_domain():
    with pytest.raises(ValueError):
        TutteSignPoint(4, 2)
