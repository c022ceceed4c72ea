"""Complexity verdicts for exact parameter points.

Three tables are implemented: the zero-field Ising classification over the
complex plane (ten clauses, checked in order, first match wins), the
root-of-unity edge/field dichotomy, and the sign-of-Tutte hardness criterion
on the curve x = 1/y with y a root of unity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from flint import arb, fmpq

from .gadgets import GadgetChain, chain_to_negative_unit
from .numerics import PolarPi, Real, ROU, WeightSpec, WeightSpecError, polar_form
from .numerics.precision import working_precision

__all__ = [
    "PointClassification",
    "TutteSignPoint",
    "Verdict",
    "classify_ising",
    "classify_ising_field",
    "classify_tutte_sign",
]


class Verdict(str, Enum):
    EXACT_FP = "EXACT_FP"
    NORM_RP_ARG_FP = "NORM_RP_ARG_FP"
    NORM_NPHARD_ARG_FP = "NORM_NPHARD_ARG_FP"
    PM_EQUIVALENT = "PM_EQUIVALENT"
    SHARP_P_HARD = "SHARP_P_HARD"
    NP_HARD = "NP_HARD"
    NOT_COVERED = "NOT_COVERED"


@dataclass(frozen=True)
class PointClassification:
    verdict: Verdict
    table: str  # "ising", "ising-field" or "tutte-sign"
    item: int | None
    witness: GadgetChain | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class TutteSignPoint:
    """(x, y) = (exp(-a*pi*i/b), exp(a*pi*i/b))."""

    a: int
    b: int

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or not 0 < Fraction(self.a, self.b) < 2:
            raise ValueError("need positive a, b with 0 < a/b < 2")


def _exact_polar(y: WeightSpec) -> tuple[Fraction, Fraction]:
    """(r, theta/pi) with r >= 0 and theta/pi in [0, 2)."""
    if not isinstance(y, (ROU, PolarPi, Real)):
        raise WeightSpecError("classification needs an exact polar or rational input")
    r, a, b = polar_form(y)
    return r, Fraction(a, b)


_AXES = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2))


def classify_ising(y: WeightSpec, max_chain_k: int = 4096) -> PointClassification:
    r, t = _exact_polar(y)  # y = r * exp(i*pi*t)
    real = t in (0, 1)
    value = r if t == 0 else -r  # only meaningful when real

    def hit(verdict: Verdict, item: int, *notes: str, chain: bool = False) -> PointClassification:
        witness = chain_to_negative_unit(y, max_k=max_chain_k) if chain else None
        return PointClassification(verdict, "ising", item, witness, tuple(notes))

    if r == 0 or (r == 1 and t in _AXES):
        return hit(Verdict.EXACT_FP, 1)
    if real and value > 1:
        return hit(Verdict.NORM_RP_ARG_FP, 2)
    if real and 0 < value < 1:
        return hit(
            Verdict.NORM_NPHARD_ARG_FP,
            3,
            "norm hardness also follows from the |y| < 1 clause (item 9)",
        )
    if real and value < -1:
        return hit(Verdict.PM_EQUIVALENT, 4)
    if real and -1 < value < 0:
        return hit(Verdict.SHARP_P_HARD, 5)
    if r == 1 and t not in _AXES:
        return hit(Verdict.SHARP_P_HARD, 6, chain=True)
    if t in (Fraction(1, 2), Fraction(3, 2)) and r not in (0, 1):
        return hit(Verdict.SHARP_P_HARD, 7, chain=True)
    # theta = a*pi/(2c) with a odd and gcd(a, c) = 1  <=>  reduced theta/pi has even denominator
    if r > 0 and t.denominator % 2 == 0:
        a, c = t.numerator, t.denominator // 2
        assert a % 2 == 1 and Fraction(a, 2 * c) == t
        return hit(Verdict.SHARP_P_HARD, 8, f"theta = {a}*pi/(2*{c})", chain=True)
    if r < 1:
        return hit(Verdict.NP_HARD, 9)
    if r > 1 and t not in (0, 1):
        return hit(Verdict.NP_HARD, 10)
    raise AssertionError("the ten clauses cover the whole plane")


def _unit_turns(spec: WeightSpec) -> Fraction:
    r, t = _exact_polar(spec)
    if r != 1:
        raise WeightSpecError("edge interaction and field must both be roots of unity")
    return t


def classify_ising_field(y: WeightSpec, z: WeightSpec) -> PointClassification:
    ty, tz = _unit_turns(y), _unit_turns(z)
    if ty in (0, 1):
        return PointClassification(Verdict.EXACT_FP, "ising-field", 1, notes=("y = +-1",))
    if ty in (Fraction(1, 2), Fraction(3, 2)) and tz in _AXES:
        return PointClassification(Verdict.EXACT_FP, "ising-field", 1, notes=("y = +-i, z in {+-1, +-i}",))
    return PointClassification(Verdict.SHARP_P_HARD, "ising-field", 2)


def _cos_pi_below(frac: Fraction, bound: Fraction, max_prec: int = 4096) -> bool:
    """Certified test cos(pi * frac) < bound."""
    prec = 64
    target = fmpq(bound.numerator, bound.denominator)
    while prec <= max_prec:
        with working_precision(prec):
            c = arb.cos_pi_fmpq(fmpq(frac.numerator, frac.denominator))
            diff = c - arb(target)
            if diff < 0:
                return True
            if diff > 0:
                return False
        prec *= 2
    raise ArithmeticError("cosine comparison undecided at maximum precision")


def classify_tutte_sign(pt: TutteSignPoint) -> PointClassification:
    ratio = Fraction(pt.a, pt.b)
    if ratio in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        return PointClassification(Verdict.EXACT_FP, "tutte-sign", None, notes=("special point",))
    a = ratio.numerator  # the point depends only on a/b
    if a % 2 == 1 and _cos_pi_below(ratio, Fraction(11, 27)):
        return PointClassification(Verdict.SHARP_P_HARD, "tutte-sign", None)
    reason = "a even" if a % 2 == 0 else "cos(a*pi/b) >= 11/27"
    return PointClassification(Verdict.NOT_COVERED, "tutte-sign", None, notes=(reason,))
