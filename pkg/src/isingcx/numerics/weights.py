"""Text grammar for parameter values.

    rou(k,N)          exp(2*pi*i*k/N)
    polarpi(r,a,b)    r * exp(i*pi*a/b), r written p/q or as an integer
    real(p/q)         a rational number
    rect(re,im)       decimal literals, approximated to the requested precision

Keywords are case-insensitive and whitespace is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

from .cyclotomic import Cyclo
from .values import DEFAULT_PRECISION, Approx, ComplexValue

__all__ = [
    "ROU",
    "PolarPi",
    "Real",
    "Rect",
    "WeightSpec",
    "WeightSpecError",
    "format_weight",
    "parse_weight",
    "parse_weight_spec",
    "polar_form",
]


class WeightSpecError(ValueError):
    pass


@dataclass(frozen=True)
class ROU:
    k: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise WeightSpecError("rou(k,N) needs N >= 1")


@dataclass(frozen=True)
class PolarPi:
    r: Fraction
    a: int
    b: int

    def __post_init__(self):
        if self.b < 1:
            raise WeightSpecError("polarpi(r,a,b) needs b >= 1")


@dataclass(frozen=True)
class Real:
    value: Fraction


@dataclass(frozen=True)
class Rect:
    re: str
    im: str


WeightSpec = Union[ROU, PolarPi, Real, Rect]

_CALL = re.compile(r"^([a-z]+)\((.*)\)$")
_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise WeightSpecError(f"bad rational {text!r}") from exc


def _integer(text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise WeightSpecError(f"bad integer {text!r}") from exc


def parse_weight_spec(text: str) -> WeightSpec:
    compact = re.sub(r"\s+", "", text).lower()
    m = _CALL.match(compact)
    if not m:
        raise WeightSpecError(f"malformed weight spec {text!r}")
    name, args = m.group(1), m.group(2).split(",")
    if name == "rou" and len(args) == 2:
        return ROU(_integer(args[0]), _integer(args[1]))
    if name == "polarpi" and len(args) == 3:
        return PolarPi(_rational(args[0]), _integer(args[1]), _integer(args[2]))
    if name == "real" and len(args) == 1:
        return Real(_rational(args[0]))
    if name == "rect" and len(args) == 2:
        if not all(_DECIMAL.match(a) for a in args):
            raise WeightSpecError(f"rect() takes decimal literals, got {text!r}")
        return Rect(args[0], args[1])
    raise WeightSpecError(f"malformed weight spec {text!r}")


def format_weight(spec: WeightSpec) -> str:
    if isinstance(spec, ROU):
        return f"rou({spec.k},{spec.N})"
    if isinstance(spec, PolarPi):
        return f"polarpi({spec.r},{spec.a},{spec.b})"
    if isinstance(spec, Real):
        return f"real({spec.value})"
    return f"rect({spec.re},{spec.im})"


def polar_form(spec: WeightSpec) -> tuple[Fraction, int, int]:
    """Normalize an exact spec to (r, a, b): value r*exp(i*pi*a/b), r >= 0, 0 <= a < 2b, gcd(a, b) = 1."""
    if isinstance(spec, ROU):
        r, a, b = Fraction(1), 2 * spec.k, spec.N
    elif isinstance(spec, PolarPi):
        r, a, b = spec.r, spec.a, spec.b
    elif isinstance(spec, Real):
        r, a, b = spec.value, 0, 1
    else:
        raise WeightSpecError("rect() values have no exact polar form")
    if r < 0:
        r, a = -r, a + b
    if r == 0:
        return Fraction(0), 0, 1
    a %= 2 * b
    g = gcd(a, b)
    return r, a // g, b // g


def parse_weight(spec: WeightSpec | str, precision: int = DEFAULT_PRECISION) -> ComplexValue:
    """Exact Cyclo for rou/polarpi/real; a certified Approx ball for rect."""
    if isinstance(spec, str):
        spec = parse_weight_spec(spec)
    if isinstance(spec, Rect):
        return Approx.from_decimal(spec.re, spec.im, precision)
    r, a, b = polar_form(spec)
    if r == 0:
        return Cyclo.rational(0)
    # exp(i*pi*a/b) = zeta_{2b}^a
    return Cyclo.root_of_unity(a, 2 * b) * r
