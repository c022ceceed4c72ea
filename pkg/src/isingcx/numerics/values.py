"""The two-tier complex value (exact cyclotomic or certified ball) and Ziv's distance."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

from flint import acb, arb, fmpq

from .cyclotomic import Cyclo
from .precision import working_precision

__all__ = [
    "Approx",
    "ComplexValue",
    "DEFAULT_PRECISION",
    "as_value",
    "enclose",
    "is_zero_exact",
    "to_approx",
    "ziv_distance",
    "ziv_error_to_bounds",
]

DEFAULT_PRECISION = 256


class Approx:
    """A complex number known up to a certified error disk.

    Backed by a flint ``acb`` ball: the true value lies inside the ball, and
    every arithmetic operation keeps that property.
    """

    __slots__ = ("ball", "prec")

    def __init__(self, ball: acb, prec: int = DEFAULT_PRECISION):
        self.ball = ball
        self.prec = prec

    @classmethod
    def from_decimal(cls, re: str, im: str = "0", prec: int = DEFAULT_PRECISION) -> Approx:
        with working_precision(prec):
            return cls(acb(arb(re.strip()), arb(im.strip())), prec)

    @property
    def real(self) -> arb:
        return self.ball.real

    @property
    def imag(self) -> arb:
        return self.ball.imag

    @property
    def center(self) -> complex:
        return complex(float(self.ball.real.mid()), float(self.ball.imag.mid()))

    @property
    def error_radius(self) -> arb:
        """Upper bound on |true value - center| (exact arb, rounded up)."""
        return self.ball.real.rad() + self.ball.imag.rad()

    def _other(self, other) -> acb | None:
        if isinstance(other, Approx):
            return other.ball
        if isinstance(other, Cyclo):
            return other.enclose(self.prec)
        if isinstance(other, fmpq):
            return acb(arb(other))
        if isinstance(other, (int, Rational)):
            q = Fraction(other)
            return acb(arb(fmpq(q.numerator, q.denominator)))
        if isinstance(other, complex):
            return acb(other.real, other.imag)
        return None

    def _prec_with(self, other) -> int:
        return max(self.prec, other.prec) if isinstance(other, Approx) else self.prec

    def _binary(self, other, op):
        b = self._other(other)
        if b is None:
            return NotImplemented
        prec = self._prec_with(other)
        with working_precision(prec):
            return Approx(op(self.ball, b), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self) -> Approx:
        return Approx(-self.ball, self.prec)

    def __pow__(self, k: int) -> Approx:
        with working_precision(self.prec):
            return Approx(self.ball**k, self.prec)

    def conjugate(self) -> Approx:
        return Approx(self.ball.conjugate(), self.prec)

    def abs2(self) -> Approx:
        with working_precision(self.prec):
            return Approx(acb(self.ball.real**2 + self.ball.imag**2), self.prec)

    def enclose(self, prec: int | None = None) -> acb:
        return self.ball

    def is_real(self) -> bool | None:
        """True only when the imaginary part is exactly zero; None if undecidable."""
        im = self.ball.imag
        if im.is_zero():
            return True
        if im.contains(0):
            return None
        return False

    def __complex__(self) -> complex:
        return self.center

    def __repr__(self) -> str:
        return f"Approx({self.ball})"

    __str__ = __repr__

    __hash__ = None


ComplexValue = Union[Cyclo, Approx]


def as_value(x) -> ComplexValue:
    """Coerce ints, Fractions and complex floats into a ComplexValue."""
    if isinstance(x, (Cyclo, Approx)):
        return x
    if isinstance(x, (int, Rational, fmpq)):
        return Cyclo.rational(x)
    if isinstance(x, (float, complex)):
        z = complex(x)
        return Approx(acb(z.real, z.imag))
    raise TypeError(f"cannot interpret {type(x).__name__} as a complex value")


def enclose(v, prec: int = DEFAULT_PRECISION) -> acb:
    return as_value(v).enclose(prec)


def to_approx(v: ComplexValue, prec: int = DEFAULT_PRECISION) -> Approx:
    """Certified ball for ``v`` with error radius at most 2**(1-prec) * |v|."""
    if isinstance(v, Approx):
        return v
    return Approx(v.enclose(prec + 8), prec)


def is_zero_exact(v: ComplexValue) -> bool | None:
    """Exact zero test; ``None`` stands for INDETERMINATE (zero inside the error disk)."""
    v = as_value(v)
    if isinstance(v, Cyclo):
        return v.is_zero()
    if v.ball.real.contains(0) and v.ball.imag.contains(0):
        if v.ball.real.is_zero() and v.ball.imag.is_zero():
            return True
        return None
    return False


def ziv_distance(z1, z2, prec: int = DEFAULT_PRECISION) -> arb:
    """d(z1, z2) = |z1 - z2| / max(|z1|, |z2|), with d(0, 0) = 0.

    Returns a certified real ball; exact inputs that are both zero give exactly 0.
    """
    a, b = as_value(z1), as_value(z2)
    if isinstance(a, Cyclo) and isinstance(b, Cyclo) and a.is_zero() and b.is_zero():
        return arb(0)
    if isinstance(a, Cyclo) and isinstance(b, Cyclo) and a == b:
        return arb(0)
    with working_precision(prec):
        za, zb = a.enclose(prec), b.enclose(prec)
        return abs(za - zb) / abs(za).max(abs(zb))


def ziv_error_to_bounds(eps) -> tuple:
    """Guaranteed (|z'|/|z| bound, |arg z - arg z'| bound) when d(z', z) <= eps."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return 1 / (1 - eps), math.sqrt(36 * float(eps) / 11)
