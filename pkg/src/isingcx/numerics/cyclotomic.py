"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as a rational polynomial in zeta = exp(2*pi*i/N) of
degree below phi(N), i.e. reduced modulo the N-th cyclotomic polynomial.
Two elements of different orders are compared and combined after lifting
both into Q(zeta_L), L = lcm of the orders.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

from flint import acb, arb, fmpq, fmpq_poly, fmpz_poly

from .precision import working_precision

__all__ = ["Cyclo", "cyclotomic_poly", "lcm"]


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> fmpz_poly:
    return fmpz_poly.cyclotomic(n)


@lru_cache(maxsize=None)
def _phi_q(n: int) -> fmpq_poly:
    return fmpq_poly(cyclotomic_poly(n))


def _to_fmpq(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Rational):
        return fmpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"not a rational: {x!r}")


def _from_fmpq(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class Cyclo:
    """Element of the cyclotomic field of a given order.

    Instances are immutable. Arithmetic with ``int`` and ``Fraction`` is
    supported directly; mixing orders lifts to the least common multiple.
    """

    __slots__ = ("order", "_poly")

    def __init__(self, order: int, poly: fmpq_poly, *, reduced: bool = False):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        self.order = order
        self._poly = poly if reduced else poly % _phi_q(order)

    # -- construction -----------------------------------------------------

    @classmethod
    def rational(cls, value, order: int = 1) -> Cyclo:
        return cls(order, fmpq_poly([_to_fmpq(value)]), reduced=True)

    @classmethod
    def root_of_unity(cls, k: int, n: int) -> Cyclo:
        """exp(2*pi*i*k/n), exactly."""
        if n < 1:
            raise ValueError("root of unity order must be positive")
        k %= n
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        return cls(n, fmpq_poly(coeffs))

    @classmethod
    def from_coeffs(cls, order: int, coeffs) -> Cyclo:
        """Element sum_j coeffs[j] * zeta_order**j (any length; reduced here)."""
        return cls(order, fmpq_poly([_to_fmpq(c) for c in coeffs]))

    @classmethod
    def coerce(cls, x) -> Cyclo:
        if isinstance(x, Cyclo):
            return x
        if isinstance(x, (int, Rational, fmpq)):
            return cls.rational(x)
        raise TypeError(f"cannot convert {type(x).__name__} to Cyclo")

    # -- representation ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Dimension phi(N) of the ambient field over Q."""
        return cyclotomic_poly(self.order).degree()

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Canonical power-basis coefficients, padded to length phi(N)."""
        raw = [_from_fmpq(c) for c in self._poly.coeffs()]
        return tuple(raw + [Fraction(0)] * (self.degree - len(raw)))

    def lift(self, order: int) -> Cyclo:
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift order {self.order} into order {order}")
        step = order // self.order
        raw = self._poly.coeffs()
        if not raw:
            return Cyclo(order, fmpq_poly([]), reduced=True)
        spread = [fmpq(0)] * ((len(raw) - 1) * step + 1)
        for j, c in enumerate(raw):
            spread[j * step] = c
        return Cyclo(order, fmpq_poly(spread))

    def _common(self, other) -> tuple[Cyclo, Cyclo]:
        other = Cyclo.coerce(other)
        if other.order == self.order:
            return self, other
        order = lcm(self.order, other.order)
        return self.lift(order), other.lift(order)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def is_rational(self) -> bool:
        return self._poly.degree() <= 0

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return _from_fmpq(self._poly[0]) if not self.is_zero() else Fraction(0)

    def is_real(self) -> bool:
        return self == self.conjugate()

    def is_imaginary(self) -> bool:
        return (self + self.conjugate()).is_zero()

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (Cyclo, int, Rational, fmpq)):
            return NotImplemented
        a, b = self._common(other)
        return Cyclo(a.order, a._poly + b._poly, reduced=True)

    __radd__ = __add__

    def __neg__(self) -> Cyclo:
        return Cyclo(self.order, -self._poly, reduced=True)

    def __pos__(self) -> Cyclo:
        return self

    def __sub__(self, other):
        if not isinstance(other, (Cyclo, int, Rational, fmpq)):
            return NotImplemented
        a, b = self._common(other)
        return Cyclo(a.order, a._poly - b._poly, reduced=True)

    def __rsub__(self, other):
        if not isinstance(other, (Cyclo, int, Rational, fmpq)):
            return NotImplemented
        return Cyclo.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Rational, fmpq)):
            return Cyclo(self.order, self._poly * _to_fmpq(other), reduced=True)
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._common(other)
        return Cyclo(a.order, a._poly * b._poly)

    __rmul__ = __mul__

    def inverse(self) -> Cyclo:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        g, s, _ = fmpq_poly.xgcd(self._poly, _phi_q(self.order))
        # g is a nonzero constant since phi_N is irreducible
        return Cyclo(self.order, s / g[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Rational, fmpq)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Cyclo(self.order, self._poly / _to_fmpq(other), reduced=True)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if not isinstance(other, (int, Rational, fmpq)):
            return NotImplemented
        return Cyclo.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> Cyclo:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclo.rational(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> Cyclo:
        """Complex conjugate (the automorphism zeta -> zeta**-1)."""
        raw = self._poly.coeffs()
        if len(raw) <= 1:
            return self
        n = self.order
        spread = [fmpq(0)] * n
        for j, c in enumerate(raw):
            spread[(-j) % n] += c
        return Cyclo(n, fmpq_poly(spread))

    def abs2(self) -> Cyclo:
        """|a|^2 = a * conj(a), an element of the real subfield."""
        return self * self.conjugate()

    def real_part(self) -> Cyclo:
        return (self + self.conjugate()) / 2

    def imag_part(self) -> Cyclo:
        """Im(a) as an element of the field (needs i, so lifts to order lcm(N, 4))."""
        i = Cyclo.root_of_unity(1, 4)
        return (self - self.conjugate()) / (2 * i)

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, (Cyclo, int, Rational, fmpq)):
            return NotImplemented
        a, b = self._common(other)
        return a._poly == b._poly

    __hash__ = None  # equality crosses orders; no cheap canonical hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def sign(self, max_prec: int = 1 << 16) -> int:
        """Certified sign of a real element: -1, 0 or 1."""
        if self.is_zero():
            return 0
        if not self.is_real():
            raise ValueError("sign() requires a real element")
        prec = 64
        while prec <= max_prec:
            re = self.enclose(prec).real
            if re > 0:
                return 1
            if re < 0:
                return -1
            prec *= 2
        raise ArithmeticError("sign undecided at maximum precision")

    def compare(self, other) -> int:
        """Certified sign of (self - other) for real elements."""
        return (self - other).sign()

    # -- numerics ---------------------------------------------------------

    def enclose(self, prec: int = 128) -> acb:
        """Certified complex ball containing the exact value."""
        raw = self._poly.coeffs()
        with working_precision(prec + 16):
            total = acb(0)
            n = self.order
            for j, c in enumerate(raw):
                if c == 0:
                    continue
                s, co = arb.sin_cos_pi_fmpq(fmpq(2 * j, n))
                total += acb(co, s) * arb(c)
        return total

    def __complex__(self) -> complex:
        z = self.enclose(64)
        return complex(float(z.real.mid()), float(z.imag.mid()))

    def __float__(self) -> float:
        if not self.is_real():
            raise TypeError("cannot convert a non-real element to float")
        return float(self.enclose(64).real.mid())

    def __repr__(self) -> str:
        return f"Cyclo({self.order}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        terms = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
            if j == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        body = " + ".join(terms).replace("+ -", "- ")
        return f"{body}  [z = exp(2*pi*i/{self.order})]"
