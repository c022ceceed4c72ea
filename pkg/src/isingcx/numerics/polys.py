"""Integer polynomials: height, Mahler measure and resultants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from flint import arb, fmpz_poly

from .precision import working_precision

__all__ = ["IntPoly", "height", "mahler_measure", "resultant", "sylvester_matrix"]


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients lowest degree first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_flint(self) -> fmpz_poly:
        return fmpz_poly(list(self.coeffs))

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def height(p: IntPoly) -> int:
    """Naive height: the largest absolute coefficient (0 for the zero polynomial)."""
    return max((abs(c) for c in p.coeffs), default=0)


def mahler_measure(p: IntPoly, precision: int = 128) -> arb:
    """Certified enclosure of |a_n| * prod max(1, |root|).

    Roots come from flint's certified complex root isolation; each factor
    max(1, |alpha|) is enclosed by a real ball, so the result is an interval
    guaranteed to contain the Mahler measure.
    """
    if p.is_zero():
        raise ValueError("Mahler measure of the zero polynomial is undefined")
    with working_precision(precision):
        measure = arb(abs(p.leading))
        if p.degree == 0:
            return measure
        for root, mult in p.to_flint().complex_roots():
            r = abs(root)
            factor = r.max(arb(1))
            measure *= factor**mult
        return measure


def sylvester_matrix(p: IntPoly, q: IntPoly) -> list[list[int]]:
    n, m = p.degree, q.degree
    size = n + m
    rows = []
    hp = list(reversed(p.coeffs))  # highest degree first
    hq = list(reversed(q.coeffs))
    for i in range(m):
        rows.append([0] * i + hp + [0] * (size - n - 1 - i))
    for i in range(n):
        rows.append([0] * i + hq + [0] * (size - m - 1 - i))
    return rows


def _bareiss_det(mat: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [row[:] for row in mat]
    size = len(a)
    if size == 0:
        return 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def resultant(p: IntPoly, q: IntPoly) -> int:
    """Res(P, Q) as the determinant of the Sylvester matrix."""
    if p.degree < 1 or q.degree < 1:
        raise ValueError("resultant needs two non-constant polynomials")
    return _bareiss_det(sylvester_matrix(p, q))
