"""Explicit lower bounds on nonzero values of integer polynomials at algebraic points.

All bounds here have the shape C**(-e) * (rational), with C = sqrt(d+1) * H.
Since C**2 is rational, every bound is stored through its exact square, which
lets callers compare |Z|**2 against it without any rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from flint import arb, fmpq

from .cyclotomic import Cyclo, cyclotomic_poly
from .polys import IntPoly, height
from .precision import working_precision
from .values import ComplexValue
from .weights import PolarPi, Real, ROU, WeightSpec, WeightSpecError, polar_form

__all__ = [
    "BoundResult",
    "common_root_exponents",
    "minimal_polynomial",
    "partition_lower_bound",
    "poly_eval_lower_bound",
    "root_order",
]


@dataclass(frozen=True)
class BoundResult:
    """A lower bound B > 0 together with the data it was built from.

    ``bound_sq`` is B**2 exactly; ``constant_sq`` is C**2 exactly.
    """

    bound_sq: Fraction
    constant_sq: Fraction
    degree: int
    height: int
    n: int
    m: int | None = None

    def __post_init__(self):
        if self.bound_sq <= 0:
            raise ValueError("lower bound must be positive")

    def bound(self, prec: int = 128) -> arb:
        with working_precision(prec):
            return arb(fmpq(self.bound_sq.numerator, self.bound_sq.denominator)).sqrt()

    def constant(self, prec: int = 128) -> arb:
        with working_precision(prec):
            return arb(fmpq(self.constant_sq.numerator, self.constant_sq.denominator)).sqrt()

    def exceeded_by(self, value: ComplexValue) -> bool:
        """Certified test |value| > B (strict)."""
        if isinstance(value, Cyclo):
            return (value.abs2() - self.bound_sq).sign() > 0
        sq = value.abs2().ball.real
        target = arb(fmpq(self.bound_sq.numerator, self.bound_sq.denominator))
        if sq > target:
            return True
        if sq <= target:
            return False
        raise ArithmeticError("comparison with the bound is undecided at this precision")


def root_order(a: int, b: int) -> int:
    """Multiplicative order of exp(i*pi*a/b) (a, b already reduced)."""
    return 2 * b // gcd(a, 2 * b)


def minimal_polynomial(spec: WeightSpec) -> IntPoly:
    """Primitive integer minimal polynomial of an exact polar input r*exp(i*pi*a/b).

    With N the order of the phase and r = p/q, the polynomial
    q**phi(N) * Phi_N(x/r) is irreducible; it is returned with content removed.
    """
    r, a, b = polar_form(spec)
    if r == 0:
        return IntPoly([0, 1])
    order = root_order(a, b)
    cyc = [int(c) for c in cyclotomic_poly(order).coeffs()]
    phi = len(cyc) - 1
    p, q = r.numerator, r.denominator
    coeffs = [c * q**j * p ** (phi - j) for j, c in enumerate(cyc)]
    g = 0
    for c in coeffs:
        g = gcd(g, c)
    coeffs = [c // g for c in coeffs]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return IntPoly(coeffs)


def _constant_sq(d: int, h: int) -> Fraction:
    return Fraction((d + 1) * h * h)


def poly_eval_lower_bound(y_min_poly: IntPoly, P_degree: int, P_height: int) -> BoundResult:
    """Lower bound on |P(y)| for integer P of degree <= n, height <= H, P(y) != 0.

    Bound: C_y**(-n) * ((n+1) * H)**(1-d), with C_y = sqrt(d+1) * H(y).
    The minimal polynomial must be irreducible; that is not re-checked here.
    """
    d = y_min_poly.degree
    if d < 1:
        raise ValueError("minimal polynomial must have positive degree")
    if P_degree < 0 or P_height < 1:
        raise ValueError("need P_degree >= 0 and P_height >= 1")
    c_sq = _constant_sq(d, height(y_min_poly))
    bound_sq = c_sq ** (-P_degree) * Fraction((P_degree + 1) * P_height) ** (2 * (1 - d))
    return BoundResult(bound_sq, c_sq, d, height(y_min_poly), P_degree)


def common_root_exponents(y: WeightSpec, z: WeightSpec) -> tuple[int, int, int]:
    """(N, t1, t2) with y = w**t1, z = w**t2 for w = exp(2*pi*i/N)."""
    orders = []
    exps = []
    for spec in (y, z):
        r, a, b = polar_form(spec)
        if r != 1:
            raise WeightSpecError("field bound needs both parameters on the unit circle")
        orders.append(2 * b)
        exps.append(a)  # exp(i*pi*a/b) = zeta_{2b}**a
    big = orders[0] * orders[1] // gcd(orders[0], orders[1])
    t1 = exps[0] * (big // orders[0]) % big
    t2 = exps[1] * (big // orders[1]) % big
    # shrink to the true common order
    g = gcd(gcd(t1, t2), big)
    return big // g, t1 // g, t2 // g


def partition_lower_bound(
    y: WeightSpec, z: WeightSpec | None, n_vertices: int, m_edges: int
) -> BoundResult:
    """Lower bound on |Z| for a connected (multi)graph with n vertices and m edges.

    Without a field: (m+1)**(1-d) * C_y**(-m) * 2**(-(d-1)*n).
    With field z (y, z roots of unity, y = w**t1, z = w**t2):
    (t1*m + t2*n + 1)**(1-d) * C_w**(-(t1*m + t2*n)) * 2**(-(d-1)*n).
    """
    if n_vertices < 1 or m_edges < 0:
        raise ValueError("need n >= 1 and m >= 0")
    if z is None:
        if not isinstance(y, (ROU, PolarPi, Real)):
            raise WeightSpecError("lower bound needs an exact parameter")
        mp = minimal_polynomial(y)
        d, h, deg = mp.degree, height(mp), m_edges
    else:
        for spec in (y, z):
            if not isinstance(spec, (ROU, PolarPi, Real)) or polar_form(spec)[0] != 1:
                raise WeightSpecError("field bound needs roots of unity")
        order, t1, t2 = common_root_exponents(y, z)
        cyc = IntPoly([int(c) for c in cyclotomic_poly(order).coeffs()])
        d, h, deg = cyc.degree, height(cyc), t1 * m_edges + t2 * n_vertices
    c_sq = _constant_sq(d, h)
    bound_sq = (
        Fraction(deg + 1) ** (2 * (1 - d))
        * c_sq ** (-deg)
        * Fraction(1, 4) ** ((d - 1) * n_vertices)
    )
    return BoundResult(bound_sq, c_sq, d, h, n_vertices, m_edges)
