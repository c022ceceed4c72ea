"""Oracle-driven counting: interval shrinking, the min-cut counter, the Max-Cut threshold test.

The min-cut counter works with exact rationals throughout (``flint.fmpq``) so
the root enclosure and the certification of (k, C) are exact.  Randomness
enters only through the seeded multiplicative noise of :class:`NoisyOracle`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Callable

from flint import fmpq

from .graphcore import IsingInstance, Multigraph, RandomClusterInstance, UnionFind
from .numerics import Cyclo
from .numerics.values import as_value
from .partition import z_ising, z_split

__all__ = [
    "BisectionParams",
    "IntervalContractError",
    "MinCutResult",
    "NoisyOracle",
    "ShrinkRound",
    "ZeroBehavior",
    "brute_force_maxcut",
    "count_min_cuts_bisection",
    "count_min_cuts_brute",
    "interval_shrink",
    "maxcut_threshold_check",
    "threshold_exponent",
]

DEFAULT_NOISE = Fraction(22, 21)
POISON = fmpq(10**9, 7)  # what an adversarial oracle answers at an exact zero


class IntervalContractError(RuntimeError):
    """Neither shrink condition held: the oracle broke its error contract."""


class ZeroBehavior(str, Enum):
    ZERO = "ZERO"
    ADVERSARIAL = "ADVERSARIAL"


def _q(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _frac(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class NoisyOracle:
    """|exact_fn(x)| times a seeded factor in [1/K, K].

    The factor is exp(u ln K) with u uniform in [-1, 1], rounded to a rational
    and clamped so the contract holds exactly.
    """

    def __init__(self, exact_fn: Callable, noise_factor=DEFAULT_NOISE, rng_seed: int = 0,
                 zero_behavior: ZeroBehavior = ZeroBehavior.ADVERSARIAL):
        k = Fraction(noise_factor)
        if not 1 <= k <= DEFAULT_NOISE:
            raise ValueError("noise factor must lie in [1, 22/21]")
        self.exact_fn = exact_fn
        self.noise_factor = k
        self.rng_seed = rng_seed
        self.zero_behavior = ZeroBehavior(zero_behavior)
        self._rng = random.Random(rng_seed)
        self._k, self._kinv = _q(k), _q(1 / k)
        self._logk = math.log(k)
        self.queries = 0

    def factor(self) -> fmpq:
        u = self._rng.uniform(-1.0, 1.0)
        f = _q(Fraction(math.exp(u * self._logk)))
        return min(max(f, self._kinv), self._k)

    def __call__(self, x) -> fmpq:
        self.queries += 1
        v = _q(self.exact_fn(x))
        noise = self.factor()
        if v == 0:
            return POISON if self.zero_behavior is ZeroBehavior.ADVERSARIAL else fmpq(0)
        return abs(v) * noise


@dataclass(frozen=True)
class MinCutResult:
    k: int
    C: int


@dataclass(frozen=True)
class ShrinkRound:
    index: int
    lo: fmpq
    hi: fmpq
    took_upper: bool  # True when the round kept [e2, e10]


@dataclass(frozen=True)
class BisectionParams:
    m: int
    q: int = 2
    subintervals: int = 10
    M: int = field(init=False)
    delta: Fraction = field(init=False)
    epsilon_floor: Fraction = field(init=False)

    def __post_init__(self):
        if self.subintervals < 5 or self.subintervals % 5:
            raise ValueError("subintervals must be a positive multiple of 5")
        M = 2 ** (4 * self.m)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "delta", Fraction(4**self.m, M))
        object.__setattr__(self, "epsilon_floor", Fraction(1, M ** (2 * self.m)))

    @property
    def interval_width_target(self) -> Fraction:
        return Fraction(1, self.M ** (self.m * self.m))


# -- interval shrinking -------------------------------------------------------


def interval_shrink(oracle: Callable, lo, hi, rounds: int | None = None, *,
                    subintervals: int = 10,
                    until: Callable[[fmpq, fmpq], bool] | None = None,
                    observer: Callable[[ShrinkRound], None] | None = None,
                    max_rounds: int = 100_000) -> tuple[fmpq, fmpq]:
    """Narrow [lo, hi] around the root of a decreasing linear f from noisy |f| values.

    With ``subintervals = 10`` each round keeps 8 of the 10 pieces.  Runs
    ``rounds`` rounds, or until ``until(lo, hi)`` is true.
    """
    if rounds is None and until is None:
        raise ValueError("give a round count or a stopping rule")
    lo, hi = _q(lo), _q(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    p = subintervals
    edge = 2 * p // 10  # pieces dropped from one side
    r = 0
    while (rounds is None or r < rounds) and not (until is not None and until(lo, hi)):
        if r >= max_rounds:
            raise RuntimeError("interval shrinking did not terminate")
        step = (hi - lo) / p
        vals = [oracle(lo + step * i) for i in range(p + 1)]
        signs = [vals[i] > vals[i + 1] for i in range(p)]
        falls = [vals[i] < vals[i + 1] for i in range(p)]
        if all(signs[: 2 * edge]):
            lo, hi, up = lo + step * edge, hi, True
        elif all(falls[p - 2 * edge:]):
            lo, hi, up = lo, lo + step * (p - edge), False
        else:
            raise IntervalContractError(f"round {r}: no shrink condition holds")
        r += 1
        if observer is not None:
            observer(ShrinkRound(r, lo, hi, up))
    return lo, hi


# -- minimum cuts -------------------------------------------------------------


def _separates(g: Multigraph, removed: frozenset, s: int, t: int) -> bool:
    uf = UnionFind(g.n)
    for e, (u, v) in enumerate(g.edges):
        if e not in removed:
            uf.union(u, v)
    return uf.find(s) != uf.find(t)


def count_min_cuts_brute(g: Multigraph, s: int, t: int) -> MinCutResult:
    """Smallest k such that some k edges disconnect s from t, and how many such edge sets exist.

    Every disconnecting set of minimum size is automatically inclusion-minimal.
    """
    if g.m > 20:
        raise ValueError("brute force limited to 20 edges")
    if s == t:
        raise ValueError("terminals must differ")
    if _separates(g, frozenset(), s, t):
        raise ValueError("s and t are not connected")
    for k in range(1, g.m + 1):
        c = sum(_separates(g, frozenset(sub), s, t) for sub in combinations(range(g.m), k))
        if c:
            return MinCutResult(k, c)
    raise AssertionError("removing all edges separates s from t")


def _candidates(lo: fmpq, hi: fmpq, p: BisectionParams) -> list[tuple[int, int]]:
    """(k, C) pairs consistent with a root enclosure [lo, hi] of Z_s|t / (2 Z_st + Z_s|t)."""
    if hi >= 1 or lo <= 0:
        return [(-1, -1), (-2, -2)]  # not yet informative
    r_lo, r_hi = 2 * lo / (1 - lo), 2 * hi / (1 - hi)
    d = _q(p.delta)
    shrink, grow = (1 - d) / (p.q * (1 + d)), (1 + d) / (p.q * (1 - d))
    out = []
    for k in range(1, p.m + 1):
        mk = fmpq(p.M) ** k
        c_lo = max(1, int((r_lo * mk * shrink).ceil()))
        c_hi = min(2**p.m, int((r_hi * mk * grow).floor()))
        out.extend((k, c) for c in range(c_lo, c_hi + 1))
        if len(out) > 1:
            break
    return out


def count_min_cuts_bisection(g: Multigraph, s: int, t: int, oracle_noise=DEFAULT_NOISE, seed: int = 0,
                             zero_behavior: ZeroBehavior = ZeroBehavior.ADVERSARIAL,
                             observer: Callable[[ShrinkRound], None] | None = None,
                             subintervals: int = 10) -> MinCutResult:
    """Recover (k, C) from a noisy oracle for |Z| of G plus an s-t edge of weight -1-eps."""
    if s == t:
        raise ValueError("terminals must differ")
    if any({u, v} == {s, t} for u, v in g.edges):
        raise ValueError("graph must not contain an s-t edge")
    if g.m > 10:
        raise ValueError("desk-scale counter limited to 10 edges")
    from .graphcore import connected_components

    if connected_components(g) != 1:
        raise ValueError("graph must be connected")
    p = BisectionParams(g.m, subintervals=subintervals)
    split = z_split(RandomClusterInstance.uniform(g, 2, p.M), s, t)
    z_st = _q(split.z_st.to_fraction())
    z_sbt = _q(split.z_s_bar_t.to_fraction())
    _check_weight_bounds(z_st, z_sbt, p, g, s, t)

    def f(eps: fmpq) -> fmpq:
        return -eps * z_st + z_sbt * (1 - eps) / 2

    oracle = NoisyOracle(f, oracle_noise, seed, zero_behavior)
    lo0 = _q(p.epsilon_floor)
    if not (f(lo0) > 0 > f(fmpq(1))):
        raise AssertionError("sign pattern at the interval ends")

    found: list[tuple[int, int]] = []

    def certified(lo: fmpq, hi: fmpq) -> bool:
        cands = _candidates(lo, hi, p)
        if len(cands) == 1:
            found.append(cands[0])
            return True
        if not cands:
            raise ArithmeticError("no consistent (k, C); the bounds on Z_st, Z_s|t failed")
        return False

    interval_shrink(oracle, lo0, 1, until=certified, observer=observer, subintervals=subintervals)
    k, c = found[0]
    return MinCutResult(k, c)


def _check_weight_bounds(z_st: fmpq, z_sbt: fmpq, p: BisectionParams, g, s, t) -> None:
    """Confirm the two-sided bounds on Z_st and Z_s|t that the certification relies on."""
    d = _q(p.delta)
    base = fmpq(p.q) * fmpq(p.M) ** p.m
    if not base * (1 - d) <= z_st <= base * (1 + d):
        raise ArithmeticError("Z_st outside its (1 +- delta) window")
    ok = False
    for k in range(1, p.m + 1):
        for_k = fmpq(p.M) ** (p.m - k) * p.q**2
        c_hi = z_sbt / (for_k * (1 - d))
        c_lo = z_sbt / (for_k * (1 + d))
        if c_lo <= 2**p.m and c_hi >= 1 and int(c_hi.floor()) >= int(c_lo.ceil()):
            ok = True
    if not ok:
        raise ArithmeticError("Z_s|t outside every (1 +- delta) window")


# -- Max-Cut threshold --------------------------------------------------------


def brute_force_maxcut(g: Multigraph) -> int:
    best = 0
    for mask in range(1 << max(g.n - 1, 0)):  # fix the last vertex's side
        cut = sum(((mask >> u) ^ (mask >> v)) & 1 for u, v in g.edges)
        best = max(best, cut)
    return best


def _abs2_below(y: Cyclo, bound: Fraction) -> bool:
    return (y.abs2() - Cyclo.rational(bound)).sign() < 0


def threshold_exponent(m: int, y) -> int:
    """Least k >= 1 with 2^m |y|^k < 1/4, compared through squares."""
    y = as_value(y)
    if not isinstance(y, Cyclo):
        raise ValueError("threshold test needs an exact weight")
    a2 = y.abs2()
    if a2.is_zero() or (a2 - Cyclo.rational(1)).sign() >= 0:
        raise ValueError("need 0 < |y| < 1")
    target = Cyclo.rational(Fraction(1, 16 * 4**m))  # |y|^{2k} < 1/(16 * 4^m)
    k, p = 1, a2
    while (p - target).sign() >= 0:
        k += 1
        p = p * a2
    return k


def maxcut_threshold_check(g: Multigraph, b: int, y, *, return_details: bool = False):
    """Decide maxcut(g) >= b from |Z(g; y^k)| against (3/4)|y^k|^{m-b}.

    The exponent k is chosen against 2^max(n, m): the sum has 2^n terms, so
    isolated vertices or forests with n > m would otherwise break the gap.
    """
    y = as_value(y)
    k = threshold_exponent(max(g.n, g.m), y)
    yk = y**k
    z = z_ising(IsingInstance.uniform(g, yk))
    unit2 = yk.abs2() ** (g.m - b) if g.m >= b else yk.abs2().inverse() ** (b - g.m)
    lhs = z.abs2()
    decision = (lhs - unit2 * Cyclo.rational(Fraction(9, 16))).sign() > 0
    if not return_details:
        return decision
    in_band = (lhs - unit2 * Cyclo.rational(Fraction(1, 16))).sign() >= 0 and not decision
    return decision, {"k": k, "z_abs2": lhs, "unit_abs2": unit2, "in_band": in_band}
