"""Exhaustive evaluators for the Ising, random-cluster and Tutte partition functions.

Both evaluators first build an integer histogram of the exponent pattern
(how many monochromatic edges of each weight class, how many 1-spins in each
field class, number of components, ...) and only then form the weighted sum,
so the expensive exact arithmetic runs once per distinct pattern instead of
once per configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Sequence

import numpy as np

from .graphcore import (
    CapExceededError,
    IsingInstance,
    Multigraph,
    RandomClusterInstance,
    TuttePoint,
    UnionFind,
    connected_components,
    degrees,
)
from .numerics import ComplexValue, Cyclo
from .numerics.values import as_value

__all__ = [
    "DEFAULT_CAP",
    "SplitValues",
    "ising_pinned",
    "ising_split",
    "tutte",
    "z_ising",
    "z_ising_closed_form",
    "z_split",
    "z_tutte_rc",
]

DEFAULT_CAP = 24
_CHUNK = 1 << 15


def _classes(values: Sequence[ComplexValue]) -> tuple[list[ComplexValue], list[int]]:
    """Group equal values; returns representatives and the class index of each entry."""
    reps: list[ComplexValue] = []
    index: list[int] = []
    for v in values:
        for c, r in enumerate(reps):
            if r is v or (isinstance(r, Cyclo) and isinstance(v, Cyclo) and r == v):
                index.append(c)
                break
        else:
            reps.append(v)
            index.append(len(reps) - 1)
    return reps, index


class _Powers:
    """Cached integer powers of one value."""

    def __init__(self, base: ComplexValue):
        self.table = [Cyclo.rational(1), base]

    def __getitem__(self, k: int) -> ComplexValue:
        while len(self.table) <= k:
            self.table.append(self.table[-1] * self.table[1])
        return self.table[k]


def _weighted_sum(hist: dict, bases: list[ComplexValue]) -> ComplexValue:
    """Sum of count * prod bases[j]**key[j] over the histogram, in sorted key order."""
    pows = [_Powers(b) for b in bases]
    total: ComplexValue = Cyclo.rational(0)
    for key in sorted(hist):
        term: ComplexValue = Cyclo.rational(hist[key])
        for p, k in zip(pows, key):
            if k:
                term = term * p[k]
        total = total + term
    return total


# -- Ising --------------------------------------------------------------------


def _ising_histogram(inst: IsingInstance, cap: int, pins: tuple[int, ...] = ()):
    """Histogram over all spin assignments of (mono counts per class, ones per class, pinned spins).

    Keys are mixed-radix encoded in numpy; the dictionary is keyed by tuples.
    """
    g = inst.graph
    n = g.n
    if n > cap:
        raise CapExceededError(f"{n} vertices exceeds the enumeration cap {cap}")
    e_reps, e_idx = _classes(inst.phi)
    v_reps, v_idx = _classes(inst.tau)
    e_groups = [[e for e in range(g.m) if e_idx[e] == c] for c in range(len(e_reps))]
    v_groups = [[v for v in range(n) if v_idx[v] == c] for c in range(len(v_reps))]
    radix = [len(grp) + 1 for grp in e_groups] + [len(grp) + 1 for grp in v_groups]
    radix += [2] * len(pins)
    strides = [1]
    for r in radix[:-1]:
        strides.append(strides[-1] * r)
    space = strides[-1] * radix[-1] if radix else 1
    if space >= 1 << 62:
        raise CapExceededError("too many distinct weight classes for exact histogramming")

    counts: dict[int, int] = {}
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = ((idx[:, None] >> shifts[None, :]) & 1).astype(np.int64) if n else np.zeros((len(idx), 0), np.int64)
        key = np.zeros(len(idx), dtype=np.int64)
        j = 0
        for grp in e_groups:
            if grp:
                u = np.fromiter((g.edges[e][0] for e in grp), dtype=np.int64, count=len(grp))
                v = np.fromiter((g.edges[e][1] for e in grp), dtype=np.int64, count=len(grp))
                mono = (bits[:, u] == bits[:, v]).sum(axis=1)
                key += mono * strides[j]
            j += 1
        for grp in v_groups:
            if grp:
                key += bits[:, grp].sum(axis=1) * strides[j]
            j += 1
        for p in pins:
            key += bits[:, p] * strides[j]
            j += 1
        uniq, cnt = np.unique(key, return_counts=True)
        for k, c in zip(uniq.tolist(), cnt.tolist()):
            counts[k] = counts.get(k, 0) + c

    hist: dict[tuple, int] = {}
    for k, c in counts.items():
        digits = []
        for r in radix:
            digits.append(k % r)
            k //= r
        hist[tuple(digits)] = c
    return hist, e_reps + v_reps


def z_ising(inst: IsingInstance, cap: int = DEFAULT_CAP) -> ComplexValue:
    """Sum over spin assignments of prod phi(e)**[mono] * prod tau(v)**sigma(v).

    A self-loop is always monochromatic.
    """
    hist, bases = _ising_histogram(inst, cap)
    return _weighted_sum(hist, bases)


def ising_pinned(inst: IsingInstance, pins: Sequence[int], cap: int = DEFAULT_CAP) -> dict[tuple[int, ...], ComplexValue]:
    """Partial sums of the partition function, one per spin pattern on ``pins``."""
    pins = tuple(pins)
    if len(set(pins)) != len(pins):
        raise ValueError("pinned vertices must be distinct")
    hist, bases = _ising_histogram(inst, cap, pins)
    k = len(pins)
    out = {}
    for pattern in product((0, 1), repeat=k):
        sub = {key[: len(key) - k]: c for key, c in hist.items() if key[len(key) - k:] == pattern}
        out[pattern] = _weighted_sum(sub, bases)
    return out


def ising_split(inst: IsingInstance, s: int, t: int, cap: int = DEFAULT_CAP) -> tuple[ComplexValue, ComplexValue]:
    """(sum over assignments with sigma(s) = sigma(t), sum with sigma(s) != sigma(t))."""
    if s == t:
        raise ValueError("terminals must differ")
    parts = ising_pinned(inst, (s, t), cap)
    return parts[0, 0] + parts[1, 1], parts[0, 1] + parts[1, 0]


def z_ising_closed_form(inst: IsingInstance) -> ComplexValue:
    """Polynomial-time evaluation for uniform y in {0, 1, -1} and uniform field."""
    g = inst.graph
    ys = set_of(inst.phi)
    lams = set_of(inst.tau)
    if len(ys) > 1 or len(lams) > 1:
        raise ValueError("closed forms need uniform weights")
    lam = lams[0] if lams else Cyclo.rational(1)
    y = ys[0] if ys else Cyclo.rational(1)
    if not isinstance(y, Cyclo) or not y.is_rational() or y.to_fraction() not in (0, 1, -1):
        raise ValueError("closed forms exist only for y in {0, 1, -1}")
    yv = y.to_fraction()
    one = Cyclo.rational(1)
    if yv == 1 or g.m == 0:
        return reduce(lambda a, _: a * (one + lam), range(g.n), one)
    if yv == -1:
        out = Cyclo.rational((-1) ** g.m)
        for d in degrees(g):
            out = out * (one + lam * (-1) ** d)
        return out
    # y = 0: only proper 2-colourings survive, component by component
    if any(u == v for u, v in g.edges):
        return Cyclo.rational(0)
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    colour = [-1] * g.n
    out = one
    for root in range(g.n):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        sizes = [1, 0]
        stack = [root]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    sizes[colour[w]] += 1
                    stack.append(w)
                elif colour[w] == colour[u]:
                    return Cyclo.rational(0)
        out = out * (lam ** sizes[0] + lam ** sizes[1])
    return out


def set_of(values: Sequence[ComplexValue]) -> list[ComplexValue]:
    return _classes(values)[0]


# -- random cluster -----------------------------------------------------------


def _rc_histogram(g: Multigraph, classes: list[int], n_classes: int, cap: int, pins=None) -> dict:
    """Histogram over edge subsets of (kappa, per-class edge counts[, s~t connected])."""
    if g.m > cap:
        raise CapExceededError(f"{g.m} edges exceeds the enumeration cap {cap}")
    uf = UnionFind(g.n)
    counts = [0] * n_classes
    hist: dict[tuple, int] = {}
    edges = g.edges
    m = g.m

    def leaf():
        key = (uf.components, *counts)
        if pins is not None:
            key += (int(uf.find(pins[0]) == uf.find(pins[1])),)
        hist[key] = hist.get(key, 0) + 1

    def rec(i: int):
        if i == m:
            leaf()
            return
        rec(i + 1)
        u, v = edges[i]
        uf.union(u, v)
        counts[classes[i]] += 1
        rec(i + 1)
        counts[classes[i]] -= 1
        uf.undo()

    rec(0)
    return hist


def z_tutte_rc(inst: RandomClusterInstance, cap: int = DEFAULT_CAP) -> ComplexValue:
    """Sum over edge subsets A of q**kappa(A) * prod_{e in A} gamma_e."""
    reps, idx = _classes(inst.gamma)
    hist = _rc_histogram(inst.graph, idx, len(reps), cap)
    return _weighted_sum(hist, [inst.q] + reps)


@dataclass(frozen=True)
class SplitValues:
    z_st: ComplexValue
    z_s_bar_t: ComplexValue
    terminals: tuple[int, int]


def z_split(inst: RandomClusterInstance, s: int, t: int, cap: int = DEFAULT_CAP) -> SplitValues:
    """Split the random-cluster sum by whether s and t end up in one component."""
    if s == t:
        raise ValueError("terminals must differ")
    reps, idx = _classes(inst.gamma)
    hist = _rc_histogram(inst.graph, idx, len(reps), cap, pins=(s, t))
    joined = {k[:-1]: c for k, c in hist.items() if k[-1] == 1}
    apart = {k[:-1]: c for k, c in hist.items() if k[-1] == 0}
    bases = [inst.q] + reps
    return SplitValues(_weighted_sum(joined, bases), _weighted_sum(apart, bases), (s, t))


def tutte(g: Multigraph, pt: TuttePoint, cap: int = DEFAULT_CAP) -> ComplexValue:
    """T(G; x, y) from the rank-nullity sum; no division, so x = 1 or y = 1 is fine."""
    hist = _rc_histogram(g, [0] * g.m, 1, cap)
    k_full = connected_components(g)
    reshaped: dict[tuple, int] = {}
    for (kappa, size), c in hist.items():
        key = (kappa - k_full, size - g.n + kappa)
        reshaped[key] = reshaped.get(key, 0) + c
    return _weighted_sum(reshaped, [as_value(pt.x) - 1, as_value(pt.y) - 1])
