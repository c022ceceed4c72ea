from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest
from flint import fmpq
from hypothesis import given, settings
from hypothesis import strategies as st

from isingcx.counting import (
    BisectionParams,
    IntervalContractError,
    MinCutResult,
    NoisyOracle,
    ZeroBehavior,
    brute_force_maxcut,
    count_min_cuts_bisection,
    count_min_cuts_brute,
    interval_shrink,
    maxcut_threshold_check,
    threshold_exponent,
)
from isingcx.graphcore import Multigraph, RandomClusterInstance
from isingcx.numerics import Cyclo
from isingcx.partition import z_split

K = Fraction(22, 21)
HALF = Cyclo.rational(Fraction(1, 2))
PATH = Multigraph(3, ((0, 1), (1, 2)))
C4 = Multigraph(4, ((0, 1), (1, 2), (2, 3), (3, 0)))
TRIANGLE = Multigraph(3, ((0, 1), (1, 2), (0, 2)))


def line(eps):
    return 1 - 2 * eps


def test_brute_force_examples():
    assert count_min_cuts_brute(Multigraph(2, ((0, 1),)), 0, 1) == MinCutResult(1, 1)
    assert count_min_cuts_brute(PATH, 0, 2) == MinCutResult(1, 2)
    assert count_min_cuts_brute(TRIANGLE, 0, 2) == MinCutResult(2, 2)
    with pytest.raises(ValueError):
        count_min_cuts_brute(Multigraph(3, ((0, 1),)), 0, 2)


def test_brute_force_matches_networkx():
    for G in nx.graph_atlas_g()[1:60]:
        if not nx.is_connected(G) or G.number_of_nodes() < 2:
            continue
        g = Multigraph(G.number_of_nodes(), tuple(G.edges()))
        s, t = 0, G.number_of_nodes() - 1
        k = nx.edge_connectivity(G, s, t)
        # count minimum cuts through networkx's cut test on every k-subset
        c = 0
        for sub in combinations(list(G.edges()), k):
            H = G.copy()
            H.remove_edges_from(sub)
            c += not nx.has_path(H, s, t)
        assert count_min_cuts_brute(g, s, t) == MinCutResult(k, c)


def test_noiseless_shrink():
    oracle = NoisyOracle(line, 1, 0, ZeroBehavior.ZERO)
    lo, hi = interval_shrink(oracle, 0, 1, 20)
    assert lo <= fmpq(1, 2) <= hi
    assert hi - lo == fmpq(4, 5) ** 20


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_noisy_containment_every_round(seed):
    oracle = NoisyOracle(line, K, seed)
    widths = []

    def watch(r):
        assert r.lo <= fmpq(1, 2) <= r.hi
        widths.append(r.hi - r.lo)

    interval_shrink(oracle, 0, 1, 30, observer=watch)
    assert all(w == fmpq(4, 5) ** (i + 1) for i, w in enumerate(widths))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 9))
def test_adversarial_zero_on_grid(seed, j):
    # root j/10 sits exactly on a grid point of the first round
    root = fmpq(j, 10)
    hits = []

    def f(e):
        if e == root:
            hits.append(e)
        return root - e

    oracle = NoisyOracle(f, K, seed, ZeroBehavior.ADVERSARIAL)
    lo, hi = interval_shrink(oracle, 0, 1, 12)
    assert hits, "the root was never queried"
    assert lo <= root <= hi


def test_oracle_contract():
    oracle = NoisyOracle(lambda e: Fraction(3), K, 7)
    for _ in range(200):
        v = oracle(0)
        assert fmpq(3) / fmpq(22, 21) <= v <= fmpq(3) * fmpq(22, 21)
    a = [NoisyOracle(line, K, 5)(Fraction(1, 3)) for _ in range(2)]
    assert a[0] == a[1]
    with pytest.raises(ValueError):
        NoisyOracle(line, Fraction(2), 0)


def test_broken_oracle_is_detected():
    with pytest.raises(IntervalContractError):
        interval_shrink(lambda e: fmpq(1) if e < fmpq(1, 2) else fmpq(5) * e, 0, 1, 3)


def test_params():
    p = BisectionParams(3)
    assert p.M == 2**12 and p.delta == Fraction(64, 4096) and p.epsilon_floor == Fraction(1, 2**72)
    assert p.interval_width_target == Fraction(1, 2**108)


def test_analytic_root():
    z_st, z_sbt = Fraction(1), Fraction(2)
    root = z_sbt / (2 * z_st + z_sbt)
    assert root == Fraction(1, 2)
    assert -root * z_st + z_sbt * (1 - root) / 2 == 0


def test_bisection_examples():
    assert count_min_cuts_bisection(PATH, 0, 2, K, 1) == MinCutResult(1, 2)
    assert count_min_cuts_bisection(C4, 0, 2, K, 2) == MinCutResult(2, 4)
    with pytest.raises(ValueError):
        count_min_cuts_bisection(TRIANGLE, 0, 2)


def test_bisection_rounds_shrink():
    widths = []
    count_min_cuts_bisection(C4, 0, 2, K, 3, observer=lambda r: widths.append(r.hi - r.lo))
    start = 1 - fmpq(1, 2 ** (16 * 4 * 2))
    for r, w in enumerate(widths, 1):
        assert w == start * fmpq(4, 5) ** r


def test_weight_window_facts():
    # Z_st and Z_s|t at uniform weight M sit in their (1 +- delta) windows
    p = BisectionParams(C4.m)
    sv = z_split(RandomClusterInstance.uniform(C4, 2, p.M), 0, 2)
    z_st, z_sbt = sv.z_st.to_fraction(), sv.z_s_bar_t.to_fraction()
    assert abs(z_st / (2 * p.M**4) - 1) <= p.delta
    assert abs(z_sbt / (4 * 4 * p.M**2) - 1) <= p.delta


def test_maxcut_examples():
    assert maxcut_threshold_check(Multigraph(2, ((0, 1),)), 1, HALF)
    assert maxcut_threshold_check(TRIANGLE, 2, HALF)
    assert not maxcut_threshold_check(TRIANGLE, 3, HALF)
    assert threshold_exponent(3, HALF) == 6  # 2^(3-k) < 2^-2 first at k = 6
    with pytest.raises(ValueError):
        threshold_exponent(2, Cyclo.root_of_unity(1, 4))


def test_maxcut_complex_weight():
    y = Cyclo.root_of_unity(1, 5) * Fraction(2, 3)
    for G in nx.graph_atlas_g()[1:40]:
        g = Multigraph(G.number_of_nodes(), tuple(G.edges()))
        best = brute_force_maxcut(g)
        for b in range(g.m + 1):
            assert maxcut_threshold_check(g, b, y) == (best >= b)


def test_brute_force_maxcut():
    assert brute_force_maxcut(TRIANGLE) == 2
    assert brute_force_maxcut(C4) == 4
    assert brute_force_maxcut(Multigraph(1)) == 0


def test_maxcut_threshold_with_isolated_vertices():
    # triangle plus three isolated vertices: 2^n exceeds 2^m
    g = Multigraph(6, ((1, 2), (1, 3), (2, 3)))
    assert maxcut_threshold_check(g, 2, HALF)
    assert not maxcut_threshold_check(g, 3, HALF)
