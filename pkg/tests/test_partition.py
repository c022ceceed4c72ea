from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isingcx.graphcore import (
    CapExceededError,
    IsingInstance,
    Multigraph,
    RandomClusterInstance,
    TuttePoint,
    connected_components,
)
from isingcx.numerics import Approx, Cyclo
from isingcx.partition import (
    ising_pinned,
    ising_split,
    tutte,
    z_ising,
    z_ising_closed_form,
    z_split,
    z_tutte_rc,
)

from conftest import naive_ising, naive_rc

K2 = Multigraph(2, ((0, 1),))
TRIANGLE = Multigraph(3, ((0, 1), (1, 2), (0, 2)))
I = Cyclo.root_of_unity(1, 4)


@st.composite
def multigraphs(draw, n_max=5, m_max=7):
    n = draw(st.integers(1, n_max))
    m = draw(st.integers(0, m_max))
    return Multigraph(n, tuple((draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))) for _ in range(m)))


units = st.integers(0, 15).map(lambda k: Cyclo.root_of_unity(k, 16))


def test_ising_examples():
    y = Cyclo.root_of_unity(1, 8)
    assert z_ising(IsingInstance.uniform(K2, y)) == 2 * y + 2
    assert z_ising(IsingInstance.uniform(TRIANGLE, -1)) == -8
    assert z_ising(IsingInstance.uniform(K2, I, I)) == 2 * I


def test_rc_examples():
    y = Cyclo.root_of_unity(3, 8)
    q = Cyclo.rational(5)
    assert z_tutte_rc(RandomClusterInstance.uniform(Multigraph(1), q, y)) == q
    assert z_tutte_rc(RandomClusterInstance.uniform(K2, 2, y - 1)) == 2 * y + 2
    double = Multigraph(2, ((0, 1), (0, 1)))
    assert z_tutte_rc(RandomClusterInstance.uniform(double, 2, y)) == 4 + 4 * y + 2 * y * y


def test_tutte_vectors():
    x, y = Cyclo.rational(5), Cyclo.root_of_unity(1, 3) + 2
    pt = TuttePoint(x, y)
    assert tutte(K2, pt) == x
    assert tutte(Multigraph(1, ((0, 0),)), pt) == y
    assert tutte(TRIANGLE, pt) == x * x + x + y
    # x = 1 or y = 1 needs no special casing
    assert tutte(TRIANGLE, TuttePoint(1, 1)) == 3


def test_split_examples():
    g = Cyclo.root_of_unity(1, 6)
    sv = z_split(RandomClusterInstance.uniform(K2, 2, g), 0, 1)
    assert (sv.z_st, sv.z_s_bar_t) == (2 * g, 4)
    path = Multigraph(3, ((0, 1), (1, 2)))
    sv = z_split(RandomClusterInstance.uniform(path, 2, g), 0, 2)
    assert sv.z_st == 2 * g * g and sv.z_s_bar_t == 8 + 8 * g
    double = Multigraph(2, ((0, 1), (0, 1)))
    sv = z_split(RandomClusterInstance.uniform(double, 2, g), 0, 1)
    assert sv.z_st == 4 * g + 2 * g * g and sv.z_s_bar_t == 4


def test_closed_forms_examples():
    assert z_ising_closed_form(IsingInstance.uniform(K2, 1)) == 4
    assert z_ising_closed_form(IsingInstance.uniform(K2, -1)) == 0
    assert z_ising_closed_form(IsingInstance.uniform(TRIANGLE, 0)) == 0
    with pytest.raises(ValueError):
        z_ising_closed_form(IsingInstance.uniform(K2, 2))


@settings(max_examples=60, deadline=None)
@given(multigraphs(), st.sampled_from([0, 1, -1]), st.sampled_from([1, 2, -1, Fraction(1, 3)]))
def test_closed_forms_match_enumeration(g, y, lam):
    inst = IsingInstance.uniform(g, y, lam)
    assert z_ising_closed_form(inst) == z_ising(inst)


@settings(max_examples=60, deadline=None)
@given(multigraphs(), st.data())
def test_ising_matches_naive(g, data):
    phi = [data.draw(units) for _ in range(g.m)]
    tau = [data.draw(st.sampled_from([Cyclo.rational(1), I, Cyclo.rational(-2)])) for _ in range(g.n)]
    assert z_ising(IsingInstance(g, tuple(phi), tuple(tau))) == naive_ising(g, phi, tau)


@settings(max_examples=40, deadline=None)
@given(multigraphs(m_max=6), st.data())
def test_rc_matches_naive(g, data):
    gamma = [data.draw(units) - 1 for _ in range(g.m)]
    q = data.draw(st.sampled_from([Cyclo.rational(2), Cyclo.rational(3), I]))
    assert z_tutte_rc(RandomClusterInstance(g, q, tuple(gamma))) == naive_rc(g, q, gamma)


@settings(max_examples=40, deadline=None)
@given(multigraphs(), units)
def test_ising_equals_rc_at_q2(g, y):
    assert z_ising(IsingInstance.uniform(g, y)) == z_tutte_rc(RandomClusterInstance.uniform(g, 2, y - 1))


@settings(max_examples=40, deadline=None)
@given(multigraphs(m_max=6), st.integers(2, 5), units)
def test_tutte_rc_relation(g, a, w):
    x, y = Cyclo.rational(a), w + 2
    q = (x - 1) * (y - 1)
    rc = z_tutte_rc(RandomClusterInstance.uniform(g, q, y - 1))
    k = connected_components(g)
    assert rc == (x - 1) ** k * (y - 1) ** g.n * tutte(g, TuttePoint(x, y))


@settings(max_examples=30, deadline=None)
@given(multigraphs(n_max=4), units)
def test_split_and_pins_sum(g, y):
    if g.n < 2:
        return
    inst = IsingInstance.uniform(g, y)
    parts = ising_pinned(inst, (0, 1))
    total = sum(parts.values(), Cyclo.rational(0))
    assert total == z_ising(inst)
    same, diff = ising_split(inst, 0, 1)
    sv = z_split(RandomClusterInstance.uniform(g, 2, y - 1), 0, 1)
    assert same + diff == sv.z_st + sv.z_s_bar_t
    assert 2 * diff == sv.z_s_bar_t


def test_caps():
    big = Multigraph(5, tuple((0, 1) for _ in range(6)))
    with pytest.raises(CapExceededError):
        z_ising(IsingInstance.uniform(big, 2), cap=4)
    with pytest.raises(CapExceededError):
        z_tutte_rc(RandomClusterInstance.uniform(big, 2, 1), cap=5)


def test_ball_weights_are_enclosed():
    y = Approx.from_decimal("0.3", "0.4")
    z = z_ising(IsingInstance.uniform(TRIANGLE, y))
    exact = 2 * (0.3 + 0.4j) ** 3 + 6 * (0.3 + 0.4j)
    ball = z.ball
    assert ball.real.contains(ball.real.mid()) and abs(complex(z) - exact) < 1e-12
