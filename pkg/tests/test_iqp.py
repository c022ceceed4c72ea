from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from isingcx.iqp import (
    CircuitFormatError,
    Gate,
    IqpCircuit,
    IqpMeasurement,
    cz_expand,
    cz_matrix_identity,
    encode_full,
    encode_partial,
    encoding_probability,
    parse_circuit,
    parseval_check,
    serialize_circuit,
    statevector_prob,
)
from isingcx.numerics import Cyclo
from isingcx.partition import z_ising

PI8 = (1, 8)
COS2 = (2 + (Cyclo.root_of_unity(1, 8) + Cyclo.root_of_unity(7, 8))) / 4  # cos^2(pi/8)


def dense_probs(c: IqpCircuit) -> np.ndarray:
    """Independent float reference: explicit H^n D H^n applied to |0...0>."""
    theta = math.pi * c.theta[0] / c.theta[1]
    h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    hn = np.array([[1.0]])
    for _ in range(c.n):
        hn = np.kron(h, hn)  # line i is bit i of the index
    diag = np.ones(1 << c.n, dtype=complex)
    for x in range(1 << c.n):
        bit = lambda i: (x >> i) & 1  # noqa: E731
        for g in c.gates:
            if g.kind == "P":
                diag[x] *= np.exp(1j * theta * (1 - 2 * bit(g.lines[0])))
            elif g.kind == "ZZ":
                i, j = g.lines
                diag[x] *= np.exp(1j * theta * (1 - 2 * (bit(i) ^ bit(j))))
            else:
                i, j = g.lines
                diag[x] *= -1 if bit(i) and bit(j) else 1
    psi = hn @ (diag * (hn @ np.eye(1 << c.n)[0]))
    return np.abs(psi) ** 2


def random_circuit(rng: random.Random, n_max=4, gates_max=8, cz=False) -> IqpCircuit:
    n = rng.randint(1, n_max)
    kinds = ["P"] + (["ZZ"] + (["CZ"] if cz else []) if n > 1 else [])
    gates = []
    for _ in range(rng.randint(0, gates_max)):
        k = rng.choice(kinds)
        gates.append(Gate(k, (rng.randrange(n),) if k == "P" else tuple(rng.sample(range(n), 2))))
    return IqpCircuit(n, PI8, tuple(gates))


def marginal(probs: np.ndarray, n: int, meas: IqpMeasurement) -> float:
    return sum(p for x, p in enumerate(probs) if all((x >> i) & 1 == b for i, b in zip(meas.measured, meas.outcome)))


def test_parse_examples():
    c, m = parse_circuit("iqp 1 theta pi(1,8)\np 0\n")
    assert c.n == 1 and c.gates == (Gate("P", (0,)),) and m == IqpMeasurement((0,), (0,))
    c, m = parse_circuit("iqp 2 theta pi(1,8)\nzz 0 1\nmeasure 0\noutcome 0\n")
    assert m == IqpMeasurement((0,), (0,))
    for bad in ("iqp 2 theta pi(1,8)\nzz 0 0\n", "p 0\n", "iqp 1 theta pi(1,8)\np 3\n", "iqp 1 theta pi(1,8)\noutcome 2\n"):
        with pytest.raises(CircuitFormatError):
            parse_circuit(bad)


def test_serialize_round_trip():
    rng = random.Random(3)
    for _ in range(20):
        c = random_circuit(rng, cz=True)
        meas = IqpMeasurement.full([rng.randrange(2) for _ in range(c.n)])
        assert parse_circuit(serialize_circuit(c, meas)) == (c, meas)


def test_statevector_examples():
    assert statevector_prob(IqpCircuit(3, PI8), IqpMeasurement.full((0, 0, 0))) == 1
    one_p = IqpCircuit(1, PI8, (Gate("P", (0,)),))
    assert statevector_prob(one_p, IqpMeasurement.full((0,))) == COS2
    zz = IqpCircuit(2, PI8, (Gate("ZZ", (0, 1)),))
    assert statevector_prob(zz, IqpMeasurement.full((0, 0))) == COS2


def test_statevector_matches_dense_reference():
    rng = random.Random(11)
    for _ in range(25):
        c = random_circuit(rng, cz=True)
        probs = dense_probs(c)
        for bits in product((0, 1), repeat=c.n):
            meas = IqpMeasurement.full(bits)
            assert abs(float(statevector_prob(c, meas)) - marginal(probs, c.n, meas)) < 1e-12
        meas = IqpMeasurement((0,), (1,))
        assert abs(float(statevector_prob(c, meas)) - marginal(probs, c.n, meas)) < 1e-12


def test_encode_full_examples():
    one_p = IqpCircuit(1, PI8, (Gate("P", (0,)),))
    enc = encode_full(one_p, (0,))
    assert enc.inst.graph.m == 0 and enc.inst.tau == (Cyclo.root_of_unity(-2, 16),)
    assert encoding_probability(enc) == COS2
    zz = IqpCircuit(2, PI8, (Gate("ZZ", (0, 1)),))
    enc = encode_full(zz, (0, 0))
    assert enc.inst.graph.m == 1 and enc.inst.tau == (1, 1) and enc.scale_exponent == -4
    flipped = encode_full(one_p, (1,))
    assert flipped.inst.tau[0] == -enc_tau0(one_p)


def enc_tau0(c):
    return encode_full(c, (0,)).inst.tau[0]


def test_encode_partial_example():
    zz = IqpCircuit(2, PI8, (Gate("ZZ", (0, 1)),))
    enc = encode_partial(zz, IqpMeasurement((0,), (0,)))
    g = enc.inst.graph
    assert g.n == 3 and sorted(g.edges) == [(0, 2), (1, 2)]
    y = Cyclo.root_of_unity(2, 16)
    assert set(map(str, enc.inst.phi)) == {str(y), str(y.conjugate())}
    assert z_ising(enc.inst) == 8 * COS2
    assert encoding_probability(enc) == COS2
    empty = IqpCircuit(2, PI8)
    assert encoding_probability(encode_partial(empty, IqpMeasurement((1,), (0,)))) == 1


def test_full_and_partial_agree_with_statevector():
    rng = random.Random(5)
    for _ in range(15):
        c = random_circuit(rng)
        for bits in product((0, 1), repeat=c.n):
            meas = IqpMeasurement.full(bits)
            p = statevector_prob(c, meas)
            assert encoding_probability(encode_full(c, bits)) == p
            assert encoding_probability(encode_partial(c, meas)) == p
        for k in range(1, c.n):
            meas = IqpMeasurement(tuple(rng.sample(range(c.n), k)), tuple(rng.randrange(2) for _ in range(k)))
            enc = encode_partial(c, meas)
            z = z_ising(enc.inst)
            assert z.is_real() and z.sign() >= 0
            assert encoding_probability(enc) == statevector_prob(c, meas)


def test_cz_identity():
    lhs, rhs = cz_matrix_identity()
    assert lhs == rhs
    assert lhs[0] == Cyclo.root_of_unity(-2, 16)
    assert lhs[3] == -Cyclo.root_of_unity(-2, 16)


def test_cz_expand_preserves_probabilities():
    rng = random.Random(9)
    for _ in range(15):
        c = random_circuit(rng, n_max=3, cz=True)
        e = cz_expand(c)
        assert all(g.kind != "CZ" for g in e.gates)
        for bits in product((0, 1), repeat=c.n):
            meas = IqpMeasurement.full(bits)
            assert statevector_prob(c, meas) == statevector_prob(e, meas)
    with pytest.raises(CircuitFormatError):
        cz_expand(IqpCircuit(2, (1, 4), (Gate("CZ", (0, 1)),)))
    with pytest.raises(CircuitFormatError):
        encode_full(IqpCircuit(2, PI8, (Gate("CZ", (0, 1)),)), (0, 0))


def test_parseval_examples():
    assert parseval_check([1, 0]) == (2, 2)
    assert parseval_check([1, 1]) == (4, 4)
    rng = random.Random(1)
    for n in range(1, 7):
        vec = [Cyclo.root_of_unity(rng.randrange(8), 8) * Fraction(rng.randint(-3, 3)) for _ in range(1 << n)]
        lhs, rhs = parseval_check(vec)
        assert lhs == rhs
    with pytest.raises(ValueError):
        parseval_check([1, 2, 3])
