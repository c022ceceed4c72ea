"""Diagonal-gate circuits between two Hadamard layers: exact simulation and Ising encodings.

With theta = a*pi/b every gate phase is a power of zeta = exp(i*pi/b), so the
diagonal of the circuit is stored as an integer exponent per basis state.
The amplitude <y| H D H |0> = 2^-n sum_x (-1)^(x.y) D(x) then has integer
coefficients in the zeta basis (obtained with one integer Walsh-Hadamard
transform), and the 1/sqrt(2) factors of the two H layers pair up into a
rational 2^-n, so probabilities are exact cyclotomic numbers.

Circuit file grammar::

    iqp <n> theta pi(<a>,<b>)
    p <i> | zz <i> <j> | cz <i> <j>
    measure <i> <j> ...
    outcome <bits>
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Literal, Sequence

import numpy as np

from .graphcore import CapExceededError, IsingInstance, Multigraph
from .numerics import Cyclo
from .partition import DEFAULT_CAP, z_ising

__all__ = [
    "CircuitFormatError",
    "Gate",
    "IqpCircuit",
    "IqpMeasurement",
    "IsingEncoding",
    "amplitudes",
    "cz_expand",
    "cz_matrix_identity",
    "encode_full",
    "encode_partial",
    "encoding_probability",
    "parse_circuit",
    "parseval_check",
    "serialize_circuit",
    "statevector_prob",
    "walsh_hadamard",
]

DENSE_CAP = 12


class CircuitFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: Literal["P", "ZZ", "CZ"]
    lines: tuple[int, ...]


@dataclass(frozen=True)
class IqpCircuit:
    n: int
    theta: tuple[int, int]  # (a, b): theta = a*pi/b
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        a, b = self.theta
        if b < 1:
            raise CircuitFormatError("theta denominator must be positive")
        g = gcd(a, b)
        object.__setattr__(self, "theta", (a // g, b // g))
        for gate in self.gates:
            if any(not 0 <= i < self.n for i in gate.lines):
                raise CircuitFormatError(f"{gate.kind} gate on a line out of range")
            if len(gate.lines) != (1 if gate.kind == "P" else 2):
                raise CircuitFormatError(f"{gate.kind} gate has the wrong number of lines")
            if len(gate.lines) == 2 and gate.lines[0] == gate.lines[1]:
                raise CircuitFormatError("two-qubit gate needs distinct lines")

    @property
    def order(self) -> int:
        """zeta = exp(i*pi/b) is a primitive (2b)-th root of unity."""
        return 2 * self.theta[1]

    def p_counts(self) -> list[int]:
        counts = [0] * self.n
        for g in self.gates:
            if g.kind == "P":
                counts[g.lines[0]] += 1
        return counts


@dataclass(frozen=True)
class IqpMeasurement:
    measured: tuple[int, ...]
    outcome: tuple[int, ...]

    def __post_init__(self):
        if len(self.measured) != len(self.outcome):
            raise CircuitFormatError("outcome length must match the measured set")
        if len(set(self.measured)) != len(self.measured):
            raise CircuitFormatError("measured lines must be distinct")
        if any(b not in (0, 1) for b in self.outcome):
            raise CircuitFormatError("outcome bits must be 0 or 1")

    @classmethod
    def full(cls, bits: Sequence[int]) -> IqpMeasurement:
        return cls(tuple(range(len(bits))), tuple(bits))


def parse_circuit(text: str) -> tuple[IqpCircuit, IqpMeasurement]:
    header = None
    gates: list[Gate] = []
    measured = None
    outcome = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip().lower()
        if not line:
            continue
        toks = line.split()
        kw = toks[0]
        try:
            if kw == "iqp":
                m = re.fullmatch(r"iqp\s+(\d+)\s+theta\s+pi\(\s*(-?\d+)\s*,\s*(\d+)\s*\)", line)
                if not m:
                    raise CircuitFormatError("header must read: iqp <n> theta pi(<a>,<b>)")
                header = (int(m.group(1)), (int(m.group(2)), int(m.group(3))))
            elif header is None:
                raise CircuitFormatError("circuit header must come first")
            elif kw == "p" and len(toks) == 2:
                gates.append(Gate("P", (int(toks[1]),)))
            elif kw in ("zz", "cz") and len(toks) == 3:
                gates.append(Gate(kw.upper(), (int(toks[1]), int(toks[2]))))
            elif kw == "measure":
                measured = tuple(int(t) for t in toks[1:])
            elif kw == "outcome" and len(toks) == 2:
                if not set(toks[1]) <= {"0", "1"}:
                    raise CircuitFormatError("outcome must be a bit string")
                outcome = tuple(int(ch) for ch in toks[1])
            else:
                raise CircuitFormatError(f"cannot parse {raw.strip()!r}")
        except (CircuitFormatError, ValueError) as exc:
            raise CircuitFormatError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise CircuitFormatError("missing circuit header")
    n, theta = header
    circuit = IqpCircuit(n, theta, tuple(gates))
    if measured is None:
        measured = tuple(range(n))
    if any(not 0 <= i < n for i in measured):
        raise CircuitFormatError("measured line out of range")
    if outcome is None:
        outcome = (0,) * len(measured)
    return circuit, IqpMeasurement(measured, outcome)


def serialize_circuit(c: IqpCircuit, meas: IqpMeasurement | None = None) -> str:
    lines = [f"iqp {c.n} theta pi({c.theta[0]},{c.theta[1]})"]
    for g in c.gates:
        lines.append(g.kind.lower() + " " + " ".join(map(str, g.lines)))
    if meas is not None:
        lines.append("measure " + " ".join(map(str, meas.measured)))
        lines.append("outcome " + "".join(map(str, meas.outcome)))
    return "\n".join(lines) + "\n"


# -- simulation ---------------------------------------------------------------


def walsh_hadamard(vec: np.ndarray) -> np.ndarray:
    """Unnormalised transform along axis 0: out[y] = sum_x (-1)^(x.y) vec[x]."""
    out = np.array(vec, dtype=object if vec.dtype == object else np.int64, copy=True)
    size = out.shape[0]
    h = 1
    while h < size:
        view = out.reshape((size // (2 * h), 2, h) + out.shape[1:])
        a = view[:, 0].copy()
        b = view[:, 1].copy()
        view[:, 0] = a + b
        view[:, 1] = a - b
        h *= 2
    return out


def _phase_exponents(c: IqpCircuit) -> np.ndarray:
    """k(x) with D(x) = zeta**k(x), zeta = exp(i*pi/b), for every basis state x."""
    a, b = c.theta
    order = 2 * b
    idx = np.arange(1 << c.n, dtype=np.int64)
    bits = [(idx >> i) & 1 for i in range(c.n)]
    k = np.zeros(1 << c.n, dtype=np.int64)
    for g in c.gates:
        if g.kind == "P":
            # exp(i*theta) on |0>, exp(-i*theta) on |1>
            k += a * (1 - 2 * bits[g.lines[0]])
        elif g.kind == "ZZ":
            i, j = g.lines
            k += a * (1 - 2 * (bits[i] ^ bits[j]))
        else:
            i, j = g.lines
            k += b * (bits[i] & bits[j])
    return k % order


def amplitudes(c: IqpCircuit, cap: int = DENSE_CAP) -> list[Cyclo]:
    """All 2^n output amplitudes <y| H D H |0^n>, exactly."""
    if c.n > cap:
        raise CapExceededError(f"{c.n} lines exceeds the dense simulation cap {cap}")
    order = c.order
    k = _phase_exponents(c)
    onehot = np.zeros((1 << c.n, order), dtype=np.int64)
    onehot[np.arange(1 << c.n), k] = 1
    coeffs = walsh_hadamard(onehot)
    scale = Fraction(1, 1 << c.n)
    return [Cyclo.from_coeffs(order, row.tolist()) * scale for row in coeffs]


def _index(bits_by_line: dict[int, int], n: int) -> int:
    return sum(bits_by_line[i] << i for i in range(n))


def statevector_prob(c: IqpCircuit, meas: IqpMeasurement, cap: int = DENSE_CAP) -> Cyclo:
    """Pr(measured lines read ``outcome``), summing |amplitude|^2 over the other lines."""
    amps = amplitudes(c, cap)
    fixed = dict(zip(meas.measured, meas.outcome))
    free = [i for i in range(c.n) if i not in fixed]
    total = Cyclo.rational(0)
    for mask in range(1 << len(free)):
        bits = dict(fixed)
        for j, line in enumerate(free):
            bits[line] = (mask >> j) & 1
        total = total + amps[_index(bits, c.n)].abs2()
    return total


# -- encodings ----------------------------------------------------------------


@dataclass(frozen=True)
class IsingEncoding:
    """Ising instance whose partition function gives an output probability.

    FULL:    Pr = 2^scale_exponent * |Z|^2,  scale_exponent = -2n.
    PARTIAL: Pr = 2^scale_exponent * Z,      scale_exponent = -2n + s, Z real >= 0,
    where s counts the unmeasured lines.
    """

    inst: IsingInstance
    n_qubits: int
    s_unmeasured: int
    scale_exponent: int
    kind: Literal["FULL", "PARTIAL"]
    measured: tuple[int, ...]


def _zeta(c: IqpCircuit, k: int) -> Cyclo:
    return Cyclo.root_of_unity(k, c.order)


def _fields(c: IqpCircuit, bits: dict[int, int]) -> dict[int, Cyclo]:
    """tau(v_i) = exp(-2 i p_i theta) * (-1)^(y_i) for every measured line i."""
    a, b = c.theta
    p = c.p_counts()
    return {i: _zeta(c, -2 * p[i] * a + b * y) for i, y in bits.items()}


def _require_no_cz(c: IqpCircuit) -> None:
    if any(g.kind == "CZ" for g in c.gates):
        raise CircuitFormatError("expand CZ gates before encoding")


def encode_full(c: IqpCircuit, outcome: Sequence[int]) -> IsingEncoding:
    """One vertex per line, one edge per ZZ gate with interaction exp(2 i theta)."""
    _require_no_cz(c)
    if len(outcome) != c.n:
        raise CircuitFormatError("full outcome needs one bit per line")
    edges = tuple(g.lines for g in c.gates if g.kind == "ZZ")
    y = _zeta(c, 2 * c.theta[0])
    tau = _fields(c, dict(enumerate(outcome)))
    inst = IsingInstance(Multigraph(c.n, edges), (y,) * len(edges), tuple(tau[i] for i in range(c.n)))
    return IsingEncoding(inst, c.n, 0, -2 * c.n, "FULL", tuple(range(c.n)))


def encode_partial(c: IqpCircuit, meas: IqpMeasurement) -> IsingEncoding:
    """The circuit graph glued to its conjugate along the unmeasured lines.

    Vertex layout: measured lines (copy), their conjugate twins, then the shared
    unmeasured vertices.  Edges with both ends unmeasured cancel against their
    conjugates and are dropped; shared vertices carry field 1.
    """
    _require_no_cz(c)
    if not meas.measured:
        raise CircuitFormatError("partial encoding needs at least one measured line")
    measured = list(meas.measured)
    unmeasured = [i for i in range(c.n) if i not in set(measured)]
    pos = {line: j for j, line in enumerate(measured)}
    twin = {line: len(measured) + j for j, line in enumerate(measured)}
    shared = {line: 2 * len(measured) + j for j, line in enumerate(unmeasured)}
    y = _zeta(c, 2 * c.theta[0])
    ybar = y.conjugate()
    edges: list[tuple[int, int]] = []
    phi: list[Cyclo] = []
    for g in c.gates:
        if g.kind != "ZZ":
            continue
        i, j = g.lines
        if i in shared and j in shared:
            continue
        edges.append((pos.get(i, shared.get(i)), pos.get(j, shared.get(j))))
        phi.append(y)
        edges.append((twin.get(i, shared.get(i)), twin.get(j, shared.get(j))))
        phi.append(ybar)
    tau_m = _fields(c, dict(zip(meas.measured, meas.outcome)))
    n_vert = 2 * len(measured) + len(unmeasured)
    tau: list[Cyclo] = [Cyclo.rational(1)] * n_vert
    for line in measured:
        tau[pos[line]] = tau_m[line]
        tau[twin[line]] = tau_m[line].conjugate()
    inst = IsingInstance(Multigraph(n_vert, tuple(edges)), tuple(phi), tuple(tau))
    s = len(unmeasured)
    return IsingEncoding(inst, c.n, s, -2 * c.n + s, "PARTIAL", tuple(measured))


def encoding_probability(enc: IsingEncoding, cap: int = DEFAULT_CAP) -> Cyclo:
    z = z_ising(enc.inst, cap)
    scale = Fraction(2) ** enc.scale_exponent
    if enc.kind == "FULL":
        return z.abs2() * scale
    return z * scale


# -- CZ and Parseval ----------------------------------------------------------


def cz_expand(c: IqpCircuit) -> IqpCircuit:
    """Replace CZ(i,j) by ZZ(i,j)^2 P(i)^14 P(j)^14 (equal to CZ up to exp(-i*pi/4)).

    Only valid at theta = pi/8.
    """
    has_cz = any(g.kind == "CZ" for g in c.gates)
    if not has_cz:
        return c
    if c.theta != (1, 8):
        raise CircuitFormatError("CZ expansion needs theta = pi/8")
    gates: list[Gate] = []
    for g in c.gates:
        if g.kind != "CZ":
            gates.append(g)
            continue
        i, j = g.lines
        gates += [Gate("ZZ", (i, j))] * 2 + [Gate("P", (i,))] * 14 + [Gate("P", (j,))] * 14
    return IqpCircuit(c.n, c.theta, tuple(gates))


def cz_matrix_identity() -> tuple[list[Cyclo], list[Cyclo]]:
    """Diagonals of exp(-i*pi/4) * CZ and of ZZ(pi/8)^2 (P(pi/8)^14 x P(pi/8)^14), basis 00,01,10,11."""
    z16 = lambda k: Cyclo.root_of_unity(k, 16)  # noqa: E731 - exp(i*pi*k/8)
    phase = z16(-2)
    lhs = [phase, phase, phase, -phase]
    rhs = []
    for b0 in (0, 1):
        for b1 in (0, 1):
            zz = 1 if b0 == b1 else -1
            k = 2 * zz + 14 * (1 - 2 * b0) + 14 * (1 - 2 * b1)
            rhs.append(z16(k))
    return lhs, rhs


def parseval_check(coeffs: Sequence) -> tuple[Cyclo, Cyclo]:
    """(sum_z' |sum_z C_z (-1)^(z.z')|^2, 2^n sum_z |C_z|^2), computed independently."""
    size = len(coeffs)
    if size < 1 or size & (size - 1):
        raise ValueError("length must be a power of two")
    vals = [Cyclo.coerce(c) for c in coeffs]
    arr = np.empty(size, dtype=object)
    arr[:] = vals
    transformed = walsh_hadamard(arr)
    lhs = Cyclo.rational(0)
    for v in transformed:
        lhs = lhs + v.abs2()
    rhs = Cyclo.rational(0)
    for v in vals:
        rhs = rhs + v.abs2()
    return lhs, rhs * size
