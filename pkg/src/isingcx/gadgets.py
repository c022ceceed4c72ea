"""Two-terminal implementations: series/parallel algebra, stretch/thicken chains,
edge substitution, and the field-cancelling constructions.

Random-cluster weights are written w (or alpha); the matching Ising interaction
is y = w + 1 when q = 2.  A chain always starts from one edge of weight y and
records its effective Ising weight y' and the scalar Z_{s|t}(gadget)/q**2 that
substituting one edge by the chain multiplies the partition function by.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from flint import arb

from .graphcore import IsingInstance, Multigraph, RandomClusterInstance
from .numerics import ComplexValue, Cyclo, PolarPi, Real, ROU, WeightSpec, parse_weight, polar_form
from .numerics.precision import working_precision
from .numerics.values import as_value, is_zero_exact
from .partition import DEFAULT_CAP, ising_pinned, ising_split, z_ising, z_split

__all__ = [
    "ChainError",
    "FieldConstruction",
    "FieldGadget",
    "FieldGadgetParams",
    "GadgetChain",
    "GadgetStep",
    "TwoTerminalGadget",
    "build_chain_gadget",
    "chain_to_negative_unit",
    "effective_weight",
    "equality_gadget",
    "field_cancel_construct",
    "field_power_construct",
    "field_real_weight",
    "field_real_weight_gadget",
    "find_k_angle",
    "fold_chain",
    "parallel_weight",
    "series_weight",
    "stretch",
    "substitute",
    "thicken",
    "verify_chain",
]


class ChainError(ValueError):
    """A construction's hypotheses are not met, or a step degenerates."""


def _v(x) -> ComplexValue:
    return as_value(x)


def _is_zero(x: ComplexValue) -> bool:
    z = is_zero_exact(x)
    if z is None:
        raise ArithmeticError("cannot decide whether a value is zero")
    return z


# -- series / parallel --------------------------------------------------------


def series_weight(w1, w2, q) -> ComplexValue:
    w1, w2, q = _v(w1), _v(w2), _v(q)
    den = q + w1 + w2
    if _is_zero(den):
        raise ZeroDivisionError("series composition with q + w1 + w2 = 0")
    return w1 * w2 / den


def parallel_weight(w1, w2) -> ComplexValue:
    return (1 + _v(w1)) * (1 + _v(w2)) - 1


def thicken(y, k: int) -> tuple[ComplexValue, ComplexValue]:
    """k parallel copies: y -> y**k with scalar 1."""
    if k < 1:
        raise ChainError("thickening needs k >= 1")
    return _v(y) ** k, Cyclo.rational(1)


def stretch(y, q, k: int) -> tuple[ComplexValue, ComplexValue]:
    """k copies in series: (1 + q/a') = (1 + q/a)**k with a = y - 1.

    The scalar is Z_{s|t}(path)/q**2, accumulated as prod (q + w_partial + a).
    """
    if k < 1:
        raise ChainError("stretching needs k >= 1")
    y, q = _v(y), _v(q)
    alpha = y - 1
    if k == 1:
        return y, Cyclo.rational(1)
    if _is_zero(alpha):
        raise ChainError("cannot stretch y = 1")
    base = 1 + q / alpha
    if _is_zero(base**k - 1):
        raise ChainError("degenerate stretch: (1 + q/(y-1))**k = 1")
    partial = alpha
    scalar: ComplexValue = Cyclo.rational(1)
    for _ in range(k - 1):
        den = q + partial + alpha
        if _is_zero(den):
            raise ChainError("degenerate stretch: zero series scalar")
        scalar = scalar * den
        partial = partial * alpha / den
    return partial + 1, scalar


# -- chains -------------------------------------------------------------------


@dataclass(frozen=True)
class GadgetStep:
    kind: Literal["STRETCH", "THICKEN"]
    k: int

    def __post_init__(self):
        if self.kind not in ("STRETCH", "THICKEN"):
            raise ChainError(f"unknown step kind {self.kind!r}")
        if self.k < 1:
            raise ChainError("step size must be at least 1")

    def __str__(self) -> str:
        return f"{self.kind}({self.k})"


@dataclass(frozen=True)
class GadgetChain:
    q: ComplexValue
    steps: tuple[GadgetStep, ...]
    start_weight: ComplexValue
    effective_weight: ComplexValue
    prefactor_per_edge: ComplexValue


def fold_chain(y, steps, q=2) -> GadgetChain:
    """Apply the closed forms step by step.

    Substituting every edge of a gadget by the current chain multiplies the
    gadget scalar by (previous scalar)**(edge count), hence the powering.
    """
    y, q = _v(y), _v(q)
    steps = tuple(steps)
    cur: ComplexValue = y
    pref: ComplexValue = Cyclo.rational(1)
    for step in steps:
        if step.kind == "THICKEN":
            cur, local = thicken(cur, step.k)
        else:
            cur, local = stretch(cur, q, step.k)
        pref = pref**step.k * local
    return GadgetChain(q, steps, y, cur, pref)


@dataclass(frozen=True)
class TwoTerminalGadget:
    inst: RandomClusterInstance
    s: int
    t: int

    def __post_init__(self):
        if self.s == self.t:
            raise ChainError("gadget terminals must differ")


def _compose(gadget: tuple[int, list[tuple[int, int]]], k: int, series: bool):
    """k copies of a two-terminal graph (terminals 0 and 1), in parallel or in series."""
    n0, edges0 = gadget
    inner = n0 - 2
    if series:
        n = 2 + (k - 1) + k * inner
        joints = [0] + list(range(2, k + 1)) + [1]
    else:
        n = 2 + k * inner
        joints = None
    next_free = 2 + (k - 1 if series else 0)
    edges: list[tuple[int, int]] = []
    for c in range(k):
        s, t = (joints[c], joints[c + 1]) if series else (0, 1)
        mapping = {0: s, 1: t}
        for v in range(2, n0):
            mapping[v] = next_free
            next_free += 1
        edges += [(mapping[u], mapping[v]) for u, v in edges0]
    return n, edges


def build_chain_gadget(chain: GadgetChain) -> TwoTerminalGadget:
    """Explicit k-fan / k-path graph realising the chain, all edges weight y - 1."""
    g = (2, [(0, 1)])
    for step in chain.steps:
        g = _compose(g, step.k, series=step.kind == "STRETCH")
    graph = Multigraph(g[0], tuple(g[1]))
    inst = RandomClusterInstance.uniform(graph, chain.q, chain.start_weight - 1)
    return TwoTerminalGadget(inst, 0, 1)


def effective_weight(gadget: TwoTerminalGadget, cap: int = DEFAULT_CAP) -> ComplexValue:
    """Implemented edge weight w* = q * Z_st / Z_{s|t}, by exhaustive enumeration."""
    sv = z_split(gadget.inst, gadget.s, gadget.t, cap)
    if _is_zero(sv.z_s_bar_t):
        raise ZeroDivisionError("Z_{s|t} vanishes: the gadget implements no weight")
    return gadget.inst.q * sv.z_st / sv.z_s_bar_t


@dataclass(frozen=True)
class ChainVerification:
    effective_weight: ComplexValue  # Ising-type y'
    prefactor: ComplexValue
    matches: bool
    method: str


def verify_chain(chain: GadgetChain, cap: int = DEFAULT_CAP) -> ChainVerification:
    """Rebuild the chain graph and re-derive y' and the scalar without the closed forms.

    At q = 2 the spin sum is used: pinning the terminals equal / unequal gives
    y' = Z_same / Z_diff, and Z_{s|t} = 2 * Z_diff.  This enumerates vertices
    rather than edge subsets, so much longer chains stay checkable.  Other q
    fall back to the edge-subset split.
    """
    gadget = build_chain_gadget(chain)
    q = chain.q
    if isinstance(q, Cyclo) and q == 2 and gadget.inst.graph.n <= cap:
        ising = IsingInstance.uniform(gadget.inst.graph, chain.start_weight)
        same, diff = ising_split(ising, 0, 1, cap)
        if _is_zero(diff):
            raise ZeroDivisionError("chain implements no weight (Z_diff = 0)")
        y_eff = same / diff
        pref = 2 * diff / 4
        method = "spin enumeration"
    else:
        sv = z_split(gadget.inst, 0, 1, cap)
        y_eff = q * sv.z_st / sv.z_s_bar_t + 1
        pref = sv.z_s_bar_t / (q * q)
        method = "edge-subset enumeration"
    ok = _equal(y_eff, chain.effective_weight) and _equal(pref, chain.prefactor_per_edge)
    return ChainVerification(y_eff, pref, ok, method)


def _equal(a: ComplexValue, b: ComplexValue) -> bool:
    if isinstance(a, Cyclo) and isinstance(b, Cyclo):
        return a == b
    z = is_zero_exact(_v(a) - _v(b))
    return bool(z) if z is not None else True


def substitute(
    inst: RandomClusterInstance, edge_index: int, gadget: TwoTerminalGadget
) -> tuple[RandomClusterInstance, ComplexValue]:
    """Replace one edge by a copy of the gadget (s, t glued to its endpoints).

    Returns the new instance and Z_{s|t}(gadget)/q**2.
    """
    g = inst.graph
    if not 0 <= edge_index < g.m:
        raise IndexError("edge index out of range")
    if _is_zero(inst.q):
        raise ChainError("substitution needs q != 0")
    u, v = g.edges[edge_index]
    if u == v:
        raise ChainError("cannot substitute a self-loop")
    gg = gadget.inst.graph
    mapping = {gadget.s: u, gadget.t: v}
    nxt = g.n
    for w in range(gg.n):
        if w not in mapping:
            mapping[w] = nxt
            nxt += 1
    edges = [e for i, e in enumerate(g.edges) if i != edge_index]
    gamma = [x for i, x in enumerate(inst.gamma) if i != edge_index]
    edges += [(mapping[a], mapping[b]) for a, b in gg.edges]
    gamma += list(gadget.inst.gamma)
    new = RandomClusterInstance(Multigraph(nxt, tuple(edges)), inst.q, tuple(gamma))
    sv = z_split(gadget.inst, gadget.s, gadget.t)
    return new, sv.z_s_bar_t / (inst.q * inst.q)


# -- witness chains -----------------------------------------------------------


def find_k_angle(a: int, b: int) -> int:
    """Least k >= 1 putting k * (2*pi*a/b) strictly inside (pi/2, pi) or (pi, 3*pi/2)."""
    if b < 1:
        raise ChainError("angle denominator must be positive")
    frac = Fraction(a, b) % 1
    if frac in (0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        raise ChainError("angle is a multiple of pi/2")
    a, b = frac.numerator, frac.denominator
    for k in range(1, b + 1):
        r = 4 * (k * a % b)
        if b < r < 2 * b or 2 * b < r < 3 * b:
            return k
    raise AssertionError("unreachable: some multiple always lands in the target arcs")


def _in_open_unit_neg(v: Cyclo) -> bool:
    return v.is_real() and v.sign() < 0 and (v + 1).sign() > 0


def _imaginary_chain(v: Cyclo, max_k: int) -> list[GadgetStep]:
    """Steps taking a purely imaginary v (|v| != 0, 1) to a weight in (-1, 0)."""
    mod2 = v.abs2()
    if mod2.compare(1) < 0:
        return [GadgetStep("THICKEN", 2)]
    x = (v + 1) / (v - 1)
    xk = x
    for k in range(2, max_k + 1):
        xk = xk * x
        if xk == 1:
            continue
        zk = 1 + 2 / (xk - 1)
        m2 = zk.abs2()
        if not zk.is_zero() and m2.compare(1) < 0:
            return [GadgetStep("STRETCH", k), GadgetStep("THICKEN", 2)]
    raise ChainError(f"no stretch length up to {max_k} makes the weight small enough")


def chain_to_negative_unit(y: WeightSpec, q=2, max_k: int = 4096) -> GadgetChain:
    """A stretch/thicken chain from y to a real weight strictly inside (-1, 0).

    Handles |y| = 1 off the axes, purely imaginary y with |y| != 1, and
    r * exp(i*pi*a/(2c)) with a odd, gcd(a, c) = 1, r > 0.
    """
    if not isinstance(y, (ROU, PolarPi, Real)):
        raise ChainError("witness chains need an exact polar input")
    r, a, b = polar_form(y)
    value = parse_weight(y)
    steps: list[GadgetStep] = []
    if r == 0:
        raise ChainError("y = 0 has no witness chain")
    on_axis = Fraction(a, b) % Fraction(1, 2) == 0
    if r == 1:
        if on_axis:
            raise ChainError("unit-circle y must avoid the real and imaginary axes")
        k = find_k_angle(a, 2 * b)
        if k > 1:
            steps.append(GadgetStep("THICKEN", k))
        steps.append(GadgetStep("STRETCH", 2))
    elif Fraction(a, b) in (Fraction(1, 2), Fraction(3, 2)):
        steps = _imaginary_chain(value, max_k)
    elif b % 2 == 0:
        # theta = a*pi/(2c) with a odd: c-thickening lands on the imaginary axis
        c = b // 2
        steps = [GadgetStep("THICKEN", c)] + _imaginary_chain(value**c, max_k)
    else:
        raise ChainError("y meets none of the witness-chain hypotheses")
    chain = fold_chain(value, steps, q)
    w = chain.effective_weight
    if not (isinstance(w, Cyclo) and _in_open_unit_neg(w)):
        raise AssertionError("constructed chain does not land in (-1, 0)")
    return chain


# -- field gadgets ------------------------------------------------------------


@dataclass(frozen=True)
class FieldGadget:
    """A two-terminal Ising gadget with internal fields, and its 2x2 interaction matrix.

    ``matrix[a][b]`` is the weight summed over internal spins with terminal
    spins (a, b); terminal fields are not included.
    """

    inst: IsingInstance
    s: int
    t: int
    steps: tuple[GadgetStep, ...]
    matrix: tuple[tuple[ComplexValue, ComplexValue], tuple[ComplexValue, ComplexValue]]
    scale: ComplexValue

    def brute_force_matrix(self, cap: int = DEFAULT_CAP):
        parts = ising_pinned(self.inst, (self.s, self.t), cap)
        return ((parts[0, 0], parts[0, 1]), (parts[1, 0], parts[1, 1]))


def _with_terminal_fields_one(graph: Multigraph, phi, tau_inner, s: int, t: int) -> IsingInstance:
    tau = [tau_inner] * graph.n
    tau[s] = tau[t] = Cyclo.rational(1)
    return IsingInstance(graph, tuple(phi), tuple(tau))


def equality_gadget(y) -> FieldGadget:
    """Two 2-stretches in parallel with field -1 on the middle vertices.

    One 2-stretch gives diag(y^2 - 1, 1 - y^2); doubling it squares both
    entries, leaving (y^2 - 1)^2 times the equality relation.
    """
    y = _v(y)
    if _is_zero(y * y - 1):
        raise ChainError("equality gadget degenerates at y = +-1")
    graph = Multigraph(4, ((0, 2), (2, 1), (0, 3), (3, 1)))
    inst = _with_terminal_fields_one(graph, [y] * 4, Cyclo.rational(-1), 0, 1)
    d = (y * y - 1) ** 2
    zero = Cyclo.rational(0)
    steps = (GadgetStep("STRETCH", 2), GadgetStep("THICKEN", 2))
    return FieldGadget(inst, 0, 1, steps, ((d, zero), (zero, d)), d)


def field_real_weight(y, z) -> ComplexValue:
    """w = (1 + z^2 + z(y^2 + y^-2)) / (1 + z)^2, real for unit y and z."""
    y, z = _v(y), _v(z)
    den = (1 + z) ** 2
    if _is_zero(den):
        raise ChainError("field z = -1 is excluded")
    return (1 + z * z + z * (y * y + y ** -2)) / den


def field_real_weight_gadget(y, z) -> FieldGadget:
    """Parallel pair of 2-stretches, one with y and one with 1/y, field z inside."""
    y, z = _v(y), _v(z)
    graph = Multigraph(4, ((0, 2), (2, 1), (0, 3), (3, 1)))
    yi = y ** -1
    inst = _with_terminal_fields_one(graph, [y, y, yi, yi], z, 0, 1)
    same = 1 + z * z + z * (y * y + yi * yi)
    diff = (1 + z) ** 2
    return FieldGadget(inst, 0, 1, (GadgetStep("STRETCH", 2),), ((same, diff), (diff, same)), diff)


@dataclass(frozen=True)
class FieldGadgetParams:
    w: ComplexValue
    t: int
    r: int
    alpha: ComplexValue
    scale: ComplexValue
    mu: ComplexValue | None = None


@dataclass(frozen=True)
class FieldConstruction:
    inst: IsingInstance
    params: FieldGadgetParams
    residual_bound: arb
    n_original: int

    def residual(self, target: ComplexValue, cap: int = DEFAULT_CAP) -> ComplexValue:
        """Z(G')/scale - target, exactly."""
        return z_ising(self.inst, cap) / self.params.scale - target

    def residual_within_bound(self, target: ComplexValue, cap: int = DEFAULT_CAP, prec: int = 256) -> bool:
        res = self.residual(target, cap)
        with working_precision(prec):
            mag = abs(res.enclose(prec)) if isinstance(res, Cyclo) else abs(res.ball)
            if mag <= self.residual_bound:
                return True
            if mag > self.residual_bound:
                return False
        raise ArithmeticError("residual comparison undecided")


def _abs_arb(v: ComplexValue, prec: int) -> arb:
    with working_precision(prec):
        return abs(v.enclose(prec)) if isinstance(v, Cyclo) else abs(v.ball)


def _real_abs_lt_one(w: ComplexValue) -> bool:
    if isinstance(w, Cyclo):
        if not w.is_real():
            raise ChainError("implemented interaction w must be real")
        return (w.abs2() - 1).sign() < 0
    m = w.abs2().ball.real
    if m < 1:
        return True
    if m > 1:
        return False
    raise ArithmeticError("cannot decide |w| against 1")


def field_cancel_construct(g: Multigraph, y, z, w, t: int, prec: int = 256) -> FieldConstruction:
    """Pendant partner per vertex, joined by 2t parallel w-edges; every vertex gets field z.

    Z(G'; y, z) / (w^2t + z)^n approximates Z(G; y) with error at most
    e * 2^n * n^2 * |alpha|, alpha = w^2t (z^2 - 1)/(w^2t + z).
    With w = 0 a single inequality edge per partner cancels the field exactly.
    """
    y, z, w = _v(y), _v(z), _v(w)
    if t < 1:
        raise ChainError("t must be positive")
    if not _real_abs_lt_one(w):
        raise ChainError("field cancelling needs a real |w| < 1")
    n = g.n
    partner_edges: list[tuple[int, int]] = []
    phi: list[ComplexValue] = [y] * g.m
    if _is_zero(w):
        for v in range(n):
            partner_edges.append((v, n + v))
            phi.append(Cyclo.rational(0))
        scale = z**n
        params = FieldGadgetParams(w, t, 1, Cyclo.rational(0), scale)
    else:
        for v in range(n):
            for _ in range(2 * t):
                partner_edges.append((v, n + v))
                phi.append(w)
        w2t = w ** (2 * t)
        den = w2t + z
        if _is_zero(den):
            raise ChainError("w^2t + z vanishes")
        alpha = w2t * (z * z - 1) / den
        params = FieldGadgetParams(w, t, 1, alpha, den**n)
    graph = Multigraph(2 * n, g.edges + tuple(partner_edges))
    inst = IsingInstance(graph, tuple(phi), (z,) * (2 * n))
    with working_precision(prec):
        bound = arb(1).exp() * arb(2) ** n * arb(n) ** 2 * _abs_arb(params.alpha, prec)
    return FieldConstruction(inst, params, bound, n)


def field_power_construct(g: Multigraph, y, z, w, t: int, r: int, prec: int = 256) -> FieldConstruction:
    """r - 1 pendant partners per vertex, each joined by 2t parallel w-edges.

    Z(G'; y, z) / (w^2t + z)^(n(r-1)) approximates Z(G; y, z^r) within 4^n |alpha|,
    alpha = z((z + mu)^(r-1) - z^(r-1)), mu = (1 - z^2)/(w^2t + z).
    """
    y, z, w = _v(y), _v(z), _v(w)
    if t < 1 or r < 1:
        raise ChainError("need t >= 1 and r >= 1")
    if _real_abs_lt_one(w):
        raise ChainError("field powering needs a real |w| > 1")
    n = g.n
    w2t = w ** (2 * t)
    den = w2t + z
    if _is_zero(den):
        raise ChainError("w^2t + z vanishes")
    mu = (1 - z * z) / den
    alpha = z * ((z + mu) ** (r - 1) - z ** (r - 1))
    edges = list(g.edges)
    phi: list[ComplexValue] = [y] * g.m
    nxt = n
    for v in range(n):
        for _ in range(r - 1):
            for _ in range(2 * t):
                edges.append((v, nxt))
                phi.append(w)
            nxt += 1
    inst = IsingInstance(Multigraph(nxt, tuple(edges)), tuple(phi), (z,) * nxt)
    scale = den ** (n * (r - 1))
    with working_precision(prec):
        bound = arb(4) ** n * _abs_arb(alpha, prec)
    return FieldConstruction(inst, FieldGadgetParams(w, t, r, alpha, scale, mu), bound, n)
