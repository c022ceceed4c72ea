"""Command-line front end.

Exit codes: 0 success, 1 a verification suite failed, 2 input error,
3 enumeration cap exceeded, 4 an exact comparison was INDETERMINATE.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path
from typing import Callable

from flint import arb

from . import __version__
from .classify import PointClassification, TutteSignPoint, classify_ising, classify_ising_field, classify_tutte_sign
from .counting import (
    DEFAULT_NOISE,
    brute_force_maxcut,
    count_min_cuts_bisection,
    count_min_cuts_brute,
    maxcut_threshold_check,
)
from .gadgets import ChainError, chain_to_negative_unit, verify_chain
from .graphcore import (
    CapExceededError,
    GraphFile,
    IsingInstance,
    Multigraph,
    RandomClusterInstance,
    TuttePoint,
    graph_file_from,
    parse_graph,
    serialize_graph,
)
from .iqp import (
    CircuitFormatError,
    IqpCircuit,
    cz_expand,
    encode_full,
    encode_partial,
    encoding_probability,
    parse_circuit,
    statevector_prob,
)
from .numerics import ROU, Cyclo, WeightSpecError, parse_weight, parse_weight_spec
from .numerics.bounds import partition_lower_bound
from .numerics.precision import working_precision
from .numerics.values import Approx, ComplexValue, as_value, is_zero_exact
from .partition import z_ising, z_tutte_rc, tutte

__all__ = ["CliConfig", "main", "numeric_json", "run"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP, EXIT_INDETERMINATE = 0, 1, 2, 3, 4


class InputError(ValueError):
    pass


class Indeterminate(ArithmeticError):
    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


@dataclass(frozen=True)
class CliConfig:
    precision: int = 256
    format: str = "text"
    seed: int = 0
    cap_n: int = 24
    cap_m: int = 24
    noise: Fraction = DEFAULT_NOISE

    def __post_init__(self):
        if self.precision < 64:
            raise InputError("--precision must be at least 64 bits")
        if self.format not in ("text", "json"):
            raise InputError("--format is json or text")


# -- numeric output -----------------------------------------------------------


def numeric_json(v: ComplexValue, prec: int = 256) -> dict:
    """{exact, decimal, error_radius}; ``exact`` is null for ball values."""
    v = as_value(v)
    digits = max(15, min(60, int(prec * 0.30103) - 2))
    ball = v.enclose(prec) if isinstance(v, Cyclo) else v.ball
    with working_precision(prec):
        re, im = ball.real, ball.imag
        radius = (re.rad() + im.rad()) if isinstance(v, Approx) else arb(0)
        real = isinstance(v, Cyclo) and v.is_real()
        decimal = _decimal(re, im, digits, real)
    exact = None
    if isinstance(v, Cyclo):
        exact = {"order": v.order, "coeffs": [str(c) for c in v.coeffs], "text": pretty(v)}
    return {"exact": exact, "decimal": decimal, "error_radius": radius.str(5, radius=False) if radius else "0"}


def _decimal(re: arb, im: arb, digits: int, real: bool = False) -> str:
    r = re.mid().str(digits, radius=False)
    if real or im.is_zero():
        return r
    i = im.mid().str(digits, radius=False)
    sign = "-" if i.startswith("-") else "+"
    return f"{r} {sign} {i.lstrip('-')}i"


def pretty(v: ComplexValue) -> str:
    """Readable exact form: a + bi when both parts are rational, else a polynomial in z."""
    if isinstance(v, Approx):
        return str(v)
    if v.is_rational():
        return str(v.to_fraction())
    if v.order % 4 == 0 or v.order <= 2:
        re, im = v.real_part(), v.imag_part()
        if re.is_rational() and im.is_rational():
            a, b = re.to_fraction(), im.to_fraction()
            ib = "i" if b == 1 else "-i" if b == -1 else f"{b}i"
            if a == 0:
                return ib
            return f"{a} {'-' if b < 0 else '+'} {ib.lstrip('-')}"
    quad = _sqrt2_form(v)
    return quad if quad is not None else str(v)


def _galois(v: Cyclo, j: int) -> Cyclo:
    """Image of v under zeta -> zeta**j."""
    n = v.order
    out = [Fraction(0)] * n
    for i, c in enumerate(v.coeffs):
        out[i * j % n] += c
    return Cyclo.from_coeffs(n, out)


def _sqrt2_form(v: Cyclo) -> str | None:
    """``(a + b*sqrt(2))/d`` when v lies in Q(sqrt 2), else None."""
    if v.order % 8 or not v.is_real():
        return None
    j = next(j for j in range(5, 8 * v.order, 8) if gcd(j, v.order) == 1)
    root2 = Cyclo.root_of_unity(1, 8) + Cyclo.root_of_unity(7, 8)
    conj = _galois(v, j)
    a, b = (v + conj) / 2, (v - conj) / (2 * root2)
    if not (a.is_rational() and b.is_rational()):
        return None
    a, b = a.to_fraction(), b.to_fraction()
    d = lcm(a.denominator, b.denominator)
    na, nb = a * d, b * d
    body = f"{na} {'-' if nb < 0 else '+'} {abs(nb) if abs(nb) != 1 else ''}sqrt(2)".replace(" sqrt", " sqrt")
    return f"({body})/{d}" if d != 1 else body


# -- input helpers ------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _weight(text: str | None, prec: int) -> ComplexValue | None:
    if text is None:
        return None
    return parse_weight(parse_weight_spec(text), prec)


def _terminals(gf: GraphFile, s: int | None, t: int | None) -> tuple[int, int]:
    if s is not None and t is not None:
        return s, t
    if gf.terminals is None:
        raise InputError("give --s/--t or a terminals line in the graph file")
    return gf.terminals


def _as_rou(v: Cyclo) -> ROU:
    n = 2 * v.order
    for k in range(n):
        if Cyclo.root_of_unity(k, n) == v:
            g = gcd(k, n)
            return ROU(k // g, n // g)
    raise ValueError("value is not a root of unity")


# -- subcommands --------------------------------------------------------------


def cmd_eval(args, cfg: CliConfig) -> dict:
    gf = parse_graph(_read(args.graph))
    p = cfg.precision
    with working_precision(p):
        if args.model == "ising":
            inst = gf.to_ising(_weight(args.y, p), _weight(args.field, p) or 1, p)
            z = z_ising(inst, cap=cfg.cap_n)
        elif args.model == "rc":
            q = _weight(args.q, p)
            if q is None:
                raise InputError("random-cluster evaluation needs --q")
            inst = RandomClusterInstance(gf.graph, q, gf.interactions(_weight(args.y, p), p))
            z = z_tutte_rc(inst, cap=cfg.cap_m)
        else:
            if args.x is None or args.y is None:
                raise InputError("Tutte evaluation needs --x and --y")
            z = tutte(gf.graph, TuttePoint(_weight(args.x, p), _weight(args.y, p)), cap=cfg.cap_m)
    out = {"command": "eval", "model": args.model, "n": gf.graph.n, "m": gf.graph.m, "Z": numeric_json(z, p)}
    zero = is_zero_exact(z)
    out["is_zero"] = "INDETERMINATE" if zero is None else zero
    if zero is None:
        raise Indeterminate("Z is not certifiably nonzero at this precision", out)
    return out


def _classification_json(c: PointClassification) -> dict:
    d = {"verdict": c.verdict.value, "table": c.table, "item": c.item, "notes": list(c.notes)}
    if c.witness is not None:
        d["witness"] = {
            "steps": [str(s) for s in c.witness.steps],
            "effective_weight": pretty(c.witness.effective_weight),
        }
    return d


def cmd_classify(args, cfg: CliConfig) -> dict:
    if args.tutte_sign is not None:
        a, b = args.tutte_sign
        c = classify_tutte_sign(TutteSignPoint(a, b))
    elif args.y is None:
        raise InputError("classify needs --y (and optionally --z) or --tutte-sign A B")
    elif args.z is not None:
        c = classify_ising_field(parse_weight_spec(args.y), parse_weight_spec(args.z))
    else:
        c = classify_ising(parse_weight_spec(args.y))
    return {"command": "classify", **_classification_json(c)}


def _load_circuit(path: str):
    circuit, meas = parse_circuit(_read(path))
    if any(g.kind == "CZ" for g in circuit.gates):
        circuit = cz_expand(circuit)
    return circuit, meas


def _encoding(circuit: IqpCircuit, meas):
    if len(meas.measured) == circuit.n and tuple(meas.measured) == tuple(range(circuit.n)):
        return encode_full(circuit, meas.outcome)
    return encode_partial(circuit, meas)


def cmd_encode_iqp(args, cfg: CliConfig) -> dict:
    circuit, meas = _load_circuit(args.circuit)
    enc = _encoding(circuit, meas)
    inst = enc.inst
    gf = graph_file_from(
        inst.graph,
        edge_weights=[_as_rou(w) for w in inst.phi],
        fields={v: _as_rou(t) for v, t in enumerate(inst.tau) if t != 1},
    )
    return {
        "command": "encode-iqp",
        "kind": enc.kind,
        "scale_exponent": enc.scale_exponent,
        "unmeasured": enc.s_unmeasured,
        "graph": serialize_graph(gf),
    }


def cmd_simulate_iqp(args, cfg: CliConfig) -> dict:
    circuit, meas = _load_circuit(args.circuit)
    direct = statevector_prob(circuit, meas)
    enc = _encoding(circuit, meas)
    via = encoding_probability(enc, cap=cfg.cap_n)
    return {
        "command": "simulate-iqp",
        "probability": numeric_json(direct, cfg.precision),
        "ising_route": numeric_json(via, cfg.precision),
        "encoding": enc.kind,
        "agree": direct == via,
    }


def cmd_gadget_chain(args, cfg: CliConfig) -> dict:
    chain = chain_to_negative_unit(parse_weight_spec(args.y), max_k=args.max_k)
    check = verify_chain(chain, cap=cfg.cap_n)
    return {
        "command": "gadget-chain",
        "steps": [str(s) for s in chain.steps],
        "effective_weight": numeric_json(chain.effective_weight, cfg.precision),
        "prefactor_per_edge": numeric_json(chain.prefactor_per_edge, cfg.precision),
        "brute_force_agrees": check.matches,
        "check_method": check.method,
    }


def cmd_count_mincut(args, cfg: CliConfig) -> dict:
    gf = parse_graph(_read(args.graph))
    s, t = _terminals(gf, args.s, args.t)
    got = count_min_cuts_bisection(gf.graph, s, t, cfg.noise, cfg.seed)
    ref = count_min_cuts_brute(gf.graph, s, t)
    return {
        "command": "count-mincut",
        "k": got.k,
        "C": got.C,
        "noise": str(cfg.noise),
        "seed": cfg.seed,
        "brute_force": {"k": ref.k, "C": ref.C},
        "agree": got == ref,
    }


def cmd_maxcut(args, cfg: CliConfig) -> dict:
    gf = parse_graph(_read(args.graph))
    y = _weight(args.y, cfg.precision)
    decision, info = maxcut_threshold_check(gf.graph, args.b, y, return_details=True)
    best = brute_force_maxcut(gf.graph)
    return {
        "command": "maxcut",
        "b": args.b,
        "thickening": info["k"],
        "maxcut_at_least_b": decision,
        "brute_force_maxcut": best,
        "agree": decision == (best >= args.b),
    }


def cmd_bounds(args, cfg: CliConfig) -> dict:
    y = parse_weight_spec(args.y)
    z = parse_weight_spec(args.z) if args.z else None
    n, m = args.n, args.m
    gf = None
    if args.graph:
        gf = parse_graph(_read(args.graph))
        n, m = gf.graph.n, gf.graph.m
    if n is None or m is None:
        raise InputError("bounds needs --n and --m, or --graph")
    b = partition_lower_bound(y, z, n, m)
    with working_precision(cfg.precision):
        bound = b.bound(cfg.precision)
    out = {
        "command": "bounds",
        "n": n,
        "m": m,
        "bound_squared": str(b.bound_sq),
        "bound": {"exact": None, "decimal": bound.mid().str(20, radius=False),
                  "error_radius": bound.rad().str(5, radius=False)},
        "degree": b.degree,
        "height": b.height,
    }
    if gf is not None:
        inst = IsingInstance.uniform(gf.graph, parse_weight(y), parse_weight(z) if z else 1)
        val = z_ising(inst, cap=cfg.cap_n)
        out["Z"] = numeric_json(val, cfg.precision)
        out["Z_is_zero"] = val.is_zero()
        out["Z_exceeds_bound"] = (not val.is_zero()) and b.exceeded_by(val)
    return out


# -- verification suites -------------------------------------------------------


def _random_graph(rng: random.Random, n_max: int, m_max: int) -> Multigraph:
    n = rng.randint(1, n_max)
    m = rng.randint(0, m_max)
    return Multigraph(n, tuple((rng.randrange(n), rng.randrange(n)) for _ in range(m)))


def _suite_ising_rc(rng: random.Random, count: int) -> bool:
    for _ in range(count):
        g = _random_graph(rng, 6, 8)
        y = Cyclo.root_of_unity(rng.randrange(16), 16)
        z = z_ising(IsingInstance.uniform(g, y))
        rc = z_tutte_rc(RandomClusterInstance.uniform(g, 2, y - 1))
        if z != rc:
            return False
    return True


def _suite_tutte(rng: random.Random, count: int) -> bool:
    from .graphcore import connected_components

    for _ in range(count):
        g = _random_graph(rng, 5, 7)
        x = Cyclo.root_of_unity(rng.randrange(1, 8), 8) + 2
        yv = Cyclo.root_of_unity(rng.randrange(8), 8) + 3
        q = (x - 1) * (yv - 1)
        rc = z_tutte_rc(RandomClusterInstance.uniform(g, q, yv - 1))
        k = connected_components(g)
        lhs = (x - 1) ** k * (yv - 1) ** g.n
        if rc != tutte(g, TuttePoint(x, yv)) * lhs:
            return False
    return True


def _random_circuit(rng: random.Random, n_max: int, gates_max: int, allow_cz: bool) -> IqpCircuit:
    from .iqp import Gate

    n = rng.randint(1, n_max)
    kinds = ["P"] + (["ZZ"] if n > 1 else []) + (["CZ"] if allow_cz and n > 1 else [])
    gates = []
    for _ in range(rng.randint(0, gates_max)):
        kind = rng.choice(kinds)
        if kind == "P":
            gates.append(Gate("P", (rng.randrange(n),)))
        else:
            i, j = rng.sample(range(n), 2)
            gates.append(Gate(kind, (i, j)))
    return IqpCircuit(n, (1, 8), tuple(gates))


def _suite_iqp(rng: random.Random, count: int) -> bool:
    from itertools import product

    from .iqp import IqpMeasurement

    for _ in range(count):
        c = _random_circuit(rng, 4, 8, allow_cz=False)
        for bits in product((0, 1), repeat=c.n):
            meas = IqpMeasurement.full(bits)
            if statevector_prob(c, meas) != encoding_probability(encode_full(c, bits)):
                return False
    return True


def _suite_cz(rng: random.Random, count: int) -> bool:
    from itertools import product

    from .iqp import IqpMeasurement, cz_matrix_identity

    lhs, rhs = cz_matrix_identity()
    if lhs != rhs:
        return False
    for _ in range(count):
        c = _random_circuit(rng, 4, 6, allow_cz=True)
        e = cz_expand(c)
        for bits in product((0, 1), repeat=c.n):
            meas = IqpMeasurement.full(bits)
            if statevector_prob(c, meas) != statevector_prob(e, meas):
                return False
    return True


def _suite_gadgets(rng: random.Random, count: int) -> bool:
    for _ in range(count):
        n = rng.choice([3, 5, 6, 8, 10, 12, 16])
        k = rng.randrange(1, n)
        try:
            chain = chain_to_negative_unit(ROU(k, n))
        except ChainError:
            continue
        if not verify_chain(chain).matches:
            return False
    return True


SUITES: dict[str, Callable[[random.Random, int], bool]] = {
    "ising-rc": _suite_ising_rc,
    "tutte": _suite_tutte,
    "iqp": _suite_iqp,
    "cz": _suite_cz,
    "gadgets": _suite_gadgets,
}


def cmd_verify(args, cfg: CliConfig) -> dict:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = {}
    for name in names:
        results[name] = SUITES[name](random.Random(f"{cfg.seed}:{name}"), args.count)
    return {"command": "verify", "seed": cfg.seed, "count": args.count, "suites": results,
            "passed": all(results.values())}


# -- argument parsing ---------------------------------------------------------


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256, help="working precision in bits (>= 64)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-n", type=int, default=24, help="max vertices for spin enumeration")
    common.add_argument("--cap-m", type=int, default=24, help="max edges for edge-subset enumeration")
    common.add_argument("--noise", type=_fraction, default=DEFAULT_NOISE, help="oracle noise factor K, e.g. 22/21")

    p = _Parser(prog="isingcx", description="Exact Ising / Tutte evaluation and reductions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="evaluate a partition function")
    e.add_argument("--graph", required=True)
    e.add_argument("--model", choices=("ising", "rc", "tutte"), default="ising")
    e.add_argument("--y", help="edge interaction (ising, rc weight) or Tutte y")
    e.add_argument("--field", help="uniform vertex field for vertices without a field line")
    e.add_argument("--q", help="cluster weight for --model rc")
    e.add_argument("--x", help="Tutte x")
    e.set_defaults(fn=cmd_eval)

    c = sub.add_parser("classify", parents=[common], help="complexity verdict for a parameter point")
    c.add_argument("--y")
    c.add_argument("--z")
    c.add_argument("--tutte-sign", nargs=2, type=int, metavar=("A", "B"))
    c.set_defaults(fn=cmd_classify)

    for name, fn, text in (
        ("encode-iqp", cmd_encode_iqp, "write the Ising instance for a circuit"),
        ("simulate-iqp", cmd_simulate_iqp, "exact output probability of a circuit"),
    ):
        q = sub.add_parser(name, parents=[common], help=text)
        q.add_argument("--circuit", required=True)
        q.set_defaults(fn=fn)

    g = sub.add_parser("gadget-chain", parents=[common], help="stretch/thicken chain to a weight in (-1, 0)")
    g.add_argument("--y", required=True)
    g.add_argument("--max-k", type=int, default=4096)
    g.set_defaults(fn=cmd_gadget_chain)

    mc = sub.add_parser("count-mincut", parents=[common], help="count minimum s-t cuts through a noisy oracle")
    mc.add_argument("--graph", required=True)
    mc.add_argument("--s", type=int)
    mc.add_argument("--t", type=int)
    mc.set_defaults(fn=cmd_count_mincut)

    mx = sub.add_parser("maxcut", parents=[common], help="decide maxcut >= b from |Z| at a small weight")
    mx.add_argument("--graph", required=True)
    mx.add_argument("--b", type=int, required=True)
    mx.add_argument("--y", default="real(1/2)")
    mx.set_defaults(fn=cmd_maxcut)

    b = sub.add_parser("bounds", parents=[common], help="lower bound on nonzero |Z|")
    b.add_argument("--y", required=True)
    b.add_argument("--z")
    b.add_argument("--n", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--graph")
    b.set_defaults(fn=cmd_bounds)

    v = sub.add_parser("verify", parents=[common], help="run the cross-identity suites")
    v.add_argument("--suite", choices=("all", *SUITES), default="all")
    v.add_argument("--count", type=int, default=10)
    v.set_defaults(fn=cmd_verify)
    return p


# -- output -------------------------------------------------------------------


def _emit_text(obj, out, indent: int = 0) -> None:
    pad = "  " * indent
    for key, val in obj.items():
        if isinstance(val, dict) and set(val) == {"exact", "decimal", "error_radius"}:
            if val["exact"] is None:
                out.write(f"{pad}{key}: {val['decimal']} (+- {val['error_radius']})\n")
            else:
                out.write(f"{pad}{key}: {val['exact']['text']}  [{val['decimal']}]\n")
        elif isinstance(val, dict):
            out.write(f"{pad}{key}:\n")
            _emit_text(val, out, indent + 1)
        elif isinstance(val, str) and "\n" in val:
            out.write(f"{pad}{key}:\n")
            for line in val.rstrip("\n").splitlines():
                out.write(f"{pad}  {line}\n")
        else:
            out.write(f"{pad}{key}: {val}\n")


def _emit(obj: dict, cfg: CliConfig, out) -> None:
    if cfg.format == "json":
        out.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        _emit_text(obj, out)


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = CliConfig(args.precision, args.format, args.seed, args.cap_n, args.cap_m, args.noise)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        result = args.fn(args, cfg)
    except Indeterminate as exc:
        _emit(exc.payload, cfg, out)
        err.write(f"INDETERMINATE: {exc}\n")
        return EXIT_INDETERMINATE
    except CapExceededError as exc:
        err.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except (InputError, WeightSpecError, CircuitFormatError, ChainError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    _emit(result, cfg, out)
    if result.get("passed") is False or result.get("agree") is False or result.get("brute_force_agrees") is False:
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
