"""Multigraphs, weighted Ising / random-cluster instances, and the graph file format.

Graph file grammar (line oriented, ``#`` starts a comment)::

    graph <n> [default_edge <weight>]
    edge <u> <v> [<weight>]
    field <v> <weight>
    terminals <s> <t>
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .numerics import ComplexValue, WeightSpec, format_weight, parse_weight, parse_weight_spec
from .numerics.values import DEFAULT_PRECISION, as_value

__all__ = [
    "CapExceededError",
    "GraphFile",
    "GraphFormatError",
    "IsingInstance",
    "Multigraph",
    "RandomClusterInstance",
    "TuttePoint",
    "UnionFind",
    "connected_components",
    "degrees",
    "disjoint_union",
    "disjoint_union_instance",
    "graph_file_from",
    "parse_graph",
    "serialize_graph",
]


class GraphFormatError(ValueError):
    pass


class CapExceededError(RuntimeError):
    """An exhaustive evaluator was asked to go beyond its configured size limit."""


@dataclass(frozen=True)
class Multigraph:
    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("vertex count must be non-negative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge ({u},{v}): endpoint out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def add_edges(self, extra: Iterable[tuple[int, int]]) -> Multigraph:
        return Multigraph(self.n, self.edges + tuple(extra))


class UnionFind:
    """Union-find with union by size and an undo stack (no path compression)."""

    __slots__ = ("parent", "size", "components", "_history")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n
        self._history: list[int] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self._history.append(-1)
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        self._history.append(rb)
        return True

    def undo(self) -> None:
        rb = self._history.pop()
        if rb < 0:
            return
        ra = self.parent[rb]
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]
        self.components += 1


def connected_components(g: Multigraph, subset: Iterable[int] | None = None) -> int:
    """kappa(V, A): number of components of the spanning subgraph with edge set A."""
    uf = UnionFind(g.n)
    for e in range(g.m) if subset is None else subset:
        u, v = g.edges[e]
        uf.union(u, v)
    return uf.components


def degrees(g: Multigraph) -> list[int]:
    """Vertex degrees; a self-loop counts twice."""
    deg = [0] * g.n
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def disjoint_union(g: Multigraph, k: int) -> Multigraph:
    if k < 1:
        raise ValueError("need at least one copy")
    edges = [(u + c * g.n, v + c * g.n) for c in range(k) for u, v in g.edges]
    return Multigraph(g.n * k, tuple(edges))


@dataclass(frozen=True)
class IsingInstance:
    """Non-uniform Ising instance: edge interactions phi and vertex fields tau."""

    graph: Multigraph
    phi: tuple
    tau: tuple

    def __post_init__(self):
        phi = tuple(as_value(p) for p in self.phi)
        tau = tuple(as_value(t) for t in self.tau)
        if len(phi) != self.graph.m:
            raise ValueError("need one interaction per edge")
        if len(tau) != self.graph.n:
            raise ValueError("need one field per vertex")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "tau", tau)

    @classmethod
    def uniform(cls, graph: Multigraph, y, lam=1) -> IsingInstance:
        return cls(graph, (as_value(y),) * graph.m, (as_value(lam),) * graph.n)


@dataclass(frozen=True)
class RandomClusterInstance:
    graph: Multigraph
    q: ComplexValue
    gamma: tuple

    def __post_init__(self):
        gamma = tuple(as_value(x) for x in self.gamma)
        if len(gamma) != self.graph.m:
            raise ValueError("need one weight per edge")
        object.__setattr__(self, "q", as_value(self.q))
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def uniform(cls, graph: Multigraph, q, gamma) -> RandomClusterInstance:
        return cls(graph, q, (as_value(gamma),) * graph.m)


@dataclass(frozen=True)
class TuttePoint:
    x: ComplexValue
    y: ComplexValue

    def __post_init__(self):
        object.__setattr__(self, "x", as_value(self.x))
        object.__setattr__(self, "y", as_value(self.y))

    @property
    def q(self) -> ComplexValue:
        return (self.x - 1) * (self.y - 1)


def disjoint_union_instance(inst: IsingInstance, k: int) -> IsingInstance:
    return IsingInstance(disjoint_union(inst.graph, k), inst.phi * k, inst.tau * k)


# -- file format --------------------------------------------------------------


@dataclass
class GraphFile:
    """Parsed graph file, keeping the weight specs so it can be written back."""

    graph: Multigraph
    default_edge: WeightSpec | None = None
    edge_weights: list = field(default_factory=list)  # WeightSpec or None per edge
    fields: dict = field(default_factory=dict)  # vertex -> WeightSpec
    terminals: tuple[int, int] | None = None

    def interactions(self, default=None, precision: int = DEFAULT_PRECISION) -> tuple:
        """Per-edge values; unweighted edges take ``default`` (or the header default)."""
        base = default
        if base is None and self.default_edge is not None:
            base = parse_weight(self.default_edge, precision)
        out = []
        for spec in self.edge_weights:
            if spec is not None:
                out.append(parse_weight(spec, precision))
            elif base is None:
                raise GraphFormatError("edge without weight and no default interaction")
            else:
                out.append(as_value(base))
        return tuple(out)

    def field_values(self, default=1, precision: int = DEFAULT_PRECISION) -> tuple:
        return tuple(
            parse_weight(self.fields[v], precision) if v in self.fields else as_value(default)
            for v in range(self.graph.n)
        )

    def to_ising(self, default_edge=None, default_field=1, precision: int = DEFAULT_PRECISION) -> IsingInstance:
        return IsingInstance(
            self.graph,
            self.interactions(default_edge, precision),
            self.field_values(default_field, precision),
        )


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError as exc:
        raise GraphFormatError(f"line {lineno}: expected an integer, got {tok!r}") from exc


def _split_weight(rest: str, lineno: int) -> WeightSpec:
    try:
        return parse_weight_spec(rest)
    except ValueError as exc:
        raise GraphFormatError(f"line {lineno}: {exc}") from exc


def parse_graph(text: str) -> GraphFile:
    header: tuple[int, WeightSpec | None] | None = None
    edges: list[tuple[int, int]] = []
    weights: list = []
    fields: dict = {}
    terminals = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 3)
        kw = parts[0].lower()
        if kw == "graph":
            if header is not None:
                raise GraphFormatError(f"line {lineno}: second graph header")
            if len(parts) < 2:
                raise GraphFormatError(f"line {lineno}: graph header needs a vertex count")
            n = _int(parts[1], lineno)
            default = None
            if len(parts) > 2:
                if parts[2].lower() != "default_edge" or len(parts) < 4:
                    raise GraphFormatError(f"line {lineno}: expected default_edge <weight>")
                default = _split_weight(parts[3], lineno)
            header = (n, default)
            continue
        if header is None:
            raise GraphFormatError(f"line {lineno}: graph header must come first")
        n = header[0]
        if kw == "edge":
            if len(parts) < 3:
                raise GraphFormatError(f"line {lineno}: edge needs two endpoints")
            u, v = _int(parts[1], lineno), _int(parts[2], lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: endpoint out of range")
            edges.append((u, v))
            weights.append(_split_weight(parts[3], lineno) if len(parts) > 3 else None)
        elif kw == "field":
            rest = line.split(None, 2)
            if len(rest) < 3:
                raise GraphFormatError(f"line {lineno}: field needs a vertex and a weight")
            v = _int(rest[1], lineno)
            if not 0 <= v < n:
                raise GraphFormatError(f"line {lineno}: vertex out of range")
            if v in fields:
                raise GraphFormatError(f"line {lineno}: duplicate field for vertex {v}")
            fields[v] = _split_weight(rest[2], lineno)
        elif kw == "terminals":
            toks = line.split()
            if len(toks) != 3:
                raise GraphFormatError(f"line {lineno}: terminals needs two vertices")
            s, t = _int(toks[1], lineno), _int(toks[2], lineno)
            if not (0 <= s < n and 0 <= t < n):
                raise GraphFormatError(f"line {lineno}: terminal out of range")
            terminals = (s, t)
        else:
            raise GraphFormatError(f"line {lineno}: unknown keyword {parts[0]!r}")
    if header is None:
        raise GraphFormatError("missing graph header")
    return GraphFile(Multigraph(header[0], tuple(edges)), header[1], weights, fields, terminals)


def serialize_graph(gf: GraphFile) -> str:
    head = f"graph {gf.graph.n}"
    if gf.default_edge is not None:
        head += f" default_edge {format_weight(gf.default_edge)}"
    lines = [head]
    for (u, v), spec in zip(gf.graph.edges, gf.edge_weights):
        lines.append(f"edge {u} {v}" + ("" if spec is None else f" {format_weight(spec)}"))
    for v in sorted(gf.fields):
        lines.append(f"field {v} {format_weight(gf.fields[v])}")
    if gf.terminals is not None:
        lines.append(f"terminals {gf.terminals[0]} {gf.terminals[1]}")
    return "\n".join(lines) + "\n"


def graph_file_from(graph: Multigraph, edge_weights: Sequence | None = None, fields: dict | None = None,
                    default_edge: WeightSpec | None = None, terminals=None) -> GraphFile:
    return GraphFile(
        graph,
        default_edge,
        list(edge_weights) if edge_weights is not None else [None] * graph.m,
        dict(fields or {}),
        terminals,
    )
