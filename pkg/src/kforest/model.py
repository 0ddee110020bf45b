"""Graph, demand and instance types plus the cut predicates shared by every module.

Vertices are 1-indexed labels as they appear in instance files. Edges and
demands are referred to by their 0-based position in the instance lists.
All real-valued quantities are ``fractions.Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


class InvalidInstance(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def parse_rat(text) -> Fraction:
    """Parse ``"p/q"``, an integer string, or an int into an exact rational.

    Floats are refused: a float has already lost exactness.
    """
    if isinstance(text, float):
        raise ValueError("floats are not accepted as exact rationals: %r" % (text,))
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    s = str(text).strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError("not an exact rational: %r" % (text,))
    return Fraction(s)


def fmt_rat(x) -> str:
    """Serialize a rational as ``"p/q"`` (denominator always present)."""
    x = Fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    cost: int


@dataclass(frozen=True)
class DemandPair:
    s: int
    t: int


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))


@dataclass(frozen=True)
class Instance:
    graph: WeightedGraph
    demands: tuple[DemandPair, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "demands", tuple(self.demands))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return len(self.demands)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @classmethod
    def build(cls, n: int, edges: Iterable, demands: Iterable, k: int) -> "Instance":
        """Convenience constructor from plain tuples ``(u, v, c)`` and ``(s, t)``."""
        return cls(
            WeightedGraph(n, tuple(Edge(*e) for e in edges)),
            tuple(DemandPair(*d) for d in demands),
            k,
        )


@dataclass(frozen=True)
class InstanceStats:
    c_min: int
    c_total: int
    m: int
    k: int
    n: int
    disconnected_demand_count: int


class UnionFind:
    """Disjoint sets over vertices ``1..n`` with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the smaller label as root so component ids are deterministic
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _components(n: int, edges: Iterable[Edge]) -> UnionFind:
    uf = UnionFind(n)
    for e in edges:
        uf.union(e.u, e.v)
    return uf


def validate_instance(inst: Instance) -> InstanceStats:
    n = inst.graph.n
    if not isinstance(n, int) or n < 1:
        raise InvalidInstance("vertex count must be a positive integer")
    for i, e in enumerate(inst.edges):
        if not (1 <= e.u <= n and 1 <= e.v <= n):
            raise InvalidInstance("edge %d: vertex index out of range" % i)
        if e.u == e.v:
            raise InvalidInstance("edge %d: self-loop" % i)
        if not isinstance(e.cost, int) or e.cost < 1:
            raise InvalidInstance("edge %d: nonpositive cost" % i)
    if inst.m < 1:
        raise InvalidInstance("at least one demand is required")
    for i, d in enumerate(inst.demands):
        if not (1 <= d.s <= n and 1 <= d.t <= n):
            raise InvalidInstance("demand %d: vertex index out of range" % i)
        if d.s == d.t:
            raise InvalidInstance("demand %d: endpoints coincide" % i)
    if not (0 <= inst.k <= inst.m):
        raise InvalidInstance("k must satisfy 0 <= k <= m (k=%d, m=%d)" % (inst.k, inst.m))

    costs = [e.cost for e in inst.edges]
    uf = _components(n, inst.edges)
    disconnected = sum(1 for d in inst.demands if uf.find(d.s) != uf.find(d.t))
    return InstanceStats(
        c_min=min(costs) if costs else 0,
        c_total=sum(costs),
        m=inst.m,
        k=inst.k,
        n=n,
        disconnected_demand_count=disconnected,
    )


def cut_separates(S, d: DemandPair) -> bool:
    return (d.s in S) != (d.t in S)


def cut_edges(g: WeightedGraph, S) -> set[int]:
    return {i for i, e in enumerate(g.edges) if (e.u in S) != (e.v in S)}


def connected_demands(g: WeightedGraph, F: Iterable[int], demands: Sequence[DemandPair]) -> set[int]:
    uf = _components(g.n, (g.edges[i] for i in F))
    return {i for i, d in enumerate(demands) if uf.find(d.s) == uf.find(d.t)}


def edge_cost(g: WeightedGraph, F: Iterable[int]) -> int:
    return sum(g.edges[i].cost for i in F)
