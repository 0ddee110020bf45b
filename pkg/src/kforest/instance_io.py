"""Instance text format and seeded instance generators.

File format (LF line endings, whitespace-separated, ``#`` starts a comment line)::

    p kforest <n> <|E|> <m> <k>
    e <u> <v> <c>      # |E| lines, 1-indexed vertices, integer cost >= 1
    d <s> <t>          # m lines

Generators draw from SplitMix64 (Steele, Lea & Flood 2014) seeded with the
spec's 64-bit seed as the initial state. Integers in ``[0, n)`` are drawn by
rejection: draw ``x`` until ``x < 2**64 - (2**64 % n)`` and return ``x % n``.
A Bernoulli(p) trial with rational ``p = a/b`` succeeds iff ``x * b < a * 2**64``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .model import Instance, parse_rat, validate_instance

MASK64 = (1 << 64) - 1
FAMILIES = ("random_gnp", "grid", "star_pairs")


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__("line %d: %s" % (line, reason))
        self.line = line
        self.reason = reason


class SpecError(ValueError):
    pass


def _ints(tokens, lineno, count):
    if len(tokens) != count:
        raise ParseError(lineno, "expected %d fields, got %d" % (count, len(tokens)))
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, "non-integer field") from None


def parse_instance(text: str) -> Instance:
    header = None
    edges, demands = [], []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        kind, rest = tok[0], tok[1:]
        if header is None:
            if kind != "p" or not rest or rest[0] != "kforest":
                raise ParseError(lineno, "expected header 'p kforest n E m k'")
            header = _ints(rest[1:], lineno, 4)
            continue
        n, n_edges, m, k = header
        if kind == "e":
            if demands:
                raise ParseError(lineno, "edge line after demand lines")
            if len(edges) >= n_edges:
                raise ParseError(lineno, "more edge lines than the header's %d" % n_edges)
            edges.append(tuple(_ints(rest, lineno, 3)))
        elif kind == "d":
            if len(edges) != n_edges:
                raise ParseError(lineno, "header declares %d edges, found %d" % (n_edges, len(edges)))
            if len(demands) >= m:
                raise ParseError(lineno, "more demand lines than the header's %d" % m)
            demands.append(tuple(_ints(rest, lineno, 2)))
        else:
            raise ParseError(lineno, "unknown record type %r" % kind)
    if header is None:
        raise ParseError(1, "missing header")
    n, n_edges, m, k = header
    if len(edges) != n_edges:
        raise ParseError(lineno, "header declares %d edges, found %d" % (n_edges, len(edges)))
    if len(demands) != m:
        raise ParseError(lineno, "header declares %d demands, found %d" % (m, len(demands)))
    inst = Instance.build(n, edges, demands, k)
    validate_instance(inst)
    return inst


def serialize_instance(inst: Instance) -> str:
    lines = ["p kforest %d %d %d %d" % (inst.n, len(inst.edges), inst.m, inst.k)]
    lines += ["e %d %d %d" % (e.u, e.v, e.cost) for e in inst.edges]
    lines += ["d %d %d" % (d.s, d.t) for d in inst.demands]
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as f:
        return parse_instance(f.read())


def write_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_instance(inst))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def bernoulli(self, p: Fraction) -> bool:
        return self.next_u64() * p.denominator < p.numerator << 64

    def sample(self, population: list, count: int) -> list:
        """First ``count`` slots of a Fisher-Yates shuffle, in draw order."""
        pool = list(population)
        for i in range(count):
            j = i + self.below(len(pool) - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:count]


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    m: int
    k: int
    cost_range: tuple[int, int] = (1, 20)
    seed: int = 0
    edge_prob: Fraction = Fraction(1, 2)
    rows: int = 0
    cols: int = 0

    def __post_init__(self):
        object.__setattr__(self, "edge_prob", parse_rat(self.edge_prob))
        object.__setattr__(self, "cost_range", tuple(self.cost_range))
        lo, hi = self.cost_range
        if self.family not in FAMILIES:
            raise SpecError("unknown family %r" % self.family)
        if lo < 1 or hi < lo:
            raise SpecError("cost range must satisfy 1 <= lo <= hi")
        if self.m < 1 or not 0 <= self.k <= self.m:
            raise SpecError("need m >= 1 and 0 <= k <= m")
        if not 0 <= self.edge_prob <= 1:
            raise SpecError("edge_prob must lie in [0, 1]")
        if not 0 <= self.seed <= MASK64:
            raise SpecError("seed must be an unsigned 64-bit integer")

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        known = {"family", "n", "m", "k", "cost_range", "seed", "edge_prob", "rows", "cols"}
        return cls(**{key: v for key, v in d.items() if key in known})


def generate(spec: GeneratorSpec) -> Instance:
    rng = SplitMix64(spec.seed)
    lo, hi = spec.cost_range

    def cost():
        return lo + rng.below(hi - lo + 1)

    if spec.family == "random_gnp":
        n = spec.n
        edges = [(u, v, cost()) for u, v in combinations(range(1, n + 1), 2) if rng.bernoulli(spec.edge_prob)]
        pairs = list(combinations(range(1, n + 1), 2))
    elif spec.family == "grid":
        rows, cols = spec.rows, spec.cols
        if rows < 1 or cols < 1:
            raise SpecError("grid needs rows >= 1 and cols >= 1")
        n = rows * cols
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c + 1
                if c + 1 < cols:
                    edges.append((v, v + 1, cost()))
                if r + 1 < rows:
                    edges.append((v, v + cols, cost()))
        pairs = list(combinations(range(1, n + 1), 2))
    else:
        n = spec.n
        edges = [(1, leaf, cost()) for leaf in range(2, n + 1)]
        pairs = list(combinations(range(2, n + 1), 2))

    if spec.m > len(pairs):
        raise SpecError("m=%d exceeds the %d available distinct pairs" % (spec.m, len(pairs)))
    demands = rng.sample(pairs, spec.m)
    inst = Instance.build(n, edges, demands, spec.k)
    validate_instance(inst)
    return inst
