"""Prize-collecting generalized Steiner forest with a uniform penalty per demand.

``run_pcgst`` grows moats around the connected components of the tight-edge
forest. Every active component raises the dual value of its vertex set at
unit rate and pays for the growth out of the remaining penalty budget
("potential") of one demand it separates. Edges whose dual load reaches
their cost are bought and merge components. A demand whose potential runs
out while it is still separated is given up; everything else is connected
and the purchased edges are pruned by reverse deletion.

The outcome carries its dual sets and the charge ledger so that
:mod:`kforest.certificate` can re-check it without trusting this module.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .model import Instance, UnionFind, connected_demands, fmt_rat, parse_rat

EDGE_TIGHT = "EDGE_TIGHT"
POTENTIAL_EXHAUSTED = "POTENTIAL_EXHAUSTED"


class PruneInfeasible(ValueError):
    pass


class CertificateError(RuntimeError):
    """Raised in verification mode when an outcome fails its own certificate."""

    def __init__(self, report):
        super().__init__("certificate check failed: %s" % report.failures())
        self.report = report


@dataclass(frozen=True)
class DualSet:
    set_id: int
    vertices: frozenset
    y: Fraction


@dataclass(frozen=True)
class Charge:
    set_id: int
    demand: int
    amount: Fraction


@dataclass(frozen=True)
class PcgstOutcome:
    lam: Fraction
    forest: tuple[int, ...]
    removed: tuple[int, ...]
    dual_sets: tuple[DualSet, ...]
    charges: tuple[Charge, ...]
    tight_edges: tuple[int, ...] = ()
    transcript: tuple = field(default=(), compare=False, repr=False)

    @property
    def r_of_lambda(self) -> int:
        return len(self.removed)

    @property
    def dual_sum(self) -> Fraction:
        return sum((d.y for d in self.dual_sets), Fraction(0))

    def forest_cost(self, inst: Instance) -> int:
        return sum(inst.edges[i].cost for i in self.forest)

    def to_dict(self) -> dict:
        return {
            "lambda": fmt_rat(self.lam),
            "forest": list(self.forest),
            "removed": list(self.removed),
            "r_of_lambda": self.r_of_lambda,
            "tight_edges": list(self.tight_edges),
            "dual_sets": [
                {"id": d.set_id, "vertices": sorted(d.vertices), "y": fmt_rat(d.y)}
                for d in self.dual_sets
            ],
            "charges": [
                {"set": c.set_id, "demand": c.demand, "amount": fmt_rat(c.amount)}
                for c in self.charges
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PcgstOutcome":
        return cls(
            lam=parse_rat(data["lambda"]),
            forest=tuple(data["forest"]),
            removed=tuple(data["removed"]),
            dual_sets=tuple(
                DualSet(d["id"], frozenset(d["vertices"]), parse_rat(d["y"]))
                for d in data["dual_sets"]
            ),
            charges=tuple(
                Charge(c["set"], c["demand"], parse_rat(c["amount"])) for c in data["charges"]
            ),
            tight_edges=tuple(data.get("tight_edges", ())),
        )


def removal_count(out: PcgstOutcome) -> int:
    return len(out.removed)


def prune_forest(inst: Instance, tight_edges, live) -> set[int]:
    """Reverse deletion: scan purchases newest first, drop edges no live demand needs."""
    tight_edges = list(tight_edges)
    live = sorted(live)
    g = inst.graph
    if live:
        reached = connected_demands(g, tight_edges, inst.demands)
        missing = [i for i in live if i not in reached]
        if missing:
            raise PruneInfeasible("live demands %s are not connected by the tight edges" % missing)
    keep = set(tight_edges)
    for e in reversed(tight_edges):
        keep.discard(e)
        reached = connected_demands(g, keep, inst.demands)
        if any(i not in reached for i in live):
            keep.add(e)
    return keep


class _Moats:
    """Mutable event-loop state for one ``run_pcgst`` call."""

    def __init__(self, inst: Instance, lam: Fraction):
        self.inst = inst
        n = inst.n
        self.uf = UnionFind(n)
        self.members = {v: [v] for v in range(1, n + 1)}
        self.next_set = 0
        self.set_of = {}  # component root -> set id of its current vertex set
        self.set_vertices = {}
        self.y = {}
        self.slack = [Fraction(e.cost) for e in inst.edges]
        self.potential = [Fraction(lam)] * inst.m
        self.dead = set()
        self.ledger = {}
        self.purchased = []
        self.events = []
        self.now = Fraction(0)

    def set_id(self, root: int) -> int:
        sid = self.set_of.get(root)
        if sid is None:
            sid = self.next_set
            self.next_set += 1
            self.set_of[root] = sid
            self.set_vertices[sid] = frozenset(self.members[root])
            self.y[sid] = Fraction(0)
        return sid

    def separated(self, i: int):
        d = self.inst.demands[i]
        rs, rt = self.uf.find(d.s), self.uf.find(d.t)
        return (rs, rt) if rs != rt else None

    def merge_tight_edge(self) -> bool:
        find = self.uf.find
        for e, edge in enumerate(self.inst.edges):
            if self.slack[e] != 0:
                continue
            ra, rb = find(edge.u), find(edge.v)
            if ra == rb:
                continue
            ids = [self.set_of.get(ra), self.set_of.get(rb)]
            self.uf.union(ra, rb)
            root = find(ra)
            other = rb if root == ra else ra
            self.members[root].extend(self.members.pop(other))
            self.set_of.pop(ra, None)
            self.set_of.pop(rb, None)
            self.purchased.append(e)
            self.events.append({
                "time": fmt_rat(self.now), "type": EDGE_TIGHT,
                "components": [i for i in ids if i is not None], "edge": e,
            })
            return True
        return False

    def mark_exhausted(self) -> None:
        for i, p in enumerate(self.potential):
            if p == 0 and i not in self.dead:
                sep = self.separated(i)
                if sep is not None:
                    self.dead.add(i)
                    self.events.append({
                        "time": fmt_rat(self.now), "type": POTENTIAL_EXHAUSTED,
                        "components": [self.set_of[r] for r in sep if r in self.set_of],
                        "demand": i,
                    })

    def charge_targets(self) -> dict:
        """Map each active component root to the demand it pays from."""
        target = {}
        for i, p in enumerate(self.potential):
            if p <= 0:
                continue
            sep = self.separated(i)
            if sep is None:
                continue
            for r in sep:
                target.setdefault(r, i)
        return target

    def grow(self, target: dict) -> None:
        find = self.uf.find
        edge_rate = []
        delta = None
        for e, edge in enumerate(self.inst.edges):
            ra, rb = find(edge.u), find(edge.v)
            rate = 0 if ra == rb else (ra in target) + (rb in target)
            edge_rate.append(rate)
            if rate:
                t = self.slack[e] / rate
                if delta is None or t < delta:
                    delta = t
        demand_rate = {}
        for i in target.values():
            demand_rate[i] = demand_rate.get(i, 0) + 1
        for i, rate in demand_rate.items():
            t = self.potential[i] / rate
            if delta is None or t < delta:
                delta = t

        for e, rate in enumerate(edge_rate):
            if rate:
                self.slack[e] -= rate * delta
        for i, rate in demand_rate.items():
            self.potential[i] -= rate * delta
        for root, i in target.items():
            sid = self.set_id(root)
            self.y[sid] += delta
            self.ledger[sid, i] = self.ledger.get((sid, i), Fraction(0)) + delta
        self.now += delta


def run_pcgst(inst: Instance, lam, verify: bool = False) -> PcgstOutcome:
    """Solve the uniform-penalty PCGST relaxation by moat growing.

    With ``verify=True`` the outcome is passed through the independent
    certificate checker and :class:`CertificateError` is raised on failure.
    """
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("penalty must be nonnegative")
    st = _Moats(inst, lam)
    while True:
        if st.merge_tight_edge():
            continue
        st.mark_exhausted()
        target = st.charge_targets()
        if not target:
            break
        st.grow(target)

    live = [i for i in range(inst.m) if i not in st.dead]
    forest = prune_forest(inst, st.purchased, live)
    reached = connected_demands(inst.graph, forest, inst.demands)

    # only sets that actually grew belong to the certificate; renumber densely
    grown = [sid for sid in sorted(st.y) if st.y[sid] > 0]
    renumber = {sid: j for j, sid in enumerate(grown)}
    out = PcgstOutcome(
        lam=lam,
        forest=tuple(sorted(forest)),
        removed=tuple(i for i in range(inst.m) if i not in reached),
        dual_sets=tuple(DualSet(renumber[s], st.set_vertices[s], st.y[s]) for s in grown),
        charges=tuple(
            Charge(renumber[s], i, amt)
            for (s, i), amt in sorted(st.ledger.items())
            if amt > 0
        ),
        tight_edges=tuple(st.purchased),
        transcript=tuple(_renumber_event(ev, renumber) for ev in st.events),
    )
    if verify:
        from .certificate import verify_outcome

        report = verify_outcome(out, inst)
        if not report.ok:
            raise CertificateError(report)
    return out


def _renumber_event(ev: dict, renumber: dict) -> dict:
    ev = dict(ev)
    ev["components"] = [renumber.get(c) for c in ev["components"]]
    return ev


def transcript_lines(out: PcgstOutcome) -> list[str]:
    """JSON-lines dump of the event transcript, one event per line.

    Component ids refer to the outcome's dual sets; ``null`` marks a set
    that never grew and so is not part of the certificate.
    """
    import json

    return [json.dumps(ev, sort_keys=True) for ev in out.transcript]

