"""Independent checks for PCGST outcomes.

Nothing here reuses the solver's incremental state: cuts are recomputed
from the vertex sets, connectivity from the edge list. A charge ledger
that passes :func:`check_charge_cover` witnesses the family constraint of
the dual for every family at once, since the charges of any family's sets
land on demands the family separates and no demand absorbs more than the
penalty.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .model import Instance, UnionFind, connected_demands, cut_edges, cut_separates, fmt_rat
from .pcgst import Charge, DualSet, PcgstOutcome


@dataclass
class VerificationReport:
    edge_feasible: bool
    edge_violations: list = field(default_factory=list)
    charge_cover_ok: bool = True
    charge_cover_error: Optional[str] = None
    lemma1_ok: bool = True
    lemma2_ok: bool = True
    laminar_ok: bool = True
    primal_ok: bool = True
    primal_error: Optional[str] = None
    dual_objective: Fraction = Fraction(0)

    @property
    def ok(self) -> bool:
        return (self.edge_feasible and self.charge_cover_ok and self.lemma1_ok
                and self.lemma2_ok and self.laminar_ok and self.primal_ok)

    def failures(self) -> list[str]:
        names = ["edge_feasible", "charge_cover_ok", "lemma1_ok", "lemma2_ok", "laminar_ok", "primal_ok"]
        return [n for n in names if not getattr(self, n)]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "edge_feasible": self.edge_feasible,
            "edge_violations": [
                {"edge": e, "load": fmt_rat(load), "cost": c} for e, load, c in self.edge_violations
            ],
            "charge_cover_ok": self.charge_cover_ok,
            "charge_cover_error": self.charge_cover_error,
            "lemma1_ok": self.lemma1_ok,
            "lemma2_ok": self.lemma2_ok,
            "laminar_ok": self.laminar_ok,
            "primal_ok": self.primal_ok,
            "primal_error": self.primal_error,
            "dual_objective": fmt_rat(self.dual_objective),
        }


def check_edge_feasibility(out: PcgstOutcome, inst: Instance):
    """Return ``(feasible, violations)`` with violations as ``(edge, load, cost)``."""
    load = [Fraction(0)] * len(inst.edges)
    for ds in out.dual_sets:
        if ds.y < 0:
            return False, [(None, ds.y, 0)]
        for e in cut_edges(inst.graph, ds.vertices):
            load[e] += ds.y
    violations = [(e, load[e], edge.cost) for e, edge in enumerate(inst.edges) if load[e] > edge.cost]
    return not violations, violations


def charge_cover_error(out: PcgstOutcome, inst: Instance) -> Optional[str]:
    """First violated ledger invariant, or ``None`` if the ledger covers the duals."""
    sets = {}
    for ds in out.dual_sets:
        if ds.set_id in sets:
            return "duplicate set id %d" % ds.set_id
        if not ds.vertices or len(ds.vertices) >= inst.n:
            return "set %d is not a nonempty proper vertex subset" % ds.set_id
        sets[ds.set_id] = ds
    per_set = {sid: Fraction(0) for sid in sets}
    per_demand = [Fraction(0)] * inst.m
    for c in out.charges:
        if c.amount < 0:
            return "negative charge on set %d" % c.set_id
        if c.set_id not in sets:
            return "charge references unknown set %d" % c.set_id
        if not 0 <= c.demand < inst.m:
            return "charge references unknown demand %d" % c.demand
        if not cut_separates(sets[c.set_id].vertices, inst.demands[c.demand]):
            return "set %d does not separate demand %d" % (c.set_id, c.demand)
        per_set[c.set_id] += c.amount
        per_demand[c.demand] += c.amount
    for sid, total in per_set.items():
        if total != sets[sid].y:
            return "charges on set %d sum to %s, y is %s" % (sid, total, sets[sid].y)
    for i, total in enumerate(per_demand):
        if total > out.lam:
            return "demand %d charged %s > penalty %s" % (i, total, out.lam)
    return None


def check_charge_cover(out: PcgstOutcome, inst: Instance) -> bool:
    return charge_cover_error(out, inst) is None


def check_lemma1(out: PcgstOutcome) -> bool:
    return len(out.removed) * out.lam <= out.dual_sum


def check_lemma2(out: PcgstOutcome, inst: Instance) -> bool:
    return sum(inst.edges[e].cost for e in out.forest) <= 2 * out.dual_sum


def check_laminar(out: PcgstOutcome) -> bool:
    sets = [ds.vertices for ds in out.dual_sets]
    for i, a in enumerate(sets):
        for b in sets[i + 1:]:
            if a & b and not (a <= b or b <= a):
                return False
    return True


def primal_error(out: PcgstOutcome, inst: Instance) -> Optional[str]:
    """Check the forest is acyclic and ``removed`` is exactly the unconnected demands."""
    if any(not 0 <= e < len(inst.edges) for e in out.forest):
        return "forest references unknown edge"
    uf = UnionFind(inst.n)
    for e in out.forest:
        edge = inst.edges[e]
        if not uf.union(edge.u, edge.v):
            return "forest contains a cycle through edge %d" % e
    reached = connected_demands(inst.graph, out.forest, inst.demands)
    expect = tuple(i for i in range(inst.m) if i not in reached)
    if tuple(sorted(out.removed)) != expect:
        return "removed set %s differs from unconnected demands %s" % (list(out.removed), list(expect))
    return None


def dual_objective(out: PcgstOutcome, r_target, eps_t) -> Fraction:
    eps_t = Fraction(eps_t)
    if not 0 < eps_t < 1:
        raise ValueError("eps_t must lie in (0, 1)")
    return out.dual_sum - (1 - eps_t) * Fraction(r_target) * out.lam


def verify_outcome(out: PcgstOutcome, inst: Instance, r_target=0, eps_t=Fraction(1, 2)) -> VerificationReport:
    feasible, violations = check_edge_feasibility(out, inst)
    cover = charge_cover_error(out, inst)
    primal = primal_error(out, inst)
    return VerificationReport(
        edge_feasible=feasible,
        edge_violations=violations,
        charge_cover_ok=cover is None,
        charge_cover_error=cover,
        lemma1_ok=check_lemma1(out),
        lemma2_ok=check_lemma2(out, inst),
        laminar_ok=check_laminar(out),
        primal_ok=primal is None,
        primal_error=primal,
        dual_objective=dual_objective(out, r_target, eps_t),
    )


def combine_certificates(out1: PcgstOutcome, out2: PcgstOutcome, a1, a2) -> PcgstOutcome:
    """Materialize the convex combination ``a1*(y1, lam1) + a2*(y2, lam2)``.

    Sets with equal vertex sets are merged. The result has no primal part;
    only the dual checks (edge feasibility, charge cover) apply to it.
    """
    a1, a2 = Fraction(a1), Fraction(a2)
    if a1 < 0 or a2 < 0 or a1 + a2 != 1:
        raise ValueError("weights must be nonnegative and sum to 1")
    ids = {}
    ys = []
    charges = {}
    for weight, out in ((a1, out1), (a2, out2)):
        local = {}
        for ds in out.dual_sets:
            j = ids.setdefault(ds.vertices, len(ids))
            if j == len(ys):
                ys.append(Fraction(0))
            ys[j] += weight * ds.y
            local[ds.set_id] = j
        for c in out.charges:
            key = (local[c.set_id], c.demand)
            charges[key] = charges.get(key, Fraction(0)) + weight * c.amount
    vertex_sets = sorted(ids, key=ids.get)
    return PcgstOutcome(
        lam=a1 * out1.lam + a2 * out2.lam,
        forest=(),
        removed=(),
        dual_sets=tuple(DualSet(j, vs, ys[j]) for j, vs in enumerate(vertex_sets)),
        charges=tuple(Charge(s, i, amt) for (s, i), amt in sorted(charges.items())),
    )
