"""Binary search over the uniform penalty, with the PCGST solver as subroutine.

The search keeps a bracket ``lam1 < lam2`` whose outcomes remove more and
fewer demands than the target ``r = (1 - eps/2)(m - k)``. Once the bracket is
narrower than ``c_min / m**2`` it mixes the two outcomes with weights that
average to exactly ``r`` and picks one side by the weight of the upper end.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .model import Instance, connected_demands, fmt_rat, parse_rat, validate_instance
from .pcgst import CertificateError, PcgstOutcome, run_pcgst

EXACT_HIT = "EXACT_HIT"
LAMBDA1 = "LAMBDA1"
LAMBDA2 = "LAMBDA2"


class Infeasible(ValueError):
    pass


class SearchStalled(RuntimeError):
    pass


class DegenerateBracket(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    eps: Fraction
    max_iterations: int = 256
    verify: bool = True

    def __post_init__(self):
        eps = parse_rat(self.eps)
        if not 0 < eps < 1:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        object.__setattr__(self, "eps", eps)

    @property
    def eps_t(self) -> Fraction:
        return self.eps / 2


@dataclass(frozen=True)
class AlphaPair:
    a1: Fraction
    a2: Fraction


def compute_r(m: int, k: int, eps) -> Fraction:
    return (1 - Fraction(eps) / 2) * (m - k)


def combine_alphas(r, r1: int, r2: int) -> AlphaPair:
    r = Fraction(r)
    if r1 == r2 or not r2 < r < r1:
        raise DegenerateBracket("need r2 < r < r1, got r2=%s r=%s r1=%s" % (r2, r, r1))
    a1 = (r - r2) / (r1 - r2)
    a2 = (r1 - r) / (r1 - r2)
    assert a1 + a2 == 1 and a1 * r1 + a2 * r2 == r
    return AlphaPair(a1, a2)


def select_branch(alphas: AlphaPair, eps_t) -> str:
    return LAMBDA2 if alphas.a2 >= Fraction(eps_t) else LAMBDA1


def call_bound(m: int, c_total: int, c_min: int) -> int:
    """Upper bound on subroutine calls: ceil(log2(m^2 c_total / c_min)) + 2."""
    ratio = Fraction(m * m * c_total, c_min)
    j = 0
    while ratio > 1:
        ratio /= 2
        j += 1
    return j + 2


@dataclass
class KForestSolution:
    forest: tuple[int, ...]
    removed: tuple[int, ...]
    cost: int
    branch: str
    alphas: Optional[AlphaPair]
    lam_used: Optional[Fraction]
    r_target: Fraction
    # outcomes at the final bracket ends (one outcome on an exact hit); these
    # refer to ``solve_instance``, whose demand i is ``demand_map[i]`` of the input
    certificates: tuple[PcgstOutcome, ...]
    chosen: Optional[PcgstOutcome]
    solve_instance: Optional[Instance]
    demand_map: tuple[int, ...]
    pre_removed: tuple[int, ...]
    trace: list = field(default_factory=list)
    hj_calls: int = 0
    iterations: int = 0
    eps: Fraction = Fraction(1, 2)

    def to_dict(self) -> dict:
        return {
            "cost": self.cost,
            "forest": list(self.forest),
            "removed": list(self.removed),
            "removed_count": len(self.removed),
            "branch": self.branch,
            "alpha1": fmt_rat(self.alphas.a1) if self.alphas else None,
            "alpha2": fmt_rat(self.alphas.a2) if self.alphas else None,
            "lambda_used": fmt_rat(self.lam_used) if self.lam_used is not None else None,
            "epsilon": fmt_rat(self.eps),
            "r_target": fmt_rat(self.r_target),
            "pre_removed": list(self.pre_removed),
            "hj_calls": self.hj_calls,
            "iterations": self.iterations,
        }


def _reduce(inst: Instance):
    """Drop demands no edge set can connect; return (instance, kept ids, dropped ids)."""
    reach = connected_demands(inst.graph, range(len(inst.edges)), inst.demands)
    kept = tuple(i for i in range(inst.m) if i in reach)
    dropped = tuple(i for i in range(inst.m) if i not in reach)
    if not dropped:
        return inst, kept, dropped
    return Instance(inst.graph, tuple(inst.demands[i] for i in kept), inst.k), kept, dropped


def solve_kforest(inst: Instance, cfg: SearchConfig, hj=run_pcgst) -> KForestSolution:
    stats = validate_instance(inst)
    budget = inst.m - inst.k
    if stats.disconnected_demand_count > budget:
        raise Infeasible(
            "%d demands cannot be connected in G but only %d may be removed"
            % (stats.disconnected_demand_count, budget)
        )
    work, kept, dropped = _reduce(inst)
    m = work.m
    r = compute_r(m, work.k, cfg.eps)

    if m == 0:
        # every demand is inherently unconnectable and all may be dropped
        return KForestSolution((), dropped, 0, EXACT_HIT, None, None, r, (), None, work, kept, dropped,
                               eps=cfg.eps)

    trace = []
    calls = 0

    def evaluate(lam, role):
        nonlocal calls
        calls += 1
        out = hj(work, lam)
        if cfg.verify:
            from .certificate import verify_outcome

            report = verify_outcome(out, work, r, cfg.eps_t)
            if not report.ok:
                raise CertificateError(report)
        trace.append({
            "role": role,
            "lambda": fmt_rat(lam),
            "r": out.r_of_lambda,
            "dual_sum": fmt_rat(out.dual_sum),
            "forest_cost": out.forest_cost(work),
        })
        return out

    def finish(out, branch, alphas, ends, iterations):
        removed = tuple(sorted(dropped + tuple(kept[i] for i in out.removed)))
        cost = out.forest_cost(work)
        sol = KForestSolution(
            forest=out.forest, removed=removed, cost=cost, branch=branch, alphas=alphas,
            lam_used=out.lam, r_target=r, certificates=ends, chosen=out, solve_instance=work,
            demand_map=kept, pre_removed=dropped, trace=trace, hj_calls=calls, iterations=iterations,
            eps=cfg.eps,
        )
        if len(removed) > budget:
            raise AssertionError("solution removes %d > m - k = %d demands" % (len(removed), budget))
        reached = connected_demands(inst.graph, sol.forest, inst.demands)
        if any(i not in reached for i in range(inst.m) if i not in removed):
            raise AssertionError("forest leaves a kept demand unconnected")
        return sol

    lam1, lam2 = Fraction(0), Fraction(stats.c_total)
    out1 = evaluate(lam1, "lower")
    if out1.r_of_lambda == r:
        return finish(out1, EXACT_HIT, None, (out1,), 0)
    out2 = evaluate(lam2, "upper")
    if out2.r_of_lambda == r:
        return finish(out2, EXACT_HIT, None, (out2,), 0)

    # the bracket should hold from the start; widen it if it does not
    doublings = 0
    while out2.r_of_lambda > r:
        if doublings >= 8:
            raise SearchStalled("upper penalty %s still removes %d > r demands" % (lam2, out2.r_of_lambda))
        doublings += 1
        lam2 *= 2
        out2 = evaluate(lam2, "upper-doubled")
        if out2.r_of_lambda == r:
            return finish(out2, EXACT_HIT, None, (out2,), 0)

    threshold = Fraction(stats.c_min, m * m)
    iterations = 0
    while lam2 - lam1 > threshold:
        iterations += 1
        if iterations > cfg.max_iterations:
            raise SearchStalled("no convergence after %d iterations" % cfg.max_iterations)
        lam = (lam1 + lam2) / 2
        out = evaluate(lam, "mid")
        if out.r_of_lambda == r:
            return finish(out, EXACT_HIT, None, (out,), iterations)
        if out.r_of_lambda < r:
            lam2, out2 = lam, out
        else:
            lam1, out1 = lam, out

    r1, r2 = out1.r_of_lambda, out2.r_of_lambda
    alphas = combine_alphas(r, r1, r2)
    branch = select_branch(alphas, cfg.eps_t)
    if branch == LAMBDA1:
        if r1 > work.m - work.k:
            raise AssertionError("lower end removes %d > m - k demands" % r1)
        chosen = out1
    else:
        chosen = out2
    return finish(chosen, branch, alphas, (out1, out2), iterations)

