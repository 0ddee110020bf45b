"""Brute-force ground truth for small instances.

``Opt_u`` is the cheapest edge set that leaves at most ``u`` demands
unconnected. It is found by enumerating edge subsets, which decides which
demands to drop and which edges to buy in a single pass.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import _kernels
from .model import Instance, connected_demands

DEFAULT_CAP = 20


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    u: int
    opt_cost: Optional[int]  # None encodes INFEASIBLE
    witness_edges: tuple[int, ...] = ()
    witness_removed: tuple[int, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.opt_cost is not None

    def to_dict(self) -> dict:
        return {
            "u": self.u,
            "opt_cost": self.opt_cost if self.feasible else "INFEASIBLE",
            "witness_edges": list(self.witness_edges),
            "witness_removed": list(self.witness_removed),
        }


def oracle_cap() -> int:
    return int(os.environ.get("KFOREST_ORACLE_CAP", DEFAULT_CAP))


def removal_profile(inst: Instance, cap: Optional[int] = None, kernel=None):
    """Cheapest ``(cost, mask)`` per exact number of unconnected demands."""
    cap = oracle_cap() if cap is None else cap
    if len(inst.edges) > cap:
        raise TooLarge("%d edges exceeds the enumeration cap of %d" % (len(inst.edges), cap))
    kernel = kernel or _kernels.enumerate_profile
    es, ds = inst.edges, inst.demands
    costs, masks = kernel(
        inst.n,
        [e.u for e in es], [e.v for e in es], [e.cost for e in es],
        [d.s for d in ds], [d.t for d in ds],
    )
    return list(costs), list(masks)


def _mask_edges(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def opt_from_profile(inst: Instance, profile, u: int) -> OracleResult:
    from ._enum_py import lex_less

    costs, masks = profile
    best = None
    for j in range(min(u, inst.m) + 1):
        c = costs[j]
        if c < 0:
            continue
        if best is None or c < costs[best] or (c == costs[best] and lex_less(masks[j], masks[best])):
            best = j
    if best is None:
        return OracleResult(u, None)
    edges = _mask_edges(masks[best])
    reached = connected_demands(inst.graph, edges, inst.demands)
    removed = tuple(i for i in range(inst.m) if i not in reached)
    return OracleResult(u, costs[best], edges, removed)


def brute_force_opt(inst: Instance, u: int, cap: Optional[int] = None) -> OracleResult:
    if u < 0:
        raise ValueError("u must be nonnegative")
    return opt_from_profile(inst, removal_profile(inst, cap), u)


def theorem_bound_factor(eps) -> Fraction:
    """Cost factor ``4 / eps_t**2`` with ``eps_t = eps / 2``, i.e. ``16 / eps**2``."""
    eps = Fraction(eps)
    return 4 / (eps / 2) ** 2


def adversary_budget(inst: Instance, eps) -> int:
    """Removals allowed to the comparison optimum: floor((1 - eps)(m - k))."""
    return int((1 - Fraction(eps)) * (inst.m - inst.k) // 1)


def check_theorem_bound(sol, inst: Instance, eps, cap: Optional[int] = None, profile=None) -> bool:
    if sol.cost == 0:
        return True
    u_star = adversary_budget(inst, eps)
    if profile is None:
        profile = removal_profile(inst, cap)
    opt = opt_from_profile(inst, profile, u_star)
    if not opt.feasible:
        return True
    return sol.cost <= theorem_bound_factor(eps) * opt.opt_cost
