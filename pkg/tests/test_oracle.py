from itertools import combinations

import pytest
from hypothesis import given, settings

from kforest import _enum_py, _kernels
from kforest.model import connected_demands
from kforest.oracle import (
    OracleResult, TooLarge, brute_force_opt, check_theorem_bound, removal_profile,
)
from kforest.search import SearchConfig, solve_kforest

from conftest import make, small_instances


def naive_opt(inst, u):
    """Independent oracle: itertools over every edge subset, cost only."""
    best = None
    E = range(len(inst.edges))
    for size in range(len(inst.edges) + 1):
        for sub in combinations(E, size):
            reached = connected_demands(inst.graph, sub, inst.demands)
            if inst.m - len(reached) <= u:
                c = sum(inst.edges[i].cost for i in sub)
                if best is None or c < best:
                    best = c
    return best


@pytest.mark.parametrize("u, cost", [(0, 2), (1, 1), (2, 0)])
def test_t3(t3, u, cost):
    res = brute_force_opt(t3, u)
    assert res.opt_cost == cost
    assert len(res.witness_removed) <= u


def test_t3_empty_witness(t3):
    assert brute_force_opt(t3, 2).witness_edges == ()


def test_lexicographic_tiebreak(t3):
    # any two edges cost 2; (0, 1) is the smallest sorted tuple
    assert brute_force_opt(t3, 0).witness_edges == (0, 1)


def test_infeasible_marker(split4):
    res = brute_force_opt(split4, 0)
    assert not res.feasible and res.to_dict()["opt_cost"] == "INFEASIBLE"


def test_too_large():
    edges = [(1, 2, 1)] * 25
    with pytest.raises(TooLarge):
        brute_force_opt(make(2, edges, [(1, 2)], 1), 0)


def test_cap_env(monkeypatch, t3):
    monkeypatch.setenv("KFOREST_ORACLE_CAP", "2")
    with pytest.raises(TooLarge):
        brute_force_opt(t3, 0)


@pytest.mark.parametrize("a, b, less", [
    (0b011, 0b101, True),   # (0,1) < (0,2)
    (0b101, 0b011, False),
    (0b001, 0b011, True),   # (0,) is a prefix of (0,1)
    (0b011, 0b001, False),
    (0b100, 0b011, False),  # (2,) > (0,1)
    (0b110, 0b110, False),
])
def test_lex_less(a, b, less):
    assert _enum_py.lex_less(a, b) is less


@settings(max_examples=100, deadline=None)
@given(small_instances(max_n=6, max_edges=9))
def test_matches_naive(inst):
    for u in range(inst.m + 1):
        res = brute_force_opt(inst, u)
        assert res.opt_cost == naive_opt(inst, u)
        if res.feasible:
            assert sum(inst.edges[i].cost for i in res.witness_edges) == res.opt_cost
            reached = connected_demands(inst.graph, res.witness_edges, inst.demands)
            assert set(res.witness_removed) == set(range(inst.m)) - reached


@settings(max_examples=100, deadline=None)
@given(small_instances(max_n=7, max_edges=11))
def test_monotone_and_zero_at_m(inst):
    costs = [brute_force_opt(inst, u).opt_cost for u in range(inst.m + 1)]
    finite = [c for c in costs if c is not None]
    assert all(a >= b for a, b in zip(finite, finite[1:]))
    last = brute_force_opt(inst, inst.m)
    assert last.opt_cost == 0 and last.witness_edges == ()


@pytest.mark.skipif(_kernels.native_enumerate_profile is None, reason="native kernel not built")
@settings(max_examples=100, deadline=None)
@given(small_instances(max_n=7, max_edges=12))
def test_native_matches_python(inst):
    assert removal_profile(inst, kernel=_kernels.native_enumerate_profile) == \
        removal_profile(inst, kernel=_kernels.python_enumerate_profile)


def test_theorem_bound(t3):
    sol = solve_kforest(t3, SearchConfig("1/2"))
    assert check_theorem_bound(sol, t3, "1/2")


def test_theorem_bound_trivial_cases(t3, split4):
    class Fake:
        cost = 0
    assert check_theorem_bound(Fake(), t3, "1/2")
    Fake.cost = 10 ** 6
    # eps = 1/10 leaves the adversary floor(0.9) = 0 removals, impossible here
    assert check_theorem_bound(Fake(), split4, "1/10")
    assert not check_theorem_bound(Fake(), t3, "1/2")


def test_result_dict():
    assert OracleResult(1, 3, (0,), (1,)).to_dict() == {
        "u": 1, "opt_cost": 3, "witness_edges": [0], "witness_removed": [1]}


def test_pure_python_backend_selected_by_env():
    import os
    import subprocess
    import sys

    env = dict(os.environ, KFOREST_PURE_PYTHON="1")
    res = subprocess.run([sys.executable, "-c", "from kforest import _kernels; print(_kernels.BACKEND)"],
                         capture_output=True, text=True, env=env)
    assert res.stdout.strip() == "python"
