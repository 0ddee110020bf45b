from fractions import Fraction

import pytest
from hypothesis import strategies as st

from kforest.model import Instance


def make(n, edges, demands, k):
    return Instance.build(n, edges, demands, k)


@pytest.fixture
def t3():
    return make(3, [(1, 2, 1), (2, 3, 1), (1, 3, 1)], [(1, 2), (2, 3)], 1)


@pytest.fixture
def p2():
    return make(2, [(1, 2, 2)], [(1, 2)], 1)


@pytest.fixture
def split4():
    # (3,4) can never be connected
    return make(4, [(1, 2, 5)], [(1, 2), (3, 4)], 1)


@st.composite
def small_instances(draw, max_n=6, max_edges=8, max_m=4):
    n = draw(st.integers(2, max_n))
    vertex = st.integers(1, n)
    edge = st.tuples(vertex, vertex, st.integers(1, 9)).filter(lambda e: e[0] != e[1])
    edges = draw(st.lists(edge, max_size=max_edges))
    demand = st.tuples(vertex, vertex).filter(lambda d: d[0] != d[1])
    demands = draw(st.lists(demand, min_size=1, max_size=max_m))
    k = draw(st.integers(0, len(demands)))
    return make(n, edges, demands, k)


penalties = st.fractions(min_value=0, max_value=40, max_denominator=16)
epsilons = st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(4, 5), Fraction(1, 10), Fraction(9, 10)])
