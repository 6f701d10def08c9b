"""Hypothesis strategies for small quantum groupoids."""
from hypothesis import strategies as st

from whakit.constructors import (pair_groupoid, cyclic_group, discrete_groupoid, disjoint_union,
                                 groupoid_algebra, groupoid_function_algebra)

_blocks = st.one_of(st.integers(1, 3).map(pair_groupoid), st.integers(1, 4).map(cyclic_group),
                    st.integers(1, 2).map(discrete_groupoid))


@st.composite
def groupoids(draw, max_parts=2):
    parts = draw(st.lists(_blocks, min_size=1, max_size=max_parts))
    G = parts[0]
    for K in parts[1:]:
        G = disjoint_union(G, K)
    return G


def groupoid_wha(dual=None):
    flag = st.booleans() if dual is None else st.just(dual)
    return st.tuples(groupoids(), flag).map(
        lambda t: (t[0], groupoid_function_algebra(t[0]) if t[1] else groupoid_algebra(t[0])))
