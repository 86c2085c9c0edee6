"""Hypothesis strategies producing small valid matroids."""

from __future__ import annotations

from hypothesis import strategies as st

from flatcover.core import add_coloop, add_loop, add_parallel, catalog, direct_sum, uniform
from flatcover.families import random_sparse_paving, rank2_partition

NAMED_SMALL = ("P6", "Q6", "R6", "W3", "MK4", "MK(3)", "U(2,4)", "U(3,6)", "U(1,3)", "U(0,2)")


@st.composite
def sparse_paving(draw, max_n: int = 7):
    n = draw(st.integers(4, max_n))
    r = draw(st.integers(2, n - 2))
    return random_sparse_paving(n, r, draw(st.integers(0, 2**32)))


@st.composite
def rank2(draw):
    sizes = draw(st.lists(st.integers(1, 3), min_size=2, max_size=4))
    return rank2_partition(sizes, draw(st.integers(0, 2)))


@st.composite
def uniform_sum(draw):
    n1 = draw(st.integers(1, 3))
    n2 = draw(st.integers(1, 3))
    return direct_sum(
        uniform(draw(st.integers(0, n1)), n1), uniform(draw(st.integers(0, n2)), n2)
    )


@st.composite
def decorated(draw):
    M = catalog(draw(st.sampled_from(NAMED_SMALL[:6])))
    how = draw(st.sampled_from(["loop", "coloop", "parallel"]))
    if how == "loop":
        return add_loop(M)
    if how == "coloop":
        return add_coloop(M)
    return add_parallel(M, draw(st.integers(1, M.n)))


def matroids(max_n: int = 7):
    return st.one_of(
        st.sampled_from(NAMED_SMALL).map(catalog),
        sparse_paving(max_n),
        rank2(),
        uniform_sum(),
        decorated(),
    )
