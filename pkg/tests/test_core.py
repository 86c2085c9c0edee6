from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import matroids
from flatcover.core import (
    SIZE_CAP,
    Matroid,
    all_flats,
    catalog,
    closure_of,
    complete_graph_edges,
    cycle_matroid,
    dual_of,
    format_bases,
    is_isomorphic,
    k_subsets,
    mask,
    members,
    minor_of,
    parallel_classes,
    parse_bases,
    rank_of,
    relabel,
    simplify,
    uniform,
    validate_matroid,
)
from flatcover.errors import (
    BasesFormatError,
    EmptyBases,
    ExchangeViolation,
    OverlappingSets,
    RankZero,
    SizeCapExceeded,
    UnknownName,
    WrongCardinality,
)
from flatcover.families import rank2_partition


def bases_of(*sets):
    return [mask(s) for s in sets]


# ---------------------------------------------------------------------------
# subsets

def test_k_subsets_colex_and_complete():
    got = list(k_subsets(5, 2))
    assert got == sorted(got)
    assert len(got) == 10 and all(x.bit_count() == 2 for x in got)


def test_mask_members_roundtrip():
    assert members(mask([1, 4, 7])) == (1, 4, 7)
    assert mask([]) == 0


# ---------------------------------------------------------------------------
# validate_matroid

def test_validate_uniform():
    M = validate_matroid(4, 2, list(k_subsets(4, 2)))
    assert M == uniform(2, 4)


def test_validate_accepts_loop():
    M = validate_matroid(3, 1, bases_of({1}, {2}))
    assert members(M.loops) == (3,)


def test_validate_exchange_violation_witness():
    with pytest.raises(ExchangeViolation) as info:
        validate_matroid(4, 2, bases_of({1, 2}, {3, 4}))
    err = info.value
    # B1 - x + y must fail for every y in B2 - B1
    b1 = set(members(err.b1))
    b2 = set(members(err.b2))
    assert err.x in b1 - b2
    assert all(mask((b1 - {err.x}) | {y}) not in (mask({1, 2}), mask({3, 4})) for y in b2 - b1)


def test_validate_errors():
    with pytest.raises(EmptyBases):
        validate_matroid(3, 1, [])
    with pytest.raises(WrongCardinality):
        validate_matroid(3, 1, bases_of({1}, {2, 3}))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 5), st.data())
def test_validate_agrees_with_brute_force(n, data):
    r = data.draw(st.integers(1, n - 1))
    pool = list(k_subsets(n, r))
    chosen = data.draw(st.lists(st.sampled_from(pool), min_size=1, unique=True))
    expected = oracles.is_matroid(n, r, [frozenset(members(b)) for b in chosen])
    try:
        validate_matroid(n, r, chosen)
        got = True
    except ExchangeViolation:
        got = False
    assert got == expected


# ---------------------------------------------------------------------------
# rank, closure, flats

def test_rank_examples():
    assert rank_of(uniform(2, 4), mask({1, 2, 3})) == 2
    mk4 = catalog("MK4")
    assert rank_of(mk4, mask({1, 2, 4})) == 2
    assert rank_of(mk4, 0) == 0


def test_closure_examples():
    assert closure_of(uniform(2, 4), mask({1})) == mask({1})
    mk4 = catalog("MK4")
    assert closure_of(mk4, mask({1, 2})) == mask({1, 2, 4})
    looped = validate_matroid(3, 1, bases_of({1}, {2}))
    assert closure_of(looped, 0) == mask({3})


@settings(max_examples=80, deadline=None)
@given(matroids(), st.integers(0, 2**16))
def test_rank_closure_match_oracle(M, seed):
    rng = random.Random(seed)
    bs = oracles.as_sets(M)
    for _ in range(8):
        s = rng.getrandbits(M.n) if M.n else 0
        ss = set(members(s))
        assert M.rank(s) == oracles.rank(bs, ss)
        assert M.closure(s) == oracles.to_mask(oracles.closure(M.n, bs, ss))


@settings(max_examples=80, deadline=None)
@given(matroids(), st.integers(0, 2**16))
def test_closure_idempotent_monotone(M, seed):
    rng = random.Random(seed)
    assert M.rank(M.ground) == M.r
    for _ in range(8):
        t = rng.getrandbits(M.n) if M.n else 0
        s = t & (rng.getrandbits(M.n) if M.n else 0)
        cs = M.closure(s)
        assert M.closure(cs) == cs
        assert cs & ~M.closure(t) == 0


def test_flat_counts():
    assert len(all_flats(uniform(2, 4))) == 6
    mk5 = catalog("MK5")
    assert len(mk5.flats) == 52  # Bell(5)
    assert sum(1 for f in mk5.flats if f.rank == 3) == 15
    assert len(catalog("MK6").flats) == 203  # Bell(6)


@settings(max_examples=60, deadline=None)
@given(matroids(max_n=6))
def test_flats_match_oracle(M):
    expected = oracles.flats(M.n, oracles.as_sets(M))
    got = {frozenset(f.members): f.rank for f in M.flats}
    assert got == expected


@settings(max_examples=60, deadline=None)
@given(matroids())
def test_flats_closed_under_intersection(M):
    fl = {f.elements for f in M.flats}
    assert all(a & b in fl for a in fl for b in fl)


def test_flats_size_cap():
    big = uniform(1, SIZE_CAP + 1)
    with pytest.raises(SizeCapExceeded):
        big.flats


# ---------------------------------------------------------------------------
# duality and minors

def test_dual_examples():
    assert dual_of(uniform(2, 5)) == uniform(3, 5)
    assert dual_of(Matroid(3, 0, frozenset({0}))) == uniform(3, 3)
    v8 = catalog("V8")
    assert is_isomorphic(dual_of(v8), v8) is not None


@settings(max_examples=60, deadline=None)
@given(matroids())
def test_dual_involution_and_minor_duality(M):
    assert dual_of(dual_of(M)) == M
    for e in range(M.n):
        assert minor_of(M, 0, 1 << e)[0].dual == minor_of(M.dual, 1 << e, 0)[0]


def test_minor_examples():
    M = catalog("P6")
    assert minor_of(M, 0, 0)[0] == M
    assert minor_of(uniform(3, 6), 1, 0)[0] == uniform(2, 5)
    with pytest.raises(OverlappingSets):
        minor_of(M, 1, 1)


def test_contract_edge_of_k4():
    # contracting an edge of K4 leaves a triangle with two doubled edges
    N, gmap = minor_of(catalog("MK4"), 1, 0)
    assert (N.n, N.r) == (5, 2)
    classes = sorted(c.bit_count() for c in parallel_classes(N))
    assert classes == [1, 2, 2]
    # oracle: spanning trees of the contracted multigraph
    edges = complete_graph_edges(4)
    merged = [tuple(0 if v == 1 else v for v in e) for e in edges[1:]]
    G = cycle_matroid(4, merged)
    assert len(G.bases) == len(N.bases)


@settings(max_examples=40, deadline=None)
@given(matroids(max_n=6), st.data())
def test_minor_matches_oracle(M, data):
    C = data.draw(st.integers(0, (1 << M.n) - 1))
    D = data.draw(st.integers(0, (1 << M.n) - 1)) & ~C
    N, _ = minor_of(M, C, D)
    expected = oracles.minor_bases(M.n, M.r, oracles.as_sets(M), set(members(C)), set(members(D)))
    assert set(oracles.as_sets(N)) == set(expected)
    assert N.r == M.rank(M.ground & ~D) - M.rank(C)
    if D == 0:
        assert N.r == M.r - M.rank(C)


def test_simplify():
    M = rank2_partition([2, 1, 1], loops=1)  # classes {1,2},{3},{4}, loop 5
    si, gmap = simplify(M)
    assert si == uniform(2, 3)
    assert gmap == {1: 1, 2: 3, 3: 4}
    assert simplify(uniform(1, 3))[0] == uniform(1, 1)
    P = catalog("P6")
    assert simplify(P)[0] == P
    with pytest.raises(RankZero):
        simplify(uniform(0, 2))


# ---------------------------------------------------------------------------
# isomorphism and catalog

def test_isomorphism_examples():
    U = uniform(2, 4)
    assert is_isomorphic(U, relabel(U, {1: 3, 2: 1, 3: 4, 4: 2})) is not None
    assert is_isomorphic(catalog("P6"), catalog("Q6")) is None


def test_six_element_catalog_pairwise_distinct():
    names = ["P6", "Q6", "R6", "W3", "MK4", "U(3,6)"]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            assert is_isomorphic(catalog(a), catalog(b)) is None


@settings(max_examples=60, deadline=None)
@given(matroids(max_n=6), st.randoms())
def test_isomorphism_agrees_with_permutation_oracle(M, rnd):
    images = list(range(1, M.n + 1))
    rnd.shuffle(images)
    N = relabel(M, {i + 1: images[i] for i in range(M.n)})
    phi = is_isomorphic(M, N)
    assert phi is not None
    assert {frozenset(phi[e] for e in members(b)) for b in M.bases} == set(oracles.as_sets(N))
    assert is_isomorphic(N, M) is not None


def test_isomorphism_negative_matches_oracle():
    names = ["P6", "Q6", "R6", "W3"]
    for a in names:
        for b in names:
            A, B = catalog(a), catalog(b)
            expect = oracles.isomorphic(6, oracles.as_sets(A), oracles.as_sets(B))
            assert (is_isomorphic(A, B) is not None) == expect


def test_catalog_examples():
    v8 = catalog("V8")
    assert (v8.n, v8.r, len(v8.nonbases)) == (8, 4, 5)
    mk4 = catalog("MK4")
    assert (mk4.n, mk4.r, len(mk4.nonbases)) == (6, 3, 4)
    assert sorted(members(x) for x in mk4.nonbases) == [(1, 2, 4), (1, 3, 5), (2, 3, 6), (4, 5, 6)]
    assert len(catalog("U(3,6)").bases) == 20
    assert catalog("MK(4)") == mk4
    with pytest.raises(UnknownName):
        catalog("X9")


def test_cycle_matroid_spanning_trees():
    # Cayley: K_m has m^(m-2) spanning trees
    for m in range(2, 7):
        assert len(catalog(f"MK{m}").bases) == m ** (m - 2)


@pytest.mark.parametrize("name", ["P6", "Q6", "R6", "W3", "MK4", "V8", "MK5", "U(2,5)"])
def test_catalog_validates(name):
    M = catalog(name)
    assert validate_matroid(M.n, M.r, M.bases) == M
    assert M.dual.dual == M


# ---------------------------------------------------------------------------
# .bases format

@settings(max_examples=60, deadline=None)
@given(matroids())
def test_bases_roundtrip(M):
    text = format_bases(M, ["generated"])
    assert parse_bases(text) == M
    assert not any(line != line.rstrip() for line in text.split("\n"))


def test_rank_zero_format():
    M = Matroid(2, 0, frozenset({0}))
    assert format_bases(M) == "2 0\n\n"
    assert parse_bases("2 0\n\n") == M


@pytest.mark.parametrize(
    "text",
    [
        "3 1\n1\n1\n",          # duplicate
        "3 2\n1 2\n3\n",        # cardinality
        "3 1\n1 \n",            # trailing whitespace
        "3 2\n2 1\n",           # not increasing
        "3 1\n4\n",             # outside ground set
        "x 1\n1\n",             # bad header
        "",                     # empty
    ],
)
def test_parse_rejects(text):
    with pytest.raises(BasesFormatError):
        parse_bases(text)


def test_parse_skips_comments():
    assert parse_bases("# hello\n# world\n2 1\n1\n2\n") == uniform(1, 2)
