"""Matroids given by explicit basis lists.

Subsets of the ground set ``[n]`` are plain ``int`` bitmasks: element ``i``
(1-based, as everywhere in I/O) is bit ``i - 1``.  Sorting masks as integers
gives colex order, which is the canonical order used throughout the package.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, Iterator, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    BasesFormatError,
    EmptyBases,
    ExchangeViolation,
    OutOfGroundSet,
    OverlappingSets,
    RankZero,
    SizeCapExceeded,
    UnknownName,
    WrongCardinality,
)

#: Largest ground set for which every flat is enumerated.
SIZE_CAP = 16

#: 1-based element -> 1-based element.
GroundMap = Dict[int, int]


# ---------------------------------------------------------------------------
# subsets

def mask(elements: Iterable[int]) -> int:
    """Bitmask of a collection of 1-based elements."""
    m = 0
    for e in elements:
        if e < 1:
            raise OutOfGroundSet(f"element {e} is not a positive label")
        m |= 1 << (e - 1)
    return m


def members(m: int) -> Tuple[int, ...]:
    """Sorted 1-based elements of a bitmask."""
    out = []
    i = 1
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


def bit_positions(m: int) -> Iterator[int]:
    """0-based positions of the set bits, increasing."""
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def full(n: int) -> int:
    return (1 << n) - 1


def k_subsets(n: int, k: int) -> Iterator[int]:
    """All ``k``-subsets of ``[n]`` in colex (increasing integer) order."""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        # Gosper's hack
        c = x & -x
        y = x + c
        x = (((x ^ y) >> 2) // c) | y


def subsets_of(m: int) -> Iterator[int]:
    """All subsets of ``m`` (including 0 and ``m``)."""
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def compress(x: int, positions: Sequence[int]) -> int:
    """Relabel ``x`` so that bit ``positions[j]`` becomes bit ``j``."""
    out = 0
    for j, p in enumerate(positions):
        if (x >> p) & 1:
            out |= 1 << j
    return out


def expand(x: int, positions: Sequence[int]) -> int:
    """Inverse of :func:`compress`."""
    out = 0
    for j in bit_positions(x):
        out |= 1 << positions[j]
    return out


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr)


# ---------------------------------------------------------------------------
# matroids

class Flat(NamedTuple):
    elements: int
    rank: int

    @property
    def members(self) -> Tuple[int, ...]:
        return members(self.elements)

    def key(self) -> Tuple[int, int]:
        """Canonical order: rank first, then the element bitset."""
        return (self.rank, self.elements)

    def to_json(self) -> dict:
        return {"elements": list(self.members), "rank": self.rank}


@dataclass(frozen=True)
class Matroid:
    """A matroid on ``[n]`` of rank ``r`` with an explicit basis collection.

    Instances are not validated on construction; use :func:`validate_matroid`
    for untrusted input.
    """

    n: int
    r: int
    bases: frozenset

    def __repr__(self) -> str:
        return f"Matroid(n={self.n}, r={self.r}, |bases|={len(self.bases)})"

    @property
    def ground(self) -> int:
        return full(self.n)

    @cached_property
    def sorted_bases(self) -> Tuple[int, ...]:
        return tuple(sorted(self.bases))

    @cached_property
    def _arr(self) -> np.ndarray:
        return np.array(self.sorted_bases, dtype=np.uint64)

    @cached_property
    def nonbases(self) -> Tuple[int, ...]:
        return tuple(x for x in k_subsets(self.n, self.r) if x not in self.bases)

    def rank(self, s: int) -> int:
        return int(_popcount(self._arr & np.uint64(s)).max())

    def is_independent(self, s: int) -> bool:
        return self.rank(s) == s.bit_count()

    def closure(self, s: int) -> int:
        arr = self._arr
        i = int(_popcount(arr & np.uint64(s)).argmax())
        ind = int(arr[i]) & s
        i64 = np.uint64(ind)
        spanned = int(np.bitwise_or.reduce(arr[(arr & i64) == i64]))
        # e outside s escapes the closure iff some basis contains ind + e
        return s | (self.ground & ~spanned)

    def is_flat(self, s: int) -> bool:
        return self.closure(s) == s

    @cached_property
    def loops(self) -> int:
        return self.ground & ~int(np.bitwise_or.reduce(self._arr))

    @cached_property
    def coloops(self) -> int:
        return int(np.bitwise_and.reduce(self._arr))

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        """Number of bases containing each element (0-based positions)."""
        arr = self._arr
        return tuple(int(np.count_nonzero(arr & np.uint64(1 << i))) for i in range(self.n))

    @cached_property
    def flats(self) -> Tuple[Flat, ...]:
        if self.n > SIZE_CAP:
            raise SizeCapExceeded(f"n={self.n} exceeds the flat enumeration cap {SIZE_CAP}")
        out = []
        level = {self.closure(0)}
        k = 0
        while level:
            out.extend(Flat(f, k) for f in sorted(level))
            nxt = set()
            for f in level:
                rest = self.ground & ~f
                while rest:
                    low = rest & -rest
                    g = self.closure(f | low)
                    nxt.add(g)
                    rest &= ~g
            level = nxt
            k += 1
        return tuple(out)

    @cached_property
    def dual(self) -> "Matroid":
        g = self.ground
        d = Matroid(self.n, self.n - self.r, frozenset(g ^ b for b in self.bases))
        d.__dict__["dual"] = self
        return d


def validate_matroid(n: int, r: int, bases: Iterable[int]) -> Matroid:
    """Check the basis axioms and return the matroid.

    Raises the first violated axiom; exchange failures carry the witness
    ``(B1, x)`` together with the basis ``B2`` that blocks the exchange.
    """
    bs = frozenset(bases)
    if not bs:
        raise EmptyBases("the basis collection is empty")
    g = full(n)
    for b in sorted(bs):
        if b & ~g or b < 0:
            raise OutOfGroundSet(f"basis {members(b)} leaves the ground set [{n}]")
        if b.bit_count() != r:
            raise WrongCardinality(b, r)
    M = Matroid(n, r, bs)
    arr = M._arr
    for b1 in M.sorted_bases:
        outside = g & ~b1
        for x in bit_positions(b1):
            xb = 1 << x
            ys = 0
            for y in bit_positions(outside):
                if (b1 ^ xb) | (1 << y) in bs:
                    ys |= 1 << y
            blockers = arr[(arr & np.uint64(ys | xb)) == 0]
            if len(blockers):
                raise ExchangeViolation(b1, x + 1, int(blockers[0]))
    return M


def rank_of(M: Matroid, s: int) -> int:
    return M.rank(s)


def closure_of(M: Matroid, s: int) -> int:
    return M.closure(s)


def all_flats(M: Matroid) -> Tuple[Flat, ...]:
    """Every flat of ``M`` once, ordered by (rank, bitset)."""
    return M.flats


def dual_of(M: Matroid) -> Matroid:
    return M.dual


def minor_of(M: Matroid, contract: int, delete: int) -> Tuple[Matroid, GroundMap]:
    """``M / contract \\ delete`` relabelled onto ``1..n'``.

    Returns the minor and the map from surviving host elements to their new
    labels.
    """
    if contract & delete:
        raise OverlappingSets(f"contract and delete share {members(contract & delete)}")
    rest = M.ground & ~(contract | delete)
    rc = M.rank(contract)
    rk = M.rank(M.ground & ~delete) - rc
    positions = list(bit_positions(rest))
    new_bases = set()
    for b in M.sorted_bases:
        if (b & contract).bit_count() == rc and (b & rest).bit_count() == rk:
            new_bases.add(compress(b & rest, positions))
    gmap = {p + 1: j + 1 for j, p in enumerate(positions)}
    return Matroid(len(positions), rk, frozenset(new_bases)), gmap


def delete(M: Matroid, s: int) -> Matroid:
    return minor_of(M, 0, s)[0]


def contract(M: Matroid, s: int) -> Matroid:
    return minor_of(M, s, 0)[0]


def restrict(M: Matroid, s: int) -> Matroid:
    return minor_of(M, 0, M.ground & ~s)[0]


def parallel_classes(M: Matroid) -> Tuple[int, ...]:
    """Parallel classes of non-loops, ordered by their smallest element."""
    out = []
    seen = M.loops
    for e in bit_positions(M.ground & ~M.loops):
        if seen >> e & 1:
            continue
        cls = M.closure(1 << e) & ~M.loops
        out.append(cls)
        seen |= cls
    return tuple(out)


def simplify(M: Matroid) -> Tuple[Matroid, GroundMap]:
    """si(M) on the smallest element of each parallel class.

    The map sends each new label to the host element representing its class.
    """
    if M.r == 0:
        raise RankZero("a rank-0 matroid has no simplification")
    reps = 0
    for cls in parallel_classes(M):
        reps |= cls & -cls
    si, gmap = minor_of(M, 0, M.ground & ~reps)
    return si, {v: k for k, v in gmap.items()}


def direct_sum(M: Matroid, N: Matroid) -> Matroid:
    """``M ⊕ N`` with N's elements shifted past M's."""
    bases = frozenset(a | (b << M.n) for a in M.bases for b in N.bases)
    return Matroid(M.n + N.n, M.r + N.r, bases)


def add_loop(M: Matroid) -> Matroid:
    return Matroid(M.n + 1, M.r, M.bases)


def add_coloop(M: Matroid) -> Matroid:
    top = 1 << M.n
    return Matroid(M.n + 1, M.r + 1, frozenset(b | top for b in M.bases))


def add_parallel(M: Matroid, e: int) -> Matroid:
    """Add a new element ``n + 1`` parallel to element ``e`` (1-based)."""
    eb = 1 << (e - 1)
    top = 1 << M.n
    extra = {(b & ~eb) | top for b in M.bases if b & eb}
    return Matroid(M.n + 1, M.r, M.bases | frozenset(extra))


def relabel(M: Matroid, perm: GroundMap) -> Matroid:
    """Apply a permutation of ``[n]`` given as 1-based element -> element."""
    table = [0] * M.n
    for k, v in perm.items():
        table[k - 1] = 1 << (v - 1)
    return Matroid(M.n, M.r, frozenset(sum(table[i] for i in bit_positions(b)) for b in M.bases))


# ---------------------------------------------------------------------------
# isomorphism

def _family(M: Matroid) -> Tuple[int, ...]:
    # whichever of bases / non-bases is smaller determines M given (n, r)
    if len(M.nonbases) <= len(M.bases):
        return M.nonbases
    return M.sorted_bases


def _degrees(family: Sequence[int], n: int) -> Tuple[int, ...]:
    return tuple(sum(1 for x in family if x >> i & 1) for i in range(n))


def is_isomorphic(M: Matroid, N: Matroid) -> Optional[GroundMap]:
    """A bijection ``E(M) -> E(N)`` carrying bases onto bases, or ``None``.

    Backtracking over elements, pruned by per-element degree in the smaller of
    the basis / non-basis families.  Deterministic.
    """
    if (M.n, M.r, len(M.bases)) != (N.n, N.r, len(N.bases)):
        return None
    use_nb = len(M.nonbases) <= len(M.bases)
    fm = M.nonbases if use_nb else M.sorted_bases
    fn = set(N.nonbases if use_nb else N.sorted_bases)
    dm = _degrees(fm, M.n)
    dn = _degrees(tuple(fn), N.n)
    if sorted(dm) != sorted(dn):
        return None
    n = M.n
    # most constrained (rarest degree) first
    counts = {}
    for d in dm:
        counts[d] = counts.get(d, 0) + 1
    order = sorted(range(n), key=lambda i: (counts[dm[i]], -dm[i], i))
    pos = {e: k for k, e in enumerate(order)}
    closing = [[] for _ in range(n)]
    for x in fm:
        last = max(pos[i] for i in bit_positions(x)) if x else -1
        if last >= 0:
            closing[last].append(x)
    candidates = [[j for j in range(n) if dn[j] == dm[i]] for i in range(n)]
    image = [0] * n
    used = [False] * n

    def image_of(x: int) -> int:
        out = 0
        for i in bit_positions(x):
            out |= image[i]
        return out

    def extend(k: int) -> bool:
        if k == n:
            return True
        i = order[k]
        for j in candidates[i]:
            if used[j]:
                continue
            image[i] = 1 << j
            if all(image_of(x) in fn for x in closing[k]):
                used[j] = True
                if extend(k + 1):
                    return True
                used[j] = False
        image[i] = 0
        return False

    if not extend(0):
        return None
    return {i + 1: image[i].bit_length() for i in range(n)}


# ---------------------------------------------------------------------------
# catalog

def uniform(r: int, n: int) -> Matroid:
    return Matroid(n, r, frozenset(k_subsets(n, r)))


def from_nonbases(n: int, r: int, nonbases: Iterable[int]) -> Matroid:
    nb = set(nonbases)
    return Matroid(n, r, frozenset(x for x in k_subsets(n, r) if x not in nb))


def cycle_matroid(num_vertices: int, edges: Sequence[Tuple[int, int]]) -> Matroid:
    """Cycle matroid of a multigraph; edge ``i`` (0-based) becomes element ``i + 1``.

    Bases are the maximal spanning forests, found by enumerating edge subsets of
    the forest rank.
    """

    def components(es: Iterable[int]) -> int:
        parent = list(range(num_vertices))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        c = num_vertices
        for i in es:
            a, b = (find(v) for v in edges[i])
            if a != b:
                parent[a] = b
                c -= 1
        return c

    r = num_vertices - components(range(len(edges)))
    bases = []
    for combo in itertools.combinations(range(len(edges)), r):
        if components(combo) == num_vertices - r:
            bases.append(sum(1 << i for i in combo))
    return Matroid(len(edges), r, frozenset(bases))


def complete_graph_edges(m: int) -> Tuple[Tuple[int, int], ...]:
    """Edges of K_m in lexicographic order; edge ``i`` is element ``i + 1``."""
    return tuple(itertools.combinations(range(m), 2))


# Fixed labellings; every downstream golden value refers to these.
_CIRCUIT_HYPERPLANES = {
    "P6": (6, 3, [(1, 2, 3)]),
    "Q6": (6, 3, [(1, 2, 3), (1, 4, 5)]),
    "R6": (6, 3, [(1, 2, 3), (4, 5, 6)]),
    "W3": (6, 3, [(1, 2, 3), (3, 4, 5), (5, 6, 1)]),
    # a a' b b' c c' d d' = 1..8
    "V8": (8, 4, [(1, 2, 3, 4), (1, 2, 5, 6), (1, 2, 7, 8), (3, 4, 5, 6), (3, 4, 7, 8)]),
}

_UNIFORM = re.compile(r"^U\(?\s*(\d+)\s*,\s*(\d+)\s*\)?$")
_COMPLETE = re.compile(r"^MK\(?\s*(\d+)\s*\)?$")


@lru_cache(maxsize=None)
def catalog(name: str) -> Matroid:
    """Named matroids: ``U(r,n)``, ``P6``, ``Q6``, ``R6``, ``W3``, ``MK4``,
    ``MK(m)`` / ``MKm`` for ``m <= 6`` and ``V8``.

    MK(m) uses the edges of K_m in lexicographic order of their endpoint
    pairs; MK4 is MK(4), whose triangles are {1,2,4}, {1,3,5}, {2,3,6}, {4,5,6}.
    """
    key = name.strip()
    if key in _CIRCUIT_HYPERPLANES:
        n, r, nbs = _CIRCUIT_HYPERPLANES[key]
        return from_nonbases(n, r, (mask(x) for x in nbs))
    m = _UNIFORM.match(key)
    if m:
        r, n = int(m.group(1)), int(m.group(2))
        if 0 <= r <= n <= 12:
            return uniform(r, n)
        raise UnknownName(f"uniform matroid {key} outside 0 <= r <= n <= 12")
    m = _COMPLETE.match(key)
    if m:
        k = int(m.group(1))
        if 1 <= k <= 6:
            return cycle_matroid(k, complete_graph_edges(k))
        raise UnknownName(f"{key}: only MK(m) for m <= 6 is cataloged")
    raise UnknownName(f"unknown catalog name {name!r}")


NAMED = ("P6", "Q6", "R6", "W3", "MK4", "V8", "MK(2)", "MK(3)", "MK(5)", "MK(6)")


def catalog_names(max_uniform: int = 12) -> Tuple[str, ...]:
    """Every concrete catalog name, named matroids first."""
    uni = tuple(f"U({r},{n})" for n in range(max_uniform + 1) for r in range(n + 1))
    return NAMED + uni


# ---------------------------------------------------------------------------
# .bases text format

def format_bases(M: Matroid, comments: Sequence[str] = ()) -> str:
    """Serialise to the ``.bases`` format; ``comments`` become leading ``#`` lines."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"{M.n} {M.r}")
    rows = sorted(members(b) for b in M.bases)
    lines.extend(" ".join(map(str, row)) for row in rows)
    return "\n".join(lines) + "\n"


def parse_bases(text: str) -> Matroid:
    """Parse ``.bases`` text and validate the basis axioms.

    Leading lines starting with ``#`` are comments.  A rank-0 matroid has one
    empty basis line.
    """
    raw = text.split("\n")
    if raw and raw[-1] == "":
        raw.pop()
    while raw and raw[0].startswith("#"):
        raw.pop(0)
    if not raw:
        raise BasesFormatError("missing header line 'n r'")
    head = raw[0].split(" ")
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise BasesFormatError(f"bad header {raw[0]!r}")
    n, r = int(head[0]), int(head[1])
    if r > n:
        raise BasesFormatError(f"rank {r} exceeds ground set size {n}")
    seen = set()
    for lineno, line in enumerate(raw[1:], start=2):
        if line != line.rstrip() or "\r" in line:
            raise BasesFormatError(f"line {lineno}: trailing whitespace")
        toks = line.split(" ") if line else []
        if not all(t.isdigit() for t in toks):
            raise BasesFormatError(f"line {lineno}: not a list of integers")
        elems = [int(t) for t in toks]
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise BasesFormatError(f"line {lineno}: indices not strictly increasing")
        if any(e < 1 or e > n for e in elems):
            raise BasesFormatError(f"line {lineno}: element outside [1, {n}]")
        if len(elems) != r:
            raise BasesFormatError(f"line {lineno}: expected {r} elements, got {len(elems)}")
        b = mask(elems)
        if b in seen:
            raise BasesFormatError(f"line {lineno}: duplicate basis")
        seen.add(b)
    return validate_matroid(n, r, seen)
