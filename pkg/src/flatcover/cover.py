"""Flat covers: verification, exact cover complexity, structured covers and
the cover transforms behind duality, deletion/contraction and relaxation.

A flat ``F`` covers an ``r``-set ``X`` when ``|X ∩ F| > rank(F)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    Flat,
    Matroid,
    bit_positions,
    compress,
    expand,
    members,
    minor_of,
    parallel_classes,
)
from .errors import (
    LoopOrColoop,
    NotACircuitHyperplane,
    NotACover,
    NotAFlat,
    WrongRank,
)

FlatCover = Tuple[Flat, ...]


def covers(f: Flat, x: int) -> bool:
    return (x & f.elements).bit_count() > f.rank


@dataclass(frozen=True)
class CoverCheck:
    """Outcome of :func:`is_flat_cover`; falsy when a non-basis is uncovered."""

    ok: bool
    uncovered: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class DualCertificate:
    """Weights on non-bases feasible for the packing program.

    For every flat the total weight of the non-bases it covers is at most 1,
    so the total weight is a lower bound on the fractional cover complexity.
    """

    weights: Dict[int, Fraction]

    @property
    def value(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def to_json(self) -> list:
        return [
            {"nonbasis": list(members(x)), "weight": [str(w.numerator), str(w.denominator)]}
            for x, w in sorted(self.weights.items())
        ]


@dataclass(frozen=True)
class KappaResult:
    value: int
    cover: FlatCover
    certificate: Optional[DualCertificate] = None

    def to_json(self) -> dict:
        out = {"value": self.value, "cover": [f.to_json() for f in self.cover]}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


# ---------------------------------------------------------------------------
# incidence between non-bases and candidate flats

def cover_candidates(M: Matroid) -> Tuple[Flat, ...]:
    """Flats that can cover something: 0 < rank < r, plus cl(∅) when M has loops."""
    out = []
    for f in M.flats:
        if 0 < f.rank < M.r or (f.rank == 0 and f.elements):
            out.append(f)
    return tuple(sorted(out, key=Flat.key))


@dataclass
class Incidence:
    """Non-bases (rows) against candidate flats (columns) as bitmasks."""

    nonbases: Tuple[int, ...]
    flats: Tuple[Flat, ...]
    row: List[int] = field(default_factory=list)   # flats covering nonbase i
    col: List[int] = field(default_factory=list)   # nonbases covered by flat j

    @classmethod
    def of(cls, M: Matroid, flats: Optional[Sequence[Flat]] = None) -> "Incidence":
        nbs = M.nonbases
        fl = tuple(cover_candidates(M) if flats is None else flats)
        inc = cls(nbs, fl, [0] * len(nbs), [0] * len(fl))
        for j, f in enumerate(fl):
            e, rk = f.elements, f.rank
            colmask = 0
            for i, x in enumerate(nbs):
                if (x & e).bit_count() > rk:
                    colmask |= 1 << i
                    inc.row[i] |= 1 << j
            inc.col[j] = colmask
        return inc


def is_flat_cover(M: Matroid, cover: Sequence[Flat]) -> CoverCheck:
    """Check that every non-basis is covered; report the first one that is not."""
    for f in cover:
        if not M.is_flat(f.elements) or M.rank(f.elements) != f.rank:
            raise NotAFlat(f)
    for x in M.nonbases:
        if not any(covers(f, x) for f in cover):
            return CoverCheck(False, x)
    return CoverCheck(True)


# ---------------------------------------------------------------------------
# set cover / packing machinery

def _reduce(row: Sequence[int], col: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Drop dominated rows and columns of a covering instance.

    A row whose covering set contains another row's covering set is implied;
    a column contained in another column is never needed.  Returns the kept
    row indices and kept column indices.
    """
    rows = list(range(len(row)))
    cols = [j for j in range(len(col)) if col[j]]
    while True:
        alive_c = sum(1 << j for j in cols)
        seen = {}
        for i in rows:
            seen.setdefault(row[i] & alive_c, i)
        uniq = sorted(seen.items(), key=lambda kv: (kv[0].bit_count(), kv[1]))
        kept_rows = []
        kept_masks = []
        for m, i in uniq:
            if any(k & ~m == 0 for k in kept_masks):
                continue
            kept_rows.append(i)
            kept_masks.append(m)
        alive_r = sum(1 << i for i in kept_rows)
        seen_c = {}
        for j in cols:
            seen_c.setdefault(col[j] & alive_r, j)
        cand = sorted(seen_c.items(), key=lambda kv: (-kv[0].bit_count(), kv[1]))
        kept_cols = []
        kept_cm = []
        for m, j in cand:
            if m == 0 or any(m & ~k == 0 for k in kept_cm):
                continue
            kept_cols.append(j)
            kept_cm.append(m)
        kept_cols.sort()
        kept_rows.sort()
        if kept_rows == rows and kept_cols == cols:
            return rows, cols
        rows, cols = kept_rows, kept_cols


def _greedy(universe: int, sets: Sequence[int]) -> List[int]:
    chosen = []
    left = universe
    while left:
        j = max(range(len(sets)), key=lambda k: ((sets[k] & left).bit_count(), -k))
        chosen.append(j)
        left &= ~sets[j]
    return chosen


def min_set_cover(n_elements: int, sets: Sequence[int]) -> List[int]:
    """Exact minimum set cover by branch and bound.

    ``sets`` are bitmasks over ``range(n_elements)``; every element must lie
    in some set.  Branches on the uncovered element with fewest usable sets,
    trying its sets by decreasing new coverage; the bound is a greedy packing
    of elements with pairwise disjoint covering sets.  Returns set indices.
    """
    row = [0] * n_elements
    for j, s in enumerate(sets):
        for i in bit_positions(s):
            row[i] |= 1 << j
    if any(r == 0 for r in row):
        raise NotACover("some element lies in no set")
    rows, cols = _reduce(row, sets)
    # compact instance
    ridx = {i: k for k, i in enumerate(rows)}
    csets = [sum(1 << ridx[i] for i in bit_positions(sets[j]) if i in ridx) for j in cols]
    crow = [0] * len(rows)
    for jj, s in enumerate(csets):
        for k in bit_positions(s):
            crow[k] |= 1 << jj
    universe = (1 << len(rows)) - 1
    order = sorted(range(len(rows)), key=lambda k: (crow[k].bit_count(), k))
    best = _greedy(universe, csets)

    def packing(uncovered: int, allowed: int) -> int:
        used = 0
        count = 0
        for k in order:
            if uncovered >> k & 1:
                c = crow[k] & allowed
                if not c & used:
                    used |= c
                    count += 1
        return count

    def search(uncovered: int, chosen: List[int], allowed: int) -> None:
        nonlocal best
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(chosen) + packing(uncovered, allowed) >= len(best):
            return
        pick_sets, pick_count = 0, None
        for k in bit_positions(uncovered):
            c = crow[k] & allowed
            cnt = c.bit_count()
            if pick_count is None or cnt < pick_count:
                pick_sets, pick_count = c, cnt
                if cnt <= 1:
                    break
        if pick_count == 0:
            return
        opts = sorted(bit_positions(pick_sets), key=lambda j: (-(csets[j] & uncovered).bit_count(), j))
        for j in opts:
            chosen.append(j)
            search(uncovered & ~csets[j], chosen, allowed)
            chosen.pop()
            allowed &= ~(1 << j)

    search(universe, [], (1 << len(csets)) - 1)
    return sorted(cols[j] for j in best)


def max_independent_set(adj: Sequence[int]) -> List[int]:
    """Maximum independent set of a graph given as adjacency bitmasks.

    Max-clique search in the complement with a greedy colouring bound.
    """
    n = len(adj)
    everything = (1 << n) - 1
    comp = [everything & ~adj[v] & ~(1 << v) for v in range(n)]
    best: List[int] = []

    def colour(p: int):
        order, bounds = [], []
        c = 0
        left = p
        while left:
            c += 1
            q = left
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~comp[v] & ~low
                left &= ~low
                order.append(v)
                bounds.append(c)
        return order, bounds

    def expand_clique(chosen: List[int], p: int) -> None:
        nonlocal best
        order, bounds = colour(p)
        for v, b in zip(reversed(order), reversed(bounds)):
            if len(chosen) + b <= len(best):
                return
            chosen.append(v)
            q = p & comp[v]
            if q:
                expand_clique(chosen, q)
            elif len(chosen) > len(best):
                best = list(chosen)
            chosen.pop()
            p &= ~(1 << v)

    if n:
        expand_clique([], everything)
    return sorted(best)


# ---------------------------------------------------------------------------
# integer packing bound and exact kappa

def mu_integer(M: Matroid) -> Tuple[int, Tuple[int, ...]]:
    """Largest family of non-bases no flat covers twice, with the family.

    Solved as a maximum independent set in the conflict graph (two non-bases
    adjacent when some flat covers both), after removing non-bases whose
    covering flats contain another's.
    """
    if not M.nonbases:
        return 0, ()
    inc = Incidence.of(M)
    rows, _ = _reduce(inc.row, inc.col)
    cov = [inc.row[i] for i in rows]
    adj = [0] * len(rows)
    for a in range(len(rows)):
        for b in range(a + 1, len(rows)):
            if cov[a] & cov[b]:
                adj[a] |= 1 << b
                adj[b] |= 1 << a
    picked = max_independent_set(adj)
    chosen = tuple(sorted(inc.nonbases[rows[k]] for k in picked))
    return len(chosen), chosen


def kappa_exact(M: Matroid, certify: bool = True) -> KappaResult:
    """Exact cover complexity with a minimum flat cover.

    With ``certify`` a dual certificate is attached when one matches the
    value: the integer packing from :func:`mu_integer` if it is tight,
    otherwise an optimal fractional packing if the LP value is integral and
    equal.
    """
    if not M.nonbases:
        return KappaResult(0, (), DualCertificate({}) if certify else None)
    inc = Incidence.of(M)
    chosen = min_set_cover(len(inc.nonbases), inc.col)
    cover = tuple(sorted((inc.flats[j] for j in chosen), key=Flat.key))
    cert = None
    if certify:
        mu, family = mu_integer(M)
        if mu == len(cover):
            cert = DualCertificate({x: Fraction(1) for x in family})
        else:
            from .lp import kappa_star

            value, _, dual = kappa_star(M)
            if value == len(cover):
                cert = dual
    return KappaResult(len(cover), cover, cert)


def check_certificate(M: Matroid, cert: DualCertificate) -> bool:
    """Every flat covers non-bases of total weight at most 1."""
    nb = set(M.nonbases)
    if any(x not in nb or w < 0 for x, w in cert.weights.items()):
        return False
    for f in M.flats:
        load = sum((w for x, w in cert.weights.items() if covers(f, x)), Fraction(0))
        if load > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# transforms

def is_circuit_hyperplane(M: Matroid, h: int) -> bool:
    if h.bit_count() != M.r or h in M.bases:
        return False
    if not M.is_flat(h) or M.rank(h) != M.r - 1:
        return False
    return all(M.is_independent(h & ~(1 << e)) for e in bit_positions(h))


def relax(M: Matroid, h: int) -> Matroid:
    """Declare the circuit-hyperplane ``h`` a basis."""
    if not is_circuit_hyperplane(M, h):
        raise NotACircuitHyperplane(f"{members(h)} is not a circuit-hyperplane")
    return Matroid(M.n, M.r, M.bases | {h})


def circuit_hyperplanes(M: Matroid) -> Tuple[int, ...]:
    return tuple(x for x in M.nonbases if is_circuit_hyperplane(M, x))


def _dedupe(flats) -> FlatCover:
    seen = set()
    out = []
    for f in flats:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return tuple(out)


def _require_cover(M: Matroid, cover: Sequence[Flat]) -> None:
    check = is_flat_cover(M, cover)
    if not check:
        raise NotACover(f"non-basis {members(check.uncovered)} is uncovered")


def dualize_cover(M: Matroid, cover: Sequence[Flat]) -> FlatCover:
    """Map a cover of M to a cover of M*: each F becomes cl*(E - F)."""
    _require_cover(M, cover)
    D = M.dual
    out = []
    for f in cover:
        g = D.closure(M.ground & ~f.elements)
        out.append(Flat(g, D.rank(g)))
    return _dedupe(out)


def project_cover(M: Matroid, cover: Sequence[Flat], e: int) -> FlatCover:
    """Map a cover of M to a cover of M \\ e (element ``e`` is 1-based)."""
    _require_cover(M, cover)
    eb = 1 << (e - 1)
    N, _ = minor_of(M, 0, eb)
    positions = list(bit_positions(M.ground & ~eb))
    out = []
    for f in cover:
        g = f.elements & ~eb
        out.append(Flat(compress(g, positions), M.rank(g)))
    return _dedupe(out)


def combine_cover(
    M: Matroid, e: int, cover_del: Sequence[Flat], cover_condual: Sequence[Flat]
) -> FlatCover:
    """Cover of M from a cover of M \\ e and a cover of (M / e)*.

    Deletion members are closed in M; each member F of the second cover
    becomes cl_M(E - cl*_M(F)).
    """
    eb = 1 << (e - 1)
    if M.loops & eb or M.coloops & eb:
        raise LoopOrColoop(f"element {e} is a loop or coloop")
    positions = list(bit_positions(M.ground & ~eb))
    D = M.dual
    out = []
    for f in cover_del:
        g = M.closure(expand(f.elements, positions))
        out.append(Flat(g, M.rank(g)))
    for f in cover_condual:
        host = expand(f.elements, positions)
        g = M.closure(M.ground & ~D.closure(host))
        out.append(Flat(g, M.rank(g)))
    return _dedupe(out)


def trim(M: Matroid, cover: Sequence[Flat]) -> FlatCover:
    """Drop members that cover no non-basis."""
    return tuple(f for f in cover if any(covers(f, x) for x in M.nonbases))


# ---------------------------------------------------------------------------
# structured covers for ranks 2 and 3

def rank2_cover(M: Matroid) -> FlatCover:
    """cl(∅) together with every point (rank-1 flat), trimmed."""
    if M.r != 2:
        raise WrongRank(f"rank2_cover needs rank 2, got {M.r}")
    base = [f for f in M.flats if f.rank <= 1]
    return trim(M, base)


def long_line_count(M: Matroid) -> int:
    """Lines containing at least three points (= long lines of si(M))."""
    classes = parallel_classes(M)
    count = 0
    for f in M.flats:
        if f.rank == 2 and sum(1 for c in classes if c & f.elements == c) >= 3:
            count += 1
    return count


def long_lines_cover(M: Matroid) -> FlatCover:
    """cl(∅), the points holding a parallel pair, and the long lines; trimmed."""
    if M.r != 3:
        raise WrongRank(f"long_lines_cover needs rank 3, got {M.r}")
    classes = parallel_classes(M)
    loops = M.loops
    z0 = [f for f in M.flats if f.rank == 0]
    z1 = [f for f in M.flats if f.rank == 1 and (f.elements & ~loops).bit_count() > 1]
    z2 = [
        f
        for f in M.flats
        if f.rank == 2 and sum(1 for c in classes if c & f.elements == c) >= 3
    ]
    return trim(M, z0 + z1 + z2)

