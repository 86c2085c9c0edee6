"""Minor containment with witness extraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from .core import (
    Flat,
    GroundMap,
    Matroid,
    bit_positions,
    compress,
    is_isomorphic,
    k_subsets,
    members,
    minor_of,
    parallel_classes,
    uniform,
)
from .errors import NotSimpleRank3


@dataclass(frozen=True)
class MinorWitness:
    """``host / contract \\ delete`` is isomorphic to the pattern via ``map``.

    ``map`` sends surviving host elements to pattern elements (both 1-based).
    """

    contract: int
    delete: int
    map: GroundMap

    def to_json(self) -> dict:
        return {
            "contract": list(members(self.contract)),
            "delete": list(members(self.delete)),
            "map": {str(k): v for k, v in sorted(self.map.items())},
        }


def _profile(n: int, bases) -> Tuple[int, Tuple[int, ...]]:
    # basis count plus sorted element degrees; loops / coloops show up as 0 / full
    deg = [0] * n
    for b in bases:
        for i in bit_positions(b):
            deg[i] += 1
    return len(bases), tuple(sorted(deg))


def _independent_sets(M: Matroid, size: int) -> Iterator[int]:
    for a in k_subsets(M.n, size):
        if M.is_independent(a):
            yield a


def has_minor(M: Matroid, N: Matroid) -> Optional[MinorWitness]:
    """Search ``M / A \\ B ≅ N`` over independent ``A`` with ``|A| = r(M) - r(N)``.

    ``A`` runs over independent sets in colex order, then ``B`` in colex order
    over the remaining elements; the first witness is returned.
    """
    a_size = M.r - N.r
    b_size = M.n - a_size - N.n
    if a_size < 0 or b_size < 0:
        return None
    target = _profile(N.n, N.bases)
    for a in _independent_sets(M, a_size):
        # bases of M/A restricted to the elements outside A
        lifted = [b & ~a for b in M.sorted_bases if b & a == a]
        rest = M.ground & ~a
        rest_pos = list(bit_positions(rest))
        for bc in k_subsets(len(rest_pos), b_size):
            bmask = 0
            for j in bit_positions(bc):
                bmask |= 1 << rest_pos[j]
            keep = rest & ~bmask
            positions = list(bit_positions(keep))
            minor_bases = [compress(b, positions) for b in lifted if not b & bmask]
            if len(minor_bases) != target[0]:
                continue
            if _profile(N.n, minor_bases) != target:
                continue
            minor = Matroid(N.n, N.r, frozenset(minor_bases))
            iso = is_isomorphic(minor, N)
            if iso is None:
                continue
            gmap = {p + 1: iso[j + 1] for j, p in enumerate(positions)}
            return MinorWitness(a, bmask, gmap)
    return None


def check_witness(M: Matroid, N: Matroid, w: MinorWitness) -> bool:
    """Re-derive the minor from a witness and confirm the isomorphism."""
    if not M.is_independent(w.contract):
        return False
    minor, relabel_map = minor_of(M, w.contract, w.delete)
    if (minor.n, minor.r) != (N.n, N.r):
        return False
    image = set()
    for b in minor.bases:
        host = [k for k, v in relabel_map.items() if b >> (v - 1) & 1]
        image.add(sum(1 << (w.map[h] - 1) for h in host))
    return image == set(N.bases)


def line_deletion_witness(M: Matroid, k: int) -> Optional[Flat]:
    """A line ``l`` of a simple rank-3 matroid with no ``U(3, k-1)``-minor in ``M \\ l``.

    Lines are tried in canonical flat order.  For ``k - 1 < 3`` there is no
    such uniform matroid and the first line qualifies.
    """
    if M.r != 3 or M.loops or any(c.bit_count() > 1 for c in parallel_classes(M)):
        raise NotSimpleRank3(f"expected a simple rank-3 matroid, got {M!r}")
    pattern = uniform(3, k - 1) if k - 1 >= 3 else None
    for f in M.flats:
        if f.rank != 2:
            continue
        if pattern is None:
            return f
        rest, _ = minor_of(M, 0, f.elements)
        if has_minor(rest, pattern) is None:
            return f
    return None

