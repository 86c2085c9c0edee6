"""Stable sets of the Johnson graph, Graham-Sloane classes, sparse paving
matroids and spikes, plus the minor-freeness experiments built on them.

An r-subset family is stable in J(n, r) when no two members share r - 1
elements.  Removing a stable family from the r-subsets leaves the bases of a
sparse paving matroid.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    Matroid,
    catalog,
    from_nonbases,
    full,
    k_subsets,
    members,
    validate_matroid,
)
from .cover import is_circuit_hyperplane, kappa_exact
from .errors import BadRank, BadSystem, EvenN, MatroidError, NotStable, OutOfGroundSet, WrongCardinality
from .minors import has_minor


def element_sum(x: int) -> int:
    """Sum of the 1-based elements of a subset."""
    return sum(members(x))


def adjacent(x: int, y: int, r: int) -> bool:
    """Adjacency in J(n, r): two r-sets meeting in exactly r - 1 elements."""
    return (x & y).bit_count() == r - 1


def unstable_pair(family: Sequence[int], r: int) -> Optional[Tuple[int, int]]:
    """First adjacent pair of the family, or None if it is stable."""
    fam = list(family)
    for i, x in enumerate(fam):
        for y in fam[i + 1:]:
            if adjacent(x, y, r):
                return x, y
    return None


def is_stable(family: Sequence[int], r: int) -> bool:
    return unstable_pair(family, r) is None


def _check_rank(n: int, r: int) -> None:
    if not 0 < r < n:
        raise BadRank(f"need 0 < r < n, got n = {n}, r = {r}")


# ---------------------------------------------------------------------------
# Graham-Sloane classes

@dataclass(frozen=True)
class GSClass:
    """The r-subsets of [n] whose element sum is k mod n."""

    n: int
    r: int
    k: int
    members: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.members)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "size": len(self.members),
            "members": [list(members(x)) for x in self.members],
        }


def gs_class(n: int, r: int, k: int) -> GSClass:
    _check_rank(n, r)
    k %= n
    fam = tuple(x for x in k_subsets(n, r) if element_sum(x) % n == k)
    pair = unstable_pair(fam, r)
    if pair is not None:  # cannot happen: adjacent sets differ in one element
        raise NotStable(*pair)
    return GSClass(n, r, k, fam)


def class_sizes(n: int, r: int) -> List[int]:
    _check_rank(n, r)
    sizes = [0] * n
    for x in k_subsets(n, r):
        sizes[element_sum(x) % n] += 1
    return sizes


def best_class(n: int, r: int) -> Tuple[int, int]:
    """``(k, size)`` of a largest class; the smallest k wins ties."""
    sizes = class_sizes(n, r)
    top = max(sizes)
    return sizes.index(top), top


def sparse_paving_from_nonbases(n: int, r: int, family: Iterable[int]) -> Matroid:
    """Matroid whose bases are the r-subsets outside a stable family."""
    fam = sorted(set(family))
    for x in fam:
        if x >> n:
            raise OutOfGroundSet(f"{list(members(x))} is not a subset of [{n}]")
        if x.bit_count() != r:
            raise WrongCardinality(x, r)
    pair = unstable_pair(fam, r)
    if pair is not None:
        raise NotStable(*pair)
    dropped = set(fam)
    return validate_matroid(n, r, [x for x in k_subsets(n, r) if x not in dropped])


def sample_class_matroid(n: int, r: int, k: int, p: float, seed: int) -> Matroid:
    """Keep each class member as a non-basis with probability ``p``.

    One ``random.Random(seed).random() < p`` draw per member, in colex order.
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    cls = gs_class(n, r, k)
    rng = random.Random(seed)
    chosen = [x for x in cls.members if rng.random() < p]
    return sparse_paving_from_nonbases(n, r, chosen)


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial seed: the base seed shifted up 32 bits, xor the trial index."""
    return (seed << 32) ^ trial


# ---------------------------------------------------------------------------
# spikes

@dataclass(frozen=True)
class SetSystem:
    """Ground set [n] and a family of subsets, no two at symmetric difference 1."""

    n: int
    family: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 3:
            raise BadSystem("a spike needs n >= 3 legs")
        fam = sorted(self.family)
        if any(d >> self.n for d in fam):
            raise BadSystem(f"family members must be subsets of [{self.n}]")
        for i, d1 in enumerate(fam):
            for d2 in fam[i + 1:]:
                if (d1 ^ d2).bit_count() < 2:
                    raise BadSystem(
                        f"{list(members(d1))} and {list(members(d2))} differ in one element"
                    )

    @classmethod
    def all_k_subsets(cls, n: int, k: int) -> "SetSystem":
        return cls(n, frozenset(k_subsets(n, k)))


def transversal(n: int, d: int) -> int:
    """``T(D)``: a_i for i in D and b_j for j outside D (a_i = i, b_i = n + i)."""
    return d | ((full(n) & ~d) << n)


def legs(n: int) -> List[int]:
    return [(1 << i) | (1 << (n + i)) for i in range(n)]


def spike(S: SetSystem) -> Matroid:
    """Rank-n matroid on 2n elements with legs {i, n+i}.

    An n-set is a basis when it contains at most one whole leg and is not a
    transversal T(D) for D in the family.  The result is checked against the
    basis axioms.
    """
    n = S.n
    leg_masks = legs(n)
    dependent = {transversal(n, d) for d in S.family}
    bases = [
        x
        for x in k_subsets(2 * n, n)
        if sum(1 for leg in leg_masks if x & leg == leg) <= 1 and x not in dependent
    ]
    return validate_matroid(2 * n, n, bases)


def is_circuit(M: Matroid, c: int) -> bool:
    if M.is_independent(c):
        return False
    return all(M.is_independent(c & ~(1 << i)) for i in range(M.n) if c >> i & 1)


def spike_conditions(M: Matroid, S: SetSystem) -> Dict[str, bool]:
    """Leg pairs are circuits and cocircuits; T(X) is dependent iff X is in the family."""
    n = S.n
    leg_masks = legs(n)
    D = M.dual
    pairs = [
        leg_masks[i] | leg_masks[j] for i in range(n) for j in range(i + 1, n)
    ]
    circuits = all(is_circuit(M, p) for p in pairs)
    cocircuits = all(is_circuit(D, p) for p in pairs)
    transversals = all(
        (not M.is_independent(transversal(n, x))) == (x in S.family)
        for x in range(1 << n)
    )
    return {"circuits": circuits, "cocircuits": cocircuits, "transversals": transversals}


# ---------------------------------------------------------------------------
# experiments

def _require_odd(n: int) -> None:
    if n % 2 == 0:
        raise EvenN(f"n must be odd, got {n}")


def mk4_free_experiment(
    n: int, r: int, k: int, trials: int, p: float, seed: int
) -> dict:
    """Sample class matroids and count those with an M(K4) minor (expected 0)."""
    _require_odd(n)
    _check_rank(n, r)
    pattern = catalog("MK4")
    failures = []
    sizes = []
    for t in range(trials):
        M = sample_class_matroid(n, r, k, p, trial_seed(seed, t))
        sizes.append(len(M.nonbases))
        if has_minor(M, pattern) is not None:
            failures.append(t)
    return {
        "n": n,
        "r": r,
        "k": k % n,
        "p": p,
        "seed": seed,
        "trials": trials,
        "nonbasis_counts": sizes,
        "failures": failures,
    }


def v8_free_check(n: int, r: int) -> dict:
    """Full best-class matroid: no V8 minor and cover complexity equal to the class size."""
    _require_odd(n)
    _check_rank(n, r)
    k, size = best_class(n, r)
    M = sparse_paving_from_nonbases(n, r, gs_class(n, r, k).members)
    v8_minor = has_minor(M, catalog("V8"))
    kappa = kappa_exact(M).value
    return {
        "n": n,
        "r": r,
        "k": k,
        "class_size": size,
        "v8_minor": v8_minor is not None,
        "kappa": kappa,
        "kappa_equals_size": kappa == size,
        "size_at_least_average": size * n >= comb(n, r),
    }


# ---------------------------------------------------------------------------
# exhaustive stable set <-> sparse paving check

def _family_bits(n_sets: int) -> np.ndarray:
    idx = np.arange(1 << n_sets, dtype=np.uint32)
    return np.array([(idx >> i) & 1 for i in range(n_sets)], dtype=bool)


def exchange_valid_families(n: int, r: int) -> np.ndarray:
    """Boolean over every family U of r-subsets (bit i = i-th set in colex
    order): do the r-subsets outside U satisfy basis exchange?

    An empty basis family is reported as invalid.
    """
    sets = list(k_subsets(n, r))
    pos = {x: i for i, x in enumerate(sets)}
    in_u = _family_bits(len(sets))
    basis = ~in_u
    ok = basis.any(axis=0)
    for i, b1 in enumerate(sets):
        for j, b2 in enumerate(sets):
            if (b1 & ~b2).bit_count() < 2:
                continue  # distance one or equal: the exchange lands on b2 itself
            both = basis[i] & basis[j]
            for x in members(b1 & ~b2):
                rest = b1 & ~(1 << (x - 1))
                reach = np.zeros_like(ok)
                for y in members(b2 & ~b1):
                    reach |= basis[pos[rest | 1 << (y - 1)]]
                ok &= ~(both & ~reach)
    return ok


def stable_families(n: int, r: int) -> np.ndarray:
    sets = list(k_subsets(n, r))
    in_u = _family_bits(len(sets))
    stable = np.ones(in_u.shape[1], dtype=bool)
    for i, x in enumerate(sets):
        for j in range(i + 1, len(sets)):
            if adjacent(x, sets[j], r):
                stable &= ~(in_u[i] & in_u[j])
    return stable


@dataclass
class EquivalenceReport:
    n: int
    r: int
    families: int
    stable: int
    valid: int
    sparse_paving: int
    stable_not_valid: int
    sparse_paving_not_stable: int
    stable_not_sparse_paving: int
    oracle_mismatches: int

    @property
    def ok(self) -> bool:
        return (
            self.stable_not_valid == 0
            and self.sparse_paving_not_stable == 0
            and self.stable_not_sparse_paving == 0
            and self.oracle_mismatches == 0
            and self.stable == self.sparse_paving
        )


def stable_set_equivalence(
    n: int, r: int, oracle_limit: int = 1 << 11, oracle_seed: int = 0
) -> EquivalenceReport:
    """Check, over every family U of r-subsets of [n]:

    * U stable implies the complement is a basis family whose members of U are
      all circuit-hyperplanes (a sparse paving matroid);
    * every sparse paving matroid so obtained has a stable U.

    Validity is vectorised over all families.  Every valid family is rebuilt
    as a Matroid and its circuit-hyperplanes are computed from rank and
    closure.  The vectorised validity is compared with :func:`validate_matroid`
    on every family when there are at most ``oracle_limit`` of them, otherwise
    on every valid family plus ``oracle_limit`` seeded random invalid ones.
    """
    _check_rank(n, r)
    sets = list(k_subsets(n, r))
    valid = exchange_valid_families(n, r)
    stable = stable_families(n, r)
    if valid.size <= oracle_limit:
        probe = range(valid.size)
    else:
        invalid = np.flatnonzero(~valid)
        rng = random.Random(oracle_seed)
        probe = [int(u) for u in np.flatnonzero(valid)]
        probe += [int(invalid[rng.randrange(invalid.size)]) for _ in range(oracle_limit)]
    mismatches = 0
    for u in probe:
        dropped = {sets[i] for i in range(len(sets)) if u >> i & 1}
        try:
            validate_matroid(n, r, [x for x in sets if x not in dropped])
            really = True
        except MatroidError:
            really = False
        mismatches += really != bool(valid[u])
    sparse = 0
    sp_not_stable = 0
    stable_not_sp = 0
    for u in np.flatnonzero(valid):
        fam = [sets[i] for i in range(len(sets)) if int(u) >> i & 1]
        M = from_nonbases(n, r, fam)
        sp = all(is_circuit_hyperplane(M, x) for x in fam)
        sparse += sp
        if sp and not stable[u]:
            sp_not_stable += 1
        if stable[u] and not sp:
            stable_not_sp += 1
    return EquivalenceReport(
        n=n,
        r=r,
        families=int(valid.size),
        stable=int(stable.sum()),
        valid=int(valid.sum()),
        sparse_paving=sparse,
        stable_not_valid=int((stable & ~valid).sum()),
        sparse_paving_not_stable=sp_not_stable,
        stable_not_sparse_paving=stable_not_sp,
        oracle_mismatches=mismatches,
    )
