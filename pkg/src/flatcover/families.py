"""Seeded generators of small test matroids."""

from __future__ import annotations

import random
from typing import List, Sequence, Tuple

from .core import (
    Matroid,
    add_coloop,
    add_loop,
    add_parallel,
    catalog,
    direct_sum,
    k_subsets,
    uniform,
    validate_matroid,
)
from .johnson import SetSystem, adjacent, sparse_paving_from_nonbases, spike

Labelled = Tuple[str, Matroid]

#: named catalog matroids small enough for every exact routine
SMALL_NAMED = ("P6", "Q6", "R6", "W3", "MK4", "V8", "MK(3)", "MK(5)")


def random_stable_family(n: int, r: int, rng: random.Random, attempts: int) -> List[int]:
    """Greedy random stable set of J(n, r): shuffle the r-sets, keep what fits."""
    pool = list(k_subsets(n, r))
    rng.shuffle(pool)
    chosen: List[int] = []
    for x in pool[:attempts]:
        if all(not adjacent(x, y, r) for y in chosen):
            chosen.append(x)
    return sorted(chosen)


def random_sparse_paving(n: int, r: int, seed: int) -> Matroid:
    rng = random.Random(seed)
    attempts = rng.randint(1, len(list(k_subsets(n, r))))
    return sparse_paving_from_nonbases(n, r, random_stable_family(n, r, rng, attempts))


def sparse_paving_samples(count: int, seed: int, max_n: int = 9) -> List[Labelled]:
    """``count`` sparse paving matroids with 4 <= n <= max_n and 2 <= r <= n - 2."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(4, max(4, max_n))
        r = rng.randint(2, n - 2)
        s = rng.getrandbits(32)
        out.append((f"sparse_paving(n={n},r={r},seed={s})", random_sparse_paving(n, r, s)))
    return out


def rank2_partition(class_sizes: Sequence[int], loops: int = 0) -> Matroid:
    """Rank-2 matroid whose points are parallel classes of the given sizes.

    Classes take consecutive labels, followed by the loops.  Bases are the
    pairs meeting two different classes.
    """
    if len(class_sizes) < 2:
        raise ValueError("rank 2 needs at least two parallel classes")
    label = []
    for c, size in enumerate(class_sizes):
        label.extend([c] * size)
    n = len(label) + loops
    bases = [
        (1 << i) | (1 << j)
        for i in range(len(label))
        for j in range(i + 1, len(label))
        if label[i] != label[j]
    ]
    return validate_matroid(n, 2, bases)


def rank2_samples(count: int, seed: int, max_n: int = 9) -> List[Labelled]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        m = rng.randint(2, 5)
        sizes = [rng.randint(1, 3) for _ in range(m)]
        loops = rng.randint(0, 2)
        while sum(sizes) + loops > max_n and max(sizes) > 1:
            sizes[sizes.index(max(sizes))] -= 1
        loops = min(loops, max(0, max_n - sum(sizes)))
        out.append((f"rank2(classes={sizes},loops={loops})", rank2_partition(sizes, loops)))
    return out


def decorated() -> List[Labelled]:
    """Catalog matroids with loops, coloops and parallel elements attached."""
    return [
        ("P6+loop", add_loop(catalog("P6"))),
        ("Q6+coloop", add_coloop(catalog("Q6"))),
        ("MK4+parallel(1)", add_parallel(catalog("MK4"), 1)),
        ("W3+parallel(2)", add_parallel(catalog("W3"), 2)),
        ("U(1,2)+U(1,2)", direct_sum(uniform(1, 2), uniform(1, 2))),
        ("U(2,3)+U(1,2)", direct_sum(uniform(2, 3), uniform(1, 2))),
        ("R6+loop", add_loop(catalog("R6"))),
    ]


def spikes() -> List[Labelled]:
    return [
        ("spike(3,{})", spike(SetSystem(3))),
        ("spike(3,{{1}})", spike(SetSystem(3, frozenset({1})))),
        ("spike(4,C(4,2))", spike(SetSystem.all_k_subsets(4, 2))),
    ]


def named(max_n: int = 12) -> List[Labelled]:
    out = [(name, catalog(name)) for name in SMALL_NAMED]
    out += [(f"U({r},{n})", uniform(r, n)) for n in range(2, 7) for r in range(1, n)]
    return [(lab, M) for lab, M in out if M.n <= max_n]


def test_matroids(seed: int, max_n: int = 12, samples: int = 12) -> List[Labelled]:
    """Named, decorated, spike, rank-2 and sparse paving matroids within ``max_n``."""
    pool = named(max_n) + decorated() + spikes()
    pool += rank2_samples(max(2, samples // 3), seed, min(max_n, 9))
    pool += sparse_paving_samples(samples, seed, min(max_n, 9))
    return [(lab, M) for lab, M in pool if M.n <= max_n]


test_matroids.__test__ = False  # a generator, not a pytest test
