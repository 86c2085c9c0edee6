"""Invariant suites behind ``flatcover verify``.

Each suite returns a list of :class:`Check` records sorted by name.  The
per-matroid checkers are plain functions returning ``(ok, details)`` so the
test suite can call them directly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

from . import bounds, johnson
from .core import (
    Matroid,
    catalog,
    format_bases,
    is_isomorphic,
    k_subsets,
    members,
    minor_of,
    parallel_classes,
    parse_bases,
    relabel,
    uniform,
    validate_matroid,
)
from .cover import (
    check_certificate,
    circuit_hyperplanes,
    combine_cover,
    dualize_cover,
    is_flat_cover,
    kappa_exact,
    long_line_count,
    long_lines_cover,
    mu_integer,
    project_cover,
    rank2_cover,
    relax,
)
from .errors import MatroidError
from .families import Labelled, named, sparse_paving_samples, test_matroids
from .lp import (
    blow_up_class_bound,
    blow_up_detailed,
    exact_sub_solver,
    is_fractional_cover,
    kappa_star,
    randomized_round,
    rounding_bound,
)
from .minors import check_witness, has_minor, line_deletion_witness

SUITES = ("core", "cover", "lp", "johnson", "bounds")

Details = Dict[str, object]
Outcome = Tuple[bool, Details]


@dataclass
class Check:
    name: str
    status: str
    details: Details = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "details": self.details}


def _run(name: str, fn: Callable[[], Outcome]) -> Check:
    try:
        ok, details = fn()
    except MatroidError as exc:
        return Check(name, "fail", {"error": f"{type(exc).__name__}: {exc}"})
    return Check(name, "pass" if ok else "fail", details)


def _over(items: Sequence[Labelled], fn: Callable[[Matroid], Outcome]) -> Outcome:
    """Apply a per-matroid check to every item; collect the failing labels."""
    failures = []
    for label, M in items:
        ok, details = fn(M)
        if not ok:
            failures.append({"matroid": label, **details})
    return not failures, {"checked": len(items), "failures": failures}


def kappa(M: Matroid) -> int:
    return kappa_exact(M, certify=False).value


def single_element_minors(M: Matroid) -> List[Tuple[str, Matroid]]:
    out = []
    for e in range(1, M.n + 1):
        out.append((f"\\{e}", minor_of(M, 0, 1 << (e - 1))[0]))
        out.append((f"/{e}", minor_of(M, 1 << (e - 1), 0)[0]))
    return out


# ---------------------------------------------------------------------------
# per-matroid checkers: core and minors

def check_axioms(M: Matroid) -> Outcome:
    validate_matroid(M.n, M.r, M.bases)
    ok = M.dual.dual == M and parse_bases(format_bases(M)) == M
    return ok, {}


def check_rank_closure(M: Matroid, rng: random.Random, samples: int = 30) -> Outcome:
    ground = M.ground
    if M.rank(ground) != M.r:
        return False, {"reason": "rank(E) != r"}
    for _ in range(samples):
        t = rng.getrandbits(M.n) if M.n else 0
        s = t & rng.getrandbits(M.n) if M.n else 0
        cs, ct = M.closure(s), M.closure(t)
        if M.closure(cs) != cs or cs & ~ct:
            return False, {"s": list(members(s)), "t": list(members(t))}
    return True, {}


def check_flats_meet(M: Matroid) -> Outcome:
    flats = {f.elements for f in M.flats}
    for a in flats:
        for b in flats:
            if a & b not in flats:
                return False, {"a": list(members(a)), "b": list(members(b))}
    return True, {"flats": len(flats)}


def check_minor_duality(M: Matroid) -> Outcome:
    D = M.dual
    for e in range(M.n):
        if minor_of(M, 0, 1 << e)[0].dual != minor_of(D, 1 << e, 0)[0]:
            return False, {"element": e + 1}
    return True, {}


def check_isomorphism_symmetry(M: Matroid, rng: random.Random) -> Outcome:
    images = list(range(1, M.n + 1))
    rng.shuffle(images)
    N = relabel(M, {i + 1: images[i] for i in range(M.n)})
    ok = (
        is_isomorphic(M, M) is not None
        and is_isomorphic(M, N) is not None
        and is_isomorphic(N, M) is not None
    )
    return ok, {}


def check_minor_witness(M: Matroid, N: Matroid) -> Outcome:
    """A found witness re-validates; presence is invariant under duality."""
    w = has_minor(M, N)
    wd = has_minor(M.dual, N.dual)
    if w is not None and not check_witness(M, N, w):
        return False, {"reason": "witness does not re-validate"}
    if wd is not None and not check_witness(M.dual, N.dual, wd):
        return False, {"reason": "dual witness does not re-validate"}
    ok = (w is None) == (wd is None)
    return ok, {"present": w is not None}


def line_deletion_threshold(k: int) -> int:
    """Element count that a simple rank-3 matroid must exceed for the line claim."""
    return (comb(k - 1, 2) - 1) * comb(k, 2) + k


def check_line_deletion(M: Matroid) -> Outcome:
    """For simple rank-3 M: check the line-deletion claim for every applicable k."""
    applicable = []
    k = 3
    while M.n > line_deletion_threshold(k):
        has_k = has_minor(M, uniform(3, k)) is not None
        has_k1 = k + 1 <= M.n and has_minor(M, uniform(3, k + 1)) is not None
        if has_k and not has_k1:
            applicable.append(k)
            if line_deletion_witness(M, k) is None:
                return False, {"k": k}
        k += 1
    return True, {"applicable_k": applicable}


# ---------------------------------------------------------------------------
# per-matroid checkers: cover

def check_self_duality(M: Matroid) -> Outcome:
    res = kappa_exact(M, certify=False)
    kd = kappa(M.dual)
    dual_cover = dualize_cover(M, res.cover)
    ok = res.value == kd and bool(is_flat_cover(M.dual, dual_cover)) and len(dual_cover) <= res.value
    return ok, {"kappa": res.value, "kappa_dual": kd}


def check_minor_monotone(M: Matroid) -> Outcome:
    res = kappa_exact(M, certify=False)
    for label, N in single_element_minors(M):
        if kappa(N) > res.value:
            return False, {"minor": label}
    for e in range(1, M.n + 1):
        projected = project_cover(M, res.cover, e)
        N = minor_of(M, 0, 1 << (e - 1))[0]
        if not is_flat_cover(N, projected) or len(projected) > res.value:
            return False, {"projected_cover": e}
    return True, {"kappa": res.value}


def check_deletion_contraction(M: Matroid) -> Outcome:
    k = kappa(M)
    for e in range(1, M.n + 1):
        eb = 1 << (e - 1)
        if (M.loops | M.coloops) & eb:
            continue
        dele = minor_of(M, 0, eb)[0]
        con = minor_of(M, eb, 0)[0]
        kd = kappa_exact(dele, certify=False)
        kc = kappa_exact(con.dual, certify=False)
        if k > kd.value + kc.value:
            return False, {"element": e}
        combined = combine_cover(M, e, kd.cover, kc.cover)
        if not is_flat_cover(M, combined) or len(combined) > kd.value + kc.value:
            return False, {"combined_cover": e}
    return True, {"kappa": k}


def check_relaxation(M: Matroid) -> Outcome:
    k = kappa(M)
    steps = []
    for h in circuit_hyperplanes(M):
        kr = kappa(relax(M, h))
        steps.append([list(members(h)), kr])
        if k != kr + 1:
            return False, {"circuit_hyperplane": list(members(h)), "kappa": k, "relaxed": kr}
    return True, {"kappa": k, "relaxations": len(steps)}


def is_sparse_paving(M: Matroid) -> bool:
    return len(circuit_hyperplanes(M)) == len(M.nonbases)


def check_sparse_paving_equality(M: Matroid) -> Outcome:
    if not is_sparse_paving(M):
        return True, {"applicable": False}
    k = kappa(M)
    return k == len(M.nonbases), {"kappa": k, "circuit_hyperplanes": len(M.nonbases)}


def check_certificate_attached(M: Matroid) -> Outcome:
    res = kappa_exact(M)
    mu = mu_integer(M)[0]
    ok = mu <= res.value and bool(is_flat_cover(M, res.cover))
    if res.certificate is not None:
        ok = ok and check_certificate(M, res.certificate) and res.certificate.value == res.value
    return ok, {"kappa": res.value, "mu": mu, "certified": res.certificate is not None}


def smallest_free_uniform_line(M: Matroid) -> int:
    """Least k >= 2 with no U(2, k)-minor."""
    k = 2
    while has_minor(M, uniform(2, k)) is not None:
        k += 1
    return k


def check_rank2_cover(M: Matroid) -> Outcome:
    if M.r != 2:
        return True, {"applicable": False}
    z = rank2_cover(M)
    k = smallest_free_uniform_line(M)
    m = len(parallel_classes(M))
    kap = kappa(M)
    ok = bool(is_flat_cover(M, z)) and len(z) <= m + 1 and kap <= k and len(z) <= k
    return ok, {"size": len(z), "kappa": kap, "k": k}


def check_long_lines_cover(M: Matroid) -> Outcome:
    if M.r != 3:
        return True, {"applicable": False}
    z = long_lines_cover(M)
    L = long_line_count(M)
    kap = kappa(M)
    bound = 1 + Fraction(M.n, 2) + L
    ok = bool(is_flat_cover(M, z)) and len(z) <= bound and kap <= bound
    return ok, {"size": len(z), "kappa": kap, "bound": str(bound)}


RANK3_BOUNDS = (
    ("U(3,6)", lambda n: 496 + n),
    ("Q6", lambda n: 41 + n),
    ("R6", lambda n: 13 + Fraction(n, 2)),
    ("P6", lambda n: 13 + 19 * n),
)


def check_rank3_bounds(M: Matroid) -> Outcome:
    if M.r != 3:
        return True, {"applicable": []}
    kap = kappa(M)
    applicable = []
    for name, bound in RANK3_BOUNDS:
        if has_minor(M, catalog(name)) is None:
            applicable.append(name)
            if kap > bound(M.n):
                return False, {"excluded": name, "kappa": kap}
    return True, {"applicable": applicable, "kappa": kap}


# ---------------------------------------------------------------------------
# per-matroid checkers: lp

def check_sandwich(M: Matroid) -> Outcome:
    value, z, y = kappa_star(M)
    mu = mu_integer(M)[0]
    k = kappa(M)
    ok = (
        z.value == value == y.value
        and is_fractional_cover(M, z)
        and check_certificate(M, y)
        and mu <= value <= k
    )
    return ok, {"mu": mu, "kappa_star": str(value), "kappa": k}


def check_rounding(M: Matroid, seeds: Iterable[int]) -> Outcome:
    value, z, _ = kappa_star(M)
    if value == 0:
        return True, {"applicable": False}
    k = kappa(M)
    bound = rounding_bound(value, M.n, M.r)
    if k > bound:
        return False, {"kappa": k, "bound": float(bound)}
    sizes = []
    for s in seeds:
        cover = randomized_round(M, z, s)
        if not is_flat_cover(M, cover):
            return False, {"seed": s}
        sizes.append(len(cover))
    return True, {"kappa": k, "bound": float(bound), "max_rounded": max(sizes, default=0)}


def check_blow_up(M: Matroid, ts: Iterable[int] = (0, 1, 2)) -> Outcome:
    out = {}
    for t in ts:
        if t >= M.r:
            continue
        res = blow_up_detailed(M, t)
        if not is_fractional_cover(M, res.cover) or res.cover.value > res.bound:
            return False, {"t": t}
        if t == 0 and res.cover.weights != exact_sub_solver(M).weights:
            return False, {"t": 0, "reason": "does not reproduce the sub-solver"}
        lhs, rhs = blow_up_class_bound(M, t)
        if lhs > rhs:
            return False, {"t": t, "class_form": [str(lhs), str(rhs)]}
        out[str(t)] = [str(res.cover.value), str(res.bound)]
    return True, {"cost_and_bound": out}


# ---------------------------------------------------------------------------
# suites

def suite_core(seed: int, max_n: int) -> List[Check]:
    rng = random.Random(seed)
    pool = test_matroids(seed, max_n)
    six = ["P6", "Q6", "R6", "W3", "MK4", "U(3,6)"]

    def distinct():
        clash = [
            [a, b]
            for i, a in enumerate(six)
            for b in six[i + 1:]
            if is_isomorphic(catalog(a), catalog(b)) is not None
        ]
        return not clash, {"isomorphic_pairs": clash}

    hosts = [(lab, M) for lab, M in named(max_n) if M.n <= 10]
    patterns = [catalog(p) for p in ("U(2,3)", "U(2,4)", "MK4", "P6", "U(1,2)")]

    def witnesses():
        fails = []
        for lab, M in hosts:
            for N in patterns:
                ok, det = check_minor_witness(M, N)
                if not ok:
                    fails.append({"host": lab, **det})
        return not fails, {"pairs": len(hosts) * len(patterns), "failures": fails}

    def extension():
        fails = []
        from .core import add_loop, add_coloop, add_parallel

        for lab, M in hosts:
            if M.n + 1 > max_n:
                continue
            exts = [add_loop(M), add_coloop(M)] + ([add_parallel(M, 1)] if M.r else [])
            for N in patterns:
                if has_minor(M, N) is None:
                    continue
                if any(has_minor(X, N) is None for X in exts):
                    fails.append(lab)
        return not fails, {"failures": fails}

    def simple_rank3():
        items = []
        for lab, M in pool:
            if M.r == 3 and not M.loops and all(c.bit_count() == 1 for c in parallel_classes(M)):
                items.append((lab, M))
        return _over(items, check_line_deletion)

    checks = [
        _run("core.axioms_roundtrip", lambda: _over(pool, check_axioms)),
        _run("core.rank_closure", lambda: _over(pool, lambda M: check_rank_closure(M, rng))),
        _run("core.flats_meet", lambda: _over(pool, check_flats_meet)),
        _run("core.minor_duality", lambda: _over(pool, check_minor_duality)),
        _run("core.isomorphism_symmetry", lambda: _over(pool, lambda M: check_isomorphism_symmetry(M, rng))),
        _run("core.six_element_catalog_distinct", distinct),
        _run("minors.witness_and_duality", witnesses),
        _run("minors.extension_monotone", extension),
        _run("minors.line_deletion", simple_rank3),
    ]
    return sorted(checks, key=lambda c: c.name)


def suite_cover(seed: int, max_n: int) -> List[Check]:
    pool = test_matroids(seed, max_n)
    small = [(lab, M) for lab, M in pool if M.n <= 10]
    checks = [
        _run("cover.cc1_self_duality", lambda: _over(small, check_self_duality)),
        _run("cover.cc2_deletion_contraction", lambda: _over(small, check_deletion_contraction)),
        _run("cover.cc3_minor_monotone", lambda: _over(small, check_minor_monotone)),
        _run("cover.cc4_relaxation", lambda: _over(pool, check_relaxation)),
        _run("cover.certificates", lambda: _over(pool, check_certificate_attached)),
        _run("cover.sparse_paving_equality", lambda: _over(pool, check_sparse_paving_equality)),
        _run("cover.rank2_cover", lambda: _over(pool, check_rank2_cover)),
        _run("cover.long_lines_cover", lambda: _over(pool, check_long_lines_cover)),
        _run("cover.rank3_bounds", lambda: _over(pool, check_rank3_bounds)),
    ]
    return sorted(checks, key=lambda c: c.name)


def suite_lp(seed: int, max_n: int) -> List[Check]:
    pool = test_matroids(seed, max_n)
    generated = sparse_paving_samples(100, seed, min(max_n, 9))
    blow = [(lab, M) for lab, M in pool if M.n <= 10]
    seeds = [seed * 1000 + i for i in range(100)]
    checks = [
        _run("lp.sandwich_strong_duality", lambda: _over(pool + generated, check_sandwich)),
        _run("lp.rounding", lambda: _over(pool, lambda M: check_rounding(M, seeds))),
        _run("lp.blow_up", lambda: _over(blow, check_blow_up)),
    ]
    return sorted(checks, key=lambda c: c.name)


def suite_johnson(seed: int, max_n: int) -> List[Check]:
    top = min(max_n, 12)

    def partition():
        bad = []
        for n in range(2, top + 1):
            for r in range(1, n):
                classes = [johnson.gs_class(n, r, k) for k in range(n)]
                everything = sorted(x for c in classes for x in c.members)
                if everything != sorted(k_subsets(n, r)):
                    bad.append([n, r, "partition"])
                if any(not johnson.is_stable(c.members, r) for c in classes):
                    bad.append([n, r, "stability"])
                if max(len(c) for c in classes) * n < comb(n, r):
                    bad.append([n, r, "size"])
        return not bad, {"max_n": top, "failures": bad}

    def seven_three():
        sizes = johnson.class_sizes(7, 3)
        return sizes == [5] * 7, {"sizes": sizes}

    def equivalence():
        reports = {}
        ok = True
        for n, r in ((5, 2), (6, 3)):
            if n > max_n:
                continue
            rep = johnson.stable_set_equivalence(n, r)
            ok = ok and rep.ok
            reports[f"{n},{r}"] = {"stable": rep.stable, "valid": rep.valid, "sparse_paving": rep.sparse_paving}
        return ok, reports

    def mk4():
        out = {}
        ok = True
        for n, r in ((7, 3), (9, 4)):
            if n > max_n:
                continue
            k, _ = johnson.best_class(n, r)
            rep = johnson.mk4_free_experiment(n, r, k, 50, 0.5, seed)
            out[f"{n},{r},{k}"] = len(rep["failures"])
            ok = ok and not rep["failures"]
        return ok, {"failures": out}

    def v8():
        out = {}
        ok = True
        for n, r in ((7, 3), (9, 4), (11, 4)):
            if n > max_n:
                continue
            rep = johnson.v8_free_check(n, r)
            out[f"{n},{r}"] = {"kappa": rep["kappa"], "class_size": rep["class_size"]}
            ok = ok and not rep["v8_minor"] and rep["kappa_equals_size"] and rep["size_at_least_average"]
        return ok, out

    def spike4():
        S = johnson.SetSystem.all_k_subsets(4, 2)
        M = johnson.spike(S)
        cond = johnson.spike_conditions(M, S)
        k = kappa(M)
        ok = len(M.bases) == 58 and len(M.nonbases) == 12 and all(cond.values()) and k >= comb(4, 2)
        return ok, {"bases": len(M.bases), "kappa": k, **cond}

    def sampling():
        a = johnson.sample_class_matroid(9, 4, 2, 0.5, 7)
        b = johnson.sample_class_matroid(9, 4, 2, 0.5, 7)
        full_cls = johnson.gs_class(9, 4, 2).members
        ok = (
            a == b
            and johnson.sample_class_matroid(9, 4, 2, 0.0, seed) == uniform(4, 9)
            and set(johnson.sample_class_matroid(9, 4, 2, 1.0, seed).nonbases) == set(full_cls)
        )
        return ok, {"nonbases": len(a.nonbases)}

    checks = [
        _run("johnson.classes_partition_stable", partition),
        _run("johnson.classes_7_3", seven_three),
        _run("johnson.stable_sets_sparse_paving", equivalence),
        _run("johnson.mk4_free", mk4),
        _run("johnson.v8_free", v8),
        _run("johnson.spike_4", spike4),
        _run("johnson.sampling_deterministic", sampling),
    ]
    return sorted(checks, key=lambda c: c.name)


def suite_bounds(seed: int, max_n: int) -> List[Check]:
    def knuth():
        rows = []
        ok = True
        for n in range(2, min(max_n, 12) + 1):
            _, size = johnson.best_class(n, n // 2)
            kl = bounds.knuth_lower(n)
            rows.append([n, size, str(kl)])
            ok = ok and size >= kl
        return ok, {"n_size_knuth": rows}

    def binomial():
        bad = [[n, r] for n in range(1, 65) for r in range(1, n + 1) if not bounds.binom_bound_check(n, r)]
        return not bad, {"failures": bad}

    def count_upper():
        ok = True
        for n in range(1, 9):
            top = (1 << n) * (n + 1)
            vals = [bounds.kappa_count_upper(n, k) for k in range(1, min(top // 2, 64) + 1)]
            ok = ok and all(a.hi < b.lo for a, b in zip(vals, vals[1:]))
            ok = ok and all(v.error < Fraction(1, 1 << 64) for v in vals)
        v8 = bounds.kappa_count_upper(8, 32)
        ok = ok and v8.lo > bounds.knuth_lower(8)
        return ok, {"n8_kmax32": float(v8)}

    checks = [
        _run("bounds.knuth_vs_classes", knuth),
        _run("bounds.binomial_brackets", binomial),
        _run("bounds.count_upper_monotone", count_upper),
    ]
    return sorted(checks, key=lambda c: c.name)


RUNNERS = {
    "core": suite_core,
    "cover": suite_cover,
    "lp": suite_lp,
    "johnson": suite_johnson,
    "bounds": suite_bounds,
}


def run_suite(name: str, seed: int = 0, max_n: int = 12) -> List[Check]:
    names = SUITES if name == "all" else (name,)
    out: List[Check] = []
    for s in names:
        out.extend(RUNNERS[s](seed, max_n))
    return sorted(out, key=lambda c: c.name)
