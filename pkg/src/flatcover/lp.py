"""Fractional cover complexity by exact linear programming.

The packing program over non-bases (maximise the total weight subject to
every flat covering total weight at most 1) starts feasible at zero, so a
single simplex phase suffices; the covering solution is read off the final
reduced costs of the slack columns.  Arithmetic is fraction-free integer
pivoting over a common denominator, so every value is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import Callable, Dict, List, Sequence, Tuple

from .bounds import ln_upper
from .core import Flat, Matroid, bit_positions, expand, k_subsets, members, minor_of
from .cover import (
    DualCertificate,
    FlatCover,
    Incidence,
    _reduce,
    covers,
)
from .errors import BadT, InfeasibleInput, ZeroValue

#: consecutive degenerate pivots before switching to Bland's rule
DEGENERATE_PATIENCE = 20


@dataclass(frozen=True)
class FractionalCover:
    """Nonnegative rational weights on flats (zero weights omitted)."""

    weights: Dict[Flat, Fraction]

    @property
    def value(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def load(self, x: int) -> Fraction:
        """Total weight of the flats covering ``x``."""
        return sum((w for f, w in self.weights.items() if covers(f, x)), Fraction(0))

    def to_json(self) -> list:
        return [
            {**f.to_json(), "weight": [str(w.numerator), str(w.denominator)]}
            for f, w in sorted(self.weights.items(), key=lambda kv: kv[0].key())
        ]


def is_fractional_cover(M: Matroid, z: FractionalCover) -> bool:
    if any(w < 0 for w in z.weights.values()):
        return False
    return all(z.load(x) >= 1 for x in M.nonbases)


def is_dual_feasible(M: Matroid, y: DualCertificate) -> bool:
    from .cover import check_certificate

    return check_certificate(M, y)


# ---------------------------------------------------------------------------
# simplex

@dataclass
class LPSolution:
    value: Fraction
    x: List[Fraction]        # primal packing variables
    duals: List[Fraction]    # prices of the rows
    pivots: int


def solve_packing(rows: Sequence[int], n_vars: int) -> LPSolution:
    """max sum(x) s.t. for each row, sum of x over the row's bits <= 1, x >= 0.

    ``rows`` are 0/1 constraint rows as bitmasks over ``range(n_vars)``.
    Dantzig pricing, switching to Bland's rule on long degenerate runs.
    """
    m = len(rows)
    width = n_vars + m + 1
    rhs = width - 1
    T: List[List[int]] = []
    for i, rmask in enumerate(rows):
        line = [0] * width
        for j in bit_positions(rmask):
            line[j] = 1
        line[n_vars + i] = 1
        line[rhs] = 1
        T.append(line)
    obj = [1] * n_vars + [0] * (m + 1)
    T.append(obj)
    basis = [n_vars + i for i in range(m)]
    denom = 1
    pivots = 0
    degenerate_run = 0
    while True:
        objrow = T[m]
        if degenerate_run >= DEGENERATE_PATIENCE:
            s = next((j for j in range(rhs) if objrow[j] > 0), -1)
        else:
            s, top = -1, 0
            for j in range(rhs):
                if objrow[j] > top:
                    s, top = j, objrow[j]
        if s < 0:
            break
        r = -1
        for i in range(m):
            a = T[i][s]
            if a > 0:
                if r < 0:
                    r = i
                    continue
                # compare T[i][rhs]/a with T[r][rhs]/T[r][s]
                lhs = T[i][rhs] * T[r][s]
                cur = T[r][rhs] * a
                if lhs < cur or (lhs == cur and basis[i] < basis[r]):
                    r = i
        if r < 0:
            raise RuntimeError("packing program unbounded; a variable lies in no row")
        degenerate_run = degenerate_run + 1 if T[r][rhs] == 0 else 0
        p = T[r][s]
        prow = T[r]
        nz = [j for j in range(width) if prow[j]]
        for i in range(m + 1):
            if i == r:
                continue
            row = T[i]
            f = row[s]
            if f == 0:
                for j in range(width):
                    if row[j]:
                        row[j] = row[j] * p // denom
            else:
                for j in range(width):
                    row[j] = row[j] * p
                for j in nz:
                    row[j] -= f * prow[j]
                if denom != 1:
                    for j in range(width):
                        if row[j]:
                            row[j] //= denom
        denom = p
        basis[r] = s
        pivots += 1
    x = [Fraction(0)] * n_vars
    for i, b in enumerate(basis):
        if b < n_vars:
            x[b] = Fraction(T[i][rhs], denom)
    duals = [Fraction(-T[m][n_vars + i], denom) for i in range(m)]
    value = Fraction(-T[m][rhs], denom)
    return LPSolution(value, x, duals, pivots)


# ---------------------------------------------------------------------------

def kappa_star(M: Matroid) -> Tuple[Fraction, FractionalCover, DualCertificate]:
    """Fractional cover complexity with optimal primal and dual solutions.

    Both solutions are checked exactly against the full program; their values
    coincide.
    """
    if not M.nonbases:
        return Fraction(0), FractionalCover({}), DualCertificate({})
    inc = Incidence.of(M)
    rows, cols = _reduce(inc.row, inc.col)
    ridx = {i: k for k, i in enumerate(rows)}
    lp_rows = [
        sum(1 << ridx[i] for i in bit_positions(inc.col[j]) if i in ridx) for j in cols
    ]
    sol = solve_packing(lp_rows, len(rows))
    y = {inc.nonbases[rows[k]]: v for k, v in enumerate(sol.x) if v}
    z = {inc.flats[cols[k]]: v for k, v in enumerate(sol.duals) if v}
    primal = FractionalCover(z)
    dual = DualCertificate(y)
    if primal.value != sol.value or dual.value != sol.value:
        raise ArithmeticError("simplex returned inconsistent objective values")
    if not is_fractional_cover(M, primal) or not is_dual_feasible(M, dual):
        raise ArithmeticError("simplex returned an infeasible solution")
    return sol.value, primal, dual


# ---------------------------------------------------------------------------
# randomized rounding

def rounding_bound(kappa_frac: Fraction, n: int, r: int) -> Fraction:
    """Rational upper bound on ``k* (ln(C(n,r)/k*) + 1)`` (log rounded up)."""
    return kappa_frac * (ln_upper(Fraction(comb(n, r)) / kappa_frac) + 1)


def sample_size(kappa_frac: Fraction, n: int, r: int) -> int:
    """``ceil(k* ln(C(n,r)/k*))`` with the logarithm rounded up."""
    return ceil(kappa_frac * ln_upper(Fraction(comb(n, r)) / kappa_frac))


def randomized_round(M: Matroid, z: FractionalCover, seed: int) -> FlatCover:
    """Round a fractional cover to a flat cover.

    Draws ``m`` flats i.i.d. with probability proportional to their weight,
    then adds cl(X) for every non-basis X still uncovered.  Draws invert the
    cumulative weight over flats in canonical order using 64-bit words from
    ``random.Random(seed)`` (Mersenne Twister), so results are reproducible.
    """
    if not is_fractional_cover(M, z):
        raise InfeasibleInput("weights do not form a fractional cover")
    total = z.value
    if total == 0:
        raise ZeroValue("fractional cover has value zero")
    flats = sorted((f for f, w in z.weights.items() if w > 0), key=Flat.key)
    cumulative = []
    acc = Fraction(0)
    for f in flats:
        acc += z.weights[f]
        cumulative.append(acc)
    rng = random.Random(seed)
    drawn = []
    for _ in range(sample_size(total, M.n, M.r)):
        target = Fraction(rng.getrandbits(64), 1 << 64) * total
        k = next(i for i, c in enumerate(cumulative) if c > target)
        drawn.append(flats[k])
    chosen = list(dict.fromkeys(drawn))
    for x in M.nonbases:
        if not any(covers(f, x) for f in chosen):
            g = M.closure(x)
            chosen.append(Flat(g, M.rank(g)))
    return tuple(chosen)


# ---------------------------------------------------------------------------
# blow-up

@dataclass(frozen=True)
class BlowUpResult:
    cover: FractionalCover
    local_costs: Dict[int, Fraction]   # t-subset -> cost of its local cover
    factor: Fraction                   # C(n, r) / C(n - t, r - t)

    @property
    def bound(self) -> Fraction:
        return self.factor * max(self.local_costs.values(), default=Fraction(0))


def exact_sub_solver(N: Matroid) -> FractionalCover:
    return kappa_star(N)[1]


def blow_up_detailed(
    M: Matroid, t: int, sub_solver: Callable[[Matroid], FractionalCover] = exact_sub_solver
) -> BlowUpResult:
    """Average local fractional covers over all ``t``-subsets ``S``.

    Dependent ``S`` contributes unit weight on cl(S); independent ``S``
    contributes the lift of ``sub_solver(M / S)`` to the flats containing S.
    The sum is scaled by ``1 / C(r, t)``.
    """
    if not 0 <= t < M.r:
        raise BadT(f"need 0 <= t < r = {M.r}, got t = {t}")
    acc: Dict[Flat, Fraction] = {}
    local: Dict[int, Fraction] = {}
    for s in k_subsets(M.n, t):
        if not M.is_independent(s):
            g = M.closure(s)
            f = Flat(g, M.rank(g))
            acc[f] = acc.get(f, Fraction(0)) + 1
            local[s] = Fraction(1)
            continue
        minor, _ = minor_of(M, s, 0)
        positions = list(bit_positions(M.ground & ~s))
        sub = sub_solver(minor)
        for f, w in sub.weights.items():
            host = expand(f.elements, positions) | s
            lifted = Flat(host, f.rank + t)
            acc[lifted] = acc.get(lifted, Fraction(0)) + w
        local[s] = sub.value
    scale = Fraction(1, comb(M.r, t))
    weights = {f: w * scale for f, w in acc.items() if w}
    factor = Fraction(comb(M.n, M.r), comb(M.n - t, M.r - t))
    return BlowUpResult(FractionalCover(weights), local, factor)


def blow_up(
    M: Matroid, t: int, sub_solver: Callable[[Matroid], FractionalCover] = exact_sub_solver
) -> FractionalCover:
    return blow_up_detailed(M, t, sub_solver).cover


def blow_up_class_bound(M: Matroid, t: int) -> Tuple[Fraction, Fraction]:
    """Both sides of ``k*(M) / C(n,r) <= max k*(M/S) / C(n-t, r-t)``.

    The maximum runs over independent ``t``-sets ``S``.
    """
    lhs = kappa_star(M)[0] / comb(M.n, M.r)
    best = Fraction(0)
    for s in k_subsets(M.n, t):
        if M.is_independent(s):
            best = max(best, kappa_star(minor_of(M, s, 0)[0])[0])
    return lhs, best / comb(M.n - t, M.r - t)


def fractional_to_json(value: Fraction, z: FractionalCover, y: DualCertificate) -> dict:
    return {
        "value": [str(value.numerator), str(value.denominator)],
        "primal": z.to_json(),
        "dual": y.to_json(),
    }


__all__ = [
    "FractionalCover",
    "LPSolution",
    "BlowUpResult",
    "kappa_star",
    "randomized_round",
    "rounding_bound",
    "sample_size",
    "blow_up",
    "blow_up_detailed",
    "blow_up_class_bound",
    "solve_packing",
    "is_fractional_cover",
    "is_dual_feasible",
    "exact_sub_solver",
    "fractional_to_json",
    "members",
]
