"""Exact evaluators for the counting bounds, plus rigorous rational brackets.

Irrational quantities (e, pi, natural and binary logarithms) are replaced by
rational brackets ``lo <= x <= hi`` obtained from mpmath's interval context
at 128 bits, so each bracket is narrower than 2**-100 relative to the value
and every comparison below is exact.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple, Tuple

from mpmath import iv

from .errors import BadRange

PRECISION = 128


@contextmanager
def _precision(bits: int = PRECISION):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _bracket(x) -> Tuple[Fraction, Fraction]:
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def _iv_rational(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def ln_bracket(q: Fraction) -> Tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= ln q <= hi`` for ``q > 0``."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("logarithm of a non-positive number")
    if q == 1:
        return Fraction(0), Fraction(0)
    with _precision():
        return _bracket(iv.log(_iv_rational(q)))


def ln_upper(q: Fraction) -> Fraction:
    return ln_bracket(q)[1]


def log2_bracket(q: Fraction) -> Tuple[Fraction, Fraction]:
    q = Fraction(q)
    if q <= 0:
        raise ValueError("logarithm of a non-positive number")
    num, den = q.numerator, q.denominator
    # exact when q is a power of two
    if num & (num - 1) == 0 and den & (den - 1) == 0:
        v = Fraction(num.bit_length() - den.bit_length())
        return v, v
    with _precision():
        return _bracket(iv.log(_iv_rational(q)) / iv.log(iv.mpf(2)))


@lru_cache(maxsize=None)
def e_bracket() -> Tuple[Fraction, Fraction]:
    with _precision():
        return _bracket(iv.e)


@lru_cache(maxsize=None)
def pi_bracket() -> Tuple[Fraction, Fraction]:
    with _precision():
        return _bracket(iv.pi)


# ---------------------------------------------------------------------------

def knuth_lower(n: int) -> Fraction:
    """``C(n, floor(n/2)) / n`` exactly (a lower bound for log2 of the matroid count)."""
    if n < 1:
        raise BadRange("n must be positive")
    return Fraction(comb(n, n // 2), n)


class Log2Value(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def error(self) -> Fraction:
        return self.hi - self.lo

    def __float__(self) -> float:
        return float((self.lo + self.hi) / 2)


def kappa_count_upper(n: int, kmax: int) -> Log2Value:
    """Bracket for ``log2(k * C(2^n (n+1), k))`` at ``k = kmax``.

    This is the middle term of the count of matroids whose flat covers have at
    most ``kmax`` members (each member a flat and its rank).
    """
    top = (1 << n) * (n + 1)
    if not 1 <= kmax <= top:
        raise BadRange(f"kmax must lie in [1, {top}]")
    lo, hi = log2_bracket(Fraction(kmax * comb(top, kmax)))
    return Log2Value(lo, hi)


class BinomCheck(NamedTuple):
    power_bound: bool       # C(n,r) <= (e n / r)^r
    central_upper: bool     # C(n, n//2) <= 2^n sqrt(2 / (pi n))
    central_lower: bool     # C(n, n//2) >= 2^n sqrt(2 / (pi n)) (1 - 1/n)

    def __bool__(self) -> bool:
        return self.power_bound and self.central_upper and self.central_lower


def binom_bounds(n: int, r: int) -> BinomCheck:
    """Evaluate the binomial estimates exactly, each side rounded against the claim."""
    if not 1 <= r <= n:
        raise BadRange("need 1 <= r <= n")
    e_lo, _ = e_bracket()
    pi_lo, pi_hi = pi_bracket()
    power = comb(n, r) <= (e_lo * n / r) ** r
    c = comb(n, n // 2)
    # square both sides so no square root is needed
    upper = c * c * n * pi_hi <= 2 ** (2 * n + 1)
    lower = c * c * n * pi_lo >= 2 ** (2 * n + 1) * (1 - Fraction(1, n)) ** 2
    return BinomCheck(power, upper, lower)


def binom_bound_check(n: int, r: int) -> bool:
    return bool(binom_bounds(n, r))
