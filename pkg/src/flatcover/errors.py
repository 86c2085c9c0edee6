"""Exception hierarchy shared by every module.

All errors derive from :class:`MatroidError`; the CLI maps them to exit code 1.
"""

from __future__ import annotations


class MatroidError(Exception):
    """Base class for precondition and axiom failures."""


class EmptyBases(MatroidError):
    pass


class WrongCardinality(MatroidError):
    def __init__(self, basis: int, expected: int):
        self.basis = basis
        self.expected = expected
        super().__init__(f"basis {basis:#x} does not have cardinality {expected}")


class ExchangeViolation(MatroidError):
    """Raised with the witness pair (B1, x) for which no exchange partner exists."""

    def __init__(self, b1: int, x: int, b2: int):
        self.b1 = b1
        self.x = x
        self.b2 = b2
        super().__init__(f"exchange fails for B1={b1:#x}, x={x} against B2={b2:#x}")


class OutOfGroundSet(MatroidError):
    pass


class SizeCapExceeded(MatroidError):
    pass


class OverlappingSets(MatroidError):
    pass


class RankZero(MatroidError):
    pass


class UnknownName(MatroidError):
    pass


class BasesFormatError(MatroidError):
    """Malformed ``.bases`` text (the CLI maps this one to exit code 2)."""


class NotAFlat(MatroidError):
    def __init__(self, flat):
        self.flat = flat
        super().__init__(f"not a flat of the matroid: {flat}")


class NotACover(MatroidError):
    pass


class NotACircuitHyperplane(MatroidError):
    pass


class LoopOrColoop(MatroidError):
    pass


class WrongRank(MatroidError):
    pass


class NotSimpleRank3(MatroidError):
    pass


class InfeasibleInput(MatroidError):
    pass


class ZeroValue(MatroidError):
    pass


class BadT(MatroidError):
    pass


class BadRank(MatroidError):
    pass


class NotStable(MatroidError):
    def __init__(self, x: int, y: int):
        self.pair = (x, y)
        super().__init__(f"adjacent in the Johnson graph: {x:#x}, {y:#x}")


class BadSystem(MatroidError):
    pass


class EvenN(MatroidError):
    pass


class BadRange(MatroidError):
    pass
