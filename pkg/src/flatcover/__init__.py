"""Exact cover complexity of matroids: flat covers, their LP relaxation,
minor search, and the Johnson-graph constructions of sparse paving matroids.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .core import (
    Flat,
    Matroid,
    all_flats,
    catalog,
    closure_of,
    dual_of,
    is_isomorphic,
    minor_of,
    parse_bases,
    format_bases,
    rank_of,
    simplify,
    validate_matroid,
)
from .cover import is_flat_cover, kappa_exact, mu_integer, relax
from .errors import MatroidError
from .lp import FractionalCover, blow_up, kappa_star, randomized_round
from .minors import has_minor

__all__ = [
    "Flat",
    "FractionalCover",
    "Matroid",
    "MatroidError",
    "all_flats",
    "blow_up",
    "catalog",
    "closure_of",
    "dual_of",
    "format_bases",
    "has_minor",
    "is_flat_cover",
    "is_isomorphic",
    "kappa_exact",
    "kappa_star",
    "minor_of",
    "mu_integer",
    "parse_bases",
    "randomized_round",
    "rank_of",
    "relax",
    "simplify",
    "validate_matroid",
]
