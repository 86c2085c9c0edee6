"""Command-line front end.

Every invocation prints one JSON document on stdout; diagnostics go to
stderr.  Exit status: 0 on success, 1 when a precondition fails or a verify
check fails, 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__, bounds, johnson
from .core import Matroid, catalog, format_bases, members, parse_bases
from .cover import kappa_exact, mu_integer
from .errors import BasesFormatError, MatroidError, UnknownName
from .lp import fractional_to_json, kappa_star
from .minors import has_minor
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_PARSE = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


def load_matroid(ref: str) -> Matroid:
    """``catalog:NAME`` or a path to a ``.bases`` file."""
    if ref.startswith("catalog:"):
        try:
            return catalog(ref[len("catalog:"):])
        except UnknownName as exc:
            raise InputError(str(exc)) from exc
    try:
        text = Path(ref).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {ref}: {exc.strerror}") from exc
    try:
        return parse_bases(text)
    except BasesFormatError as exc:
        raise InputError(f"{ref}: {exc}") from exc


def _describe(ref: str, M: Matroid) -> dict:
    return {"ref": ref, "n": M.n, "r": M.r, "bases": len(M.bases)}


def _fraction(q: Fraction) -> List[str]:
    return [str(q.numerator), str(q.denominator)]


# ---------------------------------------------------------------------------
# compute

def cmd_compute(args) -> dict:
    if args.what == "minor":
        if not args.host or not args.pattern:
            raise InputError("compute minor needs --host and --pattern")
        host, pattern = load_matroid(args.host), load_matroid(args.pattern)
        w = has_minor(host, pattern)
        inputs = {"host": _describe(args.host, host), "pattern": _describe(args.pattern, pattern)}
        results = {"present": w is not None, "witness": w.to_json() if w else None}
        return {"inputs": inputs, "results": results}
    if not args.input:
        raise InputError(f"compute {args.what} needs --input")
    M = load_matroid(args.input)
    inputs = {"input": _describe(args.input, M)}
    if args.what == "kappa":
        results = kappa_exact(M).to_json()
    elif args.what == "kappa-star":
        results = fractional_to_json(*kappa_star(M))
    else:
        mu, family = mu_integer(M)
        results = {"value": mu, "nonbases": [list(members(x)) for x in family]}
    return {"inputs": inputs, "results": results}


# ---------------------------------------------------------------------------
# generate

def read_family(spec: str, n: int) -> frozenset:
    """``all-K-subsets``, ``none``, or a file with one subset per line.

    File lines list 1-based elements separated by spaces; ``empty`` denotes
    the empty set; blank lines and ``#`` lines are skipped.
    """
    if spec == "none":
        return frozenset()
    if spec.startswith("all-") and spec.endswith("-subsets"):
        try:
            k = int(spec[len("all-"):-len("-subsets")])
        except ValueError as exc:
            raise InputError(f"bad family spec {spec!r}") from exc
        return johnson.SetSystem.all_k_subsets(n, k).family
    try:
        text = Path(spec).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {spec}: {exc.strerror}") from exc
    fam = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == "empty":
            fam.add(0)
            continue
        try:
            elems = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise InputError(f"{spec}:{lineno}: not a list of integers") from exc
        if any(not 1 <= e <= n for e in elems) or len(set(elems)) != len(elems):
            raise InputError(f"{spec}:{lineno}: elements must be distinct and in 1..{n}")
        fam.add(sum(1 << (e - 1) for e in elems))
    return frozenset(fam)


def _emit_bases(M: Matroid, comments: Sequence[str], out: Optional[str]) -> dict:
    text = format_bases(M, comments)
    if out:
        Path(out).write_text(text)
        return {"out": out}
    return {"bases_text": text}


def cmd_generate(args) -> dict:
    if args.family == "johnson":
        if args.k == "best":
            k, _ = johnson.best_class(args.n, args.r)
        else:
            try:
                k = int(args.k)
            except ValueError as exc:
                raise InputError("--k must be an integer or 'best'") from exc
        cls = johnson.gs_class(args.n, args.r, k)
        if args.p is None:
            M = johnson.sparse_paving_from_nonbases(args.n, args.r, cls.members)
        else:
            M = johnson.sample_class_matroid(args.n, args.r, k, args.p, args.seed)
        nbs = sorted(M.nonbases)
        comments = [
            f"sparse paving matroid from Graham-Sloane class n={args.n} r={args.r} k={cls.k}",
            f"class size {len(cls)}; non-bases {len(nbs)}",
            "non-bases: " + "; ".join(" ".join(map(str, members(x))) for x in nbs),
        ]
        inputs = {"n": args.n, "r": args.r, "k": args.k, "p": args.p, "seed": args.seed}
        results = {
            "k": cls.k,
            "class_size": len(cls),
            "nonbases": [list(members(x)) for x in nbs],
            "bases": len(M.bases),
        }
    else:
        fam = read_family(args.d, args.n)
        S = johnson.SetSystem(args.n, fam)
        M = johnson.spike(S)
        comments = [
            f"spike with n={args.n} legs (a_i = i, b_i = n + i)",
            "dependent transversals from: "
            + "; ".join(" ".join(map(str, members(d))) or "empty" for d in sorted(fam)),
        ]
        inputs = {"n": args.n, "d": args.d}
        results = {"family_size": len(fam), "bases": len(M.bases), "nonbases": len(M.nonbases)}
    results.update(_emit_bases(M, comments, args.out))
    return {"inputs": inputs, "results": results}


# ---------------------------------------------------------------------------
# verify and bounds

def cmd_verify(args) -> dict:
    checks = run_suite(args.suite, args.seed, args.max_n)
    doc = {
        "inputs": {"suite": args.suite, "seed": args.seed, "max_n": args.max_n},
        "suite": args.suite,
        "seed": args.seed,
        "checks": [c.to_json() for c in checks],
    }
    doc["_failed"] = any(not c.passed for c in checks)
    return doc


def cmd_bounds(args) -> dict:
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        kmax = args.kmax if args.kmax is not None else max(1, (1 << n) // n)
        upper = bounds.kappa_count_upper(n, kmax)
        row = {
            "n": n,
            "knuth_lower": _fraction(bounds.knuth_lower(n)),
            "kmax": kmax,
            "kappa_count_upper": {"lo": _fraction(upper.lo), "hi": _fraction(upper.hi), "approx": float(upper)},
            "checks": {
                "binomial_all_r": all(bounds.binom_bound_check(n, r) for r in range(1, n + 1)),
            },
        }
        if 2 <= n <= 12:
            _, size = johnson.best_class(n, n // 2)
            row["checks"]["best_class_at_least_knuth"] = size >= bounds.knuth_lower(n)
        rows.append(row)
    return {
        "inputs": {"n_min": args.n_min, "n_max": args.n_max, "kmax": args.kmax},
        "results": rows,
    }


# ---------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatcover", description="Exact flat-cover complexity of matroids.")
    p.add_argument("--no-meta", action="store_true", help="omit timestamps and timings from the output")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="kappa, kappa-star, mu or minor search")
    c.add_argument("what", choices=["kappa", "kappa-star", "mu", "minor"])
    c.add_argument("--input", help="catalog:NAME or a .bases file")
    c.add_argument("--host", help="host matroid for 'minor'")
    c.add_argument("--pattern", help="pattern matroid for 'minor'")

    g = sub.add_parser("generate", help="write a generated matroid as .bases")
    gsub = g.add_subparsers(dest="family", required=True)
    gj = gsub.add_parser("johnson", help="sparse paving matroid from a Graham-Sloane class")
    gj.add_argument("--n", type=int, required=True)
    gj.add_argument("--r", type=int, required=True)
    gj.add_argument("--k", default="best", help="class residue or 'best'")
    gj.add_argument("--p", type=float, default=None, help="keep each class member with this probability")
    gj.add_argument("--seed", type=int, default=0)
    gj.add_argument("--out")
    gs = gsub.add_parser("spike", help="spike from a set system")
    gs.add_argument("--n", type=int, required=True)
    gs.add_argument("--d", default="none", help="FILE, all-K-subsets or none")
    gs.add_argument("--out")

    v = sub.add_parser("verify", help="run invariant suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--max-n", type=int, default=12)

    b = sub.add_parser("bounds", help="tabulate the counting bounds")
    b.add_argument("--n-min", type=int, default=1)
    b.add_argument("--n-max", type=int, default=12)
    b.add_argument("--kmax", type=int, default=None, help="default: 2^n // n")

    for sp in (c, gj, gs, v, b):
        sp.add_argument("--no-meta", action="store_true", default=argparse.SUPPRESS)
    return p


HANDLERS = {"compute": cmd_compute, "generate": cmd_generate, "verify": cmd_verify, "bounds": cmd_bounds}


def _command_name(args) -> str:
    if args.command == "compute":
        return f"compute {args.what}"
    if args.command == "generate":
        return f"generate {args.family}"
    return args.command


def _default(obj):
    if isinstance(obj, Fraction):
        return _fraction(obj)
    raise TypeError(f"not serialisable: {type(obj).__name__}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    start = time.perf_counter()
    doc = {"tool_version": __version__, "command": _command_name(args)}
    code = EXIT_OK
    try:
        body = HANDLERS[args.command](args)
        if body.pop("_failed", False):
            code = EXIT_FAIL
        doc.update(body)
    except InputError as exc:
        print(f"flatcover: {exc}", file=sys.stderr)
        doc["error"] = {"type": "InputError", "message": str(exc)}
        code = EXIT_PARSE
    except MatroidError as exc:
        print(f"flatcover: {type(exc).__name__}: {exc}", file=sys.stderr)
        doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_FAIL
    if not args.no_meta:
        doc["meta"] = {
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "elapsed_s": round(time.perf_counter() - start, 3),
            "python": platform.python_version(),
        }
    sys.stdout.write(json.dumps(doc, indent=2, default=_default) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
