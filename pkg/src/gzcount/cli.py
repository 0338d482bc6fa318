"""Command line front end.

Subcommands: count, table, series, verify, cache, g4-explore.  Output is
deterministic byte for byte for fixed inputs and flags: coefficient
dumps use graded lexicographic order, JSON keys are sorted, and all
numbers are exact (integers, or rationals rendered p/q).

Exit codes: 0 success / verified, 1 usage error, 2 verification failure,
3 resource limit refused.  The environment variable GZCOUNT_CACHE names
a default persistent count-cache file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .counting import (
    CacheFormatError,
    CountCache,
    MultiplicityVector,
    a_infinity,
    binomial_formula_V,
    count_by_fiber_recursion,
    recurrence_V3,
    tri_table,
)
from .genfun import (
    build_E,
    build_G,
    closed_form_E2,
    closed_form_G3,
    closed_form_H,
    g4_explore,
    verify_dde_G,
    verify_e2,
    verify_g3,
    verify_h,
    verify_pde_E,
)
from .oracle import DEFAULT_LIMIT_DIM, DimensionLimitError, GZShape, oracle_count
from .polyseries import format_rational

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_LIMIT = 3

ENV_CACHE = "GZCOUNT_CACHE"

COUNT_METHODS = ("a-infinity", "fiber", "formula", "recurrence", "oracle")


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_partition(text: str) -> list[int]:
    """Parse '1,1,2,3' or '1^2 2 3' into a weakly increasing value list."""
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValueError("empty partition expression")
    values: list[int] = []
    for tok in tokens:
        base, sep, power = tok.partition("^")
        try:
            value = int(base)
            mult = int(power) if sep else 1
        except ValueError:
            raise ValueError(f"bad partition token {tok!r}") from None
        if mult <= 0:
            raise ValueError(f"multiplicity must be positive in token {tok!r}")
        values.extend([value] * mult)
    if any(a > b for a, b in zip(values, values[1:])):
        raise ValueError(f"partition values must be weakly increasing: {values}")
    return values


def _cache_path(args) -> str | None:
    path = getattr(args, "cache", None)
    if path:
        return path
    return os.environ.get(ENV_CACHE) or None


def _open_cache(path: str | None) -> CountCache | None:
    if path is None:
        return None
    if os.path.exists(path):
        return CountCache.load(path)
    return CountCache()


def _json_dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------- count


def _cmd_count(args) -> int:
    values = parse_partition(args.partition)
    mv = MultiplicityVector.from_partition(values)
    mults = mv.mults
    distinct = len(mults)
    ambient = len(values) * (len(values) - 1) // 2
    limit = args.limit_dim if args.limit_dim is not None else DEFAULT_LIMIT_DIM

    path = _cache_path(args)
    cache = _open_cache(path)

    def run(method: str) -> int:
        if method == "a-infinity":
            return a_infinity(mults, cache)
        if method == "fiber":
            return count_by_fiber_recursion(mults)
        if method == "formula":
            if distinct != 3:
                raise ValueError(
                    f"method formula needs exactly 3 distinct values, got {distinct}"
                )
            return binomial_formula_V(*mults)
        if method == "recurrence":
            if distinct > 3:
                raise ValueError(
                    f"method recurrence needs at most 3 distinct values, got {distinct}"
                )
            padded = mults + (0,) * (3 - distinct)
            return recurrence_V3(*padded)
        if method == "oracle":
            return oracle_count(GZShape(tuple(values)), limit_dim=limit)
        raise ValueError(f"unknown method {method!r}")

    if args.method != "all":
        value = run(args.method)
        if cache is not None and path:
            cache.save(path)
        if args.format == "json":
            print(_json_dump({
                "partition": values,
                "multiplicities": list(mults),
                "counts": {args.method: str(value)},
                "agreement": True,
            }))
        else:
            print(value)
        return EXIT_OK

    chosen = ["a-infinity", "fiber"]
    if distinct == 3:
        chosen.append("formula")
    if distinct <= 3:
        chosen.append("recurrence")
    skipped_oracle = ambient > limit
    if not skipped_oracle:
        chosen.append("oracle")
    results = {method: run(method) for method in chosen}
    if cache is not None and path:
        cache.save(path)
    agree = len(set(results.values())) == 1

    if args.format == "json":
        print(_json_dump({
            "partition": values,
            "multiplicities": list(mults),
            "counts": {m: str(v) for m, v in results.items()},
            "oracle_skipped": skipped_oracle,
            "agreement": agree,
        }))
    else:
        for method in COUNT_METHODS:
            if method in results:
                print(f"{method} {results[method]}")
        if skipped_oracle:
            print(f"oracle skipped (ambient dimension {ambient} exceeds limit {limit})")
        print(f"agreement: {'ok' if agree else 'MISMATCH'}")
    if not agree:
        print("count mismatch between methods", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------- table


def _cmd_table(args) -> int:
    table = tri_table(args.s, args.variant)
    if args.format == "json":
        cells = [
            {"k": k, "m": m, "value": table.entries[(k, m)]}
            for (k, m) in sorted(table.entries)
        ]
        print(_json_dump({"s": table.s, "variant": table.variant, "cells": cells}))
        return EXIT_OK
    lines = []
    for m in range(table.s, -1, -1):
        row = []
        for k in range(table.s + 1):
            cell = table.entries.get((k, m))
            row.append("" if cell is None else str(cell))
        lines.append(",".join(row))
    print("\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------- series


def _series_names(which: str, k: int) -> list[str]:
    if which == "E":
        return [f"z{i}" for i in range(1, k + 1)]
    if which == "G":
        return ["x", "y", "z"] if k == 3 else [f"y{i}" for i in range(1, k + 1)]
    if which == "G3closed":
        return ["x", "y", "z"]
    if which == "E2closed":
        return ["z1", "z2"]
    return ["x", "z", "y"]


def _cmd_series(args) -> int:
    which = args.which
    fixed_k = {"G3closed": 3, "E2closed": 2, "H": 3}
    if which in fixed_k:
        if args.k is not None and args.k != fixed_k[which]:
            raise ValueError(f"series {which} has a fixed variable count {fixed_k[which]}")
        k = fixed_k[which]
    else:
        k = args.k if args.k is not None else 1
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
    if args.cap < 0:
        raise ValueError(f"cap must be >= 0, got {args.cap}")

    path = _cache_path(args)
    cache = _open_cache(path)
    if which == "E":
        series = build_E(k, args.cap, cache)
    elif which == "G":
        series = build_G(k, args.cap, cache)
    elif which == "G3closed":
        series = closed_form_G3(args.cap)
    elif which == "E2closed":
        series = closed_form_E2(args.cap)
    else:
        series = closed_form_H(args.cap)
    if cache is not None and path:
        cache.save(path)

    names = _series_names(which, k)
    rows = series.terms_sorted()
    if args.format == "json":
        print(_json_dump({
            "series": which,
            "k": k,
            "cap": args.cap,
            "variables": names,
            "terms": [
                {"exponents": list(e), "coefficient": format_rational(c)}
                for e, c in rows
            ],
        }))
    else:
        print(",".join(names + ["coefficient"]))
        for e, c in rows:
            print(",".join([str(v) for v in e] + [format_rational(c)]))
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _parse_k_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        low = int(lo)
        high = int(hi) if sep else low
    except ValueError:
        raise ValueError(f"bad k range {text!r}; expected K or LO:HI") from None
    if low < 1 or high < low:
        raise ValueError(f"bad k range {text!r}")
    return low, high


def _cmd_verify(args) -> int:
    lo, hi = _parse_k_range(args.k)
    path = _cache_path(args)
    cache = _open_cache(path)
    reports = []
    if args.suite in ("pde", "all"):
        for k in range(lo, hi + 1):
            if args.cap < k:
                raise ValueError(f"cap {args.cap} too small for pde at k = {k}")
            reports.append(verify_pde_E(k, args.cap, cache))
    if args.suite in ("dde", "all"):
        for k in range(lo, hi + 1):
            if args.cap < k:
                raise ValueError(f"cap {args.cap} too small for dde at k = {k}")
            reports.append(verify_dde_G(k, args.cap, cache))
    if args.suite in ("g3", "all"):
        reports.append(verify_g3(args.cap, cache))
    if args.suite in ("e2", "all"):
        reports.append(verify_e2(args.cap, cache))
    if args.suite in ("h", "all"):
        reports.append(verify_h(args.cap))
    if cache is not None and path:
        cache.save(path)

    ok = all(r.ok for r in reports)
    if args.format == "json":
        print(_json_dump({"ok": ok, "reports": [r.to_json_obj() for r in reports]}))
    elif args.format == "csv":
        print(reports[0].CSV_HEADER)
        for r in reports:
            print(r.to_csv_row())
    else:
        for r in reports:
            print(r.summary())
        print("all identities verified" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------- cache


def _cmd_cache(args) -> int:
    path = args.path or os.environ.get(ENV_CACHE)
    if not path:
        raise ValueError("no cache path given (use --path or set GZCOUNT_CACHE)")
    if args.action == "stats":
        cache = CountCache.load(path) if os.path.exists(path) else CountCache()
        stats = cache.stats()
        print(f"entries {stats['entries']}")
        print(f"max-total-degree {stats['max_total']}")
        return EXIT_OK
    if args.action == "load":
        cache = CountCache.load(path)
        print(f"loaded {len(cache)} entries from {path}")
        return EXIT_OK
    cache = CountCache.load(path) if os.path.exists(path) else CountCache()
    cache.save(path)
    print(f"saved {len(cache)} entries to {path}")
    return EXIT_OK


# ---------------------------------------------------------------- g4


def _cmd_g4(args) -> int:
    if args.cap < 0:
        raise ValueError(f"cap must be >= 0, got {args.cap}")
    path = _cache_path(args)
    cache = _open_cache(path)
    rows = g4_explore(args.cap, cache)
    if cache is not None and path:
        cache.save(path)
    if args.format == "json":
        print(_json_dump({
            "cap": args.cap,
            "rows": [{"mults": list(e), "count": str(c)} for e, c in rows],
        }))
    else:
        print("i1,i2,i3,i4,count")
        for e, c in rows:
            print(",".join(str(v) for v in e) + f",{c}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="gzcount",
        description="Count vertices of Gelfand-Zetlin polytopes and verify "
        "the generating-function identities behind the counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="count vertices of one polytope")
    p_count.add_argument("partition", help="partition, e.g. '1 2 3', '1,1,2' or '1^2 2 3'")
    p_count.add_argument("--method", choices=COUNT_METHODS + ("all",), default="a-infinity")
    p_count.add_argument("--cache", help="persistent count cache file")
    p_count.add_argument("--limit-dim", type=int, default=None,
                         help=f"oracle ambient-dimension guardrail (default {DEFAULT_LIMIT_DIM})")
    p_count.add_argument("--format", choices=("text", "json"), default="text")

    p_table = sub.add_parser("table", help="triangular count tables")
    p_table.add_argument("s", type=int)
    p_table.add_argument("--variant", choices=("plain", "skew"), default="plain")
    p_table.add_argument("--format", choices=("csv", "json"), default="csv")

    p_series = sub.add_parser("series", help="dump a count series")
    p_series.add_argument("which", choices=("E", "G", "G3closed", "E2closed", "H"))
    p_series.add_argument("--k", type=int, default=None)
    p_series.add_argument("--cap", type=int, default=6)
    p_series.add_argument("--cache", help="persistent count cache file")
    p_series.add_argument("--format", choices=("csv", "json"), default="csv")

    p_verify = sub.add_parser("verify", help="machine-check the series identities")
    p_verify.add_argument("suite", choices=("pde", "dde", "g3", "e2", "h", "all"))
    p_verify.add_argument("--k", default="1:4", help="k or lo:hi range (pde/dde)")
    p_verify.add_argument("--cap", type=int, default=6)
    p_verify.add_argument("--cache", help="persistent count cache file")
    p_verify.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p_cache = sub.add_parser("cache", help="manage the persistent count cache")
    p_cache.add_argument("action", choices=("load", "save", "stats"))
    p_cache.add_argument("--path", help="cache file (default: GZCOUNT_CACHE)")

    p_g4 = sub.add_parser("g4-explore", help="dump four-value counts for exploration")
    p_g4.add_argument("--cap", type=int, default=4)
    p_g4.add_argument("--cache", help="persistent count cache file")
    p_g4.add_argument("--format", choices=("csv", "json"), default="csv")

    return parser


_DISPATCH = {
    "count": _cmd_count,
    "table": _cmd_table,
    "series": _cmd_series,
    "verify": _cmd_verify,
    "cache": _cmd_cache,
    "g4-explore": _cmd_g4,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if not exc.code else int(exc.code)
    try:
        return _DISPATCH[args.command](args)
    except DimensionLimitError as exc:
        print(f"gzcount: refused: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (CacheFormatError, ValueError) as exc:
        print(f"gzcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
