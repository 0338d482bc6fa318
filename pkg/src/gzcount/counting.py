"""Vertex counting for Gelfand-Zetlin polytopes.

The combinatorial type of GZ(lambda) depends only on the multiplicity
vector (i1, ..., ik) of the distinct values of lambda, so every counter
here is keyed on multiplicity vectors.  Four independent evaluation
routes are provided and cross-checked by the test suite:

* ``a_infinity``       -- iterate the degree-lowering operator A on the
                          monomial x1^i1 ... xk^ik down to its constant
                          fixed point, memoised on zero-stripped vectors;
* ``count_by_fiber_recursion`` -- the projection-onto-a-cube recursion,
                          one step of A applied to the squarefree part;
* ``binomial_formula_V`` / ``coeff_theorem_V`` / ``recurrence_V3``
                       -- closed formulas and a recurrence for three
                          distinct values;
* triangular tables ``T^s`` / skew tables and the generating polynomials
  ``g_s`` / ``h_s`` they tabulate.

Counts are arbitrary-precision integers throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .polyseries import Monomial, SparsePoly, TruncSeries, divide_exact

Mults = tuple[int, ...]


def compress(mults: Iterable[int]) -> Mults:
    """Drop all zero multiplicities; validates entries are nonnegative ints."""
    out = []
    for v in mults:
        v = int(v)
        if v < 0:
            raise ValueError(f"multiplicities must be nonnegative, got {v}")
        if v:
            out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class MultiplicityVector:
    """Exponent vector (i1, ..., ik) of a partition with k distinct values.

    Canonical form has no leading or trailing zeros; interior zeros are
    allowed at the type level and removed only when keying count caches.
    """

    mults: Mults

    def __post_init__(self):
        vals = tuple(int(v) for v in self.mults)
        if any(v < 0 for v in vals):
            raise ValueError("multiplicities must be nonnegative")
        lo, hi = 0, len(vals)
        while lo < hi and vals[lo] == 0:
            lo += 1
        while hi > lo and vals[hi - 1] == 0:
            hi -= 1
        object.__setattr__(self, "mults", vals[lo:hi])

    @classmethod
    def from_partition(cls, values: Sequence[int]) -> "MultiplicityVector":
        """Multiplicities of the distinct values of a weakly increasing list."""
        vals = [int(v) for v in values]
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"partition must be weakly increasing, got {vals}")
        mults: list[int] = []
        prev = None
        for v in vals:
            if v == prev:
                mults[-1] += 1
            else:
                mults.append(1)
                prev = v
        return cls(tuple(mults))

    @property
    def total(self) -> int:
        return sum(self.mults)

    @property
    def compressed(self) -> Mults:
        return tuple(v for v in self.mults if v)


class CacheFormatError(ValueError):
    """A persisted count cache file failed validation."""


class CountCache:
    """Shared memo table: zero-stripped multiplicity vector -> vertex count.

    Insertion uses dict.setdefault, which is atomic in CPython, and any
    value computed for a key is always the same, so concurrent readers
    and writers see a deterministic table.
    """

    VERSION = 1

    def __init__(self, entries: Mapping[Mults, int] | None = None):
        self._counts: dict[Mults, int] = {}
        if entries:
            for key, value in entries.items():
                self._counts[self._check_key(key)] = self._check_value(value)

    @staticmethod
    def _check_key(key) -> Mults:
        key = tuple(key)
        if not key or any(not isinstance(v, int) or v <= 0 for v in key):
            raise CacheFormatError(
                f"cache key must be a nonempty tuple of positive integers, got {key}"
            )
        return key

    @staticmethod
    def _check_value(value) -> int:
        if not isinstance(value, int) or value < 0:
            raise CacheFormatError(f"cache value must be a nonnegative integer, got {value}")
        return value

    def get(self, key: Mults) -> int | None:
        return self._counts.get(key)

    def insert(self, key: Mults, value: int) -> int:
        """Insert-if-absent; returns the stored value (first writer wins)."""
        return self._counts.setdefault(key, value)

    def __len__(self) -> int:
        return len(self._counts)

    def items(self):
        return self._counts.items()

    def stats(self) -> dict[str, int]:
        return {
            "entries": len(self._counts),
            "max_total": max((sum(k) for k in self._counts), default=0),
        }

    def save(self, path: str | Path) -> None:
        counts = {
            ",".join(str(v) for v in key): str(self._counts[key])
            for key in sorted(self._counts, key=lambda k: (sum(k), k))
        }
        payload = {"version": self.VERSION, "counts": counts}
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "CountCache":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise CacheFormatError(f"cache file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict) or data.get("version") != cls.VERSION:
            raise CacheFormatError(
                f"unsupported cache version {data.get('version') if isinstance(data, dict) else data!r}"
            )
        counts = data.get("counts")
        if not isinstance(counts, dict):
            raise CacheFormatError("cache file has no counts table")
        cache = cls()
        for key_text, value_text in counts.items():
            cache._counts[cls._parse_key(key_text)] = cls._parse_value(value_text)
        return cache

    @staticmethod
    def _parse_key(text) -> Mults:
        if not isinstance(text, str) or not text:
            raise CacheFormatError(f"bad cache key {text!r}")
        parts = text.split(",")
        key = []
        for tok in parts:
            if not tok.isdigit() or str(int(tok)) != tok or int(tok) <= 0:
                raise CacheFormatError(f"non-canonical cache key {text!r}")
            key.append(int(tok))
        return tuple(key)

    @staticmethod
    def _parse_value(text) -> int:
        if not isinstance(text, str) or not text.isdigit() or str(int(text)) != text:
            raise CacheFormatError(f"non-canonical cache value {text!r}")
        return int(text)


#: Process-wide memo table shared by default between all count queries.
SHARED_CACHE = CountCache()


def apply_A(p: SparsePoly) -> SparsePoly:
    """One step of the degree-lowering operator.

    Acting on a monomial with support xj1 < ... < xjk, replace the
    squarefree part xj1*...*xjk by (xj1+xj2)*...*(xj(k-1)+xjk); constants
    are fixed.  Extended linearly to the whole polynomial.
    """
    out = SparsePoly.zero()
    for mono, coeff in p.items():
        support = mono.support()
        if not support:
            out = out + SparsePoly.const(coeff)
            continue
        factor = SparsePoly.one()
        for a, b in zip(support, support[1:]):
            factor = factor * (SparsePoly.variable(a) + SparsePoly.variable(b))
        rest = SparsePoly({mono.divide_by_support(): coeff})
        out = out + factor * rest
    return out


def _a_children(key: Mults) -> dict[Mults, int]:
    """Expansion of A applied to x1^i1 ... xk^ik, as zero-stripped vectors."""
    mono = Monomial((j + 1, e) for j, e in enumerate(key))
    children: dict[Mults, int] = {}
    for m, c in apply_A(SparsePoly({mono: 1})).items():
        child = tuple(exp for _, exp in m.pairs)
        children[child] = children.get(child, 0) + c
    return children


def a_infinity(mults: Sequence[int] | MultiplicityVector, cache: CountCache | None = None) -> int:
    """Constant reached by iterating the operator A on x1^i1 ... xk^ik.

    This equals the vertex count of the GZ polytope of any partition
    whose multiplicity vector is ``mults``.  Memoised on zero-stripped
    vectors in ``cache`` (the shared table by default).
    """
    if isinstance(mults, MultiplicityVector):
        mults = mults.mults
    key = compress(mults)
    if cache is None:
        cache = SHARED_CACHE
    if not key:
        return 1
    stack: list[tuple[Mults, dict[Mults, int] | None]] = [(key, None)]
    while stack:
        cur, children = stack[-1]
        if cache.get(cur) is not None:
            stack.pop()
            continue
        if children is None:
            children = _a_children(cur)
            stack[-1] = (cur, children)
        missing = [ck for ck in children if ck and cache.get(ck) is None]
        if missing:
            stack.extend((ck, None) for ck in missing)
            continue
        total = 0
        for ck, c in children.items():
            total += c * (cache.get(ck) if ck else 1)
        cache.insert(cur, total)
        stack.pop()
    return cache.get(key)


def a_infinity_unnormalized(mults: Sequence[int], memo: dict | None = None) -> int:
    """Same fixed point, but memoised on raw exponent tuples (zeros kept).

    Exists to validate that stripping interior zeros from memo keys does
    not change any value; compare with ``a_infinity`` on small inputs.
    """
    key = tuple(int(v) for v in mults)
    if any(v < 0 for v in key):
        raise ValueError("multiplicities must be nonnegative")
    if memo is None:
        memo = {}

    def walk(vec: Mults) -> int:
        if not any(vec):
            return 1
        hit = memo.get(vec)
        if hit is not None:
            return hit
        mono = Monomial((j + 1, e) for j, e in enumerate(vec) if e)
        total = 0
        for m, c in apply_A(SparsePoly({mono: 1})).items():
            child = tuple(m.exponent(j + 1) for j in range(len(vec)))
            total += c * walk(child)
        memo[vec] = total
        return total

    return walk(key)


def vertex_count(partition: Sequence[int], cache: CountCache | None = None) -> int:
    """Number of vertices of GZ(lambda) for a weakly increasing lambda."""
    mv = MultiplicityVector.from_partition(partition)
    return a_infinity(mv, cache)


_FIBER_MEMO: dict[Mults, int] = {}


def _fiber_children(key: Mults) -> dict[Mults, int]:
    """Children of the cube-fiber recursion: expand the squarefree product."""
    k = len(key)
    children: dict[Mults, int] = {}
    for bits in range(1 << (k - 1)):
        exps = [e - 1 for e in key]
        for j in range(k - 1):
            exps[j + ((bits >> j) & 1)] += 1
        child = tuple(e for e in exps if e)
        children[child] = children.get(child, 0) + 1
    return children


def count_by_fiber_recursion(mults: Sequence[int], memo: dict[Mults, int] | None = None) -> int:
    """Vertex count via fibers over cube vertices.

    Projecting GZ onto a cube sends vertices to vertices; the fiber over
    the cube vertex labelled by a monomial of (x1+x2)...(x(k-1)+xk) is a
    smaller GZ polytope.  Dimension-zero polytopes (at most one distinct
    value) count 1.  Independent of ``a_infinity``'s memo table.
    """
    key = compress(mults)
    if memo is None:
        memo = _FIBER_MEMO
    if len(key) <= 1:
        return 1
    stack: list[tuple[Mults, dict[Mults, int] | None]] = [(key, None)]
    while stack:
        cur, children = stack[-1]
        if memo.get(cur) is not None:
            stack.pop()
            continue
        if children is None:
            children = _fiber_children(cur)
            stack[-1] = (cur, children)
        missing = [ck for ck in children if len(ck) > 1 and memo.get(ck) is None]
        if missing:
            stack.extend((ck, None) for ck in missing)
            continue
        total = 0
        for ck, c in children.items():
            total += c * (memo[ck] if len(ck) > 1 else 1)
        memo[cur] = total
        stack.pop()
    return memo[key]


def _comb0(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def binomial_formula_V(k: int, l: int, m: int) -> int:
    """Explicit alternating binomial sum for counts with three distinct values.

    V = C(s,k)C(s,m) + 2 * sum_{i>=1} (-1)^i C(s,k-i)C(s,m-i), s = k+l+m.
    Defined for k, l, m all positive.
    """
    if min(k, l, m) <= 0:
        raise ValueError("binomial_formula_V requires k, l, m > 0")
    s = k + l + m
    total = comb(s, k) * comb(s, m)
    for i in range(1, k + 1):
        term = _comb0(s, k - i) * _comb0(s, m - i)
        total += 2 * (-1) ** i * term
    return total


def coeff_theorem_V(k: int, l: int, m: int) -> int:
    """Coefficient extraction route for counts with three distinct values.

    Reads off the coefficient of x^k z^m in
    (1-xz)/(1+xz) * ((1+x)^s (1+z)^s - (x+z)^s), s = k+l+m,
    expanding the quotient exactly in the truncated series ring.
    """
    if min(k, l, m) <= 0:
        raise ValueError("coeff_theorem_V requires k, l, m > 0")
    s = k + l + m
    cap = k + m
    one = SparsePoly.one()
    x = SparsePoly.variable(1)
    z = SparsePoly.variable(2)
    bracket = (one + x) ** s * (one + z) ** s - (x + z) ** s
    numerator = TruncSeries.from_poly((one - x * z) * bracket, 2, cap)
    series = numerator * TruncSeries.from_poly(one + x * z, 2, cap).inv()
    value = series.coeff((k, m))
    if not isinstance(value, int):
        raise ArithmeticError(f"coefficient {value} is not an integer")
    return value


_REC3_MEMO: dict[Mults, int] = {}


def recurrence_V3(k: int, l: int, m: int) -> int:
    """Recurrence route for counts with up to three distinct values.

    V(k,l,m) = V(k-1,l,m) + V(k,l-1,m) + V(k,l,m-1) + V(k-1,l+1,m-1)
    for k, l, m > 0; a zero argument reduces to the two-value binomial
    C(a+b, a), and a single value counts 1.
    """
    if min(k, l, m) < 0:
        raise ValueError("recurrence_V3 requires nonnegative arguments")
    if k == 0:
        return comb(l + m, l)
    if l == 0:
        return comb(k + m, k)
    if m == 0:
        return comb(k + l, k)
    key = (k, l, m)
    hit = _REC3_MEMO.get(key)
    if hit is not None:
        return hit
    value = (
        recurrence_V3(k - 1, l, m)
        + recurrence_V3(k, l - 1, m)
        + recurrence_V3(k, l, m - 1)
        + recurrence_V3(k - 1, l + 1, m - 1)
    )
    _REC3_MEMO[key] = value
    return value


_POLY_ONE = SparsePoly.one()
_POLY_X = SparsePoly.variable(1)
_POLY_Z = SparsePoly.variable(2)

_G_CACHE: list[SparsePoly] = [SparsePoly.one()]
_H_CACHE: list[SparsePoly] = [SparsePoly.zero()]


def g_polynomial(s: int) -> SparsePoly:
    """Degree-s slice polynomial g_s(x, z) of the three-value counts.

    g_0 = 1 and g_{s+1} = (1+x+z) g_s + truncate_{<=s}(xz g_s); the
    coefficient of x^k z^m equals the count V with s boxes split as
    (k, s-k-m, m).
    """
    if s < 0:
        raise ValueError("g_polynomial requires s >= 0")
    while len(_G_CACHE) <= s:
        t = len(_G_CACHE) - 1
        g = _G_CACHE[-1]
        _G_CACHE.append((_POLY_ONE + _POLY_X + _POLY_Z) * g + (_POLY_X * _POLY_Z * g).truncate(t))
    return _G_CACHE[s]


H_METHODS = ("recurrence", "definition", "closed-form")


def h_polynomial(s: int, method: str = "recurrence") -> SparsePoly:
    """Skew-symmetrised slice polynomial h_s(x, z), by one of three routes.

    definition:   h_s = g_s(x,z) - (xz)^s g_s(1/z, 1/x)
    recurrence:   h_{s+1} = h_s (1+x)(1+z) + (1-xz)(x+z)^s, from h_0 = 0
    closed-form:  (1-xz) ((1+x)^s (1+z)^s - (x+z)^s) / (1+xz), the
                  division being exact (a nonzero remainder raises).

    All three produce identical polynomials.
    """
    if s < 1:
        raise ValueError("h_polynomial requires s >= 1")
    if method == "recurrence":
        while len(_H_CACHE) <= s:
            t = len(_H_CACHE) - 1
            h = _H_CACHE[-1]
            _H_CACHE.append(
                h * (_POLY_ONE + _POLY_X) * (_POLY_ONE + _POLY_Z)
                + (_POLY_ONE - _POLY_X * _POLY_Z) * (_POLY_X + _POLY_Z) ** t
            )
        return _H_CACHE[s]
    if method == "definition":
        g = g_polynomial(s)
        reflected: dict[Monomial, int] = {}
        for mono, coeff in g.items():
            k = mono.exponent(1)
            m = mono.exponent(2)
            reflected[Monomial({1: s - m, 2: s - k})] = coeff
        return g - SparsePoly(reflected)
    if method == "closed-form":
        bracket = (_POLY_ONE + _POLY_X) ** s * (_POLY_ONE + _POLY_Z) ** s - (_POLY_X + _POLY_Z) ** s
        return divide_exact((_POLY_ONE - _POLY_X * _POLY_Z) * bracket, _POLY_ONE + _POLY_X * _POLY_Z)
    raise ValueError(f"unknown h_polynomial method {method!r}; expected one of {H_METHODS}")


TABLE_VARIANTS = ("plain", "skew")


@dataclass(frozen=True)
class TriTable:
    """Triangular table of three-value counts (plain) or its skew variant.

    Plain tables live on cells k + m <= s and tabulate the coefficients
    of g_s; skew tables live on the square 0 <= k, m <= s, tabulate the
    coefficients of h_s, and satisfy entry(k, m) = -entry(s-m, s-k)
    (skew symmetry across the k + m = s diagonal of the drawn table).
    """

    s: int
    variant: str
    entries: dict[tuple[int, int], int]

    def entry(self, k: int, m: int) -> int:
        try:
            return self.entries[(k, m)]
        except KeyError:
            raise ValueError(f"cell ({k}, {m}) outside table domain") from None

    def cells(self) -> list[tuple[int, int]]:
        return sorted(self.entries)


def tri_table(s: int, variant: str = "plain") -> TriTable:
    """Build the size-s table by the neighbor-sum growth rules."""
    if s < 1:
        raise ValueError("tri_table requires s >= 1")
    if variant not in TABLE_VARIANTS:
        raise ValueError(f"unknown table variant {variant!r}; expected one of {TABLE_VARIANTS}")
    if variant == "plain":
        cells = {(0, 0): 1, (1, 0): 1, (0, 1): 1}
        for t in range(1, s):
            grown: dict[tuple[int, int], int] = {}
            for k in range(t + 2):
                for m in range(t + 2 - k):
                    grown[(k, m)] = (
                        cells.get((k, m), 0)
                        + cells.get((k - 1, m), 0)
                        + cells.get((k, m - 1), 0)
                        + cells.get((k - 1, m - 1), 0)
                    )
            for k in range(t + 2):
                m = t + 1 - k
                grown[(k, m)] = cells.get((k - 1, m), 0) + cells.get((k, m - 1), 0)
            cells = grown
    else:
        cells = {(0, 0): 1, (1, 0): 0, (0, 1): 0, (1, 1): -1}
        for t in range(1, s):
            size = t + 1
            grown = {}
            for k in range(size + 1):
                for m in range(size + 1):
                    grown[(k, m)] = (
                        cells.get((k, m), 0)
                        + cells.get((k - 1, m), 0)
                        + cells.get((k, m - 1), 0)
                        + cells.get((k - 1, m - 1), 0)
                    )
            for k in range(t + 1):
                m = t - k
                b = comb(t, m)
                grown[(k, m)] += b
                grown[(k + 1, m + 1)] -= b
            cells = grown
    return TriTable(s=s, variant=variant, entries=cells)
