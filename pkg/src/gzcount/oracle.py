"""Independent ground truth: exact vertex enumeration of GZ polytopes.

Builds the facet inequality system of GZ(lambda) directly from the
interlacing triangle and enumerates its vertices by solving all maximal
independent subsets of tight facets, entirely in exact rational
arithmetic.  Nothing here touches the operator/recursion machinery, so
agreement between this module and the counters is a real cross-check.

The enumeration is intentionally limited to small ambient dimension
(the default guardrail is 10, i.e. partitions of length up to 5); the
point of this module is correctness at desk scale, not generality.

Subset candidates are generated in lexicographic order of row indices;
batches are independent of each other, so callers may parallelise over
them and merge the resulting point sets without affecting the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .polyseries import format_rational

DEFAULT_LIMIT_DIM = 10


class OracleError(RuntimeError):
    """The enumeration could not establish its own preconditions."""


class DimensionLimitError(OracleError):
    """Refusal to enumerate above the configured ambient-dimension limit."""


@dataclass(frozen=True)
class GZShape:
    """A weakly increasing integer tuple heading the interlacing triangle."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if not vals:
            raise ValueError("shape needs at least one value")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"shape must be weakly increasing, got {vals}")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def ambient_dim(self) -> int:
        return self.n * (self.n - 1) // 2

    def multiplicities(self) -> tuple[int, ...]:
        mults: list[int] = []
        prev = None
        for v in self.values:
            if v == prev:
                mults[-1] += 1
            else:
                mults.append(1)
                prev = v
        return tuple(mults)

    def translate(self, offset: int) -> "GZShape":
        return GZShape(tuple(v + offset for v in self.values))

    def negate_reverse(self) -> "GZShape":
        return GZShape(tuple(-v for v in reversed(self.values)))


def _var_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Coordinate labels (i, j): row i = 1..n-1, position j = 1..n-i."""
    return tuple((i, j) for i in range(1, n) for j in range(1, n - i + 1))


@dataclass(frozen=True)
class HRep:
    """Inequality system  normal . u <= bound  cutting out GZ(shape).

    Each coordinate u(i,j) is squeezed between its two upper neighbours
    in the triangle, so there are exactly n(n-1) rows and every normal
    has at most two nonzero entries, each +-1.
    """

    dim: int
    rows: tuple[tuple[tuple[int, ...], int], ...]
    shape: GZShape
    var_pairs: tuple[tuple[int, int], ...]


def build_hrep(shape: GZShape) -> HRep:
    """Facet system of GZ(shape): for every triangle a, b over c emit a <= c <= b."""
    lam = shape.values
    n = shape.n
    pairs = _var_pairs(n)
    index = {pair: pos for pos, pair in enumerate(pairs)}
    dim = len(pairs)
    rows: list[tuple[tuple[int, ...], int]] = []

    def unit(pos: int, sign: int) -> list[int]:
        normal = [0] * dim
        normal[pos] = sign
        return normal

    for pos, (i, j) in enumerate(pairs):
        if i == 1:
            rows.append((tuple(unit(pos, -1)), -lam[j - 1]))
            rows.append((tuple(unit(pos, 1)), lam[j]))
        else:
            lower = unit(pos, -1)
            lower[index[(i - 1, j)]] = 1
            rows.append((tuple(lower), 0))
            upper = unit(pos, 1)
            upper[index[(i - 1, j + 1)]] = -1
            rows.append((tuple(upper), 0))
    return HRep(dim=dim, rows=tuple(rows), shape=shape, var_pairs=pairs)


@dataclass(frozen=True)
class VertexSet:
    """Deduplicated exact vertex coordinates, exportable as CSV or JSON."""

    points: frozenset[tuple[Fraction, ...]]

    def __len__(self) -> int:
        return len(self.points)

    def sorted_points(self) -> list[tuple[Fraction, ...]]:
        return sorted(self.points)

    def to_csv(self) -> str:
        lines = [
            ",".join(format_rational(c) for c in point) for point in self.sorted_points()
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    def to_json_obj(self) -> list[list[str]]:
        return [[format_rational(c) for c in point] for point in self.sorted_points()]


def _midpoint_table(lam: Sequence[int]) -> list[list[Fraction]]:
    """Triangle of repeated midpoints under lam; strictly interior where possible."""
    rows = [[Fraction(v) for v in lam]]
    for _ in range(len(lam) - 1):
        prev = rows[-1]
        rows.append([(a + b) / 2 for a, b in zip(prev, prev[1:])])
    return rows[1:]


def _pinned_coords(shape: GZShape, pairs: Iterable[tuple[int, int]]) -> dict[int, int]:
    """Coordinates forced to a point: both chained bounds coincide."""
    lam = shape.values
    pinned: dict[int, int] = {}
    for pos, (i, j) in enumerate(pairs):
        if lam[j - 1] == lam[i + j - 1]:
            pinned[pos] = lam[j - 1]
    return pinned


def _gcd_normalize(row: list[int]) -> tuple[int, ...]:
    g = 0
    for v in row:
        g = gcd(g, abs(v))
        if g == 1:
            return tuple(row)
    if g > 1:
        return tuple(v // g for v in row)
    return tuple(row)


def _independent_solutions(rows: Sequence[tuple[int, ...]], d: int) -> list[list[Fraction]]:
    """Solve every lexicographic d-subset of rows with independent normals.

    Rows are integer vectors (normal..., rhs).  Independence is decided
    by fraction-free elimination; each full-rank subset is solved by
    exact back-substitution.
    """
    n_rows = len(rows)
    solutions: list[list[Fraction]] = []

    def solve(echelon: list[tuple[int, ...]], pivots: list[int]) -> list[Fraction]:
        x: list[Fraction | None] = [None] * d
        for row, p in zip(reversed(echelon), reversed(pivots)):
            acc = Fraction(row[d])
            for col in range(d):
                if col != p and row[col]:
                    acc -= row[col] * x[col]
            x[p] = acc / row[p]
        return x  # type: ignore[return-value]

    def extend(start: int, echelon: list[tuple[int, ...]], pivots: list[int]) -> None:
        if len(echelon) == d:
            solutions.append(solve(echelon, pivots))
            return
        need = d - len(echelon)
        for idx in range(start, n_rows - need + 1):
            reduced = list(rows[idx])
            for erow, p in zip(echelon, pivots):
                c = reduced[p]
                if c:
                    f = erow[p]
                    reduced = [f * a - c * b for a, b in zip(reduced, erow)]
            pivot = next((col for col in range(d) if reduced[col]), None)
            if pivot is None:
                continue
            extend(idx + 1, echelon + [_gcd_normalize(reduced)], pivots + [pivot])

    extend(0, [], [])
    return solutions


def enumerate_vertices(hrep: HRep, limit_dim: int | None = None) -> VertexSet:
    """Exact vertex set of the polytope described by ``hrep``.

    Substitutes out coordinates pinned by coinciding bounds, certifies
    the reduced system is full-dimensional by exhibiting a strictly
    interior point (repeated midpoints of the shape), then keeps every
    solution of an independent tight subset that satisfies all rows.
    """
    limit = DEFAULT_LIMIT_DIM if limit_dim is None else limit_dim
    if hrep.dim > limit:
        raise DimensionLimitError(
            f"ambient dimension {hrep.dim} exceeds the enumeration limit {limit}"
        )
    pinned = _pinned_coords(hrep.shape, hrep.var_pairs)
    free = [pos for pos in range(hrep.dim) if pos not in pinned]
    fpos = {pos: k for k, pos in enumerate(free)}
    d = len(free)

    reduced: list[tuple[tuple[int, ...], int, tuple[tuple[int, int], ...]]] = []
    for normal, bound in hrep.rows:
        rhs = bound - sum(normal[pos] * val for pos, val in pinned.items())
        sparse = tuple((fpos[pos], normal[pos]) for pos in free if normal[pos])
        if not sparse:
            if rhs < 0:
                raise OracleError("inequality system is infeasible")
            continue
        dense = tuple(normal[pos] for pos in free)
        reduced.append((dense, rhs, sparse))

    mid = _midpoint_table(hrep.shape.values)
    interior_full = [mid[i - 1][j - 1] for (i, j) in hrep.var_pairs]
    interior = [interior_full[pos] for pos in free]
    for _, rhs, sparse in reduced:
        if sum(c * interior[k] for k, c in sparse) >= rhs:
            raise OracleError(
                "no strictly interior point: reduced system is not full-dimensional"
            )

    def assemble(values: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = []
        for pos in range(hrep.dim):
            if pos in pinned:
                out.append(Fraction(pinned[pos]))
            else:
                out.append(values[fpos[pos]])
        return tuple(out)

    if d == 0:
        return VertexSet(frozenset({assemble(())}))

    rows = [dense + (rhs,) for dense, rhs, _ in reduced]
    points: set[tuple[Fraction, ...]] = set()
    for candidate in _independent_solutions(rows, d):
        if all(
            sum(c * candidate[k] for k, c in sparse) <= rhs
            for _, rhs, sparse in reduced
        ):
            points.add(assemble(candidate))
    return VertexSet(frozenset(points))


def oracle_count(shape: GZShape, limit_dim: int | None = None) -> int:
    """Vertex count of GZ(shape) by direct enumeration."""
    return len(enumerate_vertices(build_hrep(shape), limit_dim=limit_dim))
