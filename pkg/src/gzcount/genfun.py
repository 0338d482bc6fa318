"""Generating functions of vertex counts and machine checks of their identities.

Builds truncations of the exponential series E_k and the ordinary series
G_k straight from computed counts, evaluates the known closed forms
(E_1, E_2 via the Bessel-type sum, G_1, G_2, G_3, and the skew-slice
generating function H) structurally in the truncated ring, and verifies
each identity as an exact residual:

* E_k solves the constant-coefficient PDE
  (d^k/dz1..dzk - (d1+d2)...(d(k-1)+dk)) E_k = 0;
* G_k solves the same shape of equation in divided differences;
* the closed forms match the count-built series coefficient by
  coefficient, at every truncation degree.

A nonzero residual is reported, never raised; reports serialise to JSON
and CSV with rationals rendered exactly as p/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator

from .counting import CountCache, a_infinity, h_polynomial
from .polyseries import SparsePoly, TruncSeries, format_rational

KIND_EXPONENTIAL = "exponential"
KIND_ORDINARY = "ordinary"


@dataclass(frozen=True)
class SeriesBuildSpec:
    """Request for a count series: k variables, total-degree cap, kind."""

    k: int
    cap: int
    kind: str

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.cap < 0:
            raise ValueError(f"cap must be >= 0, got {self.cap}")
        if self.kind not in (KIND_EXPONENTIAL, KIND_ORDINARY):
            raise ValueError(f"kind must be exponential or ordinary, got {self.kind!r}")


def _bounded_exponents(k: int, cap: int) -> Iterator[tuple[int, ...]]:
    """All length-k exponent tuples with total degree <= cap."""
    if k == 1:
        for v in range(cap + 1):
            yield (v,)
        return
    for head in range(cap + 1):
        for tail in _bounded_exponents(k - 1, cap - head):
            yield (head,) + tail


def build_G(k: int, cap: int, cache: CountCache | None = None) -> TruncSeries:
    """Ordinary count series: the coefficient of y^i is the count for i."""
    coeffs = {e: a_infinity(e, cache) for e in _bounded_exponents(k, cap)}
    return TruncSeries(k, cap, coeffs)


def build_E(k: int, cap: int, cache: CountCache | None = None) -> TruncSeries:
    """Exponential count series: the coefficient of z^i is count(i) / i!."""
    coeffs = {}
    for e in _bounded_exponents(k, cap):
        denom = 1
        for v in e:
            denom *= factorial(v)
        coeffs[e] = Fraction(a_infinity(e, cache), denom)
    return TruncSeries(k, cap, coeffs)


def build_series(spec: SeriesBuildSpec, cache: CountCache | None = None) -> TruncSeries:
    if spec.kind == KIND_EXPONENTIAL:
        return build_E(spec.k, spec.cap, cache)
    return build_G(spec.k, spec.cap, cache)


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one identity check: exact residual statistics."""

    identity: str
    k: int | None
    cap: int
    max_abs: object
    nonzero_terms: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.nonzero_terms == 0

    def summary(self) -> str:
        label = self.identity if self.k is None else f"{self.identity} k={self.k}"
        verdict = "PASS" if self.ok else "FAIL"
        text = (
            f"{label} cap={self.cap}: {verdict} "
            f"(max |residual| = {format_rational(self.max_abs)}, "
            f"nonzero terms = {self.nonzero_terms})"
        )
        if self.detail:
            text += f" [{self.detail}]"
        return text

    def to_json_obj(self) -> dict:
        return {
            "identity": self.identity,
            "k": self.k,
            "cap": self.cap,
            "max_abs": format_rational(self.max_abs),
            "nonzero_terms": self.nonzero_terms,
            "ok": self.ok,
            "detail": self.detail,
        }

    CSV_HEADER = "identity,k,cap,max_abs,nonzero_terms,ok"

    def to_csv_row(self) -> str:
        k = "" if self.k is None else str(self.k)
        return (
            f"{self.identity},{k},{self.cap},{format_rational(self.max_abs)},"
            f"{self.nonzero_terms},{'true' if self.ok else 'false'}"
        )


def _report_from_series(identity: str, k: int | None, cap: int, residual: TruncSeries,
                        detail: str = "") -> ResidualReport:
    return ResidualReport(
        identity=identity,
        k=k,
        cap=cap,
        max_abs=residual.max_abs_coeff(),
        nonzero_terms=len(residual.coeffs),
        detail=detail,
    )


def pde_residual(series: TruncSeries, k: int) -> TruncSeries:
    """Apply d^k/dz1..dzk minus the product of neighbour-sum derivatives."""
    if series.nvars != k:
        raise ValueError(f"series has {series.nvars} variables, expected {k}")
    if series.cap < k:
        raise ValueError(f"cap {series.cap} too small for k = {k}")
    left = series
    for i in range(1, k + 1):
        left = left.deriv(i)
    right = series
    for j in range(1, k):
        right = right.deriv(j) + right.deriv(j + 1)
    return left - right


def dde_residual(series: TruncSeries, k: int) -> TruncSeries:
    """Same operator shape with divided differences in place of derivatives."""
    if series.nvars != k:
        raise ValueError(f"series has {series.nvars} variables, expected {k}")
    if series.cap < k:
        raise ValueError(f"cap {series.cap} too small for k = {k}")
    left = series
    for i in range(1, k + 1):
        left = left.divdiff(i)
    right = series
    for j in range(1, k):
        right = right.divdiff(j) + right.divdiff(j + 1)
    return left - right


def verify_pde_E(k: int, cap: int, cache: CountCache | None = None) -> ResidualReport:
    """Build E_k from counts and check its differential equation exactly."""
    residual = pde_residual(build_E(k, cap, cache), k)
    return _report_from_series("pde-E", k, cap, residual)


def verify_dde_G(k: int, cap: int, cache: CountCache | None = None) -> ResidualReport:
    """Build G_k from counts and check its divided-difference equation exactly."""
    residual = dde_residual(build_G(k, cap, cache), k)
    return _report_from_series("dde-G", k, cap, residual)


def g3_roots(cap: int) -> tuple[TruncSeries, TruncSeries]:
    """The two root series of y = (x+y)(y+z), as series in x and z.

    Returned in three variables (x, y, z) with no y dependence so they
    combine directly with G_3; the sign of the square root is fixed by
    lam(0,0) = 1 and mu(0,0) = 0, and the pair satisfies
    lam + mu = 1 - x - z and lam * mu = xz.
    """
    one = SparsePoly.one()
    x = SparsePoly.variable(1)
    z = SparsePoly.variable(3)
    inner = TruncSeries.from_poly(one - 2 * x - 2 * z + x * x - 2 * x * z + z * z, 3, cap)
    root = inner.sqrt()
    base = TruncSeries.from_poly(one - x - z, 3, cap)
    half = Fraction(1, 2)
    lam = (base + root).scale(half)
    mu = (base - root).scale(half)
    return lam, mu


def closed_form_G3(cap: int) -> TruncSeries:
    """Closed form of the three-variable ordinary series, variables (x, y, z).

    Evaluated structurally: with lam, mu the roots of y = (x+y)(y+z),
    the series equals lam / ((1 - x - z)(lam - y)); every coefficient is
    checked to be a nonnegative integer before returning.
    """
    lam, _ = g3_roots(cap)
    one = SparsePoly.one()
    x = SparsePoly.variable(1)
    y = SparsePoly.variable(2)
    z = SparsePoly.variable(3)
    y_series = TruncSeries.from_poly(y, 3, cap) if cap >= 1 else TruncSeries.zero(3, cap)
    base_inv = TruncSeries.from_poly(one - x - z, 3, cap).inv()
    result = lam * (lam - y_series).inv() * base_inv
    for exps, coeff in result.coeffs.items():
        if not isinstance(coeff, int) or coeff < 0:
            raise ArithmeticError(
                f"closed form produced non-count coefficient {coeff} at {exps}"
            )
    return result


def closed_form_E2(cap: int) -> TruncSeries:
    """Closed form of the two-variable exponential series.

    exp(z1 + z2) times the Bessel-type sum over n of (z1 z2)^n / (n!)^2.
    """
    u = TruncSeries.from_poly(SparsePoly.variable(1) + SparsePoly.variable(2), 2, cap) \
        if cap >= 1 else TruncSeries.zero(2, cap)
    expo = TruncSeries.one(2, cap)
    power = TruncSeries.one(2, cap)
    for t in range(1, cap + 1):
        power = power * u
        expo = expo + power.scale(Fraction(1, factorial(t)))
    bessel = TruncSeries.one(2, cap)
    for n in range(1, cap // 2 + 1):
        term = {(n, n): Fraction(1, factorial(n) ** 2)}
        bessel = bessel + TruncSeries(2, cap, term)
    return expo * bessel


def closed_form_H(cap: int) -> TruncSeries:
    """Generating series of the skew slice polynomials, variables (x, z, y).

    y (1 - xz) / ((1 - y(x+z)) (1 - y(1+x)(1+z))); the coefficient of y^s
    is the polynomial h_s, complete once cap >= 3s.
    """
    one = SparsePoly.one()
    x = SparsePoly.variable(1)
    z = SparsePoly.variable(2)
    y = SparsePoly.variable(3)
    if cap < 1:
        return TruncSeries.zero(3, cap)
    d1 = one - y * (x + z)
    d2 = one - y * (one + x) * (one + z)
    denom_inv = TruncSeries.from_poly(d1 * d2, 3, cap).inv()
    numer = TruncSeries.from_poly(y * (one - x * z), 3, cap)
    return numer * denom_inv


def h_slice(series: TruncSeries, s: int) -> dict[tuple[int, int], object]:
    """Coefficient of y^s in a (x, z, y) series, as a map (k, m) -> value."""
    return {
        (e[0], e[1]): c for e, c in series.coeffs.items() if e[2] == s
    }


def verify_g3(cap: int, cache: CountCache | None = None) -> ResidualReport:
    """Closed form of G_3 against the count-built series, exact difference."""
    closed = closed_form_G3(cap)
    built = build_G(3, cap, cache)
    return _report_from_series("G3-closed-vs-counts", 3, cap, closed - built)


def verify_e2(cap: int, cache: CountCache | None = None) -> ResidualReport:
    """Closed form of E_2 against the count-built series, exact difference."""
    closed = closed_form_E2(cap)
    built = build_E(2, cap, cache)
    return _report_from_series("E2-closed-vs-counts", 2, cap, closed - built)


def verify_h(s_max: int) -> ResidualReport:
    """Consistency of the skew slice polynomials up to s_max.

    Checks that the three evaluation routes for h_s coincide and that
    the coefficient of y^s in the closed generating series reproduces
    h_s, for every 1 <= s <= s_max.  The series is built at cap 3*s_max
    so each compared slice is complete.
    """
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    series = closed_form_H(3 * s_max)
    bad_terms = 0
    max_abs = 0
    for s in range(1, s_max + 1):
        reference = h_polynomial(s, "recurrence")
        for method in ("definition", "closed-form"):
            delta = h_polynomial(s, method) - reference
            bad_terms += len(delta.terms)
            for c in delta.terms.values():
                max_abs = max(max_abs, abs(c))
        ref_map = {
            (m.exponent(1), m.exponent(2)): c for m, c in reference.items()
        }
        slice_map = h_slice(series, s)
        for key in set(ref_map) | set(slice_map):
            diff = slice_map.get(key, 0) - ref_map.get(key, 0)
            if diff:
                bad_terms += 1
                max_abs = max(max_abs, abs(diff))
    return ResidualReport(
        identity="h-three-routes-and-series",
        k=None,
        cap=s_max,
        max_abs=max_abs,
        nonzero_terms=bad_terms,
        detail="slices compared through s_max at series cap 3*s_max",
    )


def g4_explore(cap: int, cache: CountCache | None = None) -> list[tuple[tuple[int, int, int, int], int]]:
    """Counts for all four-value multiplicity vectors with total <= cap.

    Emitted in graded lexicographic order for external experimentation;
    no structural claim about the four-variable series is made.
    """
    rows = []
    for e in _bounded_exponents(4, cap):
        rows.append((e, a_infinity(e, cache)))
    rows.sort(key=lambda row: (sum(row[0]), row[0]))
    return rows
