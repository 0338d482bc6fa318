"""Exact sparse polynomials and truncated multivariate power series.

Two carriers cover everything the counting and verification layers need:

* ``SparsePoly`` is a polynomial in countably many variables x1, x2, ...
  with arbitrary-precision integer coefficients, stored as a map from
  ``Monomial`` to coefficient.
* ``TruncSeries`` is a power series in a fixed number of variables,
  truncated at a total degree ``cap``, with exact rational coefficients.
  A series carries no information beyond total degree ``cap`` and every
  operation tracks how far its result is determined.

Coefficients are Python ints wherever possible and ``fractions.Fraction``
only where denominators genuinely appear (integration, inversion, square
roots); a Fraction that reduces to an integer is normalised back to int.
Nothing here ever rounds.

All values are immutable after construction and all operations are pure
functions, so they can be shared freely between concurrent callers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


def format_rational(value) -> str:
    """Render an exact number as ``p/q`` (q > 0, reduced), or ``p`` if integral."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def _norm_coeff(c):
    """Collapse integral Fractions to plain ints (exactness is unaffected)."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class Monomial:
    """A product of variables with positive integer exponents, e.g. x1^2*x3.

    Stored as a tuple of (variable index, exponent) pairs, sorted by index.
    Variable indices are 1-based; zero exponents are never stored.
    """

    __slots__ = ("pairs",)

    def __init__(self, exponents: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(exponents, Mapping):
            items = exponents.items()
        else:
            items = exponents
        merged: dict[int, int] = {}
        for idx, exp in items:
            if idx < 1:
                raise ValueError(f"variable index must be >= 1, got {idx}")
            if exp < 0:
                raise ValueError(f"exponent must be >= 0, got {exp}")
            if exp:
                merged[idx] = merged.get(idx, 0) + exp
        self.pairs = tuple(sorted(merged.items()))

    @classmethod
    def unit(cls, index: int, exp: int = 1) -> "Monomial":
        return cls(((index, exp),))

    def support(self) -> tuple[int, ...]:
        """Variable indices appearing in this monomial, strictly increasing."""
        return tuple(idx for idx, _ in self.pairs)

    def degree(self) -> int:
        return sum(exp for _, exp in self.pairs)

    def exponent(self, index: int) -> int:
        for idx, exp in self.pairs:
            if idx == index:
                return exp
        return 0

    def divide_by_support(self) -> "Monomial":
        """Divide by the product of the variables in the support."""
        out = Monomial()
        out.pairs = tuple((idx, exp - 1) for idx, exp in self.pairs if exp > 1)
        return out

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = dict(self.pairs)
        for idx, exp in other.pairs:
            merged[idx] = merged.get(idx, 0) + exp
        out = Monomial()
        out.pairs = tuple(sorted(merged.items()))
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Monomial) and self.pairs == other.pairs

    def __hash__(self) -> int:
        return hash(self.pairs)

    def sort_key(self):
        """Graded order, then by sparse exponent pairs; deterministic."""
        return (self.degree(), self.pairs)

    def __repr__(self) -> str:
        if not self.pairs:
            return "1"
        return "*".join(
            f"x{idx}" if exp == 1 else f"x{idx}^{exp}" for idx, exp in self.pairs
        )


_MONO_ONE = Monomial()


class SparsePoly:
    """Multivariate polynomial with arbitrary-precision integer coefficients.

    Zero coefficients are never stored; the zero polynomial has no terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = coeff
        self.terms = clean

    @classmethod
    def zero(cls) -> "SparsePoly":
        return cls()

    @classmethod
    def const(cls, value: int) -> "SparsePoly":
        return cls({_MONO_ONE: value})

    @classmethod
    def one(cls) -> "SparsePoly":
        return cls.const(1)

    @classmethod
    def variable(cls, index: int) -> "SparsePoly":
        return cls({Monomial.unit(index): 1})

    def items(self):
        return self.terms.items()

    def coeff(self, mono: Monomial) -> int:
        return self.terms.get(mono, 0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; the zero polynomial reports 0."""
        return max((m.degree() for m in self.terms), default=0)

    def truncate(self, max_total: int) -> "SparsePoly":
        """Drop every term of total degree above ``max_total``."""
        out = SparsePoly()
        out.terms = {m: c for m, c in self.terms.items() if m.degree() <= max_total}
        return out

    @staticmethod
    def _coerce(value) -> "SparsePoly":
        if isinstance(value, SparsePoly):
            return value
        if isinstance(value, int):
            return SparsePoly.const(value)
        raise TypeError(f"cannot combine SparsePoly with {type(value).__name__}")

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        merged = dict(self.terms)
        for mono, coeff in other.terms.items():
            new = merged.get(mono, 0) + coeff
            if new:
                merged[mono] = new
            else:
                merged.pop(mono, None)
        out = SparsePoly()
        out.terms = merged
        return out

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        out = SparsePoly()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        acc: dict[Monomial, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                key = ma * mb
                acc[key] = acc.get(key, 0) + ca * cb
        out = SparsePoly()
        out.terms = {m: c for m, c in acc.items() if c}
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative powers are not defined for polynomials")
        result = SparsePoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePoly.const(other)
        return isinstance(other, SparsePoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def terms_sorted(self) -> list[tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.terms_sorted():
            if mono is _MONO_ONE or not mono.pairs:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(repr(mono))
            elif coeff == -1:
                parts.append(f"-{mono!r}")
            else:
                parts.append(f"{coeff}*{mono!r}")
        return " + ".join(parts).replace("+ -", "- ")


def divide_exact(dividend: SparsePoly, divisor: SparsePoly) -> SparsePoly:
    """Exact polynomial quotient for divisors with constant term +1 or -1.

    Builds the quotient one total degree at a time; raises ArithmeticError
    if the division leaves a remainder.
    """
    c0 = divisor.coeff(_MONO_ONE)
    if c0 not in (1, -1):
        raise ValueError("divisor must have constant term +1 or -1")
    tail = [(m, c) for m, c in divisor.items() if m.degree() > 0]
    rem_by_deg: dict[int, dict[Monomial, int]] = {}
    for mono, coeff in dividend.items():
        rem_by_deg.setdefault(mono.degree(), {})[mono] = coeff
    quo_by_deg: dict[int, dict[Monomial, int]] = {}
    top = dividend.degree()
    for d in range(top + 1):
        layer = rem_by_deg.pop(d, {})
        q_layer = {m: c * c0 for m, c in layer.items() if c}
        if q_layer:
            quo_by_deg[d] = q_layer
            for mt, ct in tail:
                bucket = rem_by_deg.setdefault(d + mt.degree(), {})
                for mq, cq in q_layer.items():
                    key = mq * mt
                    new = bucket.get(key, 0) - ct * cq
                    if new:
                        bucket[key] = new
                    else:
                        bucket.pop(key, None)
    for bucket in rem_by_deg.values():
        if any(bucket.values()):
            raise ArithmeticError("exact division left a nonzero remainder")
    out = SparsePoly()
    out.terms = {m: c for layer in quo_by_deg.values() for m, c in layer.items()}
    return out


class TruncSeries:
    """Power series in ``nvars`` variables, truncated at total degree ``cap``.

    Coefficients are exact rationals keyed by dense exponent tuples of
    length ``nvars``.  Arithmetic never reports a coefficient beyond the
    cap: binary operations return the minimum of the operand caps, formal
    derivatives and coefficient shifts lower the cap by one, integration
    raises it by one.
    """

    __slots__ = ("nvars", "cap", "coeffs")

    def __init__(self, nvars: int, cap: int, coeffs: Mapping[tuple[int, ...], object] | None = None):
        if nvars < 1:
            raise ValueError(f"nvars must be >= 1, got {nvars}")
        if cap < 0:
            raise ValueError(f"cap must be >= 0, got {cap}")
        clean: dict[tuple[int, ...], object] = {}
        if coeffs:
            for exps, coeff in coeffs.items():
                exps = tuple(exps)
                if len(exps) != nvars:
                    raise ValueError(f"exponent tuple {exps} does not have {nvars} entries")
                if any(e < 0 for e in exps):
                    raise ValueError(f"negative exponent in {exps}")
                if sum(exps) > cap:
                    raise ValueError(f"exponent {exps} exceeds truncation cap {cap}")
                coeff = _norm_coeff(coeff)
                if coeff:
                    clean[exps] = coeff
        self.nvars = nvars
        self.cap = cap
        self.coeffs = clean

    @classmethod
    def _make(cls, nvars: int, cap: int, coeffs: dict) -> "TruncSeries":
        """Internal constructor: normalises values, trusts keys."""
        out = object.__new__(cls)
        out.nvars = nvars
        out.cap = cap
        clean = {}
        for exps, coeff in coeffs.items():
            coeff = _norm_coeff(coeff)
            if coeff:
                clean[exps] = coeff
        out.coeffs = clean
        return out

    @classmethod
    def zero(cls, nvars: int, cap: int) -> "TruncSeries":
        return cls(nvars, cap)

    @classmethod
    def constant(cls, nvars: int, cap: int, value) -> "TruncSeries":
        return cls(nvars, cap, {(0,) * nvars: value})

    @classmethod
    def one(cls, nvars: int, cap: int) -> "TruncSeries":
        return cls.constant(nvars, cap, 1)

    @classmethod
    def variable(cls, nvars: int, cap: int, index: int) -> "TruncSeries":
        if not 1 <= index <= nvars:
            raise ValueError(f"variable index {index} out of range 1..{nvars}")
        if cap < 1:
            raise ValueError("cap must be >= 1 to hold a variable")
        exps = tuple(1 if i == index - 1 else 0 for i in range(nvars))
        return cls(nvars, cap, {exps: 1})

    @classmethod
    def from_poly(cls, poly: SparsePoly, nvars: int, cap: int) -> "TruncSeries":
        """View a polynomial as a series, dropping terms beyond the cap."""
        coeffs: dict[tuple[int, ...], object] = {}
        for mono, coeff in poly.items():
            if any(idx > nvars for idx in mono.support()):
                raise ValueError(f"monomial {mono!r} uses a variable beyond x{nvars}")
            if mono.degree() > cap:
                continue
            exps = tuple(mono.exponent(i) for i in range(1, nvars + 1))
            coeffs[exps] = coeff
        return cls(nvars, cap, coeffs)

    def _check_compatible(self, other: "TruncSeries") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def _check_var(self, index: int) -> None:
        if not 1 <= index <= self.nvars:
            raise ValueError(f"variable index {index} out of range 1..{self.nvars}")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, exps: Iterable[int]):
        """Coefficient of the given exponent tuple; refuses to look past the cap."""
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"exponent tuple {exps} does not have {self.nvars} entries")
        if sum(exps) > self.cap:
            raise ValueError(
                f"coefficient of total degree {sum(exps)} is beyond the cap {self.cap}"
            )
        return self.coeffs.get(exps, 0)

    def truncate(self, new_cap: int) -> "TruncSeries":
        if new_cap > self.cap:
            raise ValueError(f"cannot raise cap from {self.cap} to {new_cap}")
        return TruncSeries._make(
            self.nvars,
            new_cap,
            {e: c for e, c in self.coeffs.items() if sum(e) <= new_cap},
        )

    def _with_cap(self, new_cap: int) -> "TruncSeries":
        """Reinterpret the same coefficients at a higher cap (internal)."""
        return TruncSeries._make(self.nvars, new_cap, dict(self.coeffs))

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check_compatible(other)
        cap = min(self.cap, other.cap)
        merged: dict[tuple[int, ...], object] = {
            e: c for e, c in self.coeffs.items() if sum(e) <= cap
        }
        for e, c in other.coeffs.items():
            if sum(e) <= cap:
                merged[e] = merged.get(e, 0) + c
        return TruncSeries._make(self.nvars, cap, merged)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries._make(self.nvars, self.cap, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, factor) -> "TruncSeries":
        if not factor:
            return TruncSeries.zero(self.nvars, self.cap)
        return TruncSeries._make(
            self.nvars, self.cap, {e: c * factor for e, c in self.coeffs.items()}
        )

    def _by_degree(self) -> dict[int, list[tuple[tuple[int, ...], object]]]:
        buckets: dict[int, list[tuple[tuple[int, ...], object]]] = {}
        for e, c in self.coeffs.items():
            buckets.setdefault(sum(e), []).append((e, c))
        return buckets

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check_compatible(other)
        cap = min(self.cap, other.cap)
        small, large = (self, other) if len(self.coeffs) <= len(other.coeffs) else (other, self)
        buckets = large._by_degree()
        degs = sorted(buckets)
        acc: dict[tuple[int, ...], object] = {}
        for ea, ca in small.coeffs.items():
            budget = cap - sum(ea)
            if budget < 0:
                continue
            for db in degs:
                if db > budget:
                    break
                for eb, cb in buckets[db]:
                    key = tuple(map(int.__add__, ea, eb))
                    acc[key] = acc.get(key, 0) + ca * cb
        return TruncSeries._make(self.nvars, cap, acc)

    def inv(self) -> "TruncSeries":
        """Multiplicative inverse; requires a nonzero constant term.

        Built one total degree at a time by exact back-substitution in
        the convolution a * q = 1.
        """
        zero_exp = (0,) * self.nvars
        c0 = self.coeffs.get(zero_exp, 0)
        if not c0:
            raise ZeroDivisionError("series with zero constant term has no inverse")
        inv0 = _norm_coeff(Fraction(1, 1) / c0)
        a_buckets = {
            d: terms for d, terms in self._by_degree().items() if d >= 1
        }
        q_buckets: dict[int, dict[tuple[int, ...], object]] = {0: {zero_exp: inv0}}
        for d in range(1, self.cap + 1):
            conv: dict[tuple[int, ...], object] = {}
            for da, terms in a_buckets.items():
                if da > d:
                    continue
                partner = q_buckets.get(d - da)
                if not partner:
                    continue
                for ea, ca in terms:
                    for eq, cq in partner.items():
                        key = tuple(map(int.__add__, ea, eq))
                        conv[key] = conv.get(key, 0) + ca * cq
            layer = {}
            for e, c in conv.items():
                val = _norm_coeff(-c * inv0)
                if val:
                    layer[e] = val
            if layer:
                q_buckets[d] = layer
        out: dict[tuple[int, ...], object] = {}
        for layer in q_buckets.values():
            out.update(layer)
        return TruncSeries._make(self.nvars, self.cap, out)

    def sqrt(self) -> "TruncSeries":
        """Square root with constant term 1, by order-doubling Newton steps.

        Requires constant term exactly 1; the defining property of the
        result r is r * r == self up to the cap.
        """
        zero_exp = (0,) * self.nvars
        if self.coeffs.get(zero_exp, 0) != 1:
            raise ValueError("series square root requires constant term 1")
        half = Fraction(1, 2)
        r = TruncSeries.one(self.nvars, 0)
        known = 0
        while known < self.cap:
            known = min(2 * known + 1, self.cap)
            target = self.truncate(known)
            lifted = r._with_cap(known)
            r = (lifted + target * lifted.inv()).scale(half)
        return r

    def deriv(self, index: int) -> "TruncSeries":
        """Formal partial derivative; the cap drops by one."""
        self._check_var(index)
        if self.cap < 1:
            raise ValueError("cannot differentiate a series truncated at degree 0")
        i = index - 1
        out: dict[tuple[int, ...], object] = {}
        for e, c in self.coeffs.items():
            if e[i]:
                key = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[key] = c * e[i]
        return TruncSeries._make(self.nvars, self.cap - 1, out)

    def integrate(self, index: int) -> "TruncSeries":
        """Formal antiderivative with zero constant of integration; cap rises by one."""
        self._check_var(index)
        i = index - 1
        out: dict[tuple[int, ...], object] = {}
        for e, c in self.coeffs.items():
            key = e[:i] + (e[i] + 1,) + e[i + 1:]
            out[key] = Fraction(c) / (e[i] + 1)
        return TruncSeries._make(self.nvars, self.cap + 1, out)

    def divdiff(self, index: int) -> "TruncSeries":
        """Divided difference in one variable: (f - f at var=0) / var.

        A pure coefficient shift; the cap drops by one.
        """
        self._check_var(index)
        if self.cap < 1:
            raise ValueError("cannot shift a series truncated at degree 0")
        i = index - 1
        out: dict[tuple[int, ...], object] = {}
        for e, c in self.coeffs.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c
        return TruncSeries._make(self.nvars, self.cap - 1, out)

    def substitute_zero(self, index: int) -> "TruncSeries":
        """Set one variable to zero (keep only terms free of it)."""
        self._check_var(index)
        i = index - 1
        return TruncSeries._make(
            self.nvars, self.cap, {e: c for e, c in self.coeffs.items() if not e[i]}
        )

    def max_abs_coeff(self):
        return max((abs(c) for c in self.coeffs.values()), default=0)

    def agrees_with(self, other: "TruncSeries") -> bool:
        """Coefficientwise equality on all degrees both series know about."""
        self._check_compatible(other)
        cap = min(self.cap, other.cap)
        keys = {e for e in self.coeffs if sum(e) <= cap}
        keys.update(e for e in other.coeffs if sum(e) <= cap)
        return all(self.coeffs.get(e, 0) == other.coeffs.get(e, 0) for e in keys)

    def terms_sorted(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in graded lexicographic order (total degree, then exponents)."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncSeries)
            and self.nvars == other.nvars
            and self.cap == other.cap
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.nvars, self.cap, frozenset(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"TruncSeries(nvars={self.nvars}, cap={self.cap}, terms={len(self.coeffs)})"
