"""Tests for the counting engine: operator, recursions, formulas, tables."""

import json
import random
from itertools import combinations, product
from math import comb

import pytest

from gzcount.counting import (
    CacheFormatError,
    CountCache,
    MultiplicityVector,
    a_infinity,
    a_infinity_unnormalized,
    apply_A,
    binomial_formula_V,
    coeff_theorem_V,
    count_by_fiber_recursion,
    g_polynomial,
    h_polynomial,
    recurrence_V3,
    tri_table,
    vertex_count,
)
from gzcount.polyseries import Monomial, SparsePoly

ONE = SparsePoly.one()
X1 = SparsePoly.variable(1)
X2 = SparsePoly.variable(2)
X3 = SparsePoly.variable(3)


def compositions(total):
    """All ordered tuples of positive integers summing to total."""
    for cuts in range(total):
        for cut in combinations(range(1, total), cuts):
            bounds = (0,) + cut + (total,)
            yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


# ---------------------------------------------------------------- operator A


def test_apply_A_fixes_constants():
    assert apply_A(SparsePoly.const(5)) == SparsePoly.const(5)
    assert apply_A(ONE) == ONE


def test_apply_A_single_variable_power():
    p = SparsePoly({Monomial({1: 3}): 1})
    assert apply_A(p) == SparsePoly({Monomial({1: 2}): 1})


def test_apply_A_squarefree_triple():
    p = SparsePoly({Monomial({1: 1, 2: 1, 3: 1}): 1})
    assert apply_A(p) == (X1 + X2) * (X2 + X3)


def test_apply_A_mixed_power():
    p = SparsePoly({Monomial({1: 2, 2: 1}): 1})
    assert apply_A(p) == (X1 + X2) * X1


def test_apply_A_is_linear():
    rng = random.Random(3)
    for _ in range(20):
        terms_a = {Monomial({i: rng.randint(0, 2) for i in (1, 2, 3)}): rng.randint(-3, 3)
                   for _ in range(3)}
        terms_b = {Monomial({i: rng.randint(0, 2) for i in (1, 2, 3)}): rng.randint(-3, 3)
                   for _ in range(3)}
        a, b = SparsePoly(terms_a), SparsePoly(terms_b)
        assert apply_A(a + b) == apply_A(a) + apply_A(b)


def test_apply_A_drops_degree_by_one():
    rng = random.Random(8)
    for _ in range(30):
        m = Monomial({i: rng.randint(0, 3) for i in range(1, 5)})
        if m.degree() == 0:
            continue
        image = apply_A(SparsePoly({m: 1}))
        assert image.degree() == m.degree() - 1
        assert all(t.degree() == m.degree() - 1 for t in image.terms)


# -------------------------------------------------------------- fixed point


def test_a_infinity_small_values():
    assert a_infinity(()) == 1
    assert a_infinity((5,)) == 1
    assert a_infinity((1, 1)) == 2
    assert a_infinity((1, 1, 1)) == 7
    assert a_infinity((2, 1, 1)) == 16


def test_a_infinity_one_and_two_value_closed_forms():
    cache = CountCache()
    for a in range(1, 13):
        assert a_infinity((a,), cache) == 1
    for i in range(1, 12):
        for j in range(1, 12 - i + 1):
            assert a_infinity((i, j), cache) == comb(i + j, i)


def test_a_infinity_strips_zeros():
    cache = CountCache()
    assert a_infinity((1, 0, 1), cache) == a_infinity((1, 1), cache)
    assert a_infinity((0, 2, 0, 3, 0), cache) == a_infinity((2, 3), cache)


def test_a_infinity_rejects_negative():
    with pytest.raises(ValueError):
        a_infinity((1, -1))


def test_a_infinity_matches_unnormalized_with_interior_zeros():
    cache = CountCache()
    for vec in product(range(3), repeat=3):
        if sum(vec) > 6:
            continue
        assert a_infinity_unnormalized(vec) == a_infinity(vec, cache)
    for vec in [(2, 0, 0, 2), (1, 0, 2, 0, 1), (0, 3, 0, 3)]:
        assert a_infinity_unnormalized(vec) == a_infinity(vec, cache)


def test_reversal_symmetry_small_totals():
    cache = CountCache()
    for total in range(1, 8):
        for m in compositions(total):
            assert a_infinity(m, cache) == a_infinity(tuple(reversed(m)), cache)


def test_vertex_count_from_partitions():
    assert vertex_count([3, 3, 3, 3]) == 1
    assert vertex_count([0, 0, 1]) == 3
    assert vertex_count([1, 2, 3]) == 7
    assert vertex_count([-2, 0, 5]) == 7  # values are irrelevant, pattern is not


def test_vertex_count_rejects_non_monotone():
    with pytest.raises(ValueError):
        vertex_count([2, 1])


# ------------------------------------------------------------ fiber recursion


def test_fiber_recursion_examples():
    assert count_by_fiber_recursion((1, 1)) == 2
    assert count_by_fiber_recursion((1, 1, 1)) == 7
    assert count_by_fiber_recursion((3, 2)) == comb(5, 2)
    assert count_by_fiber_recursion((7,)) == 1
    assert count_by_fiber_recursion(()) == 1


def test_fiber_recursion_agrees_with_fixed_point():
    cache = CountCache()
    memo = {}
    for total in range(1, 8):
        for m in compositions(total):
            assert count_by_fiber_recursion(m, memo) == a_infinity(m, cache)


# ---------------------------------------------------------- explicit formulas


def test_binomial_formula_examples():
    assert binomial_formula_V(1, 1, 1) == 7
    assert binomial_formula_V(1, 2, 1) == 14
    assert binomial_formula_V(2, 1, 1) == 16


def test_binomial_formula_domain():
    for bad in [(0, 1, 1), (1, 0, 1), (1, 1, 0), (-1, 2, 2)]:
        with pytest.raises(ValueError):
            binomial_formula_V(*bad)


def test_coeff_theorem_examples_and_symmetry():
    assert coeff_theorem_V(1, 1, 1) == 7
    assert coeff_theorem_V(1, 1, 2) == binomial_formula_V(1, 1, 2)
    for k, l, m in [(1, 2, 3), (2, 2, 2), (3, 1, 2)]:
        assert coeff_theorem_V(k, l, m) == coeff_theorem_V(m, l, k)


def test_coeff_theorem_matches_binomial_formula():
    for s in range(3, 9):
        for k in range(1, s - 1):
            for m in range(1, s - k):
                l = s - k - m
                if l < 1:
                    continue
                assert coeff_theorem_V(k, l, m) == binomial_formula_V(k, l, m)


def test_coeff_theorem_domain():
    with pytest.raises(ValueError):
        coeff_theorem_V(0, 1, 1)


def test_three_value_counts_agree_across_all_five_sources():
    from gzcount.polyseries import Monomial as _M

    cache = CountCache()
    for s in range(3, 9):
        g = g_polynomial(s)
        for k in range(1, s - 1):
            for m in range(1, s - k):
                l = s - k - m
                if l < 1:
                    continue
                reference = a_infinity((k, l, m), cache)
                assert binomial_formula_V(k, l, m) == reference
                assert coeff_theorem_V(k, l, m) == reference
                assert recurrence_V3(k, l, m) == reference
                assert g.coeff(_M({1: k, 2: m})) == reference


def test_recurrence_examples():
    assert recurrence_V3(1, 1, 1) == 7
    assert recurrence_V3(0, 2, 3) == comb(5, 2)
    for k in range(6):
        assert recurrence_V3(k, 0, 0) == 1
    assert recurrence_V3(2, 1, 1) == 16
    with pytest.raises(ValueError):
        recurrence_V3(-1, 1, 1)


# ------------------------------------------------------- slice polynomials


def test_g_polynomial_first_values():
    x, z = X1, X2
    assert g_polynomial(0) == ONE
    assert g_polynomial(1) == ONE + x + z
    assert g_polynomial(2) == (ONE + x + z) ** 2
    assert g_polynomial(3) == (ONE + x + z) ** 3 + x * z
    assert g_polynomial(3).coeff(Monomial({1: 1, 2: 1})) == 7


def test_g_polynomial_coefficients_are_recurrence_values():
    for s in range(7):
        g = g_polynomial(s)
        for k in range(s + 1):
            for m in range(s + 1 - k):
                expected = recurrence_V3(k, s - k - m, m)
                assert g.coeff(Monomial({1: k, 2: m})) == expected


def test_h_polynomial_first_values():
    x, z = X1, X2
    assert h_polynomial(1) == ONE - x * z
    expected_h2 = ONE + 2 * x + 2 * z - 2 * x * x * z - 2 * x * z * z - x * x * z * z
    assert h_polynomial(2) == expected_h2


def test_h_polynomial_three_routes_agree():
    for s in range(1, 9):
        ref = h_polynomial(s, "recurrence")
        assert h_polynomial(s, "definition") == ref
        assert h_polynomial(s, "closed-form") == ref


def test_h_polynomial_skew_relation():
    # h_s(x, z) = -(xz)^s h_s(1/z, 1/x) read off on coefficients:
    # the coefficient at (k, m) is minus the coefficient at (s-m, s-k).
    for s in range(1, 13):
        h = h_polynomial(s)
        for mono_, c in h.items():
            k, m = mono_.exponent(1), mono_.exponent(2)
            assert h.coeff(Monomial({1: s - m, 2: s - k})) == -c


def test_h_polynomial_validation():
    with pytest.raises(ValueError):
        h_polynomial(0)
    with pytest.raises(ValueError):
        h_polynomial(2, "magic")


# ----------------------------------------------------------------- tables


def test_plain_table_first_and_third():
    t1 = tri_table(1, "plain")
    assert t1.entries == {(0, 0): 1, (1, 0): 1, (0, 1): 1}
    t3 = tri_table(3, "plain")
    assert t3.entry(1, 1) == 7
    assert t3.entry(0, 0) == 1


def test_plain_table_matches_g_polynomial():
    for s in range(1, 8):
        table = tri_table(s, "plain")
        g = g_polynomial(s)
        assert set(table.entries) == {(k, m) for k in range(s + 1) for m in range(s + 1 - k)}
        for (k, m), value in table.entries.items():
            assert value == g.coeff(Monomial({1: k, 2: m}))


def test_plain_table_boundary_binomials():
    for s in range(1, 10):
        table = tri_table(s, "plain")
        for t in range(s + 1):
            assert table.entry(0, t) == comb(s, t)
            assert table.entry(t, 0) == comb(s, t)
            assert table.entry(t, s - t) == comb(s, t)


def test_skew_table_matches_h_polynomial():
    for s in range(1, 8):
        table = tri_table(s, "skew")
        h = h_polynomial(s)
        assert set(table.entries) == {(k, m) for k in range(s + 1) for m in range(s + 1)}
        for (k, m), value in table.entries.items():
            assert value == h.coeff(Monomial({1: k, 2: m}))


def test_skew_table_skew_symmetry_and_zero_diagonal():
    for s in range(1, 10):
        table = tri_table(s, "skew")
        for (k, m), value in table.entries.items():
            assert value == -table.entry(s - m, s - k)
            if k + m == s:
                assert value == 0


def test_table_validation():
    with pytest.raises(ValueError):
        tri_table(0, "plain")
    with pytest.raises(ValueError):
        tri_table(2, "diagonal")
    with pytest.raises(ValueError):
        tri_table(2, "plain").entry(5, 5)


# -------------------------------------------------------- multiplicity vector


def test_multiplicity_vector_canonical_form():
    mv = MultiplicityVector((0, 0, 2, 0, 1, 0))
    assert mv.mults == (2, 0, 1)
    assert mv.total == 3
    assert mv.compressed == (2, 1)
    with pytest.raises(ValueError):
        MultiplicityVector((1, -2))


def test_multiplicity_vector_from_partition():
    mv = MultiplicityVector.from_partition([1, 1, 2, 3, 3, 3])
    assert mv.mults == (2, 1, 3)
    with pytest.raises(ValueError):
        MultiplicityVector.from_partition([3, 1])


# ----------------------------------------------------------------- the cache


def test_cache_roundtrip(tmp_path):
    cache = CountCache()
    a_infinity((2, 1, 1), cache)
    a_infinity((1, 3), cache)
    path = tmp_path / "counts.json"
    cache.save(path)
    loaded = CountCache.load(path)
    assert dict(loaded.items()) == dict(cache.items())
    loaded.save(path)
    assert CountCache.load(path).stats() == cache.stats()


def test_cache_insert_if_absent():
    cache = CountCache()
    assert cache.insert((1, 1), 2) == 2
    assert cache.insert((1, 1), 99) == 2
    assert cache.get((1, 1)) == 2


def test_cache_stats():
    cache = CountCache()
    assert cache.stats() == {"entries": 0, "max_total": 0}
    a_infinity((2, 2), cache)
    stats = cache.stats()
    assert stats["entries"] == len(cache)
    assert stats["max_total"] == 4


def test_cache_rejects_bad_files(tmp_path):
    path = tmp_path / "cache.json"

    path.write_text("not json")
    with pytest.raises(CacheFormatError):
        CountCache.load(path)

    path.write_text(json.dumps({"version": 99, "counts": {}}))
    with pytest.raises(CacheFormatError):
        CountCache.load(path)

    path.write_text(json.dumps({"version": 1}))
    with pytest.raises(CacheFormatError):
        CountCache.load(path)

    for bad_key in ["0,1", "1,,2", "01", "a", "-1", ""]:
        path.write_text(json.dumps({"version": 1, "counts": {bad_key: "3"}}))
        with pytest.raises(CacheFormatError):
            CountCache.load(path)

    for bad_value in ["1.5", "007", "-3", "x"]:
        path.write_text(json.dumps({"version": 1, "counts": {"1,1": bad_value}}))
        with pytest.raises(CacheFormatError):
            CountCache.load(path)


def test_cache_constructor_validates_entries():
    with pytest.raises(CacheFormatError):
        CountCache({(0, 1): 3})
    with pytest.raises(CacheFormatError):
        CountCache({(1, 1): -2})


def test_cache_entries_survive_spot_rederivation(tmp_path):
    cache = CountCache()
    a_infinity((2, 2, 1), cache)
    path = tmp_path / "counts.json"
    cache.save(path)
    loaded = CountCache.load(path)
    for key, value in list(loaded.items())[:10]:
        assert a_infinity(key, CountCache()) == value


def test_tampered_cache_is_detectable(tmp_path):
    cache = CountCache()
    a_infinity((1, 1, 1), cache)
    path = tmp_path / "cache.json"
    cache.save(path)

    data = json.loads(path.read_text())
    data["counts"]["1,1,1"] = "8"
    path.write_text(json.dumps(data))

    tampered = CountCache.load(path)
    poisoned = a_infinity((1, 1, 1), tampered)
    honest = count_by_fiber_recursion((1, 1, 1), {})
    assert poisoned == 8
    assert honest == 7
    assert poisoned != honest
