"""Tests for the exact polyhedral oracle."""

import json
from fractions import Fraction

import pytest

from gzcount.counting import a_infinity, count_by_fiber_recursion
from gzcount.oracle import (
    DEFAULT_LIMIT_DIM,
    DimensionLimitError,
    GZShape,
    build_hrep,
    enumerate_vertices,
    oracle_count,
)


def rank(rows):
    """Exact rank of a list of rational row vectors (test-local elimination)."""
    mat = [list(map(Fraction, row)) for row in rows]
    cols = len(mat[0]) if mat else 0
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c] / mat[r][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
    return r


# ----------------------------------------------------------------- shapes


def test_shape_validation():
    with pytest.raises(ValueError):
        GZShape(())
    with pytest.raises(ValueError):
        GZShape((2, 1))
    shape = GZShape((1, 1, 3))
    assert shape.n == 3
    assert shape.ambient_dim == 3
    assert shape.multiplicities() == (2, 1)


def test_shape_transforms():
    shape = GZShape((0, 1, 3))
    assert shape.translate(5).values == (5, 6, 8)
    assert shape.negate_reverse().values == (-3, -1, 0)


# ------------------------------------------------------------------ H-rep


def test_hrep_segment():
    h = build_hrep(GZShape((0, 1)))
    assert h.dim == 1
    assert set(h.rows) == {((-1,), 0), ((1,), 1)}


def test_hrep_row_count_and_normal_shape():
    h = build_hrep(GZShape((1, 2, 3)))
    assert h.dim == 3
    assert len(h.rows) == 6
    assert len(set(h.rows)) == 6
    for normal, _ in h.rows:
        nonzero = [c for c in normal if c]
        assert 1 <= len(nonzero) <= 2
        assert all(c in (1, -1) for c in nonzero)


def test_hrep_pinned_variable_rows():
    h = build_hrep(GZShape((1, 1, 2)))
    # u(1,1) sits between two equal values, so its bounds coincide.
    assert ((-1, 0, 0), -1) in h.rows
    assert ((1, 0, 0), 1) in h.rows


# ------------------------------------------------------------- enumeration


def test_segment_vertices():
    vs = enumerate_vertices(build_hrep(GZShape((0, 1))))
    assert {p[0] for p in vs.points} == {0, 1}
    assert len(vs) == 2


def test_triangle_vertices():
    vs = enumerate_vertices(build_hrep(GZShape((0, 0, 1))))
    assert len(vs) == 3


def test_point_polytope():
    vs = enumerate_vertices(build_hrep(GZShape((5, 5, 5))))
    assert vs.points == {(Fraction(5), Fraction(5), Fraction(5))}


def test_vertices_satisfy_all_rows_exactly():
    for values in [(0, 1, 2), (0, 0, 1, 2), (1, 2, 3, 4)]:
        h = build_hrep(GZShape(values))
        for point in enumerate_vertices(h).points:
            for normal, bound in h.rows:
                assert sum(c * x for c, x in zip(normal, point)) <= bound


def test_vertices_have_full_rank_tight_sets():
    h = build_hrep(GZShape((1, 2, 3)))
    vs = enumerate_vertices(h)
    assert len(vs) == 7
    for point in vs.points:
        tight = [normal for normal, bound in h.rows
                 if sum(c * x for c, x in zip(normal, point)) == bound]
        assert rank(tight) == h.dim


def test_oracle_against_independent_counters():
    assert oracle_count(GZShape((0, 1, 2, 3))) == a_infinity((1, 1, 1, 1))
    assert oracle_count(GZShape((0, 0, 1, 2))) == a_infinity((2, 1, 1)) == 16
    assert oracle_count(GZShape((0, 1, 1, 4))) == count_by_fiber_recursion((1, 2, 1))


def test_zero_multiplicity_normalization_against_oracle():
    # A multiplicity vector with interior zeros describes the same
    # polytope as its zero-stripped form; both must match the oracle.
    cache = None
    for padded in [(1, 0, 1), (2, 0, 1), (0, 1, 1, 0), (1, 0, 0, 2), (3, 0, 2)]:
        stripped = tuple(v for v in padded if v)
        values = []
        for v, mult in enumerate(stripped):
            values.extend([v] * mult)
        assert a_infinity(padded) == oracle_count(GZShape(tuple(values)))


def test_counts_invariant_under_affine_symmetries():
    for values in [(0, 1), (0, 1, 1), (1, 2, 3), (0, 0, 1, 2), (0, 1, 2, 2)]:
        shape = GZShape(values)
        base = oracle_count(shape)
        assert oracle_count(shape.translate(7)) == base
        assert oracle_count(shape.translate(-3)) == base
        assert oracle_count(shape.negate_reverse()) == base


# ------------------------------------------------------------- guardrails


def test_dimension_limit_refusal():
    shape = GZShape((1, 2, 3, 4, 5, 6))
    assert shape.ambient_dim == 15 > DEFAULT_LIMIT_DIM
    with pytest.raises(DimensionLimitError):
        enumerate_vertices(build_hrep(shape))
    with pytest.raises(DimensionLimitError):
        oracle_count(shape)


def test_dimension_limit_is_configurable():
    shape = GZShape((1, 2, 3))
    assert oracle_count(shape, limit_dim=3) == 7
    with pytest.raises(DimensionLimitError):
        oracle_count(shape, limit_dim=2)


# ---------------------------------------------------------------- exports


def test_vertex_csv_export():
    vs = enumerate_vertices(build_hrep(GZShape((0, 1))))
    assert vs.to_csv() == "0\n1\n"


def test_vertex_csv_uses_exact_rationals():
    vs = enumerate_vertices(build_hrep(GZShape((0, 0, 1))))
    csv = vs.to_csv()
    lines = csv.strip().split("\n")
    assert lines == sorted(lines, key=lambda s: [Fraction(t) for t in s.split(",")])
    assert all(len(line.split(",")) == 3 for line in lines)


def test_vertex_json_export_roundtrips():
    vs = enumerate_vertices(build_hrep(GZShape((0, 1, 2))))
    obj = vs.to_json_obj()
    text = json.dumps(obj)
    assert json.loads(text) == obj
    assert len(obj) == len(vs)
    parsed = {tuple(Fraction(c) for c in row) for row in obj}
    assert parsed == set(vs.points)


def test_exports_render_fractions_as_p_over_q():
    from gzcount.oracle import VertexSet

    vs = VertexSet(frozenset({
        (Fraction(1, 2), Fraction(3)),
        (Fraction(-2, 3), Fraction(0)),
    }))
    assert vs.to_csv() == "-2/3,0\n1/2,3\n"
    assert vs.to_json_obj() == [["-2/3", "0"], ["1/2", "3"]]
