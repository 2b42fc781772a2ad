from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ainfext.exact_linear import (
    Basis,
    Field,
    FieldError,
    LinearMap,
    SparseReducer,
    canonical_complement,
    dense_to_sparse,
    inverse,
    kernel_basis,
    matmul,
    rank,
    row_reduce,
    solve,
    sparse_column_reduce,
    sparse_rank,
    sparse_to_dense,
    sv_axpy,
)

FIELDS = [Field(0), Field(2), Field(3), Field(7)]


def matrices(max_rows=6, max_cols=7):
    return st.tuples(
        st.sampled_from([0, 2, 3, 7]),
        st.integers(1, max_rows),
        st.integers(1, max_cols),
    ).flatmap(lambda t: st.tuples(
        st.just(t[0]),
        st.lists(st.lists(st.integers(-3, 3), min_size=t[2], max_size=t[2]), min_size=t[1], max_size=t[1]),
    ))


def test_field_rejects_composite():
    with pytest.raises(FieldError):
        Field(6)


def test_field_arithmetic_gf7():
    F = Field(7)
    assert F.norm(-1) == 6
    assert F.mul(F.inv(3), 3) == 1
    assert F.fmt(6) == "-1"
    assert F.div(1, 2) == 4


def test_field_rationals_exact():
    F = Field(0)
    assert F.inv(3) == Fraction(1, 3)
    assert F.norm(Fraction(4, 2)) == 2
    assert F.parse("2/3") == Fraction(2, 3)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Field(5).inv(0)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_row_reduce_is_rref_with_transform(data):
    p, m = data
    F = Field(p)
    E, piv, T = row_reduce(m, F)
    assert matmul(T, m, F, len(m[0])) == E
    for r, c in enumerate(piv):
        assert E[r][c] == 1
        assert all(E[i][c] == 0 for i in range(len(E)) if i != r)
        assert all(x == 0 for x in E[r][:c])
    assert all(all(x == 0 for x in E[r]) for r in range(len(piv), len(E)))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_sparse_column_reduce_matches_dense(data):
    """Pivots and kernel vectors agree with the dense RREF of the same matrix."""
    p, m = data
    F = Field(p)
    ncols = len(m[0])
    cols = [{i: F.norm(m[i][j]) for i in range(len(m)) if F.norm(m[i][j])} for j in range(ncols)]
    res = sparse_column_reduce(cols, F)
    E, piv, _ = row_reduce(m, F)
    assert res.pivots == piv
    assert res.free == [j for j in range(ncols) if j not in piv]
    for j in res.free:
        k = res.kernel[j]
        dense = sparse_to_dense(k, ncols)
        # RREF kernel vector: e_j minus the pivot entries of column j
        want = [0] * ncols
        want[j] = 1
        for r, c in enumerate(piv):
            want[c] = F.neg(E[r][j])
        assert dense == want
        image = [F.norm(sum(m[i][c] * dense[c] for c in range(ncols))) for i in range(len(m))]
        assert all(x == 0 for x in image)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_sparse_rank_matches_dense(data):
    p, m = data
    F = Field(p)
    assert sparse_rank([dense_to_sparse([F.norm(x) for x in r]) for r in m], F) == rank(m, F)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.integers(0, 10 ** 6))
def test_preimage(data, seed):
    p, m = data
    F = Field(p)
    ncols = len(m[0])
    cols = [{i: F.norm(m[i][j]) for i in range(len(m)) if F.norm(m[i][j])} for j in range(ncols)]
    res = sparse_column_reduce(cols, F)
    x = [(seed >> k) % 3 for k in range(ncols)]
    b: dict = {}
    for j, c in enumerate(x):
        sv_axpy(b, c, cols[j], F)
    y = res.preimage(b)
    assert set(y) <= set(res.pivots)
    back: dict = {}
    for j, c in y.items():
        sv_axpy(back, c, cols[j], F)
    assert back == b


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_reducer_span_membership(data):
    p, m = data
    F = Field(p)
    for lead_max in (False, True):
        red = SparseReducer(F, lead_max=lead_max)
        for r in m:
            red.insert(dense_to_sparse([F.norm(x) for x in r]))
        assert len(red) == rank(m, F)
        combo: dict = {}
        for k, r in enumerate(m):
            sv_axpy(combo, k + 1, dense_to_sparse([F.norm(x) for x in r]), F)
        assert red.in_span(combo)


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_kernel_basis_dimension(data):
    p, m = data
    F = Field(p)
    n = len(m[0])
    f = LinearMap(Basis(tuple(range(n))), Basis(tuple(range(len(m)))), m, F)
    ker = kernel_basis(f)
    assert len(ker) == n - rank(m, F)
    for v in ker:
        assert all(x == 0 for x in f.apply(v))


def test_canonical_complement_spans():
    F = Field(3)
    sub = [[1, 1, 0], [0, 0, 1]]
    comp = canonical_complement(sub, 3, F)
    assert rank(sub + comp, F) == 3
    assert len(comp) == 1


def test_solve_and_inverse():
    F = Field(0)
    m = [[2, 1], [1, 1]]
    inv = inverse(m, F)
    assert matmul(m, inv, F, 2) == [[1, 0], [0, 1]]
    x = solve(m, [3, 2], F, 2)
    assert x == [1, 1]
    assert solve([[1, 1], [1, 1]], [0, 1], F, 2) is None


def test_linear_map_shape_checked():
    with pytest.raises(ValueError):
        LinearMap(Basis(("a",)), Basis(("b", "c")), [[1]], Field(0))
