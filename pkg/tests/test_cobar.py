from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ainfext.cobar import CobarComplex, concat_product, koszul_apply, koszul_sign
from ainfext.exact_linear import sparse_column_reduce, sparse_rank
from ainfext.presentation import GradedAlgebra, TruncationError

import _corpus

SMALL = ["dual_numbers", "steenrod_a1", "truncpoly3_gf5", "exterior3", "nonminimal", "mixed_gf3"]


def _complex(name, N=3, S=6):
    alg = GradedAlgebra(_corpus.presentation(name), S)
    return CobarComplex(alg, N, S)


def _cohomology_dim(C, n, s):
    cols = C.differential(n, s)
    ker = len(sparse_column_reduce(cols, C.F).free)
    im = sparse_rank(C.differential(n - 1, s), C.F) if n > 0 else 0
    return ker - im


@pytest.mark.parametrize("name", SMALL)
def test_differential_squares_to_zero(name):
    C = _complex(name)
    for n in range(C.N):
        for s in range(C.S + 1):
            for w in C.basis(n, s):
                assert C.d(C.d({w: 1})) == {}


@pytest.mark.parametrize("name", SMALL)
def test_leibniz_rule(name):
    C = _complex(name, N=3, S=5)
    F = C.F
    words = [w for n in (1, 2) for s in range(1, 4) for w in C.basis(n, s)][:25]
    for u, v in itertools.product(words, repeat=2):
        if C.word_adams(u) + C.word_adams(v) > C.S or len(u) + len(v) > C.N:
            continue
        left = C.d(concat_product({u: 1}, {v: 1}, F))
        sign = -1 if len(u) % 2 else 1
        right = concat_product(C.d({u: 1}), {v: 1}, F)
        for k, c in concat_product({u: 1}, C.d({v: 1}), F).items():
            right[k] = F.norm(right.get(k, 0) + sign * c)
        right = {k: c for k, c in right.items() if c}
        assert left == right


def test_dual_numbers_ext_is_polynomial():
    C = _complex("dual_numbers", N=4, S=6)
    for n in range(4):
        for s in range(7):
            assert _cohomology_dim(C, n, s) == (1 if n == s else 0)


def test_truncation_is_reported():
    C = _complex("dual_numbers", N=2, S=4)
    with pytest.raises(TruncationError):
        C.differential(3, 3)
    with pytest.raises(TruncationError):
        C.basis(1, 5)


def test_koszul_sign_examples():
    # (f (x) g)(x (x) y) = (-1)^(|g||x|) f(x) (x) g(y)
    assert koszul_sign([1, 1], [1, 1], [1, 1]) == -1
    assert koszul_sign([1, 1], [1, 1], [2, 5]) == 1
    assert koszul_sign([0, 1, 0], [1, 2, 1], [1, 1, 1, 1]) == -1
    with pytest.raises(ValueError):
        koszul_sign([0], [2], [1])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=4), st.data())
def test_koszul_sign_is_product_of_pairwise_swaps(maps, data):
    sizes = [k for _, k in maps]
    degs = data.draw(st.lists(st.integers(0, 4), min_size=sum(sizes), max_size=sum(sizes)))
    expected = 1
    pos = 0
    blocks = []
    for _, k in maps:
        blocks.append(sum(degs[pos:pos + k]))
        pos += k
    for j, (d, _) in enumerate(maps):
        for b in blocks[:j]:
            if (d * b) % 2:
                expected = -expected
    assert koszul_sign([d for d, _ in maps], sizes, degs) == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(-2, 2), st.integers(-2, 2), st.lists(st.integers(0, 3), min_size=2, max_size=2))
def test_koszul_sign_composes(f_deg, g_deg, degs):
    """(f (x) id)(id (x) g) = (-1)^(|f||g|) (id (x) g)(f (x) id)."""
    s1 = koszul_sign([0, g_deg], [1, 1], degs) * koszul_sign([f_deg, 0], [1, 1], [degs[0], degs[1] + g_deg])
    s2 = koszul_sign([f_deg, 0], [1, 1], degs) * koszul_sign([0, g_deg], [1, 1], [degs[0] + f_deg, degs[1]])
    assert s1 == s2 * (-1 if (f_deg * g_deg) % 2 else 1)


def test_koszul_apply_routes_blocks():
    sign, outs = koszul_apply([(1, 2, lambda a, b: a + b), (1, 1, lambda c: -c)], [1, 2, 3], [1, 0, 1])
    assert outs == [3, -3]
    assert sign == -1
