from __future__ import annotations

import pytest

from ainfext.exact_linear import SparseReducer, sparse_column_reduce, sv_axpy, sv_scale
from ainfext.massey import MasseyNotDefined, build_defining_system, compare_with_mn, massey_product, sign_exponent

import _corpus


def _fmt(M, v):
    return {M.label(i): M.F.fmt(c) for i, c in v.items()}


def _bar(M, a):
    n, s, v = a
    return n, s, (v if (1 + n) % 2 == 0 else sv_scale(v, -1, M.F))


def _independent_triple(M, labels):
    """Representative of a triple product from arbitrary preimages, plus the indeterminacy span."""
    F, C = M.F, M.C
    ids = [M.lookup(l) for l in labels]
    a = {(i, i + 1): M.h_vector(ids[i]) for i in range(3)}
    for i in range(2):
        n, s, v = C.concat_indexed(_bar(M, a[(i, i + 1)]), a[(i + 1, i + 2)])
        kd = sparse_column_reduce(C.differential(n - 1, s), F)
        a[(i, i + 2)] = (n - 1, s, kd.preimage(v))
    total = {}
    for k in (1, 2):
        n, s, v = C.concat_indexed(_bar(M, a[(0, k)]), a[(k, 3)])
        sv_axpy(total, 1, v, F)
    coords = M.split.split(n, s).project(total)
    rep = {M.H_at[(n, s)][j]: c for j, c in coords.items()}
    span = SparseReducer(F)
    for h in M.H_at.get((a[(0, 2)][0], a[(0, 2)][1]), []):
        span.insert(dict(M.m((h, ids[2]))))
    for h in M.H_at.get((a[(1, 3)][0], a[(1, 3)][1]), []):
        span.insert(dict(M.m((ids[0], h))))
    return rep, span


def test_sign_exponent():
    assert sign_exponent([1, 1, 1], 1, 3) == 2
    assert sign_exponent([1, 1, 1, 1, 1], 1, 5) == 3
    assert sign_exponent([2, 3, 4], 1, 3) == 1 + 3
    assert sign_exponent([1, 2], 1, 2) == 2


def test_a1_triple_product_equals_m3():
    M = _corpus.model("steenrod_a1", 4, 6)
    res = compare_with_mn(M, ["b_x1", "b_x2", "b_x1"])
    assert _fmt(M, res.representative) == {"s4": "1"}
    assert res.comparison and res.perturbation_ok
    # no classes live where a_{02} and a_{13} do, so nothing to perturb
    assert res.perturbations == 0


def test_perturbation_check_runs_with_classes_available():
    M = _corpus.model_from_text("field = 0; gen x:1, y:1, z:2; rel x*y*x; rel z*x - x*y*y", 4, 6)
    res = compare_with_mn(M, ["b_x", "b_y", "b_x"])
    assert res.perturbations > 0
    assert res.comparison and res.perturbation_ok


def test_undefined_product_raises():
    M = _corpus.model("steenrod_a1", 4, 6)
    with pytest.raises(MasseyNotDefined) as err:
        massey_product(M, ["b_x1", "b_x1", "b_x2"])
    assert (err.value.i, err.value.j) == (0, 2)


def test_length_two_is_the_product():
    M = _corpus.model("cusp_q", 4, 10)
    res = compare_with_mn(M, ["b_x2", "b_x3"])
    assert res.comparison and _fmt(M, res.representative) == {"s5": "1"}


def test_unit_is_rejected():
    M = _corpus.model("cusp_q", 4, 10)
    with pytest.raises(ValueError):
        massey_product(M, ["1", "b_x2", "b_x2"])


@pytest.mark.parametrize("name, labels", [
    ("cusp_q", ["b_x2", "b_x2", "b_x2"]),
    ("steenrod_a1", ["b_x1", "b_x2", "b_x1"]),
    ("truncpoly3_gf5", ["b_x", "b_x", "b_x"]),
    ("cubic_gf2", ["b_x2", "b_x1", "b_x1"]),
])
def test_triple_product_agrees_with_independent_defining_system(name, labels):
    M = _corpus.model(name, 4, 8)
    res = compare_with_mn(M, labels)
    assert res.comparison
    other, span = _independent_triple(M, labels)
    diff = dict(other)
    sv_axpy(diff, M.F.neg(1), res.representative, M.F)
    assert not diff or span.in_span(diff)


def test_defining_system_identities():
    M = _corpus.model("truncpoly5_gf7", 4, 12)
    system = build_defining_system(M, ["b_x"] * 5)
    assert len(system.cochains) == 5 + 4 + 3 + 2
    assert system.b == 1 + 1 + 1


@pytest.mark.parametrize("name, p", [("truncpoly3_gf5", 3), ("truncpoly5_gf7", 5)])
def test_truncated_polynomial_massey_power(name, p):
    M = _corpus.model(name)
    res = compare_with_mn(M, ["b_x"] * p)
    y2 = res.mn_value
    assert y2
    want = y2 if ((p + 1) // 2) % 2 == 0 else sv_scale(y2, -1, M.F)
    assert res.representative == want
    assert res.comparison
