from __future__ import annotations

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from ainfext import AInftyModel, parse_presentation
from ainfext.recovery import (
    RightNormalAlgebra,
    check_relation_matrices,
    ext_oracle,
    hilbert_euler_check,
    koszul_length_sign,
    recover_presentation,
    relation_matrix,
    restrict_m_to_E1,
    roundtrip_check,
)

import _corpus


@pytest.mark.parametrize("n, sign", [(2, 1), (3, 1), (4, -1), (5, -1), (6, 1), (7, 1), (8, -1)])
def test_koszul_length_sign_values(n, sign):
    assert koszul_length_sign(n) == sign


@given(st.integers(2, 200))
def test_koszul_length_sign_recursion(n):
    # the sign of length n+1 is the sign of length n times (-1)^(n-2)
    assert koszul_length_sign(n + 1) == koszul_length_sign(n) * (-1) ** (n - 2)


def test_relation_matrix_cubic_relation():
    M = _corpus.model("cubic_q", 3, 4)
    a = restrict_m_to_E1(M, 3, 3)
    b = relation_matrix(M, 3, 3)
    assert a.matrix == b.matrix
    nz = [lab for lab, x in zip(a.source.labels, a.matrix[0]) if x]
    assert nz == [("b_x1", "b_x1", "b_x2"), ("b_x2", "b_x1", "b_x1")]


@pytest.mark.parametrize("name", ["cusp_q", "steenrod_a1", "truncpoly3_gf5", "exterior3", "nonminimal", "dual_numbers"])
def test_relation_matrices_exact(name):
    rep = check_relation_matrices(_corpus.model(name, 4, 8))
    assert rep.checked and rep.ok


@pytest.mark.parametrize("name, bad", [("truncpoly5_gf7", (5, 10)), ("mixed_gf3", (4, 4))])
def test_relation_matrices_differ_by_length_sign(name, bad):
    """On these algebras m_n on E^1 is the dual of the length-n part up to (-1)^((n-2)(n-3)/2)."""
    rep = check_relation_matrices(_corpus.model(name))
    assert bad in rep.mismatches
    assert rep.mismatches == rep.sign_only


def test_recovery_without_length_sign_fails_on_mixed_lengths():
    P = _corpus.presentation("mixed_gf3")
    M = _corpus.model("mixed_gf3")
    assert roundtrip_check(P, M.N, M.S, model=M).ok
    assert not roundtrip_check(P, M.N, M.S, model=M, koszul_correct=False).ok


def test_recovered_nonminimal_is_minimal():
    M = _corpus.model("nonminimal", 4, 8)
    rec = recover_presentation(M)
    assert rec.dims() == {2: 2, 3: 1}
    assert roundtrip_check(M.pres, 4, 8, model=M).ok


def test_recovered_text_is_reparseable():
    M = _corpus.model("steenrod_a1", 4, 8)
    P2 = recover_presentation(M).to_presentation()
    again = parse_presentation(P2.to_text())
    assert again.relations == P2.relations


@pytest.mark.parametrize("name", ["dual_numbers", "cusp_q", "steenrod_a1", "truncpoly5_gf7", "exterior3", "nonminimal"])
def test_oracle_matches_cobar(name):
    M = _corpus.model(name, 4, 8)
    ora = ext_oracle(M.pres, 4, 8)
    for key in set(ora) | set(M.H_at):
        assert ora.get(key, 0) == len(M.H_at.get(key, []))


def test_oracle_known_values():
    # Ext over k[x]/(x^3), |x| = 2: one class in each (2k, 6k) and (2k+1, 6k+2)
    ora = ext_oracle(_corpus.presentation("truncpoly3_gf5"), 4, 14)
    assert sorted(k for k, v in ora.items() if v) == [(0, 0), (1, 2), (2, 6), (3, 8), (4, 12)]
    assert all(v == 1 for v in ora.values() if v)


def test_hilbert_euler_consistency():
    for name in ("steenrod_a1", "exterior3", "free2", "cusp_q"):
        M = _corpus.model(name, 6, 6)
        table = {k: len(v) for k, v in M.H_at.items()}
        assert hilbert_euler_check(M.pres, table, 6, 6) == []


def test_right_normal_algebra_dims():
    A = RightNormalAlgebra(_corpus.presentation("steenrod_a1"), 7)
    assert [A.dim(s) for s in range(8)] == [1, 1, 1, 2, 1, 1, 1, 0]


relation_pool = ["x*x", "y*y", "x*y", "y*x", "x*y - y*x", "x*y + y*x", "x*x*y", "y*x*x + x*x*y", "x*y*x", "y*y*y - x*x*x"]


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sets(st.sampled_from(relation_pool), min_size=1, max_size=3), st.sampled_from([0, 2, 3]))
def test_random_presentations_round_trip_and_oracle(rels, p):
    text = f"field = {p}; gen x:1, y:1; " + "; ".join("rel " + r for r in sorted(rels))
    P = parse_presentation(text)
    M = AInftyModel(P, 3, 6)
    assert roundtrip_check(P, 3, 6, model=M).ok
    ora = ext_oracle(P, 3, 6)
    for key in set(ora) | set(M.H_at):
        assert ora.get(key, 0) == len(M.H_at.get(key, []))
