from __future__ import annotations

import itertools

import pytest

from ainfext.verify import (
    basis_tuples,
    check_morphism,
    check_stasheff,
    check_strict_unit,
    count_tuples,
    stasheff_value,
    verify_model,
)

import _corpus


def _brute_tuples(M, n, shift, max_units):
    out = []
    for t in itertools.product(range(len(M.H)), repeat=n):
        units = sum(1 for i in t if M.is_unit(i))
        if units > max_units:
            continue
        hom = sum(M.hdeg(i) for i in t) + shift - n
        s = sum(M.adeg(i) for i in t)
        if s <= M.S and 0 <= hom and hom + units <= M.N:
            out.append(t)
    return out


@pytest.mark.parametrize("name", ["steenrod_a1", "cusp_q", "dual_numbers"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("shift", [2, 3])
def test_tuple_enumeration_matches_brute_force(name, n, shift):
    M = _corpus.model(name, 3, 6)
    want = _brute_tuples(M, n, shift, 1)
    assert list(basis_tuples(M, n, shift)) == want
    counts = count_tuples(M, n, shift)
    assert sum(counts.values()) == len(want)
    some = sorted(counts)[: max(1, len(counts) // 2)]
    filtered = [t for t in want if (sum(M.hdeg(i) for i in t) + shift - n, sum(M.adeg(i) for i in t)) in some]
    assert list(basis_tuples(M, n, shift, targets=some)) == filtered


@pytest.mark.parametrize("name", ["steenrod_a1", "cusp_q", "truncpoly3_gf5", "truncpoly5_gf7", "dual_numbers", "nonminimal", "mixed_gf3"])
def test_all_identities_hold(name):
    M = _corpus.model(name)
    reports = verify_model(M)
    bad = [r.line() for r in reports if not r.ok or r.truncated]
    assert not bad
    assert sum(r.nontrivial for r in reports) > 0


class _Tampered:
    """Wraps a model and overrides m on selected tuples."""

    def __init__(self, model, overrides):
        self._model = model
        self._overrides = overrides

    def __getattr__(self, name):
        return getattr(self._model, name)

    def m(self, ids):
        ids = tuple(ids)
        if ids in self._overrides:
            return self._overrides[ids]
        return self._model.m(ids)


def test_morphism_check_detects_wrong_product():
    M = _corpus.model("steenrod_a1", 4, 6)
    b1 = M.lookup("b_x1")
    T = _Tampered(M, {(b1, b1): {}})
    assert not check_morphism(T, 2).ok
    assert check_morphism(M, 2).ok


def test_morphism_check_detects_sign_flip_in_m3():
    M = _corpus.model("cusp_q", 4, 10)
    t = tuple(M.lookup(l) for l in ("b_x2", "b_x2", "b_x2"))
    assert M.m(t)
    flipped = {h: M.F.neg(c) for h, c in M.m(t).items()}
    T = _Tampered(M, {t: flipped})
    rep = check_morphism(T, 3)
    assert not rep.ok
    assert rep.violations[0][0] == ("b_x2", "b_x2", "b_x2")


def test_stasheff_detects_nonassociative_product():
    M = _corpus.model("dual_numbers", 4, 8)
    b = M.lookup("b_x")
    s2 = M.lookup("s2")
    # doubling b*s2 only breaks (b b) b = b (b b) modulo m_3 = 0
    doubled = {h: M.F.norm(2 * c) for h, c in M.m((b, s2)).items()}
    T = _Tampered(M, {(b, s2): doubled})
    assert stasheff_value(T, (b, b, b))
    assert not check_stasheff(T, 3).ok


def test_strict_unit_report():
    M = _corpus.model("cusp_q", 4, 10)
    rep = check_strict_unit(M)
    assert rep.ok and rep.tested > 0 and not rep.truncated


def test_report_json_shape():
    M = _corpus.model("steenrod_a1", 4, 6)
    rep = check_stasheff(M, 3)
    data = rep.to_json()
    assert data["ok"] and data["cutoffs"] == {"hom": 4, "adams": 6}
    assert rep.line().startswith("PASS SI(3)")
