from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from ainfext.presentation import GradedAlgebra, PresentationError, minimality_report, parse_presentation
from ainfext.recovery import RightNormalAlgebra

import _corpus


def test_parse_basic_statements():
    P = parse_presentation("field = 2\ngen x1:1, x2:2  # comment\nrel x1^2; rel x1*x2*x1 + x2^2\ncutoff_adams = 6")
    assert P.gen_names == ["x1", "x2"]
    assert P.gen_degrees == [1, 2]
    assert len(P.relations) == 2
    assert P.cutoff_adams == 6 and P.cutoff_hom is None
    assert [P.relation_degree(r) for r in P.relations] == [2, 4]


def test_to_text_round_trip():
    P = _corpus.presentation("steenrod_a1")
    Q = parse_presentation(P.to_text())
    assert Q.generators == P.generators and Q.relations == P.relations
    assert (Q.cutoff_adams, Q.cutoff_hom) == (P.cutoff_adams, P.cutoff_hom)


def test_coefficients_reduce_mod_p():
    P = parse_presentation("field = 3; gen x:1, y:1; rel 4*x*y - y*x")
    assert P.relations[0] == {(0, 1): 1, (1, 0): 2}


@pytest.mark.parametrize("text, fragment", [
    ("gen x:1", "missing 'field"),
    ("field = 4; gen x:1", "not 0 or a prime"),
    ("field = 0; gen x:0", "Adams degree"),
    ("field = 0; gen x:1, x:1", "duplicate"),
    ("field = 0; gen x:1; rel x*y", "unknown generator"),
    ("field = 0; gen x:1, y:2; rel x*x + y*y", "not Adams-homogeneous"),
    ("field = 0; gen x:1, y:2; rel x*x - y", "linear term"),
    ("field = 0; gen x:1; frobnicate", "syntax error"),
    ("field = 0; gen x:1; rel x^0", "bad exponent"),
    ("field = 0; gen x:1; cutoff_adams = -3", "nonnegative integer"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(PresentationError, match=fragment):
        parse_presentation(text)


def test_error_reports_line_number():
    with pytest.raises(PresentationError, match="line 3"):
        parse_presentation("field = 0\ngen x:1\nrel x*z\n")


@pytest.mark.parametrize("text, S, dims", [
    ("field = 0; gen x:1, y:1", 6, [2 ** s for s in range(7)]),
    ("field = 0; gen x:1; rel x^2", 5, [1, 1, 0, 0, 0, 0]),
    ("field = 5; gen x:2; rel x^3", 8, [1, 0, 1, 0, 1, 0, 0, 0, 0]),
    ("field = 0; gen x:1, y:1; rel x*y - y*x", 6, [s + 1 for s in range(7)]),
    ("field = 0; gen x:1,y:1,z:1; rel x^2; rel y^2; rel z^2; rel x*y+y*x; rel x*z+z*x; rel y*z+z*y", 5,
     [comb(3, s) for s in range(6)]),
    ("field = 2; gen x1:1, x2:2; rel x1^2; rel x1*x2*x1 + x2^2", 7, [1, 1, 1, 2, 1, 1, 1, 0]),
])
def test_hilbert_series(text, S, dims):
    alg = GradedAlgebra(parse_presentation(text), S)
    assert [alg.dim(s) for s in range(S + 1)] == dims


def test_indecomposables_and_minimal_relations():
    alg = GradedAlgebra(_corpus.presentation("cusp_q"), 8)
    assert [len(alg.Q[s]) for s in range(1, 5)] == [0, 1, 1, 0]
    assert [alg.relations(s).dim for s in range(2, 8)] == [0, 0, 0, 1, 1, 0]


def test_minimality_report_on_redundant_presentation():
    alg = GradedAlgebra(_corpus.presentation("nonminimal"), 6)
    assert minimality_report(alg) == {2: (3, 2), 3: (3, 1)}


def test_minimality_report_empty_for_minimal():
    alg = GradedAlgebra(_corpus.presentation("steenrod_a1"), 8)
    assert minimality_report(alg) == {}


words = st.lists(st.lists(st.integers(0, 1), min_size=2, max_size=3).map(tuple), min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(words, st.sampled_from([0, 2, 3]))
def test_normal_words_agree_with_independent_quotient(monomials, p):
    """Dimensions from the engine equal those of an independent right-ideal quotient."""
    rels = "; ".join("rel " + "*".join("xy"[i] for i in w) for w in monomials)
    P = parse_presentation(f"field = {p}; gen x:1, y:1; {rels}")
    S = 5
    alg = GradedAlgebra(P, S)
    other = RightNormalAlgebra(P, S)
    assert [alg.dim(s) for s in range(S + 1)] == [other.dim(s) for s in range(S + 1)]
