import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fibercone.blowup_chain import paper_chain
from fibercone.filtration_values import (
    Attained,
    CertificateReport,
    HasCenter,
    LexPair,
    NotAttainedUpTo,
    SubadditivityError,
    UnknownUpTo,
    ValueSequence,
    center_criterion,
    coefficient_cross_check,
    composite_value_sequence,
    distinct_components_certificate,
    eq_in2_holds,
    find_subadditivity_violation,
    gamma,
    paper_value_sequence,
    verify_certificate,
)
from fibercone.qdivisor import intersect, paper_D


def brute_ceil(n, m):
    return math.ceil(Fraction(m * (2**n - 1), 2 ** (n - 1)))


def test_paper_value_sequence_examples():
    assert paper_value_sequence(1, 5)[5] == 5
    assert paper_value_sequence(2, 3)[3] == 5
    assert paper_value_sequence(3, 4)[4] == 7
    seq = paper_value_sequence(6, 300)
    assert all(seq[m] == brute_ceil(6, m) for m in range(1, 301))


def test_composite_value_sequence_examples():
    assert composite_value_sequence(2, 2)[2] == LexPair(3, 0)
    assert composite_value_sequence(2, 1)[1] == LexPair(2, 0)
    assert composite_value_sequence(3, 8)[8] == LexPair(14, 0)


def test_lexpair_order_and_sum():
    assert LexPair(1, 100) < LexPair(2, -5)
    assert LexPair(2, -5) < LexPair(2, 0)
    assert LexPair(1, 2) + LexPair(3, -1) == LexPair(4, 1)
    assert list(LexPair(3, 4)) == [3, 4]


def test_coefficient_cross_check_examples():
    r = coefficient_cross_check(2, 3)
    assert r and r.coefficient == 5 and len(r.levels) >= 3
    assert all(3 < 2 ** (l - 1) for l in r.levels)
    r = coefficient_cross_check(1, 1)
    assert r and r.coefficient == 1
    r = coefficient_cross_check(4, 16)
    assert r and r.coefficient == 30


def test_coefficient_cross_check_sweep():
    for n in range(1, 11):
        for m in range(1, 129):
            r = coefficient_cross_check(n, m)
            assert r.ok and r.coefficient == brute_ceil(n, m)


def test_subadditivity_of_formula_sequences():
    for n in (1, 2, 3, 7):
        assert find_subadditivity_violation(paper_value_sequence(n, 1024)) is None
    assert find_subadditivity_violation(composite_value_sequence(4, 256)) is None


@pytest.mark.parametrize("n", range(1, 8))
def test_eq_in2(n):
    assert eq_in2_holds(paper_value_sequence(n, 200))
    assert eq_in2_holds(composite_value_sequence(n, 200))


def test_gamma_paper_sequence():
    rep = gamma(paper_value_sequence(2, 64))
    assert rep.gamma == Fraction(3, 2)
    assert rep.status == Attained(2)


def test_gamma_not_attained():
    seq = ValueSequence(tuple(m + 1 for m in range(1, 101)))
    rep = gamma(seq)
    assert rep.status == NotAttainedUpTo(100)
    assert rep.gamma == Fraction(101, 100)
    assert rep.trace[-1] == Fraction(101, 100)
    assert all(a > b for a, b in zip(rep.trace, rep.trace[1:]))
    assert center_criterion(seq) == UnknownUpTo(100)


def test_gamma_identity():
    seq = ValueSequence(tuple(range(1, 51)))
    assert gamma(seq).gamma == 1 and gamma(seq).status == Attained(1)
    assert center_criterion(seq) == HasCenter(1)


def test_gamma_lex():
    rep = gamma(composite_value_sequence(3, 64))
    assert rep.gamma == (Fraction(7, 4), Fraction(0))
    assert rep.status == Attained(4)
    assert center_criterion(composite_value_sequence(3, 64)) == HasCenter(4)


def test_gamma_lex_second_component_breaks_ties():
    seq = ValueSequence(tuple(LexPair(2 * m, 1) for m in range(1, 9)))
    rep = gamma(seq)
    # (2, 1/m) decreases in the second slot; the infimum (2, 0) is never reached
    assert rep.gamma == (Fraction(2), Fraction(1, 8))
    assert rep.status == NotAttainedUpTo(8)


def test_gamma_rejects_non_subadditive():
    seq = ValueSequence((3, 1, 1, 2, 3))
    assert find_subadditivity_violation(seq) == (2, 3)
    with pytest.raises(SubadditivityError) as exc:
        gamma(seq)
    assert exc.value.pair == (2, 3)
    assert "(2, 3)" in str(exc.value)


def test_gamma_rejects_negative_and_empty():
    with pytest.raises(ValueError):
        gamma(ValueSequence((-1, 0)))
    with pytest.raises(ValueError):
        gamma(ValueSequence(()))


@st.composite
def subadditive_sequences(draw, max_len=40):
    raw = draw(st.lists(st.integers(0, 60), min_size=1, max_size=max_len))
    vals = []
    for i, b in enumerate(raw, start=1):
        vals.append(min([b] + [vals[j - 1] + vals[i - j - 1] for j in range(1, i)]))
    return ValueSequence(tuple(vals))


def brute_gamma(seq):
    ratios = [Fraction(seq[m], m) for m in range(1, seq.bound + 1)]
    best = min(ratios)
    return best, ratios.index(best) + 1


@given(subadditive_sequences())
@settings(max_examples=200, deadline=None)
def test_gamma_matches_brute_force(seq):
    rep = gamma(seq)
    best, first = brute_gamma(seq)
    assert rep.gamma == best
    if isinstance(rep.status, Attained):
        w = rep.status.witness
        assert w == first and 2 * w <= seq.bound
        for k in range(w, seq.bound + 1, w):
            assert Fraction(seq[k], k) == best
    else:
        assert 2 * first > seq.bound


@given(subadditive_sequences())
@settings(max_examples=100, deadline=None)
def test_eq_in2_for_random_subadditive(seq):
    assert eq_in2_holds(seq)


def test_value_sequence_json():
    seq = ValueSequence.from_json(json.dumps({"M": 3, "values": [1, 2, 3, 99]}))
    assert seq.values == (1, 2, 3)
    lex = ValueSequence.from_json({"values": [[2, 0], [3, 0]]})
    assert lex[2] == LexPair(3, 0)
    assert ValueSequence.from_json(lex.to_json()).values == lex.values
    with pytest.raises(ValueError):
        ValueSequence.from_json({"M": 5, "values": [1, 2]})
    with pytest.raises(ValueError):
        ValueSequence.from_json({"values": [[1, 2, 3]]})


def test_certificate_N2():
    cert = distinct_components_certificate(2)
    assert cert.m == 5
    assert all(v > 0 for v in cert.intersections)
    assert cert.distinguishing_witnesses == ({"a": 1, "b": 2, "m": 2, "va": 2, "vb": 3},)
    # matrix oracle at l = 6 (the intersections do not depend on l once n < l)
    form = paper_chain(6).form()
    assert [intersect(-paper_D(6, 5), n, form) for n in (1, 2)] == list(cert.intersections)
    assert verify_certificate(cert) == []


def test_certificate_N5():
    cert = distinct_components_certificate(5)
    assert cert.m == 33 and len(cert.intersections) == 5
    assert all(v > 0 for v in cert.intersections)
    assert len(cert.distinguishing_witnesses) == 10
    assert verify_certificate(cert) == []


def test_certificate_rejects_small_N():
    with pytest.raises(ValueError):
        distinct_components_certificate(1)


def test_certificate_json_roundtrip_and_tamper():
    cert = distinct_components_certificate(4)
    doc = json.loads(json.dumps(cert.to_json()))
    assert set(doc) == {"N", "m", "l", "intersections", "distinguishing_witnesses"}
    again = CertificateReport.from_json(doc)
    assert again == cert
    doc["intersections"][2] += 1
    assert verify_certificate(CertificateReport.from_json(doc))
    doc = cert.to_json()
    doc["distinguishing_witnesses"][0]["vb"] = doc["distinguishing_witnesses"][0]["va"]
    assert verify_certificate(CertificateReport.from_json(doc))
    doc = cert.to_json()
    doc["distinguishing_witnesses"].pop()
    assert verify_certificate(CertificateReport.from_json(doc))
