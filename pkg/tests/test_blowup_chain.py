import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fibercone.blowup_chain import (
    FREE,
    ChainError,
    PullbackMap,
    build_chain,
    chain_from_json,
    intersection_form,
    leading_principal_minors,
    paper_chain,
    pullback,
)
from fibercone.qdivisor import IntegralDivisor, QDivisor, intersect, intersect_divisors

from conftest import random_parents


def proximity_form(parents):
    """Oracle: E_i = Ehat_i - sum_{parent(j)=i} Ehat_j with Ehat orthonormal of square -1."""
    l = len(parents)
    P = np.eye(l, dtype=object)
    for j, p in enumerate(parents, start=1):
        if p != FREE:
            P[p - 1, j - 1] = -1
    return (-(P @ P.T)).tolist()


def paper_table(l):
    """The three displayed intersection tables for the chain of length l > 1."""
    def pair(i, j):
        if i == 1:
            return {1: -2, 2: 1}.get(j, 0)
        if i < l:
            return -2 if j == i else (1 if abs(i - j) == 1 else 0)
        return {l - 1: 1, l: -1}.get(j, 0)

    return [[pair(i, j) for j in range(1, l + 1)] for i in range(1, l + 1)]


def test_build_chain_examples():
    assert build_chain(1, [FREE]).form().as_lists() == [[-1]]
    assert build_chain(2, [FREE, 1]).form().as_lists() == [[-2, 1], [1, -1]]
    assert build_chain(3, [FREE, 1, 2]).form().as_lists() == [[-2, 1, 0], [1, -2, 1], [0, 1, -1]]


@pytest.mark.parametrize("l", range(2, 13))
def test_paper_chain_matches_tables(l):
    assert paper_chain(l).form().as_lists() == paper_table(l)


def test_intersection_form_truncated_levels():
    chain = paper_chain(5)
    assert intersection_form(chain, 2).as_lists() == [[-2, 1], [1, -1]]
    five = intersection_form(chain, 5).as_lists()
    assert [five[i][i] for i in range(5)] == [-2, -2, -2, -2, -1]
    assert intersection_form(chain, 1).as_lists() == [[-1]]
    with pytest.raises(ChainError):
        intersection_form(chain, 6)
    with pytest.raises(ChainError):
        intersection_form(chain, 0)


@pytest.mark.parametrize(
    "length, parents",
    [(0, []), (2, [FREE, 2]), (3, [FREE, 1, 3]), (2, [1, 1]), (2, [FREE]), (2, [FREE, -1])],
)
def test_build_chain_rejects(length, parents):
    with pytest.raises(ChainError):
        build_chain(length, parents)


def test_random_chains_match_proximity_oracle(rng):
    for _ in range(200):
        parents = random_parents(rng, rng.randint(1, 12))
        chain = build_chain(len(parents), parents)
        assert chain.form().as_lists() == proximity_form(parents)


def test_form_invariants(rng):
    for _ in range(100):
        parents = random_parents(rng, rng.randint(1, 12))
        F = build_chain(len(parents), parents).form().as_lists()
        l = len(F)
        for i in range(l):
            assert F[i][i] < 0
            for j in range(l):
                assert F[i][j] == F[j][i]
                if i != j:
                    assert F[i][j] in (0, 1)


@given(st.integers(1, 12).flatmap(lambda l: st.tuples(st.just(l), st.randoms(use_true_random=False))))
@settings(max_examples=100, deadline=None)
def test_negative_definite_and_truncation(arg):
    l, r = arg
    parents = random_parents(r, l)
    chain = build_chain(l, parents)
    form = chain.form()
    assert form.is_negative_definite()
    assert np.all(np.linalg.eigvalsh(np.array(form.as_lists(), dtype=float)) < 0)
    for k in range(1, l + 1):
        assert intersection_form(chain, k) == build_chain(k, parents[:k]).form(k)


def test_leading_minors_against_numpy(rng):
    for _ in range(50):
        parents = random_parents(rng, rng.randint(1, 10))
        F = build_chain(len(parents), parents).form().as_lists()
        minors = leading_principal_minors(F)
        for k, d in enumerate(minors, start=1):
            assert d == round(np.linalg.det(np.array(F, dtype=float)[:k, :k]))


def test_leading_minors_zero_pivot():
    assert leading_principal_minors([[0, 1], [1, 0]]) == [0, -1]
    assert leading_principal_minors([[2, 0], [0, 3]]) == [2, 6]


def to_total(parents, coeffs):
    """Coefficients in the total-transform basis: D = sum c_i E_i = sum c_i (Ehat_i - sum Ehat_children)."""
    out = list(coeffs)
    for j, p in enumerate(parents[: len(coeffs)], start=1):
        if p != FREE:
            out[j - 1] -= coeffs[p - 1]
    return out


def from_total(parents, hat):
    coeffs = []
    for j, p in enumerate(parents[: len(hat)], start=1):
        coeffs.append(hat[j - 1] + (coeffs[p - 1] if p != FREE else 0))
    return coeffs


def test_pullback_examples():
    chain = paper_chain(5)
    assert pullback(PullbackMap(chain, 3, 4), IntegralDivisor(3, (3, 5, 6))).coeffs == (3, 5, 6, 6)
    assert pullback(PullbackMap(chain, 1, 2), IntegralDivisor(1, (1,))).coeffs == (1, 1)
    assert PullbackMap(chain, 2, 5)(IntegralDivisor(2, (0, 0))).coeffs == (0,) * 5
    with pytest.raises(ChainError):
        pullback(PullbackMap(chain, 2, 3), IntegralDivisor(3, (1, 1, 1)))
    with pytest.raises(ChainError):
        PullbackMap(chain, 4, 3)


def test_pullback_free_point_gets_zero():
    chain = build_chain(3, [FREE, 1, FREE])
    assert PullbackMap(chain, 2, 3)(IntegralDivisor(2, (4, 7))).coeffs == (4, 7, 0)


@given(
    st.integers(2, 9),
    st.randoms(use_true_random=False),
    st.lists(st.integers(-6, 6), min_size=12, max_size=12),
    st.lists(st.integers(-6, 6), min_size=12, max_size=12),
)
@settings(max_examples=150, deadline=None)
def test_pullback_isometry_and_total_transform_oracle(a, r, c1, c2):
    length = a + 3
    parents = random_parents(r, length)
    chain = build_chain(length, parents)
    D, G = IntegralDivisor(a, tuple(c1[:a])), IntegralDivisor(a, tuple(c2[:a]))
    base = intersect_divisors(D, G, chain.form(a))
    for b in range(a, length + 1):
        pD, pG = PullbackMap(chain, a, b)(D), PullbackMap(chain, a, b)(G)
        form_b = chain.form(b)
        assert intersect_divisors(pD, pG, form_b) == base
        for new in range(a + 1, b + 1):
            assert intersect(pD, new, form_b) == 0
        # total-transform basis: pullback is padding with zeros
        hat = to_total(parents, list(D.coeffs)) + [0] * (b - a)
        assert list(pD.coeffs) == from_total(parents, hat)


@given(st.integers(1, 10), st.randoms(use_true_random=False), st.data())
@settings(max_examples=100, deadline=None)
def test_pullback_functoriality(length, r, data):
    parents = random_parents(r, length)
    chain = build_chain(length, parents)
    a = data.draw(st.integers(1, length))
    b = data.draw(st.integers(a, length))
    c = data.draw(st.integers(b, length))
    D = QDivisor(a, tuple(data.draw(st.fractions(-5, 5, max_denominator=8)) for _ in range(a)))
    direct = PullbackMap(chain, a, c)(D)
    assert direct == PullbackMap(chain, b, c)(PullbackMap(chain, a, b)(D))
    assert all(isinstance(x, type(direct.coeffs[0])) for x in direct.coeffs)


def test_chain_json_roundtrip():
    chain = chain_from_json(json.dumps({"length": 3, "parents": [0, 1, 1]}))
    assert chain.form().as_lists() == [[-3, 1, 1], [1, -1, 0], [1, 0, -1]]
    assert chain_from_json(chain.to_json()) == chain
    assert chain_from_json({"preset": "paper_chain", "length": 4}) == paper_chain(4)
    with pytest.raises(ChainError):
        chain_from_json({"preset": "nope", "length": 4})
    with pytest.raises(ChainError):
        chain_from_json({"length": 2})
    with pytest.raises(ChainError):
        chain_from_json([0, 1])


def test_preset_rejects_nonpositive():
    with pytest.raises(ChainError):
        paper_chain(0)
