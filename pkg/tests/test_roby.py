"""Roby algebra: examples, oracle agreement and algebraic properties."""

from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from oracles import roby_quotient_normal_form, roby_relation_span
from ternary_algebra.errors import ParseError, PreconditionError
from ternary_algebra.roby import (
    RobyElement,
    enumerate_basis,
    grade,
    has_rise,
    homogeneous_component,
    inversions,
    is_rise_free,
    lam_mul,
    nilpotency_order,
    reduce,
    reduce_word,
    roby_dim,
)
from ternary_algebra.scalars import Cyclotomic3


def el(n, *pairs):
    return RobyElement(n, {tuple(w): c for w, c in pairs})


def naive_reduce(word):
    """Uncached leftmost-rise rewriting on a dict of words."""
    todo = {tuple(word): 1}
    done = {}
    while todo:
        w, c = todo.popitem()
        pos = has_rise(w)
        if pos is None:
            done[w] = done.get(w, 0) + c
            continue
        i, j, k = w[pos : pos + 3]
        head, tail = w[:pos], w[pos + 3 :]
        for perm in set(permutations((i, j, k))):
            if perm != (i, j, k):
                nw = head + perm + tail
                todo[nw] = todo.get(nw, 0) - c
    return {w: c for w, c in done.items() if c}


class TestRise:
    def test_position(self):
        assert has_rise((1, 2, 1, 1, 2, 1)) == 2

    @pytest.mark.parametrize("w", [(2, 1), (3, 2, 1), (), (1,)])
    def test_absent(self, w):
        assert has_rise(w) is None

    def test_leftmost(self):
        assert has_rise((1, 1, 1, 1)) == 0
        assert has_rise((2, 1, 2, 2)) == 1


class TestReduce:
    def test_cube_vanishes(self):
        assert reduce((1, 1, 1)) == RobyElement.zero(1)

    def test_double_letter(self):
        assert reduce((1, 1, 2)) == el(2, ((1, 2, 1), -1), ((2, 1, 1), -1))

    def test_rise_free_fixed(self):
        assert reduce((2, 1, 2, 1)) == el(2, ((2, 1, 2, 1), 1))

    def test_distinct_letters(self):
        r = reduce((1, 2, 3))
        assert r + sum((reduce(p) for p in permutations((1, 2, 3)) if p != (1, 2, 3)), RobyElement.zero(3)) == RobyElement.zero(3)
        assert set(r.terms) <= {w for w in product(range(1, 4), repeat=3) if is_rise_free(w)}

    def test_rewrite_raises_inversions(self):
        for i, j, k in product(range(1, 4), repeat=3):
            if i <= j <= k and len({i, j, k}) > 1:
                for perm in set(permutations((i, j, k))) - {(i, j, k)}:
                    assert inversions(perm) > inversions((i, j, k))

    def test_preserves_length(self):
        for w in product(range(1, 4), repeat=5):
            assert {len(v) for v in reduce_word(w)} <= {5}

    def test_memo_matches_uncached(self):
        for w in product(range(1, 4), repeat=5):
            assert reduce_word(w) == naive_reduce(w)

    @pytest.mark.parametrize("n", [2, 3])
    def test_oracle_up_to_length_5(self, n):
        for length in range(6):
            span = roby_relation_span(n, length)
            assert span.rank == n**length - roby_dim(n, length)
            for w in product(range(1, n + 1), repeat=length):
                assert roby_quotient_normal_form(span, w) == reduce_word(w)

    def test_letter_out_of_range(self):
        with pytest.raises(PreconditionError):
            RobyElement(2, {(1, 3): 1})


class TestMultiply:
    def test_cubic_word_squares_to_zero(self):
        t = reduce((2, 2, 1))
        assert lam_mul(t, t) == RobyElement.zero(2)

    def test_unit(self):
        x = el(3, ((2, 1, 3), 2), ((1,), "q"))
        assert lam_mul(RobyElement.one(3), x) == x
        assert lam_mul(x, RobyElement.one(3)) == x

    def test_left_to_right_product(self):
        t1, t2 = reduce((1,), 2), reduce((2,), 2)
        assert t1 * t1 * t2 == el(2, ((1, 2, 1), -1), ((2, 1, 1), -1))

    def test_mismatch(self):
        with pytest.raises(PreconditionError):
            lam_mul(RobyElement.one(2), RobyElement.one(3))


class TestGrade:
    def test_examples(self):
        assert grade(reduce((1, 2))) == {2}
        assert grade(RobyElement.one(2) + reduce((1, 2, 1))) == {0}
        assert grade(reduce((1,), 2) + reduce((1, 2))) == {1, 2}

    def test_components(self):
        a = reduce((1,), 2) + reduce((1, 2)) + reduce((2, 1, 2, 1))
        assert homogeneous_component(a, 1) == reduce((1,), 2) + reduce((2, 1, 2, 1))


class TestCounting:
    def test_low_degrees(self):
        assert enumerate_basis(2, 1) == [(1,), (2,)]
        assert roby_dim(2, 2) == 4
        assert roby_dim(2, 3) == 4
        assert enumerate_basis(1, 3) == []

    def test_degree_four(self):
        # filtering all 16 words by the rise criterion leaves five
        words = [w for w in product((1, 2), repeat=4) if is_rise_free(w)]
        assert enumerate_basis(2, 4) == words
        assert words == [(1, 2, 1, 1), (1, 2, 1, 2), (2, 1, 2, 1), (2, 2, 1, 1), (2, 2, 1, 2)]

    def test_dim_zero(self):
        assert all(roby_dim(n, 0) == 1 for n in range(1, 5))

    def test_dp_matches_enumeration(self):
        for n in range(1, 5):
            for k in range(9):
                assert roby_dim(n, k) == len(enumerate_basis(n, k))

    def test_lexicographic(self):
        words = enumerate_basis(3, 4)
        assert words == sorted(words)

    def test_bad_arguments(self):
        with pytest.raises(PreconditionError):
            roby_dim(0, 2)
        with pytest.raises(PreconditionError):
            enumerate_basis(2, -1)


class TestNilpotency:
    def test_examples(self):
        assert nilpotency_order(reduce((2, 2, 1)), 5) == 2
        assert nilpotency_order(reduce((1,), 1), 5) == 3
        assert nilpotency_order(reduce((3, 2, 1)), 4) is None

    def test_powers_nonzero_up_to_cap(self):
        t = reduce((3, 2, 1))
        assert all(t**m for m in range(1, 5))

    def test_zero_and_bad_cap(self):
        assert nilpotency_order(RobyElement.zero(2), 3) == 1
        with pytest.raises(PreconditionError):
            nilpotency_order(RobyElement.one(2), 0)


def roby_elements(n, max_len=4, max_terms=3):
    word = st.lists(st.integers(1, n), max_size=max_len).map(tuple)
    coeff = st.sampled_from([1, -1, 2, "q", "-1-q", "1/2"])
    return st.dictionaries(word, coeff, max_size=max_terms).map(lambda d: RobyElement(n, d))


@settings(max_examples=40, deadline=None)
@given(roby_elements(3), roby_elements(3), roby_elements(3))
def test_associativity(a, b, c):
    assert lam_mul(lam_mul(a, b), c) == lam_mul(a, lam_mul(b, c))


@settings(max_examples=40, deadline=None)
@given(roby_elements(2), roby_elements(2), roby_elements(2))
def test_distributivity(a, b, c):
    assert lam_mul(a, b + c) == lam_mul(a, b) + lam_mul(a, c)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=4), st.lists(st.integers(1, 3), max_size=4))
def test_grading_is_additive(u, v):
    a, b = reduce(u, 3), reduce(v, 3)
    prod = lam_mul(a, b)
    if prod:
        assert grade(prod) == {(len(u) + len(v)) % 3}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), max_size=3), st.lists(st.integers(1, 3), max_size=3), st.tuples(*[st.integers(1, 3)] * 3))
def test_relation_closure_in_context(u, v, ijk):
    total = RobyElement.zero(3)
    for perm in permutations(ijk):
        total = total + reduce(tuple(u) + perm + tuple(v), 3)
    assert not total


def test_relation_closure_all_triples():
    for n in (2, 3):
        for ijk in product(range(1, n + 1), repeat=3):
            assert not sum((reduce(p, n) for p in permutations(ijk)), RobyElement.zero(n))


@settings(max_examples=40, deadline=None)
@given(roby_elements(3))
def test_json_round_trip(a):
    assert RobyElement.from_json(a.to_json()) == a


def test_json_sorted_and_malformed():
    doc = (reduce((2,), 2) + reduce((1,), 2)).to_json()
    assert [t["word"] for t in doc["terms"]] == [[1], [2]]
    with pytest.raises(ParseError):
        RobyElement.from_json({"n": 2, "terms": [{"word": [1]}]})


def test_coefficients_are_cyclotomic():
    a = RobyElement(2, {(1,): "q"})
    assert a.terms[(1,)] == Cyclotomic3(0, 1)
