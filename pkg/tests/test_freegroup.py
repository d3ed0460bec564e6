import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import naive_apply, naive_reduce
from posfact.freegroup import (Automorphism, FreeWord, InversionError, RankMismatchError, abelianization_matrix,
                               abelianize, aut_invert, compose, conjugacy_key, cyclic_reduce, invert, multiply,
                               power, reduce_letters)

RANK = 3
letters = st.lists(st.sampled_from([1, 2, 3, -1, -2, -3]), max_size=30)


def fw(xs):
    return FreeWord(RANK, xs)


@given(letters)
def test_reduction_matches_repeated_scanning(xs):
    assert reduce_letters(xs) == naive_reduce(xs)


@given(letters)
def test_reduced_words_have_no_cancelling_pair(xs):
    w = fw(xs).letters
    assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))


@given(letters, letters, letters)
def test_multiplication_is_associative(a, b, c):
    assert multiply(multiply(fw(a), fw(b)), fw(c)) == multiply(fw(a), multiply(fw(b), fw(c)))


@given(letters)
def test_inverse_cancels(xs):
    w = fw(xs)
    assert (w * invert(w)).is_identity() and (invert(w) * w).is_identity()


@given(letters, st.integers(-3, 3))
def test_power_matches_repeated_product(xs, k):
    w = fw(xs)
    expected = FreeWord.identity(RANK)
    for _ in range(abs(k)):
        expected = expected * (w if k > 0 else invert(w))
    assert power(w, k) == expected


def test_rank_mismatch_raises():
    with pytest.raises(RankMismatchError):
        multiply(FreeWord(2, [1]), FreeWord(3, [1]))


def test_zero_letter_rejected():
    with pytest.raises(ValueError):
        FreeWord(2, [0])


@given(letters)
def test_cyclic_reduction_preserves_conjugacy_class(xs):
    w = fw(xs)
    conj, core = cyclic_reduce(w)
    assert conj * core * invert(conj) == w
    rotated = fw(core.letters[1:] + core.letters[:1]) if len(core) else core
    assert conjugacy_key(rotated) == conjugacy_key(core)


# c1 -> c1 c2 and c3 -> c3 c1: a product of two Nielsen moves
NIELSEN = Automorphism([fw([1, 2]), fw([2]), fw([3, 1])])


@given(letters)
def test_automorphism_application_matches_substitution(xs):
    images = [w.letters for w in NIELSEN.images]
    assert NIELSEN(fw(xs)).letters == naive_apply(images, xs)


@given(letters)
def test_composition_acts_right_to_left(xs):
    other = Automorphism([fw([1]), fw([2, -3]), fw([3])])
    w = fw(xs)
    assert compose(NIELSEN, other)(w) == NIELSEN(other(w))


def test_inverse_round_trips_every_generator():
    inv = aut_invert(NIELSEN)
    for i in range(RANK):
        g = FreeWord.generator(RANK, i)
        assert NIELSEN(inv(g)) == g and inv(NIELSEN(g)) == g


def test_non_automorphism_is_not_inverted():
    with pytest.raises(InversionError):
        aut_invert(Automorphism([fw([1, 1]), fw([2]), fw([3])]))


def test_identity_automorphism():
    e = Automorphism.identity(RANK)
    assert e.is_identity()
    assert [w.letters for w in e.images] == [(1,), (2,), (3,)]


@given(letters)
def test_abelianization_matrix_is_a_homomorphism(xs):
    M = abelianization_matrix(NIELSEN)
    assert np.array_equal(abelianize(NIELSEN(fw(xs))), M @ abelianize(fw(xs)))
