import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_proper_power, cyclic_words, letters_to_str, str_to_letters
from onerel.words import (
    Alphabet,
    CyclicWord,
    EmptyRelator,
    Letter,
    Presentation,
    cyclic_reduce,
    free_reduce,
    invert,
    inverse_word,
    is_proper_power,
    is_reduced,
    occurrences,
    rotations,
    symmetrized_set,
)

letters = st.builds(Letter, st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=20).map(tuple)


def W(s):
    return str_to_letters(s)


def test_free_reduce_examples():
    assert free_reduce(W("aAb")) == W("b")
    assert free_reduce(W("abBA")) == ()
    assert free_reduce(W("abAB")) == W("abAB")


def test_cyclic_reduce_strips_conjugation():
    assert cyclic_reduce(W("baaB")) == CyclicWord(W("aa"))
    with pytest.raises(EmptyRelator):
        cyclic_reduce(W("abBA"))


def test_canonical_rotation_is_least():
    R = CyclicWord(W("ba"))
    assert R.letters == W("ab")
    assert CyclicWord(W("bA")).letters == W("Ab")
    # a before A: a^2 b^-1 a^-1 b rotates to start with a, not A
    assert CyclicWord(W("AbaaB")).letters == W("aaBAb")


def test_cyclicword_rejects_unreduced():
    with pytest.raises(ValueError):
        CyclicWord(W("aA"))
    with pytest.raises(ValueError):
        CyclicWord(W("abA"))


@given(words)
def test_free_reduce_idempotent(w):
    u = free_reduce(w)
    assert is_reduced(u)
    assert free_reduce(u) == u
    assert len(u) <= len(w)


@given(words, st.integers(0, 30))
def test_cyclic_reduce_rotation_invariant(w, k):
    u = free_reduce(w)
    if not u:
        return
    v = u[k % len(u):] + u[: k % len(u)]
    assert cyclic_reduce(u) == cyclic_reduce(free_reduce(v))


@given(words)
def test_invert_involution(w):
    try:
        R = cyclic_reduce(w)
    except EmptyRelator:
        return
    assert invert(invert(R)) == R
    assert len(invert(R)) == len(R)


def test_proper_power_matches_brute_force():
    for s in cyclic_words(10, 2):
        R = CyclicWord(W(s))
        flag, root, k = is_proper_power(R)
        bflag, d, bk = brute_proper_power(s)
        assert (flag, k) == (bflag, bk), s
        assert len(root) == d
        assert CyclicWord(root.letters * k) == R


def test_symmetrized_set_sizes():
    R = CyclicWord(W("aabAB"))
    S = symmetrized_set(R)
    assert len(S) == 10
    assert all(len(x) == 5 for x in S)
    assert inverse_word(R.letters) in S
    # a proper power has fewer distinct rotations
    assert len(symmetrized_set(CyclicWord(W("abab")))) == 4


def test_occurrences_and_rotations():
    assert occurrences(W("ab"), W("abab")) == [0, 2]
    assert rotations(W("abc")) == [W("abc"), W("bca"), W("cab")]
    with pytest.raises(ValueError):
        occurrences((), W("ab"))


def test_alphabet_and_presentation():
    A = Alphabet(("a", "b"))
    assert A.format(W("aaaabA")) == "a^4 b a^-1"
    assert A.format(()) == "1"
    P = Presentation(A, CyclicWord(W("abAB")))
    assert P.format() == "< a, b | a b a^-1 b^-1 >"
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Presentation(Alphabet(("a",)), CyclicWord(W("ab")))


def test_letters_helper_round_trip():
    assert letters_to_str(W("aBcA")) == "aBcA"
