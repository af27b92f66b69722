from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    cyclic_words,
    is_power_str,
    letters_to_str,
    oracle_pieces,
    oracle_triples,
    str_inverse,
    str_to_letters,
    subword_table,
)
from onerel.smallcancel import (
    ProperPowerInput,
    TripleWitness,
    check_metric,
    check_T4,
    check_Tprime,
    enumerate_pieces,
    triple_witnesses,
)
from onerel.words import CyclicWord, cyclic_reduce, invert, symmetrized_set

EX1 = "aaaababaBAbbbAb"


def R(s):
    return cyclic_reduce(str_to_letters(s))


def piece_strs(s):
    return {letters_to_str(p.word) for p in enumerate_pieces(R(s))}


def triple_strs(s, allow_empty=False):
    ws, _ = triple_witnesses(R(s), allow_empty)
    return {tuple(letters_to_str(x) for x in (t.w1, t.w2, t.w3)) for t in ws}


def test_piece_examples():
    assert piece_strs("abc") == set()
    assert piece_strs("aabb") == {"a", "b", "A", "B"}
    assert max(len(p) for p in piece_strs(EX1)) == 3


def test_metric_examples():
    assert check_metric(R(EX1), Fraction(1, 4)).holds
    rep = check_metric(R(EX1), Fraction(1, 6))
    assert not rep.holds and len(rep.witnesses[0]) == 3
    assert rep.parameter == Fraction(1, 6)
    # 1 < 4 * 1/4 is false
    assert not check_metric(R("aabb"), Fraction(1, 4)).holds
    with pytest.raises(ValueError):
        check_metric(R("abc"), Fraction(1))


def test_triple_examples():
    assert check_T4(R("abc")).holds
    assert check_Tprime(R("abc")).holds
    t4 = check_T4(R(EX1))
    assert not t4.holds and t4.witnesses
    tp = check_Tprime(R(EX1))
    assert tp.holds and tp.parameter == Fraction(15, 2)
    assert all(2 * w.total_length < 15 for w in t4.witnesses)
    assert triple_strs("aabb") == oracle_triples("aabb")


def test_proper_power_rejected():
    with pytest.raises(ProperPowerInput):
        enumerate_pieces(R("abab"))


def test_pieces_and_triples_match_oracle_short_words():
    for s in cyclic_words(9, 2):
        if is_power_str(s):
            continue
        assert piece_strs(s) == oracle_pieces(s), s
        assert triple_strs(s) == oracle_triples(s), s


def test_empty_piece_flag_matches_oracle():
    for s in ["aabb", "abAB", EX1, "aabAAB", "abbaBAAb"]:
        assert triple_strs(s, True) == oracle_triples(s, allow_empty=True), s


def test_witness_hosts_are_real():
    d = R(EX1)
    elements = symmetrized_set(d)
    for w in check_T4(d).witnesses:
        assert isinstance(w, TripleWitness)
        concat = (w.w1 + w.w2, w.w1 + w.w3, tuple(x.inverse() for x in reversed(w.w2)) + w.w3)
        for word, occ in zip(concat, w.hosts):
            assert occ.length == len(word)
            host = elements[occ.element_index]
            assert host[occ.position:occ.position + occ.length] == word


def test_piece_occurrences_distinct_elements():
    for p in enumerate_pieces(R(EX1)):
        assert len({o.element_index for o in p.occurrences}) >= 2


def test_limit_truncates_witnesses():
    full = check_T4(R(EX1))
    short = check_T4(R(EX1), limit=3)
    assert short.holds == full.holds
    assert short.witnesses == full.witnesses[:3]


reduced_words = st.text("abAB", min_size=1, max_size=14).filter(
    lambda s: all(s[i] != s[i + 1].swapcase() for i in range(len(s) - 1))
    and (len(s) == 1 or s[0] != s[-1].swapcase())
    and not is_power_str(s)
)


@given(reduced_words, st.integers(0, 20))
def test_verdicts_invariant_under_rotation_and_inverse(s, k):
    k %= len(s)
    variants = [s, s[k:] + s[:k], str_inverse(s)]
    verdicts = set()
    for v in variants:
        x = R(v)
        verdicts.add((check_metric(x, Fraction(1, 4)).holds, check_metric(x, Fraction(1, 6)).holds,
                      check_T4(x, limit=1).holds, check_Tprime(x, limit=1).holds))
    assert len(verdicts) == 1


@given(reduced_words, st.fractions(Fraction(1, 100), Fraction(99, 100)),
       st.fractions(Fraction(1, 100), Fraction(99, 100)))
def test_metric_monotone(s, a, b):
    lo, hi = sorted((a, b))
    x = R(s)
    if check_metric(x, lo).holds:
        assert check_metric(x, hi).holds


@given(reduced_words)
def test_pieces_prefix_closed_and_subwords(s):
    pieces = piece_strs(s)
    table = subword_table(s)
    for p in pieces:
        assert p in table
        assert all(p[:k] in pieces for k in range(1, len(p)))


def test_invert_gives_inverse_pieces():
    x = R(EX1)
    mine = piece_strs(EX1)
    other = {letters_to_str(p.word) for p in enumerate_pieces(invert(x))}
    assert mine == other  # the piece set is closed under inversion
    assert {str_inverse(p) for p in mine} == mine


def test_cyclicword_input_accepted_directly():
    assert enumerate_pieces(CyclicWord(str_to_letters("abc"))) == []
