"""Tests for the succinct grammar families."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from succinctness_workbench.constructions import (
    CounterGrammarSpec,
    cfg_concat,
    cfg_union,
    complement_ww_bound,
    complement_ww_cfg,
    complement_ww_gap_witness,
    counter_cfg,
    counter_size,
    kth_from_end_nfa,
    letters_cfg,
    mismatch_cfg,
    star_cfg,
    w_dollar_w_bound,
    w_dollar_w_csg,
    w_dollar_w_gap_witness,
)
from succinctness_workbench.devices import size_of, validate
from succinctness_workbench.earley import EarleyRecognizer
from succinctness_workbench.errors import DomainError
from succinctness_workbench.membership import member
from succinctness_workbench.oracles import not_ww_oracle, w_dollar_w_oracle


def words(alphabet, max_length):
    for length in range(max_length + 1):
        yield from itertools.product(alphabet, repeat=length)


@pytest.mark.parametrize("n, size", [(2, 2), (3, 3), (4, 3), (5, 4), (6, 4), (7, 5), (1024, 11)])
def test_counter_size(n, size):
    assert counter_size(n) == size
    assert size_of(counter_cfg(CounterGrammarSpec(n=n))) == size


@given(st.integers(min_value=2, max_value=4096))
def test_counter_size_stays_within_twice_the_logarithm(n):
    assert counter_size(n) <= math.floor(2 * math.log2(n))


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=2, max_value=12), st.sampled_from(["exact", "at-most", "at-least"]))
def test_counter_languages(n, mode):
    grammar = counter_cfg(CounterGrammarSpec(n=n, mode=mode))
    assert validate(grammar) == []
    expected = {"exact": lambda k: k == n, "at-most": lambda k: k <= n, "at-least": lambda k: k >= n}[mode]
    for k in range(n + 3):
        assert member(grammar, ("Y",) * k) == expected(k)


def test_counter_over_a_real_alphabet():
    grammar = counter_cfg(CounterGrammarSpec(n=3, alphabet=("a", "b")))
    assert grammar.terminals == ("a", "b")
    assert member(grammar, "aba")
    assert not member(grammar, "ab")


def test_counter_rejects_small_n():
    with pytest.raises(DomainError):
        counter_cfg(CounterGrammarSpec(n=1))
    with pytest.raises(DomainError):
        counter_size(1)


def test_star_and_letters():
    assert member(star_cfg(("a", "b")), "abba")
    assert member(star_cfg(), "")
    assert [w for w in words("ab", 2) if member(letters_cfg(1), w)] == [("a",), ("b",)]
    assert [w for w in words("ab", 2) if member(letters_cfg(0), w)] == [()]
    with pytest.raises(DomainError):
        letters_cfg(-1)


def test_union_and_concatenation_rename_apart():
    a_pair = letters_cfg(2, ("a",))
    b_pair = letters_cfg(2, ("b",))
    union = cfg_union([a_pair, b_pair])
    assert validate(union) == []
    assert size_of(union) == size_of(a_pair) + size_of(b_pair) + 1
    assert member(union, "aa") and member(union, "bb") and not member(union, "ab")

    concat = cfg_concat(a_pair, b_pair)
    assert member(concat, "aabb")
    assert not member(concat, "bbaa")
    with pytest.raises(DomainError):
        cfg_union([])


def test_mismatch_grammar():
    grammar = mismatch_cfg(2)
    for word in words("ab", 5):
        expected = any(word[i] != word[i + 2] for i in range(len(word) - 2))
        assert member(grammar, word) == expected, word
    with pytest.raises(DomainError):
        mismatch_cfg(1)


@pytest.mark.parametrize("n", [2, 3, 4, 5, pytest.param(6, marks=pytest.mark.slow)])
def test_complement_of_ww_matches_its_predicate(n):
    """All 2^(2n+3) - 1 words up to length 2n + 2, read off one shared chart."""
    grammar = complement_ww_cfg(n)
    oracle = not_ww_oracle(n)
    accepted = set(EarleyRecognizer(grammar).members(("a", "b"), 2 * n + 2))
    assert accepted == {word for word in words("ab", 2 * n + 2) if oracle(word)}


@pytest.mark.parametrize("n", [2, 3, 8, 100, 1000])
def test_complement_of_ww_size_bound(n):
    witness = complement_ww_gap_witness(n)
    assert witness.bound == complement_ww_bound(n)[0]
    assert witness.bound_satisfied


@pytest.mark.parametrize("n", [1, 2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_w_dollar_w_matches_its_predicate(n):
    grammar = w_dollar_w_csg(n)
    assert validate(grammar) == []
    oracle = w_dollar_w_oracle(n)
    for word in words("ab$", 2 * n + 1):
        assert member(grammar, word) == oracle(word), word


@pytest.mark.parametrize("n", [2, 5, 64, 1000])
def test_w_dollar_w_size_bound(n):
    witness = w_dollar_w_gap_witness(n)
    assert witness.bound_value == w_dollar_w_bound(n)[1]
    assert witness.size <= witness.bound_value


def test_kth_from_end_nfa():
    nfa = kth_from_end_nfa(3)
    assert size_of(nfa) == 4
    for word in words("ab", 6):
        assert member(nfa, word) == (len(word) >= 3 and word[-3] == "a"), word
    with pytest.raises(DomainError):
        kth_from_end_nfa(0)
    with pytest.raises(DomainError):
        kth_from_end_nfa(2, ("b", "c"))
