"""Tests for bounded equivalence, emptiness and the minimal-device searches."""

import pytest

from succinctness_workbench.analysis import (
    bounded_equiv,
    bounding_estimate,
    cfg_emptiness,
    cfg_shortest_member,
    default_seeds,
    min_device_search,
    sweep_agreement,
)
from succinctness_workbench.constructions import kth_from_end_nfa, letters_cfg
from succinctness_workbench.devices import size_of
from succinctness_workbench.errors import BudgetExceededError, DomainError, UnsupportedError
from succinctness_workbench.formats import parse_grammar
from succinctness_workbench.membership import member
from succinctness_workbench.models import Horizon, WorkbenchConfig


@pytest.fixture
def all_a():
    return parse_grammar("S -> a S | _eps_")


@pytest.fixture
def even_a():
    return parse_grammar("S -> a a S | _eps_")


def test_bounded_equiv_finds_the_least_counterexample(all_a, even_a):
    result = bounded_equiv(all_a, even_a, Horizon(max_length=3))
    assert not result.equal
    assert result.counterexample == ("a",)
    assert result.words_checked == 2
    assert bounded_equiv(even_a, all_a, Horizon(max_length=3)) == result


def test_bounded_equiv_on_equal_languages(all_a):
    left_recursive = parse_grammar("S -> S a | _eps_")
    result = bounded_equiv(all_a, left_recursive, Horizon(max_length=3))
    assert result.equal
    assert result.counterexample is None
    assert result.horizon == 3
    assert result.words_checked == 4


def test_bounded_equiv_budget(all_a):
    with pytest.raises(BudgetExceededError):
        bounded_equiv(all_a, all_a, Horizon(max_length=3), budget=2)


def test_bounded_equiv_uses_the_horizon_alphabet(all_a):
    result = bounded_equiv(all_a, all_a, Horizon(max_length=2, alphabet=("a", "b")))
    assert result.equal
    assert result.words_checked == 7


def test_sweep_agreement(all_a, even_a):
    result = sweep_agreement(all_a, even_a, ["aa", "a", ""])
    assert result.counterexample == ("a",)
    assert result.words_checked == 2
    assert result.mode == "sampled"
    agreed = sweep_agreement(all_a, even_a, ["aa", ""], "exhaustive")
    assert agreed.equal
    assert agreed.horizon == 2


def test_cfg_emptiness():
    assert cfg_emptiness(parse_grammar("S -> A\nA -> a A")) == "empty"
    assert cfg_emptiness(parse_grammar("S -> A | b\nA -> a A")) == "nonempty"


def test_cfg_shortest_member():
    assert cfg_shortest_member(parse_grammar("S -> a S b | b")) == ("b",)
    assert cfg_shortest_member(parse_grammar("S -> b b | a A\nA -> a")) == ("a", "a")
    assert cfg_shortest_member(parse_grammar("S -> _eps_ | a")) == ()
    assert cfg_shortest_member(parse_grammar("S -> A\nA -> a A")) is None


def test_minimal_dfa_of_a_regular_target_is_exact():
    found = min_device_search(kth_from_end_nfa(3), "dfa", Horizon(max_length=4), budget=10)
    assert found.size == 8
    assert found.flag == "exact"
    assert found.horizon is None


def test_minimal_nfa_of_a_regular_target():
    found = min_device_search(kth_from_end_nfa(1), "nfa", Horizon(max_length=4), budget=1000)
    assert found.size == 2
    assert found.flag == "exact"
    assert found.candidates_examined == 8


def test_minimal_nfa_search_reports_an_upper_bound_when_out_of_budget():
    found = min_device_search(kth_from_end_nfa(1), "nfa", Horizon(max_length=4), budget=1)
    assert found.size == 2
    assert found.flag == "upper-bound"


def test_minimal_cnf_grammar_is_horizon_bounded():
    target = letters_cfg(2, ("a",))
    found = min_device_search(target, "cnf-cfg", Horizon(max_length=6), budget=10_000)
    assert found.size == 2
    assert found.flag == "horizon-bounded"
    assert found.horizon == 6
    for k in range(7):
        assert member(found.witness, ("a",) * k) == (k == 2)


def test_minimal_dfa_of_a_grammar_is_horizon_bounded():
    found = min_device_search(letters_cfg(2, ("a",)), "dfa", Horizon(max_length=5), budget=10_000)
    # three states would suffice up to length 4: the cycle a^0, a^1, a^2 repeats
    assert found.size == 4
    assert found.flag == "horizon-bounded"


def test_min_device_search_errors():
    target = letters_cfg(2, ("a",))
    with pytest.raises(UnsupportedError):
        min_device_search(target, "pda", Horizon(max_length=3), budget=10)
    with pytest.raises(DomainError):
        min_device_search(target, "dfa", Horizon(max_length=3), budget=0)
    with pytest.raises(BudgetExceededError):
        min_device_search(target, "cnf-cfg", Horizon(max_length=3), budget=3)


def test_dfa_over_nfa_estimate_at_size_one():
    """A one-state NFA with a missing move needs a dead state in its DFA."""
    estimate = bounding_estimate(("dfa", "nfa"), 1, Horizon(max_length=4), budget=10_000)
    assert estimate.complete
    assert len(estimate.rows) == 8
    assert estimate.max == 2
    assert all(row.flag == "exact" for row in estimate.rows)
    assert {row.minimal_size for row in estimate.rows} == {1, 2}


def test_dfa_over_nfa_estimate_reaches_the_exponential_gap():
    """The third-from-end seed alone needs eight DFA states."""
    estimate = bounding_estimate(("dfa", "nfa"), 4, Horizon(max_length=12), budget=5_000)
    assert estimate.max >= 8
    assert any(row.device_size == 4 and row.minimal_size == 8 for row in estimate.rows)


@pytest.mark.slow
def test_dfa_over_nfa_estimate_with_the_default_budget():
    estimate = bounding_estimate(("dfa", "nfa"), 4, Horizon(max_length=12), budget=WorkbenchConfig().budget)
    assert estimate.max >= 8


def test_estimate_grows_with_n():
    maxima = [bounding_estimate(("dfa", "nfa"), n, Horizon(max_length=8), budget=5_000).max for n in (1, 2, 3)]
    assert maxima == sorted(maxima)
    assert maxima[0] == 2
    assert maxima[2] >= 4


def test_truncated_estimate_is_incomplete():
    estimate = bounding_estimate(("dfa", "nfa"), 1, Horizon(max_length=4), budget=3)
    assert not estimate.complete
    assert len(estimate.rows) == 3


def test_estimate_with_explicit_seeds():
    seeds = [kth_from_end_nfa(2), kth_from_end_nfa(5)]
    estimate = bounding_estimate(("dfa", "nfa"), 3, Horizon(max_length=4), budget=1, seeds=seeds)
    assert not estimate.complete
    # the size 6 seed is over the limit and dropped
    assert estimate.rows[-1].device_size == 3
    assert estimate.rows[-1].minimal_size == 4
    assert estimate.max == 4


def test_estimate_errors():
    with pytest.raises(DomainError):
        bounding_estimate(("dfa", "nfa"), 0, Horizon(max_length=3), budget=10)
    with pytest.raises(UnsupportedError):
        bounding_estimate(("dfa", "pda"), 1, Horizon(max_length=3), budget=10)


def test_default_seeds():
    seeds = default_seeds(("dfa", "nfa"), 4, ("a", "b"))
    assert [size_of(s) for s in seeds] == [2, 3, 4]
    assert default_seeds(("nfa", "cnf-cfg"), 4, ("a", "b")) == []
