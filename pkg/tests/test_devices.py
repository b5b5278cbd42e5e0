"""Tests for device models, validation and size measures."""

import pytest

from succinctness_workbench.devices import (
    Cfg,
    Csg,
    CsgRule,
    Dfa,
    DfaTransition,
    Dpda,
    Nfa,
    NfaTransition,
    Pda,
    PdaTransition,
    PredicateOracle,
    Rule,
    alphabet_of,
    as_dpda,
    as_word,
    ensure_valid,
    fresh_symbol,
    nfa_view,
    show_word,
    size_of,
    validate,
)
from succinctness_workbench.errors import DeviceValidationError


def even_a_dfa():
    """Words over {a, b} with an even number of a's."""
    return Dfa(
        states=("e", "o"),
        alphabet=("a", "b"),
        transitions=(
            DfaTransition(source="e", symbol="a", target="o"),
            DfaTransition(source="e", symbol="b", target="e"),
            DfaTransition(source="o", symbol="a", target="e"),
            DfaTransition(source="o", symbol="b", target="o"),
        ),
        start="e",
        accepting=("e",),
    )


def test_as_word_splits_strings_into_characters():
    assert as_word("aba") == ("a", "b", "a")
    assert as_word(["[q:a]", "a"]) == ("[q:a]", "a")
    assert as_word("") == ()


def test_show_word():
    assert show_word(()) == "ε"
    assert show_word(("a", "b")) == "ab"
    assert show_word(("[q0:a]", "_")) == "[q0:a] _"


def test_valid_dfa_has_no_violations():
    assert validate(even_a_dfa()) == []
    assert size_of(even_a_dfa()) == 2


def test_partial_dfa_is_reported():
    dfa = even_a_dfa().model_copy(update={"transitions": even_a_dfa().transitions[:3]})
    problems = validate(dfa)
    assert problems == ["missing move from 'o' on 'b'"]
    with pytest.raises(DeviceValidationError) as excinfo:
        ensure_valid(dfa)
    assert excinfo.value.violations == problems
    assert excinfo.value.kind == "dfa"


def test_dfa_with_undeclared_start():
    dfa = even_a_dfa().model_copy(update={"start": "x"})
    assert "start state 'x' is not declared" in validate(dfa)


def test_nfa_validation_allows_epsilon_moves():
    nfa = Nfa(
        states=("p", "q"),
        alphabet=("a",),
        transitions=(NfaTransition(source="p", symbol=None, target="q"),),
        start="p",
        accepting=("q",),
    )
    assert validate(nfa) == []
    bad = nfa.model_copy(update={"transitions": (NfaTransition(source="p", symbol="c", target="q"),)})
    assert validate(bad) == ["transition symbol 'c' is not in the alphabet"]


def test_cfg_rejects_undeclared_symbols_and_clashes():
    cfg = Cfg(nonterminals=("S",), terminals=("a", "S"), rules=(Rule(lhs="S", rhs=("a", "X")),), start="S")
    problems = validate(cfg)
    assert "symbol 'S' is both a nonterminal and a terminal" in problems
    assert any("undeclared symbol 'X'" in p for p in problems)


def test_csg_must_be_noncontracting():
    csg = Csg(
        nonterminals=("S", "A"),
        terminals=("a",),
        rules=(CsgRule(lhs=("S",), rhs=("A", "A")), CsgRule(lhs=("A", "A"), rhs=("a",))),
        start="S",
    )
    assert validate(csg) == ["rule A A -> a is contracting"]


def test_csg_start_may_erase_only_when_never_on_the_right():
    erasing = CsgRule(lhs=("S",), rhs=())
    ok = Csg(nonterminals=("S",), terminals=("a",), rules=(erasing, CsgRule(lhs=("S",), rhs=("a",))), start="S")
    assert validate(ok) == []
    recursive = ok.model_copy(update={"rules": ok.rules + (CsgRule(lhs=("S",), rhs=("a", "S")),)})
    assert len(validate(recursive)) == 1


def test_pda_size_counts_states_and_stack_symbols():
    pda = Pda(
        states=("p", "q"),
        input_alphabet=("a",),
        stack_alphabet=("Z", "A"),
        transitions=(PdaTransition(source="p", symbol="a", pop="Z", target="q", push=("A", "Z")),),
        start="p",
        initial_stack_symbol="Z",
    )
    assert size_of(pda) == 4
    assert alphabet_of(pda) == ("a",)


def test_dpda_determinism():
    moves = (
        PdaTransition(source="p", symbol=None, pop="Z", target="p", push=("Z",)),
        PdaTransition(source="p", symbol="a", pop="Z", target="p", push=("Z",)),
    )
    pda = Pda(
        states=("p",), input_alphabet=("a",), stack_alphabet=("Z",), transitions=moves, start="p", initial_stack_symbol="Z"
    )
    assert validate(pda) == []
    with pytest.raises(DeviceValidationError) as excinfo:
        as_dpda(pda)
    assert "an ε-move must be the only move" in str(excinfo.value)


def test_as_dpda_keeps_a_deterministic_machine():
    pda = Pda(
        states=("p",),
        input_alphabet=("a",),
        stack_alphabet=("Z",),
        transitions=(PdaTransition(source="p", symbol="a", pop="Z", target="p", push=("Z",)),),
        start="p",
        initial_stack_symbol="Z",
        accepting=("p",),
    )
    dpda = as_dpda(pda)
    assert isinstance(dpda, Dpda)
    assert dpda.kind == "dpda"
    assert dpda.transitions == pda.transitions


def test_nfa_view_keeps_the_automaton():
    nfa = nfa_view(even_a_dfa())
    assert nfa.kind == "nfa"
    assert nfa.states == ("e", "o")
    assert len(nfa.transitions) == 4
    assert validate(nfa) == []


def test_predicate_oracle_accepts_strings_and_tuples():
    oracle = PredicateOracle(label="even", alphabet=("a",), predicate=lambda w: len(w) % 2 == 0)
    assert oracle("aa") is True
    assert oracle(("a",)) is False
    assert alphabet_of(oracle) == ("a",)


def test_fresh_symbol_primes_until_free():
    assert fresh_symbol("S", []) == "S"
    assert fresh_symbol("S", ["S", "S'"]) == "S''"
