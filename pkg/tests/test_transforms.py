"""Tests for conversions and closure constructions."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from succinctness_workbench.constructions import kth_from_end_nfa
from succinctness_workbench.devices import (
    Dfa,
    DfaTransition,
    Dpda,
    Nfa,
    NfaTransition,
    PdaTransition,
    size_of,
    validate,
)
from succinctness_workbench.errors import DomainError
from succinctness_workbench.formats import parse_grammar
from succinctness_workbench.membership import member
from succinctness_workbench.transforms import (
    canonical_dfa,
    cfg_to_pda,
    cfg_trim,
    dfa_complement,
    dfa_difference,
    dfa_equivalent,
    dfa_minimize,
    dfa_product,
    dfa_to_cfg,
    dpda_complement,
    epsilon_outcomes,
    nfa_to_dfa,
    nfa_trim,
    pda_to_cfg,
)


def words(alphabet, max_length):
    for length in range(max_length + 1):
        yield from itertools.product(alphabet, repeat=length)


def dfa(states, table, accepting, alphabet=("a", "b")):
    return Dfa(
        states=tuple(states),
        alphabet=alphabet,
        transitions=tuple(DfaTransition(source=p, symbol=a, target=q) for (p, a), q in table.items()),
        start=states[0],
        accepting=tuple(accepting),
    )


def count_a(modulus):
    """Number of a's divisible by ``modulus``."""
    states = [f"c{i}" for i in range(modulus)]
    table = {}
    for i, state in enumerate(states):
        table[(state, "a")] = states[(i + 1) % modulus]
        table[(state, "b")] = state
    return dfa(states, table, [states[0]])


def an_bn_dpda():
    t = PdaTransition
    return Dpda(
        states=("p", "q", "f"),
        input_alphabet=("a", "b"),
        stack_alphabet=("Z", "A"),
        transitions=(
            t(source="p", symbol="a", pop="Z", target="p", push=("A", "Z")),
            t(source="p", symbol="a", pop="A", target="p", push=("A", "A")),
            t(source="p", symbol="b", pop="A", target="q"),
            t(source="q", symbol="b", pop="A", target="q"),
            t(source="q", symbol=None, pop="Z", target="f", push=("Z",)),
        ),
        start="p",
        initial_stack_symbol="Z",
        accepting=("f",),
    )


nfa_strategy = st.builds(
    lambda moves, accepting: Nfa(
        states=("p", "q", "r"),
        alphabet=("a", "b"),
        transitions=tuple(NfaTransition(source=s, symbol=a, target=t) for s, a, t in moves),
        start="p",
        accepting=tuple(accepting),
    ),
    st.lists(st.tuples(st.sampled_from("pqr"), st.sampled_from(["a", "b", None]), st.sampled_from("pqr")), max_size=8),
    st.lists(st.sampled_from("pqr"), unique=True),
)


@settings(max_examples=40, deadline=None)
@given(nfa_strategy)
def test_subset_construction_preserves_the_language(nfa):
    result, receipt = nfa_to_dfa(nfa)
    assert validate(result) == []
    assert receipt.bound_satisfied
    for word in words("ab", 5):
        assert member(result, word) == member(nfa, word), word


def test_kth_from_end_needs_all_subsets():
    result, receipt = nfa_to_dfa(kth_from_end_nfa(3))
    assert receipt.input_size == 4
    assert receipt.output_size == 8
    assert receipt.bound == "2^n"
    assert receipt.bound_value == 16
    assert size_of(dfa_minimize(result)) == 8


def test_minimization_merges_equivalent_states():
    redundant = dfa(
        ["x", "y", "z"],
        {("x", "a"): "y", ("x", "b"): "x", ("y", "a"): "z", ("y", "b"): "y", ("z", "a"): "y", ("z", "b"): "z"},
        ["x", "z"],
    )
    minimal = dfa_minimize(redundant)
    assert size_of(minimal) == 2
    assert dfa_equivalent(minimal, redundant)
    assert dfa_minimize(minimal) == minimal
    assert minimal == dfa_minimize(count_a(2))


def test_canonical_dfa_renames_breadth_first():
    renamed = canonical_dfa(count_a(3), prefix="s")
    assert renamed.states == ("s0", "s1", "s2")
    assert renamed.start == "s0"


def test_difference_is_the_least_word():
    assert dfa_difference(count_a(2), count_a(3)) == ("a", "a")
    assert dfa_difference(count_a(2), count_a(2)) is None
    assert dfa_difference(count_a(2), dfa_complement(count_a(2))) == ()


def test_products():
    both, receipt = dfa_product(count_a(2), count_a(3), "and")
    assert size_of(both) == 6
    assert receipt.bound_value == 6
    assert receipt.bound_satisfied
    assert dfa_equivalent(both, count_a(6))

    either, _ = dfa_product(count_a(2), count_a(2), "or")
    assert size_of(either) == 2
    assert dfa_equivalent(either, count_a(2))


def test_product_needs_the_same_alphabet():
    unary = dfa(["u"], {("u", "a"): "u"}, ["u"], alphabet=("a",))
    with pytest.raises(DomainError):
        dfa_product(count_a(2), unary)


def test_dfa_to_cfg():
    grammar = dfa_to_cfg(count_a(3))
    assert validate(grammar) == []
    for word in words("ab", 5):
        assert member(grammar, word) == (word.count("a") % 3 == 0)


def test_nfa_trim_drops_useless_states():
    nfa = Nfa(
        states=("p", "q", "dead", "island"),
        alphabet=("a",),
        transitions=(
            NfaTransition(source="p", symbol="a", target="q"),
            NfaTransition(source="p", symbol="a", target="dead"),
            NfaTransition(source="island", symbol="a", target="q"),
        ),
        start="p",
        accepting=("q",),
    )
    trimmed = nfa_trim(nfa)
    assert trimmed.states == ("p", "q")
    assert len(trimmed.transitions) == 1


def test_cfg_to_pda_and_back():
    grammar = parse_grammar("S -> a S b | _eps_")
    pda, receipt = cfg_to_pda(grammar)
    assert receipt.output_size == 7
    assert receipt.bound_value == 1 + 2 + 4
    assert receipt.bound_satisfied
    back, back_receipt = pda_to_cfg(pda)
    assert back_receipt.bound_satisfied
    for word in words("ab", 6):
        expected = member(grammar, word)
        assert member(pda, word) == expected, word
        assert member(back, word) == expected, word


def test_pda_to_cfg_of_an_empty_language():
    t = PdaTransition
    stuck = Dpda(
        states=("p", "f"),
        input_alphabet=("a",),
        stack_alphabet=("Z",),
        transitions=(t(source="p", symbol="a", pop="Z", target="p", push=("Z",)),),
        start="p",
        initial_stack_symbol="Z",
        accepting=("f",),
    )
    grammar, _ = pda_to_cfg(stuck)
    assert grammar.nonterminals == ("S",)
    assert not any(member(grammar, word) for word in words("a", 4))


def test_dpda_complement():
    original = an_bn_dpda()
    complement, receipt = dpda_complement(original)
    assert receipt.bound == "n + 3"
    assert receipt.output_size == receipt.input_size + 3
    for word in words("ab", 6):
        assert member(complement, word) != member(original, word), word


def test_dpda_complement_handles_divergent_epsilon_chains():
    t = PdaTransition
    looping = Dpda(
        states=("p", "q"),
        input_alphabet=("a",),
        stack_alphabet=("Z",),
        transitions=(
            t(source="p", symbol="a", pop="Z", target="q", push=("Z",)),
            t(source="q", symbol=None, pop="Z", target="q", push=("Z", "Z")),
        ),
        start="p",
        initial_stack_symbol="Z",
        accepting=("q",),
    )
    assert epsilon_outcomes(looping) == {("q", "Z"): "diverges"}
    complement, receipt = dpda_complement(looping)
    assert receipt.notes == ["1 divergent ε-chains redirected"]
    for word in words("a", 4):
        assert member(complement, word) != member(looping, word), word


def test_cfg_trim():
    grammar = parse_grammar("S -> a | A B\nA -> a A\nB -> b\nC -> c\n")
    trimmed = cfg_trim(grammar)
    assert trimmed.nonterminals == ("S",)
    assert [str(r) for r in trimmed.rules] == ["S -> a"]
