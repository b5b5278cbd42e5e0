"""Tests for membership across device kinds."""

import itertools
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

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
    Rule,
    nfa_view,
)
from succinctness_workbench.earley import EarleyRecognizer, nullable_nonterminals
from succinctness_workbench.errors import BudgetExceededError, DeviceValidationError, WordAlphabetError
from succinctness_workbench.formats import parse_grammar
from succinctness_workbench.membership import (
    CsgRecognizer,
    DpdaRecognizer,
    accepts,
    compile_recognizer,
    follow_epsilon,
    member,
    recognizer_for,
)


def balanced_cfg():
    """Balanced parentheses written with a and b, ε-rule and unit rule included."""
    return parse_grammar(
        """
        S -> T
        T -> a T b T | _eps_
        """
    )


def is_balanced(word):
    depth = 0
    for symbol in word:
        depth += 1 if symbol == "a" else -1
        if depth < 0:
            return False
    return depth == 0


def an_bn_dpda():
    """a^n b^n for n >= 1, accepted by final state."""
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


@given(st.lists(st.sampled_from("ab"), max_size=10))
def test_earley_matches_the_balance_predicate(symbols):
    assert member(balanced_cfg(), symbols) == is_balanced(symbols)


NAMES = ("S", "A", "B", "C")


@st.composite
def small_grammars(draw):
    """Random grammars over {a, b} with at most four nonterminals.

    Right-hand sides are nonempty; when ε is in the language it comes from a
    fresh start symbol ``Z -> S | ε`` that no rule mentions.
    """
    erasing = draw(st.booleans())
    names = NAMES[: draw(st.integers(1, 3 if erasing else 4))]
    rhs = st.lists(st.sampled_from(names + ("a", "b")), min_size=1, max_size=3).map(tuple)
    pairs = draw(st.lists(st.tuples(st.sampled_from(names), rhs), min_size=1, max_size=8, unique=True))
    rules = [Rule(lhs=lhs, rhs=body) for lhs, body in pairs]
    if erasing:
        rules += [Rule(lhs="Z", rhs=("S",)), Rule(lhs="Z")]
        return Cfg(nonterminals=names + ("Z",), terminals=("a", "b"), rules=tuple(rules), start="Z")
    return Cfg(nonterminals=names, terminals=("a", "b"), rules=tuple(rules), start="S")


def leftmost_derivations(grammar, max_length):
    """Terminal words reached by always rewriting the leftmost nonterminal.

    No rule shortens a form except ``Z -> ε`` on the start symbol, so forms
    longer than ``max_length`` can be dropped.
    """
    nonterminals = set(grammar.nonterminals)
    bodies = grammar.rules_for()
    start = (grammar.start,)
    seen = {start}
    queue = deque([start])
    derived = set()
    while queue:
        form = queue.popleft()
        position = next((i for i, symbol in enumerate(form) if symbol in nonterminals), None)
        if position is None:
            derived.add(form)
            continue
        for body in bodies[form[position]]:
            successor = form[:position] + body + form[position + 1 :]
            if len(successor) <= max_length and successor not in seen:
                seen.add(successor)
                queue.append(successor)
    return derived


@settings(max_examples=60, deadline=None)
@given(small_grammars())
def test_earley_matches_leftmost_derivations(grammar):
    derived = leftmost_derivations(grammar, 6)
    for length in range(7):
        for word in itertools.product("ab", repeat=length):
            assert member(grammar, word) == (word in derived), word


@settings(max_examples=30, deadline=None)
@given(small_grammars())
def test_members_lists_what_recognize_accepts(grammar):
    recognizer = EarleyRecognizer(grammar)
    listed = list(recognizer.members(("a", "b"), 5))
    assert len(listed) == len(set(listed))
    expected = {w for n in range(6) for w in itertools.product("ab", repeat=n) if recognizer.recognize(w)}
    assert set(listed) == expected


@st.composite
def small_dfas(draw):
    count = draw(st.integers(1, 4))
    states = tuple(f"q{i}" for i in range(count))
    transitions = tuple(
        DfaTransition(source=q, symbol=a, target=draw(st.sampled_from(states))) for q in states for a in "ab"
    )
    accepting = tuple(q for q in states if draw(st.booleans()))
    return Dfa(states=states, alphabet=("a", "b"), transitions=transitions, start="q0", accepting=accepting)


@given(small_dfas(), st.lists(st.sampled_from("ab"), max_size=8))
def test_nfa_view_keeps_the_language(dfa, symbols):
    assert member(nfa_view(dfa), symbols) == member(dfa, symbols)


def test_nullable_nonterminals():
    assert nullable_nonterminals(balanced_cfg()) == {"S", "T"}


def test_earley_handles_left_recursion():
    grammar = parse_grammar("S -> S a | a")
    recognizer = EarleyRecognizer(grammar)
    assert recognizer.recognize(("a",) * 5)
    assert not recognizer.recognize(())


def test_nfa_with_epsilon_moves():
    nfa = Nfa(
        states=("p", "q", "r"),
        alphabet=("a", "b"),
        transitions=(
            NfaTransition(source="p", symbol=None, target="q"),
            NfaTransition(source="q", symbol="b", target="r"),
            NfaTransition(source="p", symbol="a", target="p"),
        ),
        start="p",
        accepting=("r",),
    )
    assert member(nfa, "aab")
    assert member(nfa, "b")
    assert not member(nfa, "ba")
    assert not member(nfa, "")


def test_dpda_simulation():
    dpda = an_bn_dpda()
    assert member(dpda, "ab")
    assert member(dpda, "aaabbb")
    assert not member(dpda, "aab")
    assert not member(dpda, "abab")
    assert not member(dpda, "")


def test_dpda_run_reports_how_it_ended():
    recognizer = DpdaRecognizer(an_bn_dpda())
    assert recognizer.run(("a", "b")) == (True, "end-of-input")
    assert recognizer.run(("b",)) == (False, "stuck")


def test_follow_epsilon_detects_divergence():
    moves = {("p", None, "Z"): PdaTransition(source="p", symbol=None, pop="Z", target="p", push=("Z",))}
    assert follow_epsilon(moves, "p", ["Z"])[0] == "diverges"
    growing = {("p", None, "Z"): PdaTransition(source="p", symbol=None, pop="Z", target="p", push=("Z", "Z"))}
    assert follow_epsilon(growing, "p", ["Z"])[0] == "diverges"
    popping = {("p", None, "Z"): PdaTransition(source="p", symbol=None, pop="Z", target="q")}
    assert follow_epsilon(popping, "p", ["Z"]) == ("empty", "q")
    assert follow_epsilon(popping, "p", ["Z", "Z"]) == ("reads", "q")


def test_nondeterministic_pda_goes_through_its_grammar():
    """Even-length palindromes over {a, b}: guess the middle."""
    t = PdaTransition
    transitions = [t(source="p", symbol=None, pop=x, target="q", push=(x,)) for x in ("Z", "A", "B")]
    for symbol, mark in (("a", "A"), ("b", "B")):
        for top in ("Z", "A", "B"):
            transitions.append(t(source="p", symbol=symbol, pop=top, target="p", push=(mark, top)))
        transitions.append(t(source="q", symbol=symbol, pop=mark, target="q"))
    transitions.append(t(source="q", symbol=None, pop="Z", target="f", push=("Z",)))
    pda = Pda(
        states=("p", "q", "f"),
        input_alphabet=("a", "b"),
        stack_alphabet=("Z", "A", "B"),
        transitions=tuple(transitions),
        start="p",
        initial_stack_symbol="Z",
        accepting=("f",),
    )
    assert member(pda, "")
    assert member(pda, "abba")
    assert member(pda, "baab")
    assert not member(pda, "aba")
    assert not member(pda, "ab")


def test_csg_membership_and_cache():
    csg = Csg(
        nonterminals=("S", "B"),
        terminals=("a", "b"),
        rules=(
            CsgRule(lhs=("S",), rhs=("a", "B")),
            CsgRule(lhs=("a", "B"), rhs=("a", "b")),
        ),
        start="S",
    )
    recognizer = CsgRecognizer(csg)
    assert recognizer.recognize(("a", "b"))
    assert not recognizer.recognize(("b", "a"))
    # a^1 b^1 is the only word; the exhausted length-2 search answers by lookup
    assert not recognizer.recognize(("a",))
    assert not recognizer.recognize(())


def test_csg_budget():
    csg = Csg(
        nonterminals=("S",),
        terminals=("a", "b"),
        rules=(CsgRule(lhs=("S",), rhs=("a", "S")), CsgRule(lhs=("S",), rhs=("b", "S")), CsgRule(lhs=("S",), rhs=("a",))),
        start="S",
    )
    with pytest.raises(BudgetExceededError):
        member(csg, "b" * 12, csg_node_budget=50)


def test_a_larger_csg_budget_keeps_every_answer():
    """a^n b^n c^n: an answer found under a small budget stands under a large one."""
    csg = Csg(
        nonterminals=("S", "B", "C"),
        terminals=("a", "b", "c"),
        rules=(
            CsgRule(lhs=("S",), rhs=("a", "S", "B", "C")),
            CsgRule(lhs=("S",), rhs=("a", "B", "C")),
            CsgRule(lhs=("C", "B"), rhs=("B", "C")),
            CsgRule(lhs=("a", "B"), rhs=("a", "b")),
            CsgRule(lhs=("b", "B"), rhs=("b", "b")),
            CsgRule(lhs=("b", "C"), rhs=("b", "c")),
            CsgRule(lhs=("c", "C"), rhs=("c", "c")),
        ),
        start="S",
    )
    small = CsgRecognizer(csg, node_budget=25)
    large = CsgRecognizer(csg, node_budget=200_000)
    answered = 0
    for length in range(7):
        for word in itertools.product("abc", repeat=length):
            expected = large.recognize(word)
            n = length // 3
            assert expected == (length > 0 and length % 3 == 0 and word == ("a",) * n + ("b",) * n + ("c",) * n)
            try:
                found = small.recognize(word)
            except BudgetExceededError:
                continue
            answered += 1
            assert found == expected, word
    assert answered > 0
    assert large.recognize(("a", "a", "b", "b", "c", "c"))


def test_member_rejects_foreign_symbols():
    with pytest.raises(WordAlphabetError) as excinfo:
        member(balanced_cfg(), "ac")
    assert excinfo.value.symbol == "c"
    assert accepts(balanced_cfg(), "ac") is False


def test_invalid_device_is_refused():
    broken = Cfg(nonterminals=("S",), terminals=("a",), rules=(Rule(lhs="S", rhs=("X",)),), start="S")
    with pytest.raises(DeviceValidationError):
        compile_recognizer(broken)


def test_recognizer_cache_is_keyed_by_identity():
    grammar = balanced_cfg()
    assert recognizer_for(grammar) is recognizer_for(grammar)
