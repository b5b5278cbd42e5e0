"""Decidable membership for every device kind.

``compile_recognizer`` prepares a device once (ε-closures, chart-parser
tables, the PDA's triple grammar, ...) so that sweeps over many words do not
redo that work; ``member`` keeps a small identity-keyed cache of compiled
recognizers for one-off calls.
"""

from collections import Counter, OrderedDict, deque
from typing import Deque, Dict, FrozenSet, Iterable, List, Optional, Protocol, Sequence, Set, Tuple, Union

from succinctness_workbench.devices import (
    Cfg,
    Csg,
    Dfa,
    Dpda,
    Language,
    Nfa,
    Pda,
    PdaTransition,
    PredicateOracle,
    Word,
    alphabet_of,
    as_word,
    ensure_valid,
)
from succinctness_workbench.earley import EarleyRecognizer
from succinctness_workbench.errors import BudgetExceededError, WordAlphabetError

DEFAULT_CSG_NODE_BUDGET = 500_000


class Recognizer(Protocol):
    def recognize(self, word: Sequence[str]) -> bool: ...


class DfaRecognizer:
    def __init__(self, dfa: Dfa):
        self._table = dfa.table()
        self._start = dfa.start
        self._accepting = frozenset(dfa.accepting)

    def recognize(self, word: Sequence[str]) -> bool:
        state = self._start
        for symbol in word:
            state = self._table[(state, symbol)]
        return state in self._accepting


def epsilon_closure(moves: Dict[Tuple[str, Optional[str]], Set[str]], states: Iterable[str]) -> FrozenSet[str]:
    """All states reachable from ``states`` through ε-moves."""
    closure = set(states)
    stack = list(closure)
    while stack:
        state = stack.pop()
        for target in moves.get((state, None), ()):
            if target not in closure:
                closure.add(target)
                stack.append(target)
    return frozenset(closure)


def nfa_moves(nfa: Nfa) -> Dict[Tuple[str, Optional[str]], Set[str]]:
    moves: Dict[Tuple[str, Optional[str]], Set[str]] = {}
    for t in nfa.transitions:
        moves.setdefault((t.source, t.symbol), set()).add(t.target)
    return moves


class NfaRecognizer:
    def __init__(self, nfa: Nfa):
        self._moves = nfa_moves(nfa)
        self._start = epsilon_closure(self._moves, [nfa.start])
        self._accepting = frozenset(nfa.accepting)

    def recognize(self, word: Sequence[str]) -> bool:
        current = self._start
        for symbol in word:
            step = set()
            for state in current:
                step.update(self._moves.get((state, symbol), ()))
            if not step:
                return False
            current = epsilon_closure(self._moves, step)
        return bool(current & self._accepting)


class PdaRecognizer:
    """Nondeterministic PDA membership through its triple grammar."""

    def __init__(self, pda: Pda):
        from succinctness_workbench.transforms import pda_to_cfg

        grammar, _ = pda_to_cfg(pda)
        self.grammar = grammar
        self._parser = EarleyRecognizer(grammar)

    def recognize(self, word: Sequence[str]) -> bool:
        return self._parser.recognize(word)


DpdaMoves = Dict[Tuple[str, Optional[str], str], PdaTransition]


def follow_epsilon(moves: DpdaMoves, state: str, stack: List[str]) -> Tuple[str, str]:
    """Run ε-moves from ``state`` until the machine must read or cannot go on.

    ``stack`` is modified in place (top is the last element).  Returns
    ``(outcome, state)`` with outcome ``"reads"`` when no ε-move applies,
    ``"empty"`` when the stack ran out, or ``"diverges"`` when the chain came
    back to the same (state, stack top) without the stack dropping below the
    height of the earlier visit, which would repeat forever.
    """
    watch: List[Tuple[int, str, str]] = []
    watched: Counter = Counter()
    while stack:
        top = stack[-1]
        move = moves.get((state, None, top))
        if move is None:
            return "reads", state
        height = len(stack)
        while watch and watch[-1][0] > height:
            _, old_state, old_top = watch.pop()
            watched[(old_state, old_top)] -= 1
        if watched[(state, top)] > 0:
            return "diverges", state
        watch.append((height, state, top))
        watched[(state, top)] += 1
        stack.pop()
        stack.extend(reversed(move.push))
        state = move.target
    return "empty", state


class DpdaRecognizer:
    """Direct deterministic simulation; a divergent ε-chain rejects the word."""

    def __init__(self, dpda: Dpda):
        self._moves = dpda.moves()
        self._start = dpda.start
        self._bottom = dpda.initial_stack_symbol
        self._accepting = frozenset(dpda.accepting)

    def run(self, word: Sequence[str]) -> Tuple[bool, str]:
        """Simulate and return (accepted, how the run ended)."""
        moves = self._moves
        state = self._start
        stack = [self._bottom]
        position = 0
        while True:
            outcome, state = follow_epsilon(moves, state, stack)
            if outcome == "diverges":
                return False, "epsilon-loop"
            if outcome == "empty":
                return position == len(word) and state in self._accepting, "empty-stack"
            if position == len(word):
                return state in self._accepting, "end-of-input"
            move = moves.get((state, word[position], stack[-1]))
            if move is None:
                return False, "stuck"
            position += 1
            stack.pop()
            stack.extend(reversed(move.push))
            state = move.target

    def recognize(self, word: Sequence[str]) -> bool:
        return self.run(word)[0]


class CsgRecognizer:
    """Breadth-first search over sentential forms no longer than the word.

    Noncontracting rules never shorten a form, so the search space is finite.
    Once a search for length ``n`` has been exhausted, every terminal word of
    length up to ``n`` is known and later queries are answered by lookup.
    """

    def __init__(self, csg: Csg, node_budget: int = DEFAULT_CSG_NODE_BUDGET):
        self.node_budget = node_budget
        self._start = csg.start
        self._terminals = frozenset(csg.terminals)
        self._erases_start = any(r.lhs == (csg.start,) and not r.rhs for r in csg.rules)
        self._by_first: Dict[str, List[Tuple[Tuple[str, ...], Tuple[str, ...]]]] = {}
        for rule in csg.rules:
            self._by_first.setdefault(rule.lhs[0], []).append((rule.lhs, rule.rhs))
        self._known_length = 0
        self._known_words: Set[Word] = set()
        self.nodes_explored = 0

    def successors(self, form: Word, limit: int) -> Iterable[Word]:
        for i, symbol in enumerate(form):
            for lhs, rhs in self._by_first.get(symbol, ()):
                width = len(lhs)
                if form[i : i + width] != lhs:
                    continue
                if len(form) - width + len(rhs) > limit:
                    continue
                yield form[:i] + rhs + form[i + width :]

    def recognize(self, word: Sequence[str]) -> bool:
        target = tuple(word)
        n = len(target)
        if n == 0:
            return self._erases_start
        if n <= self._known_length:
            return target in self._known_words

        start: Word = (self._start,)
        seen: Set[Word] = {start}
        queue: Deque[Word] = deque([start])
        while queue:
            form = queue.popleft()
            if form == target:
                return True
            for successor in self.successors(form, n):
                if successor not in seen:
                    seen.add(successor)
                    queue.append(successor)
                    if len(seen) > self.node_budget:
                        raise BudgetExceededError("sentential-form search", self.node_budget)
        self.nodes_explored = len(seen)
        self._known_length = n
        self._known_words = {
            form for form in seen if all(symbol in self._terminals for symbol in form)
        }
        return False


class OracleRecognizer:
    def __init__(self, oracle: PredicateOracle):
        self._oracle = oracle

    def recognize(self, word: Sequence[str]) -> bool:
        return self._oracle(word)


def compile_recognizer(
    device: Language, csg_node_budget: int = DEFAULT_CSG_NODE_BUDGET
) -> Recognizer:
    """Prepare a membership engine for a device or oracle."""
    if isinstance(device, PredicateOracle):
        return OracleRecognizer(device)
    ensure_valid(device)
    if isinstance(device, Dfa):
        return DfaRecognizer(device)
    if isinstance(device, Nfa):
        return NfaRecognizer(device)
    if isinstance(device, Cfg):
        return EarleyRecognizer(device)
    if isinstance(device, Csg):
        return CsgRecognizer(device, node_budget=csg_node_budget)
    if isinstance(device, Dpda):
        return DpdaRecognizer(device)
    if isinstance(device, Pda):
        return PdaRecognizer(device)
    raise TypeError(f"not a device: {type(device).__name__}")


_CACHE_SIZE = 64
_compiled: "OrderedDict[Tuple[int, int], Tuple[Language, Recognizer]]" = OrderedDict()


def recognizer_for(device: Language, csg_node_budget: int = DEFAULT_CSG_NODE_BUDGET) -> Recognizer:
    """Compiled recognizer for ``device``, cached by object identity."""
    key = (id(device), csg_node_budget)
    entry = _compiled.get(key)
    if entry is not None and entry[0] is device:
        _compiled.move_to_end(key)
        return entry[1]
    recognizer = compile_recognizer(device, csg_node_budget=csg_node_budget)
    _compiled[key] = (device, recognizer)
    if len(_compiled) > _CACHE_SIZE:
        _compiled.popitem(last=False)
    return recognizer


def check_alphabet(device: Language, word: Word) -> None:
    alphabet = set(alphabet_of(device))
    for symbol in word:
        if symbol not in alphabet:
            raise WordAlphabetError(symbol, alphabet)


def member(
    device: Language,
    word: Union[str, Sequence[str]],
    csg_node_budget: int = DEFAULT_CSG_NODE_BUDGET,
) -> bool:
    """True iff ``word`` is in the language of ``device``.

    Raises WordAlphabetError for foreign symbols and BudgetExceededError when
    a CSG search outgrows its node budget.
    """
    symbols = as_word(word)
    check_alphabet(device, symbols)
    return recognizer_for(device, csg_node_budget).recognize(symbols)


def accepts(
    device: Language,
    word: Union[str, Sequence[str]],
    csg_node_budget: int = DEFAULT_CSG_NODE_BUDGET,
) -> bool:
    """Like ``member`` but a word with foreign symbols is simply not accepted."""
    symbols = as_word(word)
    alphabet = set(alphabet_of(device))
    if any(symbol not in alphabet for symbol in symbols):
        return False
    return recognizer_for(device, csg_node_budget).recognize(symbols)
