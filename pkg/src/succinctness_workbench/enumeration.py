"""Canonical size enumerations of DFAs, NFAs and CNF grammars.

Each class is listed in nondecreasing size, and within one size in a fixed
order of its integer codes, so two runs always produce the same sequence.
Devices that differ only by a renaming of states (other than the start
state) or of nonterminals (other than the start symbol) are emitted once.

- DFA: total transition tables in breadth-first canonical form, then every
  accepting set.
- NFA: no ε-moves, start state 0; ordered by accepting mask, then transition
  mask.
- CNF-CFG: rule sets of ``A -> a`` and ``A -> B C`` rules in which every
  nonterminal occurs.  With one nonterminal over ``{a}`` these are
  ``{S -> a}``, ``{S -> S S}`` and both.
"""

from itertools import permutations
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from succinctness_workbench.devices import Cfg, Device, Dfa, DfaTransition, Nfa, NfaTransition, Rule, fresh_symbol
from succinctness_workbench.errors import BudgetExceededError, DomainError
from succinctness_workbench.models import SizeEnumeration
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

DfaTable = Tuple[int, ...]


class CandidateBudget:
    """Counts generated candidates and raises once the limit is passed."""

    def __init__(self, limit: Optional[int], what: str = "enumeration"):
        if limit is not None and limit < 1:
            raise DomainError(f"budget must be positive, got {limit}")
        self.limit = limit
        self.what = what
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceededError(self.what, self.limit)


def dfa_tables(states: int, symbols: int) -> Iterator[DfaTable]:
    """Transition tables whose breadth-first numbering is the identity.

    Slot ``i * symbols + j`` holds the target of state i on symbol j.  A
    target may be at most one past the largest state seen so far, and every
    state must have been reached before its own slots are filled.
    """
    slots = states * symbols
    table = [0] * slots

    def fill(slot: int, reached: int) -> Iterator[DfaTable]:
        if slot == slots:
            if reached == states - 1:
                yield tuple(table)
            return
        if slot % symbols == 0 and slot // symbols > reached:
            return
        for target in range(min(reached + 1, states - 1) + 1):
            table[slot] = target
            yield from fill(slot + 1, max(reached, target))

    yield from fill(0, 0)


class NfaCode(NamedTuple):
    """An ε-free NFA over states 0..states-1 with start 0, as bit masks.

    Bit ``(i * symbols + j) * states + t`` of ``moves`` is a move from i to t
    on symbol j.
    """

    states: int
    symbols: int
    accepting: int
    moves: int

    def successors(self, state: int, symbol: int) -> int:
        offset = (state * self.symbols + symbol) * self.states
        return (self.moves >> offset) & ((1 << self.states) - 1)

    def accepts(self, word: Sequence[int]) -> bool:
        current = 1
        for symbol in word:
            following = 0
            for state in range(self.states):
                if current >> state & 1:
                    following |= self.successors(state, symbol)
            if not following:
                return False
            current = following
        return bool(current & self.accepting)


def _renamings(count: int) -> List[Tuple[int, ...]]:
    """Every permutation that fixes 0, except the identity."""
    result = []
    for rest in permutations(range(1, count)):
        perm = (0,) + rest
        if perm != tuple(range(count)):
            result.append(perm)
    return result


def _permute_nfa(code: NfaCode, perm: Tuple[int, ...]) -> Tuple[int, int]:
    k, m = code.states, code.symbols
    accepting = 0
    for state in range(k):
        if code.accepting >> state & 1:
            accepting |= 1 << perm[state]
    moves = 0
    for state in range(k):
        for symbol in range(m):
            targets = code.successors(state, symbol)
            for target in range(k):
                if targets >> target & 1:
                    moves |= 1 << ((perm[state] * m + symbol) * k + perm[target])
    return accepting, moves


def nfa_codes(states: int, symbols: int, budget: Optional[CandidateBudget] = None) -> Iterator[NfaCode]:
    """Canonical NFA codes of one size: the least (accepting, moves) pair among all renamings."""
    renamings = _renamings(states)
    move_bits = states * symbols * states
    for accepting in range(1 << states):
        for moves in range(1 << move_bits):
            if budget is not None:
                budget.spend()
            code = NfaCode(states, symbols, accepting, moves)
            if all(_permute_nfa(code, perm) >= (accepting, moves) for perm in renamings):
                yield code


class CnfLayout(NamedTuple):
    """Bit positions of the possible rules of a CNF grammar.

    Terminal rules ``A -> a`` come first, in (A, a) order, then binary rules
    ``A -> B C`` in (A, B, C) order.
    """

    nonterminals: int
    symbols: int

    @property
    def width(self) -> int:
        return self.nonterminals * self.symbols + self.nonterminals**3

    def rule(self, bit: int) -> Tuple[int, Tuple[Tuple[str, int], ...]]:
        k, m = self.nonterminals, self.symbols
        if bit < k * m:
            return bit // m, (("t", bit % m),)
        bit -= k * m
        return bit // (k * k), (("n", bit // k % k), ("n", bit % k))

    def bit(self, lhs: int, rhs: Tuple[Tuple[str, int], ...]) -> int:
        k, m = self.nonterminals, self.symbols
        if rhs[0][0] == "t":
            return lhs * m + rhs[0][1]
        return k * m + (lhs * k + rhs[0][1]) * k + rhs[1][1]


def _cnf_occurrences(layout: CnfLayout, mask: int) -> int:
    seen = 0
    for bit in range(layout.width):
        if mask >> bit & 1:
            lhs, rhs = layout.rule(bit)
            seen |= 1 << lhs
            for kind, index in rhs:
                if kind == "n":
                    seen |= 1 << index
    return seen


def _permute_cnf(layout: CnfLayout, mask: int, perm: Tuple[int, ...]) -> int:
    result = 0
    for bit in range(layout.width):
        if mask >> bit & 1:
            lhs, rhs = layout.rule(bit)
            renamed = tuple((kind, perm[index] if kind == "n" else index) for kind, index in rhs)
            result |= 1 << layout.bit(perm[lhs], renamed)
    return result


def cnf_masks(nonterminals: int, symbols: int, budget: Optional[CandidateBudget] = None) -> Iterator[int]:
    """Canonical rule masks of one size in ascending order."""
    layout = CnfLayout(nonterminals, symbols)
    every = (1 << nonterminals) - 1
    renamings = _renamings(nonterminals)
    for mask in range(1, 1 << layout.width):
        if budget is not None:
            budget.spend()
        if _cnf_occurrences(layout, mask) != every:
            continue
        if all(_permute_cnf(layout, mask, perm) >= mask for perm in renamings):
            yield mask


def dfa_device(states: int, alphabet: Sequence[str], table: DfaTable, accepting: int) -> Dfa:
    names = [f"q{i}" for i in range(states)]
    transitions = tuple(
        DfaTransition(source=names[i], symbol=a, target=names[table[i * len(alphabet) + j]])
        for i in range(states)
        for j, a in enumerate(alphabet)
    )
    return Dfa(
        states=tuple(names),
        alphabet=tuple(alphabet),
        transitions=transitions,
        start=names[0],
        accepting=tuple(names[i] for i in range(states) if accepting >> i & 1),
    )


def nfa_device(code: NfaCode, alphabet: Sequence[str]) -> Nfa:
    names = [f"q{i}" for i in range(code.states)]
    transitions = tuple(
        NfaTransition(source=names[i], symbol=a, target=names[t])
        for i in range(code.states)
        for j, a in enumerate(alphabet)
        for t in range(code.states)
        if code.successors(i, j) >> t & 1
    )
    return Nfa(
        states=tuple(names),
        alphabet=tuple(alphabet),
        transitions=transitions,
        start=names[0],
        accepting=tuple(names[i] for i in range(code.states) if code.accepting >> i & 1),
    )


def cnf_names(nonterminals: int, alphabet: Sequence[str]) -> List[str]:
    """S, A, B, ... avoiding the terminal names."""
    names: List[str] = []
    taken = set(alphabet)
    for base in ["S"] + [chr(c) for c in range(ord("A"), ord("Z") + 1) if chr(c) != "S"]:
        if len(names) == nonterminals:
            break
        name = fresh_symbol(base, taken)
        taken.add(name)
        names.append(name)
    index = 1
    while len(names) < nonterminals:
        name = fresh_symbol(f"N{index}", taken)
        taken.add(name)
        names.append(name)
        index += 1
    return names


def cnf_device(nonterminals: int, alphabet: Sequence[str], mask: int) -> Cfg:
    layout = CnfLayout(nonterminals, len(alphabet))
    names = cnf_names(nonterminals, alphabet)
    rules = []
    for bit in range(layout.width):
        if mask >> bit & 1:
            lhs, rhs = layout.rule(bit)
            body = tuple(alphabet[i] if kind == "t" else names[i] for kind, i in rhs)
            rules.append(Rule(lhs=names[lhs], rhs=body))
    return Cfg(nonterminals=tuple(names), terminals=tuple(alphabet), rules=tuple(rules), start=names[0])


def devices_of_size(
    enumeration: SizeEnumeration, size: int, budget: Optional[CandidateBudget] = None
) -> Iterator[Device]:
    """Every canonical device of exactly ``size`` in enumeration order."""
    alphabet = tuple(sorted(enumeration.alphabet))
    m = len(alphabet)
    if enumeration.device_class == "dfa":
        for table in dfa_tables(size, m):
            for accepting in range(1 << size):
                if budget is not None:
                    budget.spend()
                yield dfa_device(size, alphabet, table, accepting)
    elif enumeration.device_class == "nfa":
        for code in nfa_codes(size, m, budget):
            yield nfa_device(code, alphabet)
    else:
        for mask in cnf_masks(size, m, budget):
            yield cnf_device(size, alphabet, mask)


def iter_devices(
    enumeration: SizeEnumeration,
    max_size: Optional[int] = None,
    budget: Optional[int] = None,
) -> Iterator[Device]:
    """The enumeration from size 1 upward, optionally stopping after ``max_size``."""
    counter = CandidateBudget(budget, f"{enumeration.device_class} enumeration")
    size = 1
    while max_size is None or size <= max_size:
        logger.debug(f"enumerating {enumeration.device_class} devices of size {size}")
        yield from devices_of_size(enumeration, size, counter)
        size += 1


def enumerate_devices(enumeration: SizeEnumeration, count: int, budget: Optional[int] = None) -> List[Device]:
    """The first ``count`` devices of the enumeration.

    Raises:
        DomainError: count < 1
        BudgetExceededError: more than ``budget`` candidates were generated first
    """
    if count < 1:
        raise DomainError(f"count must be at least 1, got {count}")
    result: List[Device] = []
    for device in iter_devices(enumeration, budget=budget):
        result.append(device)
        if len(result) == count:
            break
    return result
