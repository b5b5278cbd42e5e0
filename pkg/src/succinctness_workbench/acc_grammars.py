"""Context-free grammars around encoded Turing machine computations.

The complement of ACC is a union of three defect families:

- shape defects, a regular language: the word is not ``$``-delimited, has an
  odd number of blocks or fewer than two, some block is not a
  configuration, the first block is not a start configuration, the last is
  not accepting, a configuration halts early, or the width is not canonical;
- length defects: two blocks of a checked pair differ in length, matched
  across their common separator;
- step defects: in a checked pair of equal-length blocks some cell of the
  second block is not what the successor rule computes from the cell's
  window of three in the first.  Every second block is reversed, so cell j
  of one configuration and cell j of the next sit symmetrically around the
  separator and a nested rule pairs them up.

ODDACC checks only the pairs (C1, C2), (C3, C4), ... and EVENACC only
(C2, C3), (C4, C5), ...; each is a sequence of independently generated pair
blocks, so both have positive CFGs as well.
"""

from collections import deque
from typing import Callable, Dict, Hashable, List, Literal, Optional, Sequence, Tuple

from succinctness_workbench.constructions import cfg_union
from succinctness_workbench.devices import Cfg, Dfa, DfaTransition, Rule, as_word
from succinctness_workbench.errors import UnsupportedError
from succinctness_workbench.tm_encodings import (
    SEPARATOR,
    TmMachine,
    encoding_alphabet,
    ensure_machine,
    initial_config,
    parse_head,
    successor_cell,
)
from succinctness_workbench.transforms import canonical_dfa, cfg_trim, dfa_complement, dfa_to_cfg
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

Variant = Literal["acc", "oddacc", "evenacc"]
Polarity = Literal["complement", "positive-pair"]
Category = Literal["nonhalt", "final", "free"]
FilterState = Hashable


class InitialFilter:
    """Recognizes start configurations symbol by symbol.

    With an input ``x`` the block must be ``[q0:x1] x2 ... xn`` followed by
    any number of blanks; without one, ``[q0:c]`` followed by input symbols
    and then blanks, or ``[q0:_]`` followed by blanks only.  The state also
    records whether a plain blank cell has been read.
    """

    def __init__(self, machine: TmMachine, x: Optional[Sequence[str]]):
        self.machine = machine
        self.base = initial_config(machine, x) if x is not None else None

    def start(self) -> FilterState:
        return 0 if self.base is not None else "first"

    def step(self, state: FilterState, symbol: str) -> Optional[FilterState]:
        m = self.machine
        if self.base is not None:
            if state < len(self.base):  # type: ignore[operator]
                return state + 1 if symbol == self.base[state] else None  # type: ignore[operator,index]
            return len(self.base) + 1 if symbol == m.blank else None
        if state == "first":
            head = parse_head(symbol)
            if head is None or head[0] != m.start:
                return None
            if head[1] == m.blank:
                return "blank-head"
            return "input" if head[1] in m.input_alphabet else None
        if state == "input" and symbol in m.input_alphabet:
            return "input"
        if state in ("input", "blank-head", "padding") and symbol == m.blank:
            return "padding"
        return None

    def accepting(self, state: FilterState) -> bool:
        if self.base is not None:
            return state >= len(self.base)  # type: ignore[operator]
        return state != "first"

    def blank_seen(self, state: FilterState) -> bool:
        if self.base is not None:
            return state > len(self.base)  # type: ignore[operator]
        return state == "padding"


def _crawl_dfa(alphabet: Sequence[str], start: Hashable, step: Callable, accepting: Callable) -> Dfa:
    """Breadth-first DFA over the states a step function reaches; None is the dead state."""
    ordered = tuple(sorted(alphabet))
    names: Dict[Hashable, str] = {start: "r0"}
    queue = deque([start])
    transitions: List[DfaTransition] = []
    while queue:
        state = queue.popleft()
        for symbol in ordered:
            target = None if state is None else step(state, symbol)
            if target not in names:
                names[target] = f"r{len(names)}"
                queue.append(target)
            transitions.append(DfaTransition(source=names[state], symbol=symbol, target=names[target]))
    return canonical_dfa(
        Dfa(
            states=tuple(names.values()),
            alphabet=ordered,
            transitions=tuple(transitions),
            start="r0",
            accepting=tuple(name for state, name in names.items() if state is not None and accepting(state)),
        ),
        prefix="r",
    )


def shape_dfa(machine: TmMachine, x: Optional[Sequence[str]], variant: Variant) -> Dfa:
    """DFA for the regular conditions of ``variant``.

    For EVENACC these are the block shape alone: ``$``-delimited, an even
    number (at least two) of blocks, each with exactly one composite symbol.
    ACC and ODDACC also require a start configuration first, an accepting
    configuration last, no halting configuration before the last two, and a
    canonical width.
    """
    ensure_machine(machine)
    full = variant != "evenacc"
    initial = InitialFilter(machine, as_word(x) if x is not None else None)
    halting = set(machine.halting)

    # (blocks, in_block, head, first_is_head, last_is_head, filter, c1_blank, edge_seen, after_halt, last_accepting)
    # blocks counts completed blocks as 0, 1, 2 (even, at least 2) or 3 (odd, at least 3);
    # after_halt is -1 before any halting block, else the number of blocks completed since.
    start = ("pre",)

    def step(state, symbol):
        if state == ("pre",):
            return (0, False, None, False, False, initial.start(), False, False, -1, False) if symbol == SEPARATOR else None
        blocks, in_block, head, first_is_head, last_is_head, filt, c1_blank, edge_seen, after_halt, last_acc = state
        first_block = blocks == 0
        if symbol == SEPARATOR:
            if head is None:
                return None
            if full and first_block and not initial.accepting(filt):
                return None
            forward = blocks % 2 == 0
            at_edge = last_is_head if forward else first_is_head
            if full:
                if after_halt >= 1:
                    return None
                if after_halt == 0:
                    after_halt = 1
                elif head[0] in halting:
                    after_halt = 0
            blocks = blocks + 1 if blocks < 2 else (3 if blocks == 2 else 2)
            return (
                blocks, False, None, False, False, None,
                c1_blank, edge_seen or at_edge, after_halt, head[0] == machine.accept,
            )
        composite = parse_head(symbol)
        if composite is not None:
            if head is not None:
                return None
            head = composite
            first_is_head = not in_block
        if full and first_block:
            filt = initial.step(filt, symbol)
            if filt is None:
                return None
            c1_blank = c1_blank or symbol == machine.blank
        return (
            blocks, True, head, first_is_head, composite is not None, filt,
            c1_blank, edge_seen, after_halt, last_acc,
        )

    def accepting(state):
        if state == ("pre",):
            return False
        blocks, in_block, _, _, _, _, c1_blank, edge_seen, _, last_acc = state
        if in_block or blocks != 2:
            return False
        if not full:
            return True
        return last_acc and (not c1_blank or edge_seen)

    return _crawl_dfa(encoding_alphabet(machine), start, step, accepting)


class _RuleSet:
    """Ordered rules and nonterminals for a grammar under construction."""

    def __init__(self, terminals: Sequence[str]):
        self.terminals = tuple(terminals)
        self.nonterminals: List[str] = []
        self.rules: List[Rule] = []

    def declare(self, lhs: str) -> None:
        if lhs not in self.nonterminals:
            self.nonterminals.append(lhs)

    def add(self, lhs: str, *rhs: str) -> None:
        if lhs not in self.nonterminals:
            self.nonterminals.append(lhs)
        self.rules.append(Rule(lhs=lhs, rhs=tuple(rhs)))

    def cfg(self, start: str) -> Cfg:
        order = [start] + [n for n in self.nonterminals if n != start]
        return Cfg(nonterminals=tuple(order), terminals=self.terminals, rules=tuple(self.rules), start=start)


def _block_scaffolding(rules: _RuleSet, cells: Sequence[str]) -> None:
    """Xs = cells*, Any = one cell, and the prefix/suffix block sequences."""
    for c in cells:
        rules.add("Any", c)
        rules.add("Xs", c, "Xs")
    rules.add("Xs")
    rules.add("Blocks", "Xs", SEPARATOR, "Blocks")
    rules.add("Blocks")
    rules.add("Pairs", "Xs", SEPARATOR, "Xs", SEPARATOR, "Pairs")
    rules.add("Pairs")
    rules.add("PreOdd", SEPARATOR, "Pairs")
    rules.add("PreEven", SEPARATOR, "Xs", SEPARATOR, "Pairs")
    rules.add("Suf", SEPARATOR, "Blocks")


def length_defect_cfg(machine: TmMachine, parities: Sequence[str]) -> Cfg:
    """Words in which some checked pair of adjacent blocks differs in length.

    ``parities`` holds ``"odd"`` for pairs (C1, C2), (C3, C4), ... and
    ``"even"`` for pairs (C2, C3), ...
    """
    alphabet = encoding_alphabet(machine)
    rules = _RuleSet(alphabet)
    rules.declare("Len")
    for parity in parities:
        rules.add("Len", "PreOdd" if parity == "odd" else "PreEven", "Neq", "Suf")
    rules.add("Neq", "Any", "Neq", "Any")
    rules.add("Neq", "Any", "Xs", SEPARATOR)
    rules.add("Neq", SEPARATOR, "Any", "Xs")
    _block_scaffolding(rules, alphabet[1:])
    return rules.cfg("Len")


def _mover_classes(machine: TmMachine, cells: Sequence[str], move: str) -> List[Tuple[str, List[str]]]:
    """Partition cells by how they act as a neighbour: each head moving ``move`` alone, the rest together."""
    movers, rest = [], []
    for cell in cells:
        head = parse_head(cell)
        transition = machine.delta(*head) if head is not None and head[0] not in machine.halting else None
        if transition is not None and transition.move == move:
            movers.append(cell)
        else:
            rest.append(cell)
    classes = [(cell, [cell]) for cell in movers]
    if rest:
        classes.append((f"Not{move}", rest))
    return classes


def _step_defect_rules(rules: _RuleSet, machine: TmMachine, cells: Sequence[str], backward: bool) -> str:
    """Rules for one pair of equal-length blocks with a wrong successor cell.

    Blocks are written ``C $ Dᴿ`` (forward) or ``Cᴿ $ D`` (backward).  In the
    written order a cell of C has a first and a second neighbour; forward
    these are its left and right neighbours, backward the other way round.
    """
    tag = "B" if backward else "F"
    lefts = _mover_classes(machine, cells, "R")
    rights = _mover_classes(machine, cells, "L")
    for name, members in lefts + rights:
        if len(members) > 1 and name not in rules.nonterminals:
            for cell in members:
                rules.add(name, cell)
    first_classes, second_classes = (rights, lefts) if backward else (lefts, rights)
    wrong_names: Dict[Optional[str], str] = {}

    def wrong(expected: Optional[str]) -> str:
        if expected not in wrong_names:
            name = f"Wrong{tag}{len(wrong_names)}"
            wrong_names[expected] = name
            for cell in cells:
                if cell != expected:
                    rules.add(name, cell)
        return wrong_names[expected]

    def expect(first: Optional[str], center: str, second: Optional[str]) -> Optional[str]:
        left, right = (second, first) if backward else (first, second)
        return successor_cell(machine, left, center, right)

    def symbol(name: str, members: List[str]) -> str:
        return members[0] if len(members) == 1 else name

    outer, middle, pair = f"Outer{tag}", f"Mid{tag}", f"Step{tag}"
    rules.add(middle, "Any", middle, "Any")
    rules.add(middle, SEPARATOR)
    rules.add(outer, "Any", outer, "Any")
    rules.add(pair, outer)
    for center in cells:
        rules.add(pair, center, SEPARATOR, wrong(expect(None, center, None)))
        for name1, members1 in first_classes:
            e = expect(members1[0], center, None)
            rules.add(outer, symbol(name1, members1), center, SEPARATOR, wrong(e), "Any")
            for name2, members2 in second_classes:
                e = expect(members1[0], center, members2[0])
                rules.add(outer, symbol(name1, members1), center, symbol(name2, members2), middle, "Any", wrong(e), "Any")
        for name2, members2 in second_classes:
            e = expect(None, center, members2[0])
            rules.add(pair, center, symbol(name2, members2), middle, "Any", wrong(e))
    return pair


def step_defect_cfg(machine: TmMachine, parities: Sequence[str]) -> Cfg:
    """Words in which some checked pair of equal-length blocks is not a machine step."""
    alphabet = encoding_alphabet(machine)
    cells = alphabet[1:]
    rules = _RuleSet(alphabet)
    rules.declare("Step")
    for parity in parities:
        backward = parity == "even"
        pair = _step_defect_rules(rules, machine, cells, backward)
        rules.add("Step", "PreEven" if backward else "PreOdd", pair, "Suf")
    _block_scaffolding(rules, cells)
    return rules.cfg("Step")


def _parities(variant: Variant) -> Tuple[str, ...]:
    return {"acc": ("odd", "even"), "oddacc": ("odd",), "evenacc": ("even",)}[variant]


def _category_allows(machine: TmMachine, category: Category, cell: str) -> bool:
    head = parse_head(cell)
    if head is None or category == "free":
        return True
    state, scanned = head
    if state in machine.halting:
        after = state
    else:
        transition = machine.delta(state, scanned)
        after = transition.next if transition is not None else state
    if category == "nonhalt":
        return state not in machine.halting and after not in machine.halting
    return after == machine.accept


class _PairGrammar:
    """Generates checked pairs ``C $ succ(C)ᴿ`` (forward) or ``Cᴿ $ succ(C)`` (backward).

    Nonterminal N(p, c, ...) has emitted c, with p its outer neighbour in
    the written order, and derives the rest of C, the separator, and the
    cells of the successor from the middle out to the one under c.  Names
    are handed out in breadth-first discovery order.
    """

    def __init__(self, machine: TmMachine, rules: _RuleSet, initial: InitialFilter):
        self.machine = machine
        self.rules = rules
        self.initial = initial
        self.cells = encoding_alphabet(machine)[1:]
        self.names: Dict[tuple, str] = {}
        self.queue: deque = deque()

    def name(self, key: tuple) -> str:
        if key not in self.names:
            self.names[key] = f"N{len(self.names) + 1}"
            self.queue.append(key)
        return self.names[key]

    def _cell(self, backward: bool, outer: Optional[str], center: str, inner: Optional[str]) -> Optional[str]:
        left, right = (inner, outer) if backward else (outer, inner)
        return successor_cell(self.machine, left, center, right)

    def pair_start(self, label: str, backward: bool, category: Category, first: bool, want: Optional[bool]) -> str:
        """A nonterminal deriving one whole checked pair."""
        for c in self.cells:
            if not _category_allows(self.machine, category, c):
                continue
            seen = parse_head(c) is not None
            tracker = None
            if first:
                tracker = self.initial.step(self.initial.start(), c)
                if tracker is None:
                    continue
            self.rules.add(label, c, self.name((backward, None, c, seen, tracker, first, category, want)))
        return label

    def expand(self) -> None:
        while self.queue:
            key = self.queue.popleft()
            backward, outer, center, seen, tracker, first, category, want = key
            lhs = self.names[key]
            for nxt in self.cells:
                is_head = parse_head(nxt) is not None
                if is_head and (seen or not _category_allows(self.machine, category, nxt)):
                    continue
                next_tracker = tracker
                if first:
                    next_tracker = self.initial.step(tracker, nxt)
                    if next_tracker is None:
                        continue
                produced = self._cell(backward, outer, center, nxt)
                if produced is None:
                    continue
                inner = self.name((backward, center, nxt, seen or is_head, next_tracker, first, category, want))
                self.rules.add(lhs, nxt, inner, produced)
            if not seen or (first and not self.initial.accepting(tracker)):
                continue
            produced = self._cell(backward, outer, center, None)
            if produced is None:
                continue
            edge = parse_head(center) is not None or parse_head(produced) is not None
            value = edge
            if first:
                value = not self.initial.blank_seen(tracker) or edge
            if want is None or value == want:
                self.rules.add(lhs, SEPARATOR, produced)


def oddacc_cfg(machine: TmMachine, x: Optional[Sequence[str]]) -> Cfg:
    """ODDACC itself: start configuration first, every odd pair a step, accepting at the end."""
    alphabet = encoding_alphabet(machine)
    rules = _RuleSet(alphabet)
    pairs = _PairGrammar(machine, rules, InitialFilter(machine, as_word(x) if x is not None else None))
    rules.add("Odd", SEPARATOR, pairs.pair_start("FirstFinal", False, "final", True, True), SEPARATOR)
    rules.add("Odd", SEPARATOR, pairs.pair_start("FirstWide", False, "nonhalt", True, True), SEPARATOR, "RestWide")
    rules.add("Odd", SEPARATOR, pairs.pair_start("FirstNarrow", False, "nonhalt", True, False), SEPARATOR, "RestNarrow")
    rules.add("RestWide", pairs.pair_start("Step", False, "nonhalt", False, None), SEPARATOR, "RestWide")
    rules.add("RestWide", pairs.pair_start("Last", False, "final", False, None), SEPARATOR)
    rules.add("RestNarrow", pairs.pair_start("StepEdge", False, "nonhalt", False, True), SEPARATOR, "RestWide")
    rules.add("RestNarrow", pairs.pair_start("StepInner", False, "nonhalt", False, False), SEPARATOR, "RestNarrow")
    rules.add("RestNarrow", pairs.pair_start("LastEdge", False, "final", False, True), SEPARATOR)
    pairs.expand()
    return cfg_trim(rules.cfg("Odd"))


def evenacc_cfg(machine: TmMachine) -> Cfg:
    """EVENACC itself: any first and last configuration, every even pair a step."""
    alphabet = encoding_alphabet(machine)
    cells = alphabet[1:]
    rules = _RuleSet(alphabet)
    pairs = _PairGrammar(machine, rules, InitialFilter(machine, None))
    rules.add("Even", SEPARATOR, "Config", SEPARATOR, "Tail")
    rules.add("Tail", pairs.pair_start("Back", True, "free", False, None), SEPARATOR, "Tail")
    rules.add("Tail", "Config", SEPARATOR)
    for cell in cells:
        if parse_head(cell) is not None:
            rules.add("Config", "Plain", cell, "Plain")
        else:
            rules.add("Plain", cell, "Plain")
    rules.add("Plain")
    pairs.expand()
    return cfg_trim(rules.cfg("Even"))


def complement_acc_cfg(
    machine: TmMachine,
    x: Optional[Sequence[str]] = None,
    variant: Variant = "acc",
    polarity: Polarity = "complement",
) -> Cfg:
    """Grammar for the complement of ACC, ODDACC or EVENACC, or for ODDACC/EVENACC themselves.

    Args:
        machine: The Turing machine whose computations are encoded
        x: The input (per-input scope); None takes the union over all inputs
        variant: acc, oddacc or evenacc
        polarity: complement, or positive-pair for the language itself

    Returns:
        A CFG over the encoding alphabet
    """
    ensure_machine(machine)
    if polarity == "positive-pair":
        if variant == "acc":
            raise UnsupportedError("ACC itself is not context-free in general; only its complement is built")
        grammar = oddacc_cfg(machine, x) if variant == "oddacc" else evenacc_cfg(machine)
    elif polarity == "complement":
        parities = _parities(variant)
        shape = dfa_complement(shape_dfa(machine, x, variant))
        parts = [dfa_to_cfg(shape), length_defect_cfg(machine, parities), step_defect_cfg(machine, parities)]
        grammar = cfg_union(parts)
    else:
        raise UnsupportedError(f"unknown polarity {polarity!r}")
    scope = "all inputs" if x is None else f"x={''.join(as_word(x)) or 'ε'}"
    logger.info(
        f"{polarity} {variant} grammar for {machine.name} ({scope}): "
        f"{len(grammar.nonterminals)} nonterminals, {len(grammar.rules)} rules"
    )
    return grammar


__all__ = [
    "InitialFilter",
    "complement_acc_cfg",
    "evenacc_cfg",
    "length_defect_cfg",
    "oddacc_cfg",
    "shape_dfa",
    "step_defect_cfg",
]
