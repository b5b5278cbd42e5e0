"""Device descriptions and the size measures they are compared by.

Every device is an immutable pydantic value.  Structural invariants are not
enforced when a model is instantiated; ``validate`` reports them and
``ensure_valid`` raises, so that malformed inputs can still be inspected.
"""

from collections import Counter
from typing import Callable, Dict, Iterable, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from succinctness_workbench.errors import DeviceValidationError

Symbol = str
Word = Tuple[str, ...]


class _Frozen(BaseModel):
    """Base for immutable device values."""

    model_config = ConfigDict(frozen=True)


def as_word(word: Union[str, Sequence[str]]) -> Word:
    """Normalize a word to a tuple of symbols.

    A plain string is read one character per symbol; any other sequence is
    taken symbol by symbol, which is how multi-character symbols such as the
    composite ``[q:a]`` head markers are passed around.
    """
    return tuple(word)


def show_word(word: Sequence[str]) -> str:
    """Render a word for logs and reports (ε for the empty word)."""
    if len(word) == 0:
        return "ε"
    if all(len(symbol) == 1 for symbol in word):
        return "".join(word)
    return " ".join(word)


class DfaTransition(_Frozen):
    """One entry of a total DFA transition map."""

    source: str
    symbol: str
    target: str


class Dfa(_Frozen):
    """Deterministic finite automaton."""

    kind: Literal["dfa"] = "dfa"
    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    transitions: Tuple[DfaTransition, ...]
    start: str
    accepting: Tuple[str, ...] = ()

    def table(self) -> Dict[Tuple[str, str], str]:
        return {(t.source, t.symbol): t.target for t in self.transitions}


class NfaTransition(_Frozen):
    """A nondeterministic move; ``symbol`` None is an ε-move."""

    source: str
    symbol: Optional[str]
    target: str


class Nfa(_Frozen):
    """Nondeterministic finite automaton with ε-moves."""

    kind: Literal["nfa"] = "nfa"
    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    transitions: Tuple[NfaTransition, ...] = ()
    start: str
    accepting: Tuple[str, ...] = ()


class Rule(_Frozen):
    """Context-free production ``lhs -> rhs``; an empty rhs is ε."""

    lhs: str
    rhs: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return f"{self.lhs} -> {' '.join(self.rhs) if self.rhs else '_eps_'}"


class Cfg(_Frozen):
    """Context-free grammar.  Its size is the number of nonterminals."""

    kind: Literal["cfg"] = "cfg"
    nonterminals: Tuple[str, ...]
    terminals: Tuple[str, ...]
    rules: Tuple[Rule, ...]
    start: str

    def rules_for(self) -> Dict[str, List[Tuple[str, ...]]]:
        grouped: Dict[str, List[Tuple[str, ...]]] = {n: [] for n in self.nonterminals}
        for rule in self.rules:
            grouped.setdefault(rule.lhs, []).append(rule.rhs)
        return grouped


class CsgRule(_Frozen):
    """Rewriting rule between sentential forms."""

    lhs: Tuple[str, ...]
    rhs: Tuple[str, ...] = ()

    def __str__(self) -> str:
        right = " ".join(self.rhs) if self.rhs else "_eps_"
        return f"{' '.join(self.lhs)} -> {right}"


class Csg(_Frozen):
    """Noncontracting (context-sensitive) grammar."""

    kind: Literal["csg"] = "csg"
    nonterminals: Tuple[str, ...]
    terminals: Tuple[str, ...]
    rules: Tuple[CsgRule, ...]
    start: str


class PdaTransition(_Frozen):
    """Move ``(source, symbol, pop) -> (target, push)``.

    ``symbol`` None is an ε-move.  ``push`` is written top first, so
    ``push=("A", "Z")`` leaves ``A`` on top of ``Z``.
    """

    source: str
    symbol: Optional[str]
    pop: str
    target: str
    push: Tuple[str, ...] = ()


class Pda(_Frozen):
    """Pushdown automaton accepting by final state at the end of the input."""

    kind: Literal["pda"] = "pda"
    states: Tuple[str, ...]
    input_alphabet: Tuple[str, ...]
    stack_alphabet: Tuple[str, ...]
    transitions: Tuple[PdaTransition, ...] = ()
    start: str
    initial_stack_symbol: str
    accepting: Tuple[str, ...] = ()


class Dpda(Pda):
    """Deterministic pushdown automaton.

    For every (state, stack top) there is either exactly one ε-move and no
    input move, or at most one move per input symbol and no ε-move.
    """

    kind: Literal["dpda"] = "dpda"  # type: ignore[assignment]

    def moves(self) -> Dict[Tuple[str, Optional[str], str], PdaTransition]:
        return {(t.source, t.symbol, t.pop): t for t in self.transitions}


class PredicateOracle(_Frozen):
    """A total decision procedure used as reference semantics."""

    kind: Literal["oracle"] = "oracle"
    label: str
    alphabet: Tuple[str, ...]
    predicate: Callable[[Word], bool] = Field(exclude=True)
    version: str = "1"

    def __call__(self, word: Sequence[str]) -> bool:
        return bool(self.predicate(as_word(word)))


Device = Union[Dfa, Nfa, Cfg, Csg, Pda, Dpda]
Language = Union[Dfa, Nfa, Cfg, Csg, Pda, Dpda, PredicateOracle]


def alphabet_of(device: Language) -> Tuple[str, ...]:
    """Input alphabet of a device or oracle."""
    if isinstance(device, (Dfa, Nfa, PredicateOracle)):
        return device.alphabet
    if isinstance(device, (Cfg, Csg)):
        return device.terminals
    if isinstance(device, Pda):
        return device.input_alphabet
    raise TypeError(f"not a device: {type(device).__name__}")


def size_of(device: Device) -> int:
    """The size measure devices are compared by.

    States for DFA/NFA, states plus stack symbols for PDA/DPDA, nonterminals
    for CFG/CSG.
    """
    ensure_valid(device)
    if isinstance(device, (Dfa, Nfa)):
        return len(device.states)
    if isinstance(device, Pda):
        return len(device.states) + len(device.stack_alphabet)
    if isinstance(device, (Cfg, Csg)):
        return len(device.nonterminals)
    raise TypeError(f"not a device: {type(device).__name__}")


def nfa_view(dfa: Dfa) -> Nfa:
    """The same automaton seen as an NFA."""
    return Nfa(
        states=dfa.states,
        alphabet=dfa.alphabet,
        transitions=tuple(
            NfaTransition(source=t.source, symbol=t.symbol, target=t.target)
            for t in dfa.transitions
        ),
        start=dfa.start,
        accepting=dfa.accepting,
    )


def _duplicates(items: Iterable[str], what: str) -> List[str]:
    return [f"duplicate {what} {item!r}" for item, count in Counter(items).items() if count > 1]


def _validate_dfa(dfa: Dfa) -> List[str]:
    problems = _duplicates(dfa.states, "state") + _duplicates(dfa.alphabet, "symbol")
    states = set(dfa.states)
    alphabet = set(dfa.alphabet)
    if dfa.start not in states:
        problems.append(f"start state {dfa.start!r} is not declared")
    problems += [f"accepting state {q!r} is not declared" for q in dfa.accepting if q not in states]
    seen: Dict[Tuple[str, str], str] = {}
    for t in dfa.transitions:
        if t.source not in states:
            problems.append(f"transition source {t.source!r} is not declared")
        if t.target not in states:
            problems.append(f"transition target {t.target!r} is not declared")
        if t.symbol not in alphabet:
            problems.append(f"transition symbol {t.symbol!r} is not in the alphabet")
        key = (t.source, t.symbol)
        if key in seen and seen[key] != t.target:
            problems.append(f"two moves from {t.source!r} on {t.symbol!r}")
        seen[key] = t.target
    for q in dfa.states:
        for a in dfa.alphabet:
            if (q, a) not in seen:
                problems.append(f"missing move from {q!r} on {a!r}")
    return problems


def _validate_nfa(nfa: Nfa) -> List[str]:
    problems = _duplicates(nfa.states, "state") + _duplicates(nfa.alphabet, "symbol")
    states = set(nfa.states)
    if nfa.start not in states:
        problems.append(f"start state {nfa.start!r} is not declared")
    problems += [f"accepting state {q!r} is not declared" for q in nfa.accepting if q not in states]
    for t in nfa.transitions:
        if t.source not in states:
            problems.append(f"transition source {t.source!r} is not declared")
        if t.target not in states:
            problems.append(f"transition target {t.target!r} is not declared")
        if t.symbol is not None and t.symbol not in nfa.alphabet:
            problems.append(f"transition symbol {t.symbol!r} is not in the alphabet")
    return problems


def _validate_grammar_symbols(
    nonterminals: Sequence[str], terminals: Sequence[str], start: str
) -> List[str]:
    problems = _duplicates(nonterminals, "nonterminal") + _duplicates(terminals, "terminal")
    clash = sorted(set(nonterminals) & set(terminals))
    problems += [f"symbol {s!r} is both a nonterminal and a terminal" for s in clash]
    if start not in set(nonterminals):
        problems.append(f"start symbol {start!r} is not a nonterminal")
    return problems


def _validate_cfg(cfg: Cfg) -> List[str]:
    problems = _validate_grammar_symbols(cfg.nonterminals, cfg.terminals, cfg.start)
    nonterminals = set(cfg.nonterminals)
    declared = nonterminals | set(cfg.terminals)
    for rule in cfg.rules:
        if rule.lhs not in nonterminals:
            problems.append(f"rule {rule}: left-hand side {rule.lhs!r} is not a nonterminal")
        for symbol in rule.rhs:
            if symbol not in declared:
                problems.append(f"rule {rule}: undeclared symbol {symbol!r}")
    return problems


def _validate_csg(csg: Csg) -> List[str]:
    problems = _validate_grammar_symbols(csg.nonterminals, csg.terminals, csg.start)
    nonterminals = set(csg.nonterminals)
    declared = nonterminals | set(csg.terminals)
    start_on_right = any(csg.start in rule.rhs for rule in csg.rules)
    for rule in csg.rules:
        if not rule.lhs:
            problems.append(f"rule {rule}: empty left-hand side")
            continue
        if not any(symbol in nonterminals for symbol in rule.lhs):
            problems.append(f"rule {rule}: left-hand side has no nonterminal")
        for symbol in rule.lhs + rule.rhs:
            if symbol not in declared:
                problems.append(f"rule {rule}: undeclared symbol {symbol!r}")
        if len(rule.rhs) < len(rule.lhs):
            erases_start = rule.lhs == (csg.start,) and not rule.rhs
            if not erases_start:
                problems.append(f"rule {rule} is contracting")
            elif start_on_right:
                problems.append(
                    f"rule {rule}: start symbol may only erase when it never appears on a right-hand side"
                )
    return problems


def _validate_pda(pda: Pda) -> List[str]:
    problems = (
        _duplicates(pda.states, "state")
        + _duplicates(pda.input_alphabet, "input symbol")
        + _duplicates(pda.stack_alphabet, "stack symbol")
    )
    states = set(pda.states)
    stack = set(pda.stack_alphabet)
    if pda.start not in states:
        problems.append(f"start state {pda.start!r} is not declared")
    if pda.initial_stack_symbol not in stack:
        problems.append(f"initial stack symbol {pda.initial_stack_symbol!r} is not declared")
    problems += [f"accepting state {q!r} is not declared" for q in pda.accepting if q not in states]
    for t in pda.transitions:
        if t.source not in states or t.target not in states:
            problems.append(f"transition {t.source!r}->{t.target!r} uses an undeclared state")
        if t.symbol is not None and t.symbol not in pda.input_alphabet:
            problems.append(f"transition symbol {t.symbol!r} is not in the input alphabet")
        for symbol in (t.pop,) + t.push:
            if symbol not in stack:
                problems.append(f"stack symbol {symbol!r} is not declared")
    return problems


def determinism_violations(pda: Pda) -> List[str]:
    """Report every (state, stack top) that breaks the DPDA condition."""
    problems = []
    grouped: Dict[Tuple[str, str], List[PdaTransition]] = {}
    for t in pda.transitions:
        grouped.setdefault((t.source, t.pop), []).append(t)
    for (state, top), moves in sorted(grouped.items()):
        epsilon = [t for t in moves if t.symbol is None]
        reading = Counter(t.symbol for t in moves if t.symbol is not None)
        if epsilon and (len(epsilon) > 1 or reading):
            problems.append(
                f"nondeterministic at ({state}, {top}): an ε-move must be the only move"
            )
        for symbol, count in sorted(reading.items()):
            if count > 1:
                problems.append(
                    f"nondeterministic at ({state}, {top}): {count} moves on {symbol!r}"
                )
    return problems


def validate(device: Device) -> List[str]:
    """Check the invariants of a device; an empty list means it is well formed."""
    if isinstance(device, Dfa):
        return _validate_dfa(device)
    if isinstance(device, Nfa):
        return _validate_nfa(device)
    if isinstance(device, Cfg):
        return _validate_cfg(device)
    if isinstance(device, Csg):
        return _validate_csg(device)
    if isinstance(device, Dpda):
        return _validate_pda(device) + determinism_violations(device)
    if isinstance(device, Pda):
        return _validate_pda(device)
    raise TypeError(f"not a device: {type(device).__name__}")


def ensure_valid(device: Device) -> Device:
    """Return the device unchanged, or raise DeviceValidationError."""
    problems = validate(device)
    if problems:
        raise DeviceValidationError(problems, kind=device.kind)
    return device


def as_dpda(pda: Pda) -> Dpda:
    """Reinterpret a PDA as a DPDA, raising when it is not deterministic."""
    dpda = Dpda(**pda.model_dump(exclude={"kind"}))
    ensure_valid(dpda)
    return dpda


def fresh_symbol(base: str, taken: Iterable[str]) -> str:
    """``base`` primed until it clashes with nothing in ``taken``."""
    taken = set(taken)
    name = base
    while name in taken:
        name += "'"
    return name
