"""Reading and writing devices, machines and fixtures.

Grammar text::

    # comment
    %kind cfg                 optional: cfg or csg
    %start S                  optional: defaults to the first rule's left side
    %nonterminals S Y         optional
    %terminals a b            optional
    S -> Y Y
    Y -> a | b
      | _eps_                 a line starting with | continues the previous rule

Symbols are separated by whitespace and ``_eps_`` stands for the empty
word.  Without directives the left sides of a CFG are its nonterminals and
every other symbol is a terminal; for a CSG the nonterminals are the
left-side symbols that start with an uppercase letter.

Automata and Turing machines are JSON documents with camelCase keys.
"""

import json
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from succinctness_workbench import ZOO_PATH
from succinctness_workbench.devices import (
    Cfg,
    Csg,
    CsgRule,
    Device,
    Dfa,
    DfaTransition,
    Dpda,
    Nfa,
    NfaTransition,
    Pda,
    PdaTransition,
    Rule,
)
from succinctness_workbench.errors import FormatError
from succinctness_workbench.models import DiagConfig
from succinctness_workbench.tm_encodings import TmMachine, TmTransition

EPSILON = "_eps_"
ARROW = "->"
BAR = "|"
_RESERVED = {EPSILON, ARROW, BAR}

Grammar = Union[Cfg, Csg]
Automaton = Union[Dfa, Nfa, Pda, Dpda]


def _strip_comment(line: str) -> str:
    for index, char in enumerate(line):
        if char == "#" and (index == 0 or line[index - 1].isspace()):
            return line[:index]
    return line


def _alternatives(tokens: List[str], source: str, number: int) -> List[Tuple[str, ...]]:
    groups: List[List[str]] = [[]]
    for token in tokens:
        if token == BAR:
            groups.append([])
        else:
            groups[-1].append(token)
    result = []
    for group in groups:
        if not group:
            raise FormatError("empty alternative (write _eps_ for the empty word)", source, number)
        if EPSILON in group:
            if group != [EPSILON]:
                raise FormatError("_eps_ must stand alone in its alternative", source, number)
            result.append(())
        else:
            if ARROW in group:
                raise FormatError("more than one '->' on a line", source, number)
            result.append(tuple(group))
    return result


def parse_grammar(text: str, source: str = "<string>") -> Grammar:
    """Parse the grammar text format into a Cfg or Csg."""
    directives: Dict[str, List[str]] = {}
    productions: List[Tuple[Tuple[str, ...], Tuple[str, ...], int]] = []
    last_lhs: Optional[Tuple[str, ...]] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0].startswith("%"):
            name = tokens[0][1:]
            if name not in ("kind", "start", "nonterminals", "terminals"):
                raise FormatError(f"unknown directive %{name}", source, number)
            if name in directives:
                raise FormatError(f"directive %{name} given twice", source, number)
            directives[name] = tokens[1:]
            continue
        if tokens[0] == BAR:
            if last_lhs is None:
                raise FormatError("continuation line before any rule", source, number)
            lhs, rhs_tokens = last_lhs, tokens[1:]
        else:
            if ARROW not in tokens:
                raise FormatError("expected 'LHS -> RHS'", source, number)
            split = tokens.index(ARROW)
            lhs, rhs_tokens = tuple(tokens[:split]), tokens[split + 1 :]
            if not lhs:
                raise FormatError("empty left-hand side", source, number)
            if any(symbol in _RESERVED for symbol in lhs):
                raise FormatError("reserved token on the left-hand side", source, number)
        for rhs in _alternatives(rhs_tokens, source, number):
            productions.append((lhs, rhs, number))
        last_lhs = lhs

    if not productions:
        raise FormatError("no rules", source)

    kind_tokens = directives.get("kind")
    if kind_tokens is not None:
        if kind_tokens not in (["cfg"], ["csg"]):
            raise FormatError("%kind must be cfg or csg", source)
        kind = kind_tokens[0]
    else:
        kind = "csg" if any(len(lhs) > 1 for lhs, _, _ in productions) else "cfg"

    if "start" in directives:
        if len(directives["start"]) != 1:
            raise FormatError("%start takes exactly one symbol", source)
        start = directives["start"][0]
    else:
        first = productions[0][0]
        if len(first) != 1:
            raise FormatError("the first rule must have a single-symbol left side, or use %start", source, productions[0][2])
        start = first[0]

    appearance: List[str] = []
    for lhs, rhs, _ in productions:
        for symbol in lhs + rhs:
            if symbol not in appearance:
                appearance.append(symbol)

    declared_n = directives.get("nonterminals")
    declared_t = directives.get("terminals")
    if declared_n is not None:
        nonterminals = list(declared_n)
    elif declared_t is not None:
        nonterminals = [s for s in appearance if s not in declared_t]
    elif kind == "cfg":
        nonterminals = [s for s in appearance if any(lhs == (s,) for lhs, _, _ in productions)]
    else:
        in_lhs = {s for lhs, _, _ in productions for s in lhs}
        nonterminals = [s for s in appearance if s in in_lhs and s[:1].isupper()]
    if start not in nonterminals:
        nonterminals.insert(0, start)
    elif nonterminals[0] != start and declared_n is None:
        nonterminals.remove(start)
        nonterminals.insert(0, start)
    terminals = list(declared_t) if declared_t is not None else [s for s in appearance if s not in nonterminals]

    if kind == "cfg":
        for lhs, _, number in productions:
            if len(lhs) != 1:
                raise FormatError("a context-free rule has exactly one left-hand symbol", source, number)
        return Cfg(
            nonterminals=tuple(nonterminals),
            terminals=tuple(terminals),
            rules=tuple(Rule(lhs=lhs[0], rhs=rhs) for lhs, rhs, _ in productions),
            start=start,
        )
    return Csg(
        nonterminals=tuple(nonterminals),
        terminals=tuple(terminals),
        rules=tuple(CsgRule(lhs=lhs, rhs=rhs) for lhs, rhs, _ in productions),
        start=start,
    )


def _check_symbols(symbols: Sequence[str]) -> None:
    for symbol in symbols:
        if not symbol or symbol in _RESERVED or any(c.isspace() for c in symbol) or symbol[0] in "#%":
            raise FormatError(f"symbol {symbol!r} cannot be written in the grammar text format")


def emit_grammar(grammar: Grammar, comment: Optional[str] = None) -> str:
    """Write a grammar in the text format, directives included."""
    _check_symbols(grammar.nonterminals + grammar.terminals)
    lines = []
    if comment:
        lines += [f"# {line}" for line in comment.splitlines()]
    lines += [
        f"%kind {grammar.kind}",
        f"%start {grammar.start}",
        f"%nonterminals {' '.join(grammar.nonterminals)}",
        f"%terminals {' '.join(grammar.terminals)}",
    ]
    runs: List[Tuple[Tuple[str, ...], List[Tuple[str, ...]]]] = []
    for rule in grammar.rules:
        lhs = (rule.lhs,) if isinstance(rule, Rule) else rule.lhs
        if runs and runs[-1][0] == lhs:
            runs[-1][1].append(rule.rhs)
        else:
            runs.append((lhs, [rule.rhs]))
    for lhs, bodies in runs:
        alternatives = " | ".join(" ".join(body) if body else EPSILON for body in bodies)
        lines.append(f"{' '.join(lhs)} {ARROW} {alternatives}")
    return "\n".join(lines) + "\n"


class TransitionRecord(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    source: str = Field(alias="from")
    symbol: Optional[str] = None
    pop: Optional[str] = None
    target: str = Field(alias="to")
    push: Optional[List[str]] = None


class AutomatonDocument(BaseModel):
    """JSON shape of a finite or pushdown automaton."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    kind: Literal["dfa", "nfa", "pda", "dpda"]
    states: List[str]
    alphabet: List[str]
    stack_alphabet: Optional[List[str]] = Field(None, alias="stackAlphabet")
    transitions: List[TransitionRecord] = Field(default_factory=list)
    start: str
    initial_stack_symbol: Optional[str] = Field(None, alias="initialStackSymbol")
    accepting: List[str] = Field(default_factory=list)

    def to_device(self, source: str = "<string>") -> Automaton:
        if self.kind == "dfa":
            if any(t.symbol is None for t in self.transitions):
                raise FormatError("a DFA transition needs a symbol", source)
            return Dfa(
                states=tuple(self.states),
                alphabet=tuple(self.alphabet),
                transitions=tuple(DfaTransition(source=t.source, symbol=t.symbol, target=t.target) for t in self.transitions),
                start=self.start,
                accepting=tuple(self.accepting),
            )
        if self.kind == "nfa":
            return Nfa(
                states=tuple(self.states),
                alphabet=tuple(self.alphabet),
                transitions=tuple(NfaTransition(source=t.source, symbol=t.symbol, target=t.target) for t in self.transitions),
                start=self.start,
                accepting=tuple(self.accepting),
            )
        if self.stack_alphabet is None or self.initial_stack_symbol is None:
            raise FormatError("a pushdown automaton needs stackAlphabet and initialStackSymbol", source)
        if any(t.pop is None for t in self.transitions):
            raise FormatError("a pushdown transition needs a pop symbol", source)
        model = Dpda if self.kind == "dpda" else Pda
        return model(
            states=tuple(self.states),
            input_alphabet=tuple(self.alphabet),
            stack_alphabet=tuple(self.stack_alphabet),
            transitions=tuple(
                PdaTransition(source=t.source, symbol=t.symbol, pop=t.pop, target=t.target, push=tuple(t.push or ()))
                for t in self.transitions
            ),
            start=self.start,
            initial_stack_symbol=self.initial_stack_symbol,
            accepting=tuple(self.accepting),
        )

    @classmethod
    def from_device(cls, device: Automaton) -> "AutomatonDocument":
        if isinstance(device, (Dfa, Nfa)):
            return cls(
                kind=device.kind,
                states=list(device.states),
                alphabet=list(device.alphabet),
                transitions=[TransitionRecord(source=t.source, symbol=t.symbol, target=t.target) for t in device.transitions],
                start=device.start,
                accepting=list(device.accepting),
            )
        return cls(
            kind=device.kind,
            states=list(device.states),
            alphabet=list(device.input_alphabet),
            stack_alphabet=list(device.stack_alphabet),
            transitions=[
                TransitionRecord(source=t.source, symbol=t.symbol, pop=t.pop, target=t.target, push=list(t.push))
                for t in device.transitions
            ],
            start=device.start,
            initial_stack_symbol=device.initial_stack_symbol,
            accepting=list(device.accepting),
        )


class MachineDocument(BaseModel):
    """JSON shape of a Turing machine; transitions are [state, read, write, move, next]."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    name: str = "machine"
    description: Optional[str] = None
    states: List[str]
    tape_alphabet: List[str] = Field(alias="tapeAlphabet")
    blank: str
    input_alphabet: List[str] = Field(alias="inputAlphabet")
    transitions: List[Tuple[str, str, str, Literal["L", "R"], str]] = Field(default_factory=list)
    start: str
    accept: str
    reject: str

    def to_machine(self) -> TmMachine:
        return TmMachine(
            name=self.name,
            description=self.description,
            states=tuple(self.states),
            tape_alphabet=tuple(self.tape_alphabet),
            blank=self.blank,
            input_alphabet=tuple(self.input_alphabet),
            transitions=tuple(
                TmTransition(state=q, read=r, write=w, move=m, next=n) for q, r, w, m, n in self.transitions
            ),
            start=self.start,
            accept=self.accept,
            reject=self.reject,
        )


def _load_json(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, source, e.lineno) from e


def _validation_message(error: ValidationError) -> str:
    first = error.errors()[0]
    where = ".".join(str(part) for part in first["loc"])
    return f"{where}: {first['msg']}" if where else first["msg"]


def parse_automaton(text: str, source: str = "<string>") -> Automaton:
    data = _load_json(text, source)
    try:
        document = AutomatonDocument.model_validate(data)
    except ValidationError as e:
        raise FormatError(_validation_message(e), source) from e
    return document.to_device(source)


def emit_automaton(device: Automaton) -> str:
    document = AutomatonDocument.from_device(device)
    return json.dumps(document.model_dump(by_alias=True, exclude_none=True), indent=2, ensure_ascii=False) + "\n"


def parse_machine(text: str, source: str = "<string>") -> TmMachine:
    data = _load_json(text, source)
    try:
        return MachineDocument.model_validate(data).to_machine()
    except ValidationError as e:
        raise FormatError(_validation_message(e), source) from e


def emit_machine(machine: TmMachine) -> str:
    document = MachineDocument(
        name=machine.name,
        description=machine.description,
        states=list(machine.states),
        tape_alphabet=list(machine.tape_alphabet),
        blank=machine.blank,
        input_alphabet=list(machine.input_alphabet),
        transitions=[(t.state, t.read, t.write, t.move, t.next) for t in machine.transitions],
        start=machine.start,
        accept=machine.accept,
        reject=machine.reject,
    )
    return json.dumps(document.model_dump(by_alias=True, exclude_none=True), indent=2, ensure_ascii=False) + "\n"


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read file: {e.strerror}", str(path)) from e


def load_device(path: Union[str, Path]) -> Device:
    """A ``.json`` file is an automaton; anything else is grammar text."""
    text = _read(path)
    if str(path).endswith(".json"):
        return parse_automaton(text, str(path))
    return parse_grammar(text, str(path))


def dump_device(device: Device, comment: Optional[str] = None) -> str:
    if isinstance(device, (Cfg, Csg)):
        return emit_grammar(device, comment)
    return emit_automaton(device)


def write_device(device: Device, path: Union[str, Path], comment: Optional[str] = None) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_device(device, comment), encoding="utf-8")


def zoo_names() -> List[str]:
    return sorted(p.stem for p in Path(ZOO_PATH).glob("*.json"))


def load_machine(reference: Union[str, Path]) -> TmMachine:
    """Load a machine from a JSON file, or from the zoo by its bare name."""
    path = Path(reference)
    if not path.suffix and str(reference) in zoo_names():
        path = Path(ZOO_PATH) / f"{reference}.json"
    return parse_machine(_read(path), str(path))


def load_diag_config(path: Union[str, Path]) -> DiagConfig:
    text = _read(path)
    data = _load_json(text, str(path))
    try:
        return DiagConfig.model_validate(data)
    except ValidationError as e:
        raise FormatError(_validation_message(e), str(path)) from e
