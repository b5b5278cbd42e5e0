"""Deterministic Turing machines and the encodings of their computations.

A configuration is a tuple of cells over the tape alphabet in which exactly
one cell is a composite head symbol ``[q:σ]`` (state q scanning σ).  A
computation C1, ..., Cs is written ``$C1$C2ᴿ$C3$C4ᴿ$...$Csᴿ$``: every second
configuration is reversed so that consecutive configurations can be matched
by a pushdown device across one separator.

Conventions fixed here, shared by the oracles and the grammar builders:

- The left end of the tape is a wall: a left move in cell 0 stays there.
- All configurations of a run have the same width, the largest of |x| and
  the furthest cell the head visits plus one.  Within a fixed width a right
  move out of the last cell has no successor.
- The successor of a halted configuration is itself.  A run halting after
  an odd number of steps gets its final configuration repeated once, so an
  encoded run always has an even number of blocks.
- An accepted encoding is canonical: halting configurations appear only in
  the last two blocks, and no blank column is surplus (the first block holds
  no plain blank, or some configuration has its head in the last cell).
"""

import itertools
import random
import re
from typing import Iterable, List, Literal, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict

from succinctness_workbench.devices import Word, as_word
from succinctness_workbench.errors import DeviceValidationError, DomainError
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

SEPARATOR = "$"
_HEAD = re.compile(r"^\[([^\[\]:$\s]+):([^\[\]:$\s]+)\]$")
_RESERVED = re.compile(r"[\[\]:$\s]")

Cells = Tuple[str, ...]
Variant = Literal["acc", "oddacc", "evenacc"]


def head_symbol(state: str, scanned: str) -> str:
    """The composite symbol for ``state`` scanning ``scanned``."""
    return f"[{state}:{scanned}]"


def parse_head(symbol: str) -> Optional[Tuple[str, str]]:
    """(state, scanned) for a composite symbol, None for a tape symbol."""
    match = _HEAD.match(symbol)
    if match is None:
        return None
    return match.group(1), match.group(2)


class TmTransition(BaseModel):
    """``δ(state, read) = (next, write, move)``."""

    model_config = ConfigDict(frozen=True)

    state: str
    read: str
    write: str
    move: Literal["L", "R"]
    next: str


class TmMachine(BaseModel):
    """A deterministic single-tape Turing machine."""

    model_config = ConfigDict(frozen=True)

    name: str = "machine"
    description: Optional[str] = None
    states: Tuple[str, ...]
    tape_alphabet: Tuple[str, ...]
    blank: str
    input_alphabet: Tuple[str, ...]
    transitions: Tuple[TmTransition, ...] = ()
    start: str
    accept: str
    reject: str

    @property
    def halting(self) -> Tuple[str, str]:
        return (self.accept, self.reject)

    def delta(self, state: str, read: str) -> Optional[TmTransition]:
        for transition in self.transitions:
            if transition.state == state and transition.read == read:
                return transition
        return None

    def table(self) -> dict:
        return {(t.state, t.read): t for t in self.transitions}


def machine_violations(machine: TmMachine) -> List[str]:
    """Structural problems of a machine description."""
    problems = []
    states = set(machine.states)
    tape = set(machine.tape_alphabet)
    for name in machine.states + machine.tape_alphabet:
        if _RESERVED.search(name):
            problems.append(f"name {name!r} uses one of the reserved characters [ ] : $")
    if machine.blank not in tape:
        problems.append(f"blank {machine.blank!r} is not a tape symbol")
    if machine.blank in machine.input_alphabet:
        problems.append("the blank may not be an input symbol")
    problems += [f"input symbol {a!r} is not a tape symbol" for a in machine.input_alphabet if a not in tape]
    for state in (machine.start, machine.accept, machine.reject):
        if state not in states:
            problems.append(f"state {state!r} is not declared")
    if machine.accept == machine.reject:
        problems.append("accept and reject must be different states")
    seen = set()
    for t in machine.transitions:
        if t.state not in states or t.next not in states:
            problems.append(f"transition on ({t.state}, {t.read}) uses an undeclared state")
        if t.read not in tape or t.write not in tape:
            problems.append(f"transition on ({t.state}, {t.read}) uses an undeclared symbol")
        if t.state in machine.halting:
            problems.append(f"halting state {t.state!r} has a transition")
        if (t.state, t.read) in seen:
            problems.append(f"two transitions on ({t.state}, {t.read})")
        seen.add((t.state, t.read))
    for state in machine.states:
        if state in machine.halting:
            continue
        for symbol in machine.tape_alphabet:
            if (state, symbol) not in seen:
                problems.append(f"no transition on ({state}, {symbol})")
    return problems


def ensure_machine(machine: TmMachine) -> TmMachine:
    problems = machine_violations(machine)
    if problems:
        raise DeviceValidationError(problems, kind="turing machine")
    return machine


def encoding_alphabet(machine: TmMachine) -> Tuple[str, ...]:
    """Separator, tape symbols, then every composite head symbol."""
    heads = [head_symbol(q, a) for q in machine.states for a in machine.tape_alphabet]
    return (SEPARATOR,) + tuple(machine.tape_alphabet) + tuple(heads)


class TmConfig(BaseModel):
    """One configuration: tape cells with exactly one composite head cell."""

    model_config = ConfigDict(frozen=True)

    cells: Cells

    @property
    def head(self) -> int:
        return next(i for i, c in enumerate(self.cells) if parse_head(c) is not None)

    @property
    def state(self) -> str:
        return parse_head(self.cells[self.head])[0]  # type: ignore[index]


def config_head(machine: TmMachine, cells: Sequence[str]) -> Optional[Tuple[int, str, str]]:
    """(position, state, scanned) if ``cells`` is a configuration of ``machine``."""
    found = None
    states = machine.states
    tape = machine.tape_alphabet
    for position, cell in enumerate(cells):
        head = parse_head(cell)
        if head is None:
            if cell not in tape:
                return None
            continue
        if found is not None or head[0] not in states or head[1] not in tape:
            return None
        found = (position, head[0], head[1])
    return found


def successor_cell(
    machine: TmMachine, left: Optional[str], center: str, right: Optional[str]
) -> Optional[str]:
    """Content of one cell after a step, from the cell and its two neighbours.

    ``left``/``right`` are None at the ends of the configuration.  Returns
    None when the head would leave the configuration on the right.  The
    window must contain at most one composite symbol.
    """
    head = parse_head(center)
    if head is not None:
        state, scanned = head
        if state in machine.halting:
            return center
        move = machine.delta(state, scanned)
        if move is None:
            return None
        if move.move == "R":
            return None if right is None else move.write
        return head_symbol(move.next, move.write) if left is None else move.write
    if left is not None:
        head = parse_head(left)
        if head is not None and head[0] not in machine.halting:
            move = machine.delta(*head)
            if move is not None and move.move == "R":
                return head_symbol(move.next, center)
    if right is not None:
        head = parse_head(right)
        if head is not None and head[0] not in machine.halting:
            move = machine.delta(*head)
            if move is not None and move.move == "L":
                return head_symbol(move.next, center)
    return center


def succ(machine: TmMachine, cells: Sequence[str]) -> Optional[Cells]:
    """The next configuration at the same width, or None if there is none."""
    if config_head(machine, cells) is None:
        return None
    width = len(cells)
    result = []
    for j in range(width):
        left = cells[j - 1] if j > 0 else None
        right = cells[j + 1] if j + 1 < width else None
        cell = successor_cell(machine, left, cells[j], right)
        if cell is None:
            return None
        result.append(cell)
    return tuple(result)


def initial_config(machine: TmMachine, x: Sequence[str], width: Optional[int] = None) -> Cells:
    """Start configuration on input ``x``, blank-padded to ``width``."""
    x = as_word(x)
    first = x[0] if x else machine.blank
    cells = [head_symbol(machine.start, first)] + list(x[1:])
    width = max(len(cells), width or 0)
    return tuple(cells + [machine.blank] * (width - len(cells)))


def is_initial(machine: TmMachine, cells: Sequence[str], x: Optional[Sequence[str]]) -> bool:
    """Whether ``cells`` is a start configuration on ``x`` (on some input when x is None)."""
    if not cells:
        return False
    if x is not None:
        x = as_word(x)
        if len(cells) < max(len(x), 1):
            return False
        return tuple(cells) == initial_config(machine, x, len(cells))
    head = parse_head(cells[0])
    if head is None or head[0] != machine.start:
        return False
    rest = list(cells[1:])
    if head[1] == machine.blank:
        return all(c == machine.blank for c in rest)
    if head[1] not in machine.input_alphabet:
        return False
    body = list(itertools.takewhile(lambda c: c in machine.input_alphabet, rest))
    return all(c == machine.blank for c in rest[len(body) :])


class TmTrace(BaseModel):
    """A halting run, every configuration at the same width."""

    model_config = ConfigDict(frozen=True)

    machine: TmMachine
    input: Word
    configs: Tuple[Cells, ...]
    steps: int
    step_bound: int
    space_bound: int
    accepted: bool

    @property
    def width(self) -> int:
        return len(self.configs[0])


class Diverged(BaseModel):
    """A run that did not halt within its bounds."""

    model_config = ConfigDict(frozen=True)

    reason: Literal["steps", "space"]
    steps: int


def run_trace(
    machine: TmMachine, x: Union[str, Sequence[str]], step_bound: int, space_bound: int
) -> Union[TmTrace, Diverged]:
    """Simulate ``machine`` on ``x`` and record the run as a trace."""
    ensure_machine(machine)
    x = as_word(x)
    for symbol in x:
        if symbol not in machine.input_alphabet:
            raise DeviceValidationError([f"input symbol {symbol!r} is not in the input alphabet"], kind="input")
    if step_bound < 1 or space_bound < 1:
        raise DomainError("step and space bounds must be at least 1")

    table = machine.table()
    tape = list(x) if x else [machine.blank]
    if len(tape) > space_bound:
        return Diverged(reason="space", steps=0)
    state, head, steps = machine.start, 0, 0
    snapshots: List[Tuple[str, int, List[str]]] = []
    while True:
        snapshots.append((state, head, list(tape)))
        if state in machine.halting:
            break
        if steps >= step_bound:
            logger.debug(f"{machine.name} on {x!r}: no halt within {step_bound} steps")
            return Diverged(reason="steps", steps=steps)
        move = table[(state, tape[head])]
        tape[head] = move.write
        if move.move == "R":
            head += 1
            if head == len(tape):
                if len(tape) >= space_bound:
                    logger.debug(f"{machine.name} on {x!r}: left the {space_bound} cell space bound")
                    return Diverged(reason="space", steps=steps + 1)
                tape.append(machine.blank)
        else:
            head = max(0, head - 1)
        state = move.next
        steps += 1

    width = len(tape)
    configs = []
    for snap_state, snap_head, snap_tape in snapshots:
        cells = snap_tape + [machine.blank] * (width - len(snap_tape))
        cells[snap_head] = head_symbol(snap_state, cells[snap_head])
        configs.append(tuple(cells))
    if len(configs) % 2 == 1:
        configs.append(configs[-1])
    return TmTrace(
        machine=machine,
        input=x,
        configs=tuple(configs),
        steps=steps,
        step_bound=step_bound,
        space_bound=space_bound,
        accepted=state == machine.accept,
    )


class EncodedComputation(BaseModel):
    """The string ``$C1$C2ᴿ$C3$C4ᴿ$...$Csᴿ$``."""

    model_config = ConfigDict(frozen=True)

    symbols: Word

    def __len__(self) -> int:
        return len(self.symbols)

    def text(self) -> str:
        return " ".join(self.symbols)


def encode_configs(configs: Sequence[Sequence[str]]) -> Word:
    symbols = [SEPARATOR]
    for index, cells in enumerate(configs):
        symbols.extend(reversed(cells) if index % 2 == 1 else cells)
        symbols.append(SEPARATOR)
    return tuple(symbols)


def encode_trace(trace: TmTrace) -> EncodedComputation:
    """Write the trace with every second configuration reversed."""
    return EncodedComputation(symbols=encode_configs(trace.configs))


def decode_encoding(word: Sequence[str]) -> Optional[List[Cells]]:
    """Split at separators and undo the reversals; None if not ``$``-delimited."""
    word = tuple(word)
    if len(word) < 2 or word[0] != SEPARATOR or word[-1] != SEPARATOR:
        return None
    blocks: List[Cells] = []
    current: List[str] = []
    for symbol in word[1:]:
        if symbol == SEPARATOR:
            cells = tuple(reversed(current)) if len(blocks) % 2 == 1 else tuple(current)
            blocks.append(cells)
            current = []
        else:
            current.append(symbol)
    return blocks


def _canonical_width(machine: TmMachine, blocks: Sequence[Cells]) -> bool:
    if machine.blank not in blocks[0]:
        return True
    return any(config_head(machine, cells)[0] == len(cells) - 1 for cells in blocks)  # type: ignore[index]


def acc_oracle(
    machine: TmMachine,
    variant: Variant,
    word: Sequence[str],
    x: Optional[Sequence[str]] = None,
) -> bool:
    """Decide ACC, ODDACC or EVENACC membership directly from the definitions.

    ``x`` None means the union over all inputs.  Malformed words are simply
    not members.
    """
    blocks = decode_encoding(as_word(word))
    if blocks is None:
        return False
    s = len(blocks)
    if s < 2 or s % 2 == 1:
        return False
    heads = [config_head(machine, cells) for cells in blocks]
    if any(head is None for head in heads):
        return False

    if variant == "acc":
        pairs = range(0, s - 1)
    elif variant == "oddacc":
        pairs = range(0, s - 1, 2)
    elif variant == "evenacc":
        pairs = range(1, s - 2, 2)
    else:
        raise DomainError(f"unknown variant {variant!r}")

    for i in pairs:
        if len(blocks[i]) != len(blocks[i + 1]):
            return False
        if succ(machine, blocks[i]) != blocks[i + 1]:
            return False

    if variant == "evenacc":
        return True
    if not is_initial(machine, blocks[0], x):
        return False
    if heads[-1][1] != machine.accept:  # type: ignore[index]
        return False
    if any(head[1] in machine.halting for head in heads[: s - 2]):  # type: ignore[index]
        return False
    return _canonical_width(machine, blocks)


def _length_lex(words: Iterable[Word]) -> List[Word]:
    return sorted(set(words), key=lambda w: (len(w), w))


def all_words(alphabet: Sequence[str], max_length: int) -> Iterable[Word]:
    """Every word up to ``max_length`` in length-lexicographic order."""
    ordered = sorted(alphabet)
    for length in range(max_length + 1):
        yield from itertools.product(ordered, repeat=length)


def edits(word: Word, alphabet: Sequence[str]) -> Set[Word]:
    """Single substitutions, deletions, insertions and adjacent swaps."""
    results: Set[Word] = set()
    for i in range(len(word)):
        results.add(word[:i] + word[i + 1 :])
        for a in alphabet:
            if a != word[i]:
                results.add(word[:i] + (a,) + word[i + 1 :])
        if i + 1 < len(word):
            results.add(word[:i] + (word[i + 1], word[i]) + word[i + 2 :])
    for i in range(len(word) + 1):
        for a in alphabet:
            results.add(word[:i] + (a,) + word[i:])
    return results


def probe_words(
    machine: TmMachine,
    x: Optional[Sequence[str]],
    horizon: int,
    step_bound: int = 64,
    space_bound: int = 16,
    exhaustive_limit: int = 20_000,
    samples: int = 400,
    seed: int = 7,
) -> Tuple[List[Word], str]:
    """Words for checking an encoding grammar against its oracle.

    Every word up to the longest length whose full enumeration stays within
    ``exhaustive_limit`` is included.  When that does not reach ``horizon``,
    the sweep adds the encoded run on ``x`` (ε when None) with all its single
    edits, seeded double edits, padded and extended variants, and seeded
    random block strings.  Returns the words and ``"exhaustive"`` or
    ``"sampled"``.
    """
    alphabet = encoding_alphabet(machine)
    words: Set[Word] = set()
    total = 0
    exhaustive_length = -1
    for length in range(horizon + 1):
        count = len(alphabet) ** length
        if total + count > exhaustive_limit:
            break
        total += count
        exhaustive_length = length
    words.update(all_words(alphabet, exhaustive_length))
    if exhaustive_length >= horizon:
        return _length_lex(words), "exhaustive"

    rng = random.Random(seed)
    tape = [a for a in machine.tape_alphabet]
    heads = [a for a in alphabet if parse_head(a) is not None]
    run = run_trace(machine, as_word(x) if x is not None else (), step_bound, space_bound)
    bases: List[Word] = []
    if isinstance(run, TmTrace):
        encoded = encode_configs(run.configs)
        bases.append(encoded)
        padded = [cells + (machine.blank,) for cells in run.configs]
        bases.append(encode_configs(padded))
        bases.append(encode_configs(list(run.configs) + [run.configs[-1]] * 2))
        if len(run.configs) > 2:
            bases.append(encode_configs(run.configs[:-2]))
    else:
        width = max(len(as_word(x or ())), 1)
        bases.append(encode_configs([initial_config(machine, x or (), width)] * 2))

    for base in bases:
        words.add(base)
        neighbours = edits(base, alphabet)
        words.update(neighbours)
        pool = sorted(neighbours)
        for _ in range(samples // 2):
            words.update([rng.choice(sorted(edits(rng.choice(pool), alphabet)))])

    for _ in range(samples):
        blocks = []
        width = rng.randint(1, 3)
        for _ in range(rng.choice((2, 2, 4))):
            cells = [rng.choice(tape) for _ in range(width)]
            cells[rng.randrange(width)] = rng.choice(heads)
            blocks.append(cells)
        words.add(encode_configs(blocks))

    selected = [w for w in words if len(w) <= horizon]
    return _length_lex(selected), "sampled"
