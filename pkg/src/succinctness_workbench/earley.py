"""Earley recognizer working directly on the grammar it is given.

No normal-form conversion takes place: ε-rules and unit rules are handled in
the chart (nullable completion in the style of Aycock and Horspool), so the
grammar whose nonterminals are counted is exactly the grammar being parsed.

A column only depends on the columns before it, so the chart is built one
symbol at a time and words sharing a prefix can share its columns.
"""

from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Set, Tuple

from succinctness_workbench.devices import Cfg, Word

# (rule, dot, origin)
Item = Tuple[int, int, int]


def nullable_nonterminals(cfg: Cfg) -> Set[str]:
    """Nonterminals that derive the empty word."""
    nullable: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for rule in cfg.rules:
            if rule.lhs not in nullable and all(symbol in nullable for symbol in rule.rhs):
                nullable.add(rule.lhs)
                changed = True
    return nullable


class Column(NamedTuple):
    """A closed chart column.

    ``waiting`` holds the items expecting a nonterminal at this position and
    ``scans`` the items that read a given terminal next.
    """

    waiting: Dict[str, List[Item]]
    scans: Dict[str, List[Item]]
    accepted: bool


class EarleyRecognizer:
    """Membership test for one grammar, compiled once and reused per word."""

    def __init__(self, cfg: Cfg):
        self.cfg = cfg
        self._nonterminals = set(cfg.nonterminals)
        self._nullable = nullable_nonterminals(cfg)
        self._lhs: List[str] = []
        self._rhs: List[Tuple[str, ...]] = []
        self._by_lhs: Dict[str, List[int]] = {n: [] for n in cfg.nonterminals}
        for index, rule in enumerate(cfg.rules):
            self._lhs.append(rule.lhs)
            self._rhs.append(rule.rhs)
            self._by_lhs.setdefault(rule.lhs, []).append(index)
        self._start_rules = self._by_lhs.get(cfg.start, [])

    def start_column(self) -> Column:
        return self._close([], [(rule, 0, 0) for rule in self._start_rules])

    def advance(self, columns: Sequence[Column], symbol: str) -> Optional[Column]:
        """The column after reading ``symbol``; None when no item can read it."""
        movers = columns[-1].scans.get(symbol)
        if not movers:
            return None
        return self._close(columns, [(rule, dot + 1, origin) for rule, dot, origin in movers])

    def _close(self, columns: Sequence[Column], seeds: Iterable[Item]) -> Column:
        position = len(columns)
        nonterminals = self._nonterminals
        nullable = self._nullable
        lhs_of = self._lhs
        rhs_of = self._rhs
        by_lhs = self._by_lhs
        start = self.cfg.start

        items: Set[Item] = set()
        queue: List[Item] = []
        waiting: Dict[str, List[Item]] = {}
        scans: Dict[str, List[Item]] = {}
        predicted: Set[str] = set()
        accepted = False

        def add(item: Item) -> None:
            if item not in items:
                items.add(item)
                queue.append(item)

        for item in seeds:
            add(item)

        cursor = 0
        while cursor < len(queue):
            rule, dot, origin = queue[cursor]
            cursor += 1
            rhs = rhs_of[rule]
            if dot < len(rhs):
                symbol = rhs[dot]
                if symbol in nonterminals:
                    waiting.setdefault(symbol, []).append((rule, dot, origin))
                    if symbol not in predicted:
                        predicted.add(symbol)
                        for candidate in by_lhs.get(symbol, ()):
                            add((candidate, 0, position))
                    if symbol in nullable:
                        add((rule, dot + 1, origin))
                else:
                    scans.setdefault(symbol, []).append((rule, dot, origin))
            else:
                head = lhs_of[rule]
                if origin == 0 and head == start:
                    accepted = True
                parents = waiting if origin == position else columns[origin].waiting
                for parent_rule, parent_dot, parent_origin in list(parents.get(head, ())):
                    add((parent_rule, parent_dot + 1, parent_origin))

        return Column(waiting=waiting, scans=scans, accepted=accepted)

    def recognize(self, word: Sequence[str]) -> bool:
        """True iff the start symbol derives ``word``."""
        columns = [self.start_column()]
        for symbol in word:
            column = self.advance(columns, symbol)
            if column is None:
                return False
            columns.append(column)
        return columns[-1].accepted

    def members(self, alphabet: Sequence[str], max_length: int) -> Iterator[Word]:
        """Every word of the language up to ``max_length``, depth first.

        Words with a common prefix share its columns, and a prefix that no
        item can extend is not explored further.
        """
        ordered = tuple(sorted(alphabet))
        columns = [self.start_column()]
        prefix: List[str] = []

        def visit() -> Iterator[Word]:
            if columns[-1].accepted:
                yield tuple(prefix)
            if len(prefix) == max_length:
                return
            for symbol in ordered:
                column = self.advance(columns, symbol)
                if column is None:
                    continue
                columns.append(column)
                prefix.append(symbol)
                yield from visit()
                columns.pop()
                prefix.pop()

        yield from visit()
