"""Bounded equivalence, emptiness, first members and minimal-device searches.

Everything that cannot be decided exactly is checked on all words up to a
horizon and flagged ``horizon-bounded``; only automaton-to-automaton
comparisons through the product construction are reported as ``exact``.
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from succinctness_workbench.constructions import kth_from_end_nfa
from succinctness_workbench.devices import (
    Cfg,
    Device,
    Dfa,
    Language,
    Nfa,
    Word,
    alphabet_of,
    as_word,
    ensure_valid,
    nfa_view,
    show_word,
    size_of,
)
from succinctness_workbench.enumeration import (
    CandidateBudget,
    CnfLayout,
    cnf_device,
    cnf_masks,
    dfa_device,
    dfa_tables,
    enumerate_devices,
    iter_devices,
    nfa_codes,
    nfa_device,
)
from succinctness_workbench.errors import BudgetExceededError, DomainError, UnsupportedError
from succinctness_workbench.membership import accepts
from succinctness_workbench.models import (
    BoundingEstimate,
    EquivalenceResult,
    EstimateRow,
    Horizon,
    MinimalDevice,
    SizeEnumeration,
)
from succinctness_workbench.tm_encodings import all_words
from succinctness_workbench.transforms import (
    dfa_equivalent,
    dfa_minimize,
    generating_nonterminals,
    nfa_to_dfa,
    nfa_trim,
)
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

DeviceClass = str
CLASSES = ("dfa", "nfa", "cnf-cfg")


def _sweep_alphabet(a: Language, b: Language, horizon: Horizon) -> Tuple[str, ...]:
    if horizon.alphabet is not None:
        return tuple(sorted(set(horizon.alphabet)))
    return tuple(sorted(set(alphabet_of(a)) | set(alphabet_of(b))))


def bounded_equiv(
    a: Language,
    b: Language,
    horizon: Horizon,
    budget: Optional[int] = None,
) -> EquivalenceResult:
    """Compare two languages on every word up to the horizon.

    Words are visited in length-lexicographic order over the union of the
    two alphabets (or the horizon's own alphabet), so the counterexample is
    the least one and the result does not depend on argument order.

    Raises:
        BudgetExceededError: more than ``budget`` words would be checked
    """
    alphabet = _sweep_alphabet(a, b, horizon)
    checked = 0
    for word in all_words(alphabet, horizon.max_length):
        checked += 1
        if budget is not None and checked > budget:
            raise BudgetExceededError("bounded equivalence", budget)
        if accepts(a, word) != accepts(b, word):
            logger.debug(f"disagreement on {show_word(word)} after {checked} words")
            return EquivalenceResult(
                equal=False, counterexample=word, horizon=horizon.max_length, words_checked=checked
            )
    return EquivalenceResult(equal=True, horizon=horizon.max_length, words_checked=checked)


def sweep_agreement(
    a: Language, b: Language, words: Iterable[Sequence[str]], mode: str = "sampled"
) -> EquivalenceResult:
    """Compare two languages on an explicit word list; the counterexample is the least disagreement."""
    ordered = sorted({as_word(w) for w in words}, key=lambda w: (len(w), w))
    for checked, word in enumerate(ordered, start=1):
        if accepts(a, word) != accepts(b, word):
            return EquivalenceResult(
                equal=False,
                counterexample=word,
                horizon=max(len(w) for w in ordered),
                words_checked=checked,
                mode=mode,  # type: ignore[arg-type]
            )
    return EquivalenceResult(
        equal=True,
        horizon=max((len(w) for w in ordered), default=0),
        words_checked=len(ordered),
        mode=mode,  # type: ignore[arg-type]
    )


def cfg_emptiness(cfg: Cfg) -> str:
    """``"empty"`` iff the start symbol generates no terminal word, else ``"nonempty"``."""
    ensure_valid(cfg)
    return "nonempty" if cfg.start in generating_nonterminals(cfg) else "empty"


def cfg_shortest_member(cfg: Cfg) -> Optional[Word]:
    """The length-lexicographically least word of the language, or None when it is empty.

    Each nonterminal's least word is found by a fixpoint over the rules: a
    least word of minimal length is the concatenation of the least words of
    the right-hand side parts.
    """
    ensure_valid(cfg)
    nonterminals = set(cfg.nonterminals)
    best: Dict[str, Word] = {}
    changed = True
    while changed:
        changed = False
        for rule in cfg.rules:
            if any(s in nonterminals and s not in best for s in rule.rhs):
                continue
            word: Word = ()
            for symbol in rule.rhs:
                word += best[symbol] if symbol in nonterminals else (symbol,)
            current = best.get(rule.lhs)
            if current is None or (len(word), word) < (len(current), current):
                best[rule.lhs] = word
                changed = True
    return best.get(cfg.start)


def _regular_dfa(target: Language) -> Optional[Dfa]:
    if isinstance(target, Dfa):
        return target
    if isinstance(target, Nfa):
        return nfa_to_dfa(target)[0]
    return None


class _HorizonTable:
    """Target membership on every word up to the horizon, words as symbol indices."""

    def __init__(self, target: Language, alphabet: Sequence[str], max_length: int):
        self.alphabet = tuple(alphabet)
        index = {a: i for i, a in enumerate(self.alphabet)}
        self.words = list(all_words(self.alphabet, max_length))
        self.encoded = [tuple(index[a] for a in w) for w in self.words]
        self.bits = [accepts(target, w) for w in self.words]


def _dfa_matches(table: Sequence[int], symbols: int, accepting: int, horizon: _HorizonTable) -> bool:
    for word, bit in zip(horizon.encoded, horizon.bits):
        state = 0
        for symbol in word:
            state = table[state * symbols + symbol]
        if bool(accepting >> state & 1) != bit:
            return False
    return True


def _cnf_matches(layout: CnfLayout, mask: int, horizon: _HorizonTable) -> bool:
    """CYK over all horizon words at once: substrings of horizon words are horizon words."""
    terminal_rules: Dict[int, int] = {}
    binary_rules: List[Tuple[int, int, int]] = []
    for bit in range(layout.width):
        if mask >> bit & 1:
            lhs, rhs = layout.rule(bit)
            if rhs[0][0] == "t":
                terminal_rules[rhs[0][1]] = terminal_rules.get(rhs[0][1], 0) | 1 << lhs
            else:
                binary_rules.append((lhs, rhs[0][1], rhs[1][1]))
    derives: Dict[Tuple[int, ...], int] = {(): 0}
    for word, bit in zip(horizon.encoded, horizon.bits):
        if len(word) == 1:
            found = terminal_rules.get(word[0], 0)
        elif len(word) > 1:
            found = 0
            for split in range(1, len(word)):
                left, right = derives[word[:split]], derives[word[split:]]
                if not left or not right:
                    continue
                for lhs, b, c in binary_rules:
                    if left >> b & 1 and right >> c & 1:
                        found |= 1 << lhs
        else:
            found = 0
        derives[word] = found
        if bool(found & 1) != bit:
            return False
    return True


def _search_regular_nfa(target: Language, target_dfa: Dfa, horizon: Horizon, budget: int) -> MinimalDevice:
    alphabet = tuple(sorted(target_dfa.alphabet))
    minimal = dfa_minimize(target_dfa)
    upper: Nfa = nfa_trim(nfa_view(minimal))
    if isinstance(target, Nfa):
        trimmed = nfa_trim(target)
        if len(trimmed.states) < len(upper.states):
            upper = trimmed
    table = _HorizonTable(target_dfa, alphabet, min(horizon.max_length, 6))
    counter = CandidateBudget(budget, "nfa search")
    examined = 0
    try:
        for size in range(1, len(upper.states)):
            for code in nfa_codes(size, len(alphabet), counter):
                examined += 1
                if any(code.accepts(w) != bit for w, bit in zip(table.encoded, table.bits)):
                    continue
                candidate = nfa_device(code, alphabet)
                if dfa_equivalent(nfa_to_dfa(candidate)[0], target_dfa):
                    return MinimalDevice(size=size, witness=candidate, flag="exact", candidates_examined=examined)
    except BudgetExceededError:
        logger.warning(f"nfa search stopped after {counter.used} candidates; reporting an upper bound")
        return MinimalDevice(
            size=len(upper.states), witness=upper, flag="upper-bound", candidates_examined=examined
        )
    return MinimalDevice(size=len(upper.states), witness=upper, flag="exact", candidates_examined=examined)


def min_device_search(
    target: Language,
    device_class: DeviceClass,
    horizon: Horizon,
    budget: int,
) -> MinimalDevice:
    """Smallest device of ``device_class`` for the target language.

    Regular targets (DFA/NFA) get exact answers for the DFA and NFA classes:
    the DFA class by minimization, the NFA class by enumerating every
    smaller NFA and testing it with the product construction (flagged
    ``upper-bound`` if the budget runs out first).  All other combinations
    enumerate the class in size order and accept the first device that
    agrees with the target on the horizon, flagged ``horizon-bounded``.

    Args:
        target: Device or predicate oracle to match
        device_class: dfa, nfa or cnf-cfg
        horizon: Word-length bound (and optional alphabet) for bounded checks
        budget: Maximum number of candidates to generate

    Returns:
        MinimalDevice with size, witness and flag

    Raises:
        BudgetExceededError: a horizon-bounded search ran out of budget
    """
    if device_class not in CLASSES:
        raise UnsupportedError(f"unknown device class {device_class!r}")
    if budget < 1:
        raise DomainError(f"budget must be positive, got {budget}")
    regular = _regular_dfa(target)
    if regular is not None and device_class == "dfa":
        minimal = dfa_minimize(regular)
        return MinimalDevice(size=size_of(minimal), witness=minimal, flag="exact")
    if regular is not None and device_class == "nfa":
        return _search_regular_nfa(target, regular, horizon, budget)

    alphabet = tuple(sorted(horizon.alphabet or alphabet_of(target)))
    table = _HorizonTable(target, alphabet, horizon.max_length)
    counter = CandidateBudget(budget, f"{device_class} search")
    m = len(alphabet)
    examined = 0
    size = 1
    while True:
        if device_class == "dfa":
            for code in dfa_tables(size, m):
                for accepting in range(1 << size):
                    counter.spend()
                    examined += 1
                    if _dfa_matches(code, m, accepting, table):
                        witness: Device = dfa_device(size, alphabet, code, accepting)
                        return _bounded(size, witness, horizon, examined)
        elif device_class == "nfa":
            for nfa in nfa_codes(size, m, counter):
                examined += 1
                if all(nfa.accepts(w) == bit for w, bit in zip(table.encoded, table.bits)):
                    return _bounded(size, nfa_device(nfa, alphabet), horizon, examined)
        else:
            layout = CnfLayout(size, m)
            for mask in cnf_masks(size, m, counter):
                examined += 1
                if _cnf_matches(layout, mask, table):
                    return _bounded(size, cnf_device(size, alphabet, mask), horizon, examined)
        size += 1


def _bounded(size: int, witness: Device, horizon: Horizon, examined: int) -> MinimalDevice:
    logger.info(f"size {size} device agrees up to length {horizon.max_length} after {examined} candidates")
    return MinimalDevice(
        size=size, witness=witness, flag="horizon-bounded", horizon=horizon.max_length, candidates_examined=examined
    )


def default_seeds(pair: Tuple[str, str], n: int, alphabet: Sequence[str]) -> List[Device]:
    """Known hard cases added to an estimate: k-th-from-end NFAs for (DFA, NFA)."""
    if pair != ("dfa", "nfa") or "a" not in alphabet:
        return []
    return [kth_from_end_nfa(k, tuple(sorted(alphabet))) for k in range(1, n)]


def bounding_estimate(
    pair: Tuple[str, str],
    n: int,
    horizon: Horizon,
    budget: int,
    seeds: Optional[Sequence[Device]] = None,
) -> BoundingEstimate:
    """Largest minimal M-size over the M'-devices of size at most n.

    ``pair`` is (M, M'): each enumerated M'-device gets a minimal-device
    search in class M, and MAX is the largest size found.  Seed devices of
    size at most n are added after the enumeration.  When the enumeration
    budget cuts the listing short the estimate is marked incomplete; a
    failed per-device search is recorded in its row.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    target_class, source_class = pair
    if target_class not in CLASSES or source_class not in CLASSES:
        raise UnsupportedError(f"unknown class pair {pair!r}")
    alphabet = tuple(sorted(horizon.alphabet or ("a", "b")))
    enumeration = SizeEnumeration(device_class=source_class, alphabet=alphabet)  # type: ignore[arg-type]
    devices: List[Device] = []
    complete = True
    try:
        for device in iter_devices(enumeration, max_size=n, budget=budget):
            devices.append(device)
    except BudgetExceededError:
        complete = False
        logger.warning(f"{source_class} enumeration truncated at {len(devices)} devices")
    extra = list(seeds) if seeds is not None else default_seeds(pair, n, alphabet)
    devices += [d for d in extra if size_of(d) <= n]

    rows: List[EstimateRow] = []
    for index, device in enumerate(devices, start=1):
        row = EstimateRow(index=index, device_size=size_of(device), device=device)
        try:
            found = min_device_search(device, target_class, horizon, budget)
            row.minimal_size, row.flag = found.size, found.flag
        except (BudgetExceededError, UnsupportedError) as e:
            row.error = str(e)
        rows.append(row)
    sizes = [row.minimal_size for row in rows if row.minimal_size is not None]
    estimate = BoundingEstimate(
        pair=pair, n=n, horizon=horizon.max_length, rows=rows, max=max(sizes, default=0), complete=complete
    )
    logger.info(f"bounding estimate {pair} n={n}: MAX={estimate.max} over {len(rows)} devices")
    return estimate


__all__ = [
    "bounded_equiv",
    "bounding_estimate",
    "cfg_emptiness",
    "cfg_shortest_member",
    "default_seeds",
    "enumerate_devices",
    "min_device_search",
    "sweep_agreement",
]
