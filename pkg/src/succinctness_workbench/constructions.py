"""Builders for the succinct grammar families.

The core is the counter grammar: by repeated doubling, ``{Yⁿ}`` has a CFG
with T(n) nonterminals where T(2)=2, T(3)=3, T(2m)=T(m)+1 and
T(2m+1)=T(m)+2, so T(n) ≤ 2·lg n.  Everything else here is assembled from
counters with union and concatenation, which cost one fresh start symbol
each.
"""

import math
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from succinctness_workbench.devices import Cfg, Csg, CsgRule, Nfa, NfaTransition, Rule, fresh_symbol, size_of
from succinctness_workbench.errors import DomainError
from succinctness_workbench.models import GapWitness
from succinctness_workbench.oracles import not_ww_oracle, w_dollar_w_oracle
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

ABSTRACT_LETTER = "Y"


class CounterGrammarSpec(BaseModel):
    """Which counter grammar to build.

    ``alphabet`` None means the single abstract terminal Y; otherwise every
    counted position may be any of the given terminals.
    """

    model_config = ConfigDict(frozen=True)

    n: int
    mode: Literal["exact", "at-most", "at-least"] = "exact"
    alphabet: Optional[Tuple[str, ...]] = None


def counter_size(n: int) -> int:
    """Nonterminal count of the exact counter grammar for n."""
    if n < 2:
        raise DomainError(f"counter grammars need n >= 2, got {n}")
    if n in (2, 3):
        return n
    return counter_size(n // 2) + (1 if n % 2 == 0 else 2)


def _counter_rules(n: int, start: str, letter: str) -> Tuple[List[Rule], List[str]]:
    if n == 2:
        return [Rule(lhs=start, rhs=(letter, letter))], [start]
    if n == 3:
        pair = "Y2"
        return [Rule(lhs=start, rhs=(pair, letter)), Rule(lhs=pair, rhs=(letter, letter))], [start, pair]
    half = f"S{n // 2}"
    rules, nonterminals = _counter_rules(n // 2, half, letter)
    if n % 2 == 0:
        return [Rule(lhs=start, rhs=(half, half))] + rules, [start] + nonterminals
    doubled = f"D{n}"
    head = [Rule(lhs=start, rhs=(letter, doubled)), Rule(lhs=doubled, rhs=(half, half))]
    return head + rules, [start, doubled] + nonterminals


def _letter_grammar(alphabet: Optional[Sequence[str]]) -> Tuple[str, Tuple[str, ...], List[Rule]]:
    """The letter nonterminal, the terminals, and the letter's rules."""
    if alphabet is None:
        letter = fresh_symbol(ABSTRACT_LETTER, [ABSTRACT_LETTER])
        return letter, (ABSTRACT_LETTER,), [Rule(lhs=letter, rhs=(ABSTRACT_LETTER,))]
    if not alphabet:
        raise DomainError("the alphabet must not be empty")
    terminals = tuple(alphabet)
    return ABSTRACT_LETTER, terminals, [Rule(lhs=ABSTRACT_LETTER, rhs=(a,)) for a in terminals]


def _exact_counter(n: int, alphabet: Optional[Sequence[str]], start: str = "S") -> Tuple[Cfg, str]:
    letter, terminals, letter_rules = _letter_grammar(alphabet)
    rules, nonterminals = _counter_rules(n, start, letter)
    nonterminals.append(letter)
    clash = set(nonterminals) & set(terminals)
    if clash:
        raise DomainError(f"terminal names clash with counter nonterminals: {', '.join(sorted(clash))}")
    grammar = Cfg(nonterminals=tuple(nonterminals), terminals=terminals, rules=tuple(rules + letter_rules), start=start)
    return grammar, letter


def star_cfg(alphabet: Optional[Sequence[str]] = None) -> Cfg:
    """One-nonterminal grammar for every word over the alphabet (Y* when abstract)."""
    terminals = (ABSTRACT_LETTER,) if alphabet is None else tuple(alphabet)
    start = fresh_symbol("S", terminals)
    rules = [Rule(lhs=start, rhs=(a, start)) for a in terminals] + [Rule(lhs=start, rhs=())]
    return Cfg(nonterminals=(start,), terminals=terminals, rules=tuple(rules), start=start)


def counter_cfg(spec: CounterGrammarSpec) -> Cfg:
    """Counter grammar for exactly, at most, or at least n letters."""
    if spec.n < 2:
        raise DomainError(f"counter grammars need n >= 2, got {spec.n}")
    grammar, letter = _exact_counter(spec.n, spec.alphabet)
    if spec.mode == "at-most":
        grammar = grammar.model_copy(update={"rules": grammar.rules + (Rule(lhs=letter, rhs=()),)})
    elif spec.mode == "at-least":
        grammar = cfg_concat(grammar, star_cfg(spec.alphabet))
    logger.debug(f"counter grammar n={spec.n} mode={spec.mode}: {len(grammar.nonterminals)} nonterminals")
    return grammar


def letters_cfg(m: int, alphabet: Sequence[str] = ("a", "b")) -> Cfg:
    """All words of length exactly m over ``alphabet``."""
    if m < 0:
        raise DomainError(f"length must be nonnegative, got {m}")
    if m >= 2:
        return counter_cfg(CounterGrammarSpec(n=m, alphabet=tuple(alphabet)))
    start = fresh_symbol("S", alphabet)
    rules = [Rule(lhs=start, rhs=(a,)) for a in alphabet] if m == 1 else [Rule(lhs=start, rhs=())]
    return Cfg(nonterminals=(start,), terminals=tuple(alphabet), rules=tuple(rules), start=start)


def _rename_apart(parts: Sequence[Cfg]) -> Tuple[List[Cfg], Tuple[str, ...]]:
    """Suffix every part's nonterminals with its 1-based index."""
    terminals: List[str] = []
    for part in parts:
        terminals += [t for t in part.terminals if t not in terminals]
    taken = set(terminals)
    renamed = []
    for index, part in enumerate(parts, start=1):
        mapping: Dict[str, str] = {}
        for nonterminal in part.nonterminals:
            name = fresh_symbol(f"{nonterminal}_{index}", taken)
            taken.add(name)
            mapping[nonterminal] = name
        renamed.append(
            Cfg(
                nonterminals=tuple(mapping[x] for x in part.nonterminals),
                terminals=part.terminals,
                rules=tuple(
                    Rule(lhs=mapping[r.lhs], rhs=tuple(mapping.get(s, s) for s in r.rhs)) for r in part.rules
                ),
                start=mapping[part.start],
            )
        )
    return renamed, tuple(terminals)


def _combine(parts: Sequence[Cfg], start_bodies) -> Cfg:
    renamed, terminals = _rename_apart(parts)
    taken = set(terminals) | {n for part in renamed for n in part.nonterminals}
    start = fresh_symbol("S", taken)
    rules = [Rule(lhs=start, rhs=body) for body in start_bodies([p.start for p in renamed])]
    for part in renamed:
        rules += part.rules
    return Cfg(
        nonterminals=(start,) + tuple(n for part in renamed for n in part.nonterminals),
        terminals=terminals,
        rules=tuple(rules),
        start=start,
    )


def cfg_union(parts: Sequence[Cfg]) -> Cfg:
    """Fresh start with one alternative per part, parts renamed apart."""
    if not parts:
        raise DomainError("cfg_union needs at least one grammar")
    return _combine(parts, lambda starts: [(s,) for s in starts])


def cfg_concat(g1: Cfg, g2: Cfg) -> Cfg:
    """Fresh start S → S₁ S₂ over the two grammars renamed apart."""
    return _combine([g1, g2], lambda starts: [tuple(starts)])


def mismatch_cfg(n: int) -> Cfg:
    """Words over {a, b} with two different letters exactly n positions apart."""
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    gap, _ = _rename_apart([letters_cfg(n - 1)])
    middle = gap[0]
    start, pad = "M", "U"
    rules = [
        Rule(lhs=start, rhs=(pad, "a", middle.start, "b", pad)),
        Rule(lhs=start, rhs=(pad, "b", middle.start, "a", pad)),
        Rule(lhs=pad, rhs=("a", pad)),
        Rule(lhs=pad, rhs=("b", pad)),
        Rule(lhs=pad, rhs=()),
    ]
    return Cfg(
        nonterminals=(start, pad) + middle.nonterminals,
        terminals=("a", "b"),
        rules=tuple(rules) + middle.rules,
        start=start,
    )


def complement_ww_cfg(n: int) -> Cfg:
    """CFG of size O(log n) for the complement of {ww : |w| = n} over {a, b}."""
    if n < 2:
        raise DomainError(f"complement_ww_cfg needs n >= 2, got {n}")
    short = counter_cfg(CounterGrammarSpec(n=2 * n - 1, mode="at-most", alphabet=("a", "b")))
    long = counter_cfg(CounterGrammarSpec(n=2 * n + 1, mode="at-least", alphabet=("a", "b")))
    grammar = cfg_union([short, long, mismatch_cfg(n)])
    logger.info(f"complement of ww for n={n}: {len(grammar.nonterminals)} nonterminals, {len(grammar.rules)} rules")
    return grammar


def complement_ww_bound(n: int) -> Tuple[str, int]:
    return "6*lg(n) + 11", math.floor(6 * math.log2(n) + 11)


def w_dollar_w_csg(n: int) -> Csg:
    """Noncontracting grammar for {w$w : w ∈ {a, b}ⁿ}.

    The counter part derives Yⁿ W; each Y becomes a letter plus a carrier A
    or B that walks right over terminals and crosses W to drop a copy of the
    letter on the far side.  Carriers cannot overtake each other, so the
    copies arrive in order.
    """
    if n < 1:
        raise DomainError(f"w_dollar_w_csg needs n >= 1, got {n}")
    letter, carrier_a, carrier_b, wall = "Y", "A", "B", "W"
    if n == 1:
        counted, counter_nonterminals = letter, []
        counter_rules: List[Rule] = []
    else:
        counted = "C"
        counter_rules, counter_nonterminals = _counter_rules(n, counted, letter)
    rules = [CsgRule(lhs=("S",), rhs=(counted, wall))]
    rules += [CsgRule(lhs=(r.lhs,), rhs=r.rhs) for r in counter_rules]
    rules += [
        CsgRule(lhs=(letter,), rhs=("a", carrier_a)),
        CsgRule(lhs=(letter,), rhs=("b", carrier_b)),
        CsgRule(lhs=(carrier_a, "a"), rhs=("a", carrier_a)),
        CsgRule(lhs=(carrier_a, "b"), rhs=("b", carrier_a)),
        CsgRule(lhs=(carrier_b, "a"), rhs=("a", carrier_b)),
        CsgRule(lhs=(carrier_b, "b"), rhs=("b", carrier_b)),
        CsgRule(lhs=(carrier_a, wall), rhs=(wall, "a")),
        CsgRule(lhs=(carrier_b, wall), rhs=(wall, "b")),
        CsgRule(lhs=(wall,), rhs=("$",)),
    ]
    grammar = Csg(
        nonterminals=("S",) + tuple(counter_nonterminals) + (letter, carrier_a, carrier_b, wall),
        terminals=("a", "b", "$"),
        rules=tuple(rules),
        start="S",
    )
    logger.info(f"w$w grammar for n={n}: {len(grammar.nonterminals)} nonterminals")
    return grammar


def w_dollar_w_bound(n: int) -> Tuple[str, int]:
    return "2*lg(n) + 5", math.floor(2 * math.log2(n) + 5)


def complement_ww_gap_witness(n: int) -> GapWitness:
    grammar = complement_ww_cfg(n)
    bound, value = complement_ww_bound(n)
    return GapWitness(
        label=f"not-ww(n={n})",
        grammar=grammar,
        reference=not_ww_oracle(n),
        size=size_of(grammar),
        bound=bound,
        bound_value=value,
    )


def w_dollar_w_gap_witness(n: int) -> GapWitness:
    grammar = w_dollar_w_csg(n)
    bound, value = w_dollar_w_bound(n)
    return GapWitness(
        label=f"w-dollar-w(n={n})",
        grammar=grammar,
        reference=w_dollar_w_oracle(n),
        size=size_of(grammar),
        bound=bound,
        bound_value=value,
    )


def kth_from_end_nfa(k: int, alphabet: Sequence[str] = ("a", "b")) -> Nfa:
    """k+1 states for "the k-th letter from the end is a"; every DFA needs 2^k."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if "a" not in alphabet:
        raise DomainError("the alphabet must contain 'a'")
    states = tuple(f"q{i}" for i in range(k + 1))
    transitions = [NfaTransition(source="q0", symbol=s, target="q0") for s in alphabet]
    transitions.append(NfaTransition(source="q0", symbol="a", target="q1"))
    for i in range(1, k):
        transitions += [NfaTransition(source=f"q{i}", symbol=s, target=f"q{i + 1}") for s in alphabet]
    return Nfa(states=states, alphabet=tuple(alphabet), transitions=tuple(transitions), start="q0", accepting=(f"q{k}",))
