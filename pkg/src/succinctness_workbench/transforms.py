"""Size-bounded conversions between device kinds and closure constructions.

Every conversion that has a size bound returns a ``ConversionReceipt`` next
to its result.  The constants are ours: ``cfg_to_pda`` adds three control
states and one bottom marker (c = 4); ``pda_to_cfg`` first adds two states
and one stack symbol to switch from final-state to empty-stack acceptance.
"""

from collections import deque
from itertools import product
from typing import Dict, FrozenSet, List, Literal, Optional, Set, Tuple

from succinctness_workbench.devices import (
    Cfg,
    Dfa,
    DfaTransition,
    Dpda,
    Nfa,
    Pda,
    PdaTransition,
    Rule,
    Word,
    ensure_valid,
    fresh_symbol,
    size_of,
)
from succinctness_workbench.errors import DomainError
from succinctness_workbench.membership import epsilon_closure, follow_epsilon, nfa_moves
from succinctness_workbench.models import ConversionReceipt
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

CFG_TO_PDA_CONSTANT = 4


def _receipt(conversion: str, input_size: int, output_size: int, bound: str, bound_value: int, notes=None) -> ConversionReceipt:
    receipt = ConversionReceipt(
        conversion=conversion,
        input_size=input_size,
        output_size=output_size,
        bound=bound,
        bound_value=bound_value,
        bound_satisfied=output_size <= bound_value,
        notes=list(notes or []),
    )
    logger.debug(f"{conversion}: {input_size} -> {output_size} (bound {bound} = {bound_value})")
    return receipt


def nfa_to_dfa(nfa: Nfa) -> Tuple[Dfa, ConversionReceipt]:
    """Subset construction restricted to reachable subsets.

    The empty subset becomes an ordinary (rejecting) sink when it is reached,
    so the result is total.
    """
    ensure_valid(nfa)
    moves = nfa_moves(nfa)
    alphabet = tuple(sorted(nfa.alphabet))
    accepting = frozenset(nfa.accepting)

    start = epsilon_closure(moves, [nfa.start])
    names: Dict[FrozenSet[str], str] = {start: "d0"}
    queue = deque([start])
    transitions: List[DfaTransition] = []
    while queue:
        subset = queue.popleft()
        for symbol in alphabet:
            step: Set[str] = set()
            for state in subset:
                step.update(moves.get((state, symbol), ()))
            target = epsilon_closure(moves, step)
            if target not in names:
                names[target] = f"d{len(names)}"
                queue.append(target)
            transitions.append(DfaTransition(source=names[subset], symbol=symbol, target=names[target]))

    dfa = Dfa(
        states=tuple(names.values()),
        alphabet=alphabet,
        transitions=tuple(transitions),
        start="d0",
        accepting=tuple(name for subset, name in names.items() if subset & accepting),
    )
    n = len(nfa.states)
    return dfa, _receipt("nfa2dfa", n, len(dfa.states), "2^n", 2**n)


def dfa_complement(dfa: Dfa) -> Dfa:
    ensure_valid(dfa)
    accepting = set(dfa.accepting)
    return dfa.model_copy(update={"accepting": tuple(q for q in dfa.states if q not in accepting)})


def reachable_dfa(dfa: Dfa) -> Dfa:
    """Drop the states that cannot be reached from the start."""
    table = dfa.table()
    seen = {dfa.start}
    queue = deque([dfa.start])
    while queue:
        state = queue.popleft()
        for symbol in dfa.alphabet:
            target = table[(state, symbol)]
            if target not in seen:
                seen.add(target)
                queue.append(target)
    return Dfa(
        states=tuple(q for q in dfa.states if q in seen),
        alphabet=dfa.alphabet,
        transitions=tuple(t for t in dfa.transitions if t.source in seen),
        start=dfa.start,
        accepting=tuple(q for q in dfa.accepting if q in seen),
    )


def _same_alphabet(d1: Dfa, d2: Dfa) -> None:
    if set(d1.alphabet) != set(d2.alphabet):
        raise DomainError(
            f"alphabet mismatch: {{{', '.join(sorted(d1.alphabet))}}} vs {{{', '.join(sorted(d2.alphabet))}}}"
        )


def dfa_product(d1: Dfa, d2: Dfa, op: Literal["and", "or"] = "and") -> Tuple[Dfa, ConversionReceipt]:
    """Product automaton for intersection or union, pruned to reachable pairs.

    The receipt bounds the result by n·m, the size of the full product.  The
    notes also carry 2·max(n, m) for comparison with the linear bound quoted
    for intersection in the literature; that one is not asserted.
    """
    ensure_valid(d1)
    ensure_valid(d2)
    _same_alphabet(d1, d2)
    if op not in ("and", "or"):
        raise DomainError(f"unknown product operation {op!r}")
    t1, t2 = d1.table(), d2.table()
    f1, f2 = set(d1.accepting), set(d2.accepting)
    alphabet = tuple(sorted(d1.alphabet))

    def name(pair: Tuple[str, str]) -> str:
        return f"<{pair[0]},{pair[1]}>"

    pairs = list(product(d1.states, d2.states))
    transitions = [
        DfaTransition(source=name((p, q)), symbol=a, target=name((t1[(p, a)], t2[(q, a)])))
        for p, q in pairs
        for a in alphabet
    ]
    if op == "and":
        accepting = [name((p, q)) for p, q in pairs if p in f1 and q in f2]
    else:
        accepting = [name((p, q)) for p, q in pairs if p in f1 or q in f2]
    full = Dfa(
        states=tuple(name(pair) for pair in pairs),
        alphabet=alphabet,
        transitions=tuple(transitions),
        start=name((d1.start, d2.start)),
        accepting=tuple(accepting),
    )
    pruned = reachable_dfa(full)
    n, m = len(d1.states), len(d2.states)
    notes = [f"full product: {n * m} states", f"linear comparison value 2*max(n, m) = {2 * max(n, m)}"]
    return pruned, _receipt(f"dfa-product-{op}", n + m, len(pruned.states), "n*m", n * m, notes)


def canonical_dfa(dfa: Dfa, prefix: str = "m") -> Dfa:
    """Reachable part renamed in breadth-first order over the sorted alphabet."""
    table = dfa.table()
    alphabet = tuple(sorted(dfa.alphabet))
    names = {dfa.start: f"{prefix}0"}
    queue = deque([dfa.start])
    transitions: List[DfaTransition] = []
    while queue:
        state = queue.popleft()
        for symbol in alphabet:
            target = table[(state, symbol)]
            if target not in names:
                names[target] = f"{prefix}{len(names)}"
                queue.append(target)
            transitions.append(DfaTransition(source=names[state], symbol=symbol, target=names[target]))
    accepting = set(dfa.accepting)
    return Dfa(
        states=tuple(names.values()),
        alphabet=alphabet,
        transitions=tuple(transitions),
        start=f"{prefix}0",
        accepting=tuple(names[q] for q in names if q in accepting),
    )


def dfa_minimize(dfa: Dfa) -> Dfa:
    """Minimal DFA by partition refinement, in canonical form.

    Two minimal DFAs for the same language come out identical, so the
    operation is idempotent and comparisons can use plain equality.
    """
    ensure_valid(dfa)
    reachable = reachable_dfa(dfa)
    table = reachable.table()
    alphabet = tuple(sorted(reachable.alphabet))
    accepting = set(reachable.accepting)
    block = {q: int(q in accepting) for q in reachable.states}
    while True:
        signatures = {q: (block[q],) + tuple(block[table[(q, a)]] for a in alphabet) for q in reachable.states}
        numbering: Dict[Tuple[int, ...], int] = {}
        refined = {q: numbering.setdefault(signatures[q], len(numbering)) for q in reachable.states}
        if len(numbering) == len(set(block.values())):
            break
        block = refined

    representative: Dict[int, str] = {}
    for q in reachable.states:
        representative.setdefault(block[q], q)
    quotient = Dfa(
        states=tuple(f"b{i}" for i in representative),
        alphabet=alphabet,
        transitions=tuple(
            DfaTransition(source=f"b{i}", symbol=a, target=f"b{block[table[(q, a)]]}")
            for i, q in representative.items()
            for a in alphabet
        ),
        start=f"b{block[reachable.start]}",
        accepting=tuple(f"b{i}" for i, q in representative.items() if q in accepting),
    )
    minimal = canonical_dfa(quotient)
    logger.debug(f"minimized {len(dfa.states)} -> {len(minimal.states)} states")
    return minimal


def dfa_difference(d1: Dfa, d2: Dfa) -> Optional[Word]:
    """The length-lex least word on which two DFAs disagree, or None."""
    ensure_valid(d1)
    ensure_valid(d2)
    _same_alphabet(d1, d2)
    t1, t2 = d1.table(), d2.table()
    f1, f2 = set(d1.accepting), set(d2.accepting)
    alphabet = tuple(sorted(d1.alphabet))
    start = (d1.start, d2.start)
    paths: Dict[Tuple[str, str], Word] = {start: ()}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        if (pair[0] in f1) != (pair[1] in f2):
            return paths[pair]
        for a in alphabet:
            target = (t1[(pair[0], a)], t2[(pair[1], a)])
            if target not in paths:
                paths[target] = paths[pair] + (a,)
                queue.append(target)
    return None


def dfa_equivalent(d1: Dfa, d2: Dfa) -> bool:
    """Exact language equality through product reachability."""
    return dfa_difference(d1, d2) is None


def dfa_to_cfg(dfa: Dfa) -> Cfg:
    """Right-linear grammar with one nonterminal per useful state."""
    ensure_valid(dfa)
    useful = reachable_dfa(dfa)
    table = useful.table()
    productive = set(useful.accepting)
    changed = True
    while changed:
        changed = False
        for (source, _), target in table.items():
            if target in productive and source not in productive:
                productive.add(source)
                changed = True

    def nonterminal(state: str) -> str:
        return f"<{state}>"

    rules = []
    for state in useful.states:
        if state not in productive:
            continue
        if state in useful.accepting:
            rules.append(Rule(lhs=nonterminal(state), rhs=()))
        for symbol in sorted(useful.alphabet):
            target = table[(state, symbol)]
            if target in productive:
                rules.append(Rule(lhs=nonterminal(state), rhs=(symbol, nonterminal(target))))
    nonterminals = [nonterminal(useful.start)] + [
        nonterminal(q) for q in useful.states if q in productive and q != useful.start
    ]
    return Cfg(
        nonterminals=tuple(nonterminals),
        terminals=tuple(sorted(dfa.alphabet)),
        rules=tuple(rules),
        start=nonterminal(useful.start),
    )


def nfa_trim(nfa: Nfa) -> Nfa:
    """Keep the start state and the states that are both reachable and co-reachable."""
    ensure_valid(nfa)
    forward: Dict[str, Set[str]] = {}
    backward: Dict[str, Set[str]] = {}
    for t in nfa.transitions:
        forward.setdefault(t.source, set()).add(t.target)
        backward.setdefault(t.target, set()).add(t.source)

    def closure(seeds, edges) -> Set[str]:
        found = set(seeds)
        stack = list(found)
        while stack:
            for nxt in edges.get(stack.pop(), ()):
                if nxt not in found:
                    found.add(nxt)
                    stack.append(nxt)
        return found

    keep = closure([nfa.start], forward) & closure(nfa.accepting, backward)
    keep.add(nfa.start)
    return Nfa(
        states=tuple(q for q in nfa.states if q in keep),
        alphabet=nfa.alphabet,
        transitions=tuple(t for t in nfa.transitions if t.source in keep and t.target in keep),
        start=nfa.start,
        accepting=tuple(q for q in nfa.accepting if q in keep),
    )


def cfg_to_pda(cfg: Cfg) -> Tuple[Pda, ConversionReceipt]:
    """Predictive single-loop PDA accepting by final state.

    The stack holds the unmatched suffix of a leftmost derivation above a
    bottom marker; seeing the marker again means the derivation is complete.
    """
    ensure_valid(cfg)
    bottom = fresh_symbol("Z0", cfg.nonterminals + cfg.terminals)
    begin, loop, done = "q_start", "q_loop", "q_accept"
    transitions = [PdaTransition(source=begin, symbol=None, pop=bottom, target=loop, push=(cfg.start, bottom))]
    transitions += [PdaTransition(source=loop, symbol=None, pop=r.lhs, target=loop, push=r.rhs) for r in cfg.rules]
    transitions += [PdaTransition(source=loop, symbol=a, pop=a, target=loop) for a in cfg.terminals]
    transitions.append(PdaTransition(source=loop, symbol=None, pop=bottom, target=done, push=(bottom,)))
    pda = Pda(
        states=(begin, loop, done),
        input_alphabet=cfg.terminals,
        stack_alphabet=cfg.nonterminals + cfg.terminals + (bottom,),
        transitions=tuple(transitions),
        start=begin,
        initial_stack_symbol=bottom,
        accepting=(done,),
    )
    n = size_of(cfg)
    bound_value = n + len(cfg.terminals) + CFG_TO_PDA_CONSTANT
    return pda, _receipt("cfg2pda", n, size_of(pda), f"n + |T| + {CFG_TO_PDA_CONSTANT}", bound_value)


def empty_stack_adapter(pda: Pda) -> Tuple[Pda, str, str, str]:
    """The same language, accepted by emptying the stack.

    A new bottom marker keeps the original machine from emptying the stack
    by itself; from any accepting state the machine may switch to a drain
    state that pops everything.  Returns ``(machine, start, bottom, drain)``.
    """
    bottom = fresh_symbol("⊥", pda.stack_alphabet)
    start = fresh_symbol("q_s", pda.states)
    drain = fresh_symbol("q_e", pda.states + (start,))
    stack = pda.stack_alphabet + (bottom,)
    transitions = [PdaTransition(source=start, symbol=None, pop=bottom, target=pda.start, push=(pda.initial_stack_symbol, bottom))]
    transitions += list(pda.transitions)
    for state in pda.accepting:
        transitions += [PdaTransition(source=state, symbol=None, pop=x, target=drain, push=(x,)) for x in stack]
    transitions += [PdaTransition(source=drain, symbol=None, pop=x, target=drain) for x in stack]
    adapted = Pda(
        states=pda.states + (start, drain),
        input_alphabet=pda.input_alphabet,
        stack_alphabet=stack,
        transitions=tuple(transitions),
        start=start,
        initial_stack_symbol=bottom,
        accepting=(),
    )
    return adapted, start, bottom, drain


Triple = Tuple[str, str, str]


def _pop_summaries(pda: Pda) -> Set[Triple]:
    """All (p, X, q) such that from p with X on top the machine can pop X and be in q."""
    summaries: Set[Triple] = set()
    by_start: Dict[Tuple[str, str], Set[str]] = {}
    changed = True
    while changed:
        changed = False
        for t in pda.transitions:
            ends = {t.target}
            for symbol in t.push:
                ends = {q for r in ends for q in by_start.get((r, symbol), ())}
                if not ends:
                    break
            for q in ends:
                triple = (t.source, t.pop, q)
                if triple not in summaries:
                    summaries.add(triple)
                    by_start.setdefault((t.source, t.pop), set()).add(q)
                    changed = True
    return summaries


def pda_to_cfg(pda: Pda) -> Tuple[Cfg, ConversionReceipt]:
    """Triple construction on the empty-stack adapter, then useless-symbol pruning.

    Nonterminal ``<p|X|q>`` derives the words read while the machine goes
    from p with X on top to q with X popped.  Only triples with such a run
    are created.
    """
    ensure_valid(pda)
    adapted, start, bottom, drain = empty_stack_adapter(pda)
    summaries = _pop_summaries(adapted)
    by_start: Dict[Tuple[str, str], List[str]] = {}
    for p, x, q in sorted(summaries):
        by_start.setdefault((p, x), []).append(q)

    def name(triple: Triple) -> str:
        return f"<{triple[0]}|{triple[1]}|{triple[2]}>"

    rules: Dict[str, List[Tuple[str, ...]]] = {}
    for t in adapted.transitions:
        reading = (t.symbol,) if t.symbol is not None else ()
        chains: List[Tuple[str, Tuple[str, ...]]] = [(t.target, ())]
        for symbol in t.push:
            chains = [
                (q, body + (name((r, symbol, q)),))
                for r, body in chains
                for q in by_start.get((r, symbol), ())
            ]
        for end, body in chains:
            rules.setdefault(name((t.source, t.pop, end)), []).append(reading + body)

    goal = (start, bottom, drain)
    start_symbol = fresh_symbol("S", pda.input_alphabet)
    reachable: List[str] = []
    if goal in summaries:
        rules[start_symbol] = [(name(goal),)]
        seen = {start_symbol}
        queue = deque([start_symbol])
        while queue:
            head = queue.popleft()
            reachable.append(head)
            for body in rules.get(head, ()):
                for symbol in body:
                    if symbol in rules and symbol not in seen:
                        seen.add(symbol)
                        queue.append(symbol)
    else:
        reachable.append(start_symbol)

    kept = set(reachable)
    cfg = Cfg(
        nonterminals=tuple(reachable),
        terminals=pda.input_alphabet,
        rules=tuple(
            Rule(lhs=head, rhs=body)
            for head in reachable
            for body in dict.fromkeys(rules.get(head, ()))
            if all(s in kept or s in pda.input_alphabet for s in body)
        ),
        start=start_symbol,
    )
    q, g = len(adapted.states), len(adapted.stack_alphabet)
    notes = [f"{len(summaries)} pop summaries before pruning"]
    receipt = _receipt("pda2cfg", size_of(pda), len(cfg.nonterminals), "|Q'|^2*|G'| + 1", q * q * g + 1, notes)
    return cfg, receipt


EpsilonOutcome = Literal["reads", "empty", "diverges"]


def epsilon_outcomes(dpda: Dpda) -> Dict[Tuple[str, str], EpsilonOutcome]:
    """How the ε-chain started at each (state, stack top) with an ε-move ends.

    The chain only looks at the stack above the starting symbol until it
    pops that symbol, so running it on a one-symbol stack decides it.
    """
    moves = dpda.moves()
    outcomes: Dict[Tuple[str, str], EpsilonOutcome] = {}
    for (state, symbol, top) in sorted(k for k in moves if k[1] is None):
        outcome, _ = follow_epsilon(moves, state, [top])
        outcomes[(state, top)] = outcome  # type: ignore[assignment]
    return outcomes


def dpda_complement(dpda: Dpda) -> Tuple[Dpda, ConversionReceipt]:
    """DPDA for the complement language.

    The machine is first made to read every input completely: a bottom
    marker catches runs that empty the original stack, ε-chains that would
    loop forever are sent to a dead state, and every missing input move goes
    to the dead state, which reads the rest of the input.  Then the
    accepting set is flipped.
    """
    ensure_valid(dpda)
    bottom = fresh_symbol("⊥", dpda.stack_alphabet)
    start = fresh_symbol("s0", dpda.states)
    dead = fresh_symbol("dead", dpda.states + (start,))
    stack = dpda.stack_alphabet + (bottom,)

    divergent = {pair for pair, outcome in epsilon_outcomes(dpda).items() if outcome == "diverges"}
    transitions: List[PdaTransition] = [
        PdaTransition(source=start, symbol=None, pop=bottom, target=dpda.start, push=(dpda.initial_stack_symbol, bottom))
    ]
    has_epsilon: Set[Tuple[str, str]] = set()
    reads: Set[Tuple[str, str, str]] = set()
    for t in dpda.transitions:
        if t.symbol is None:
            has_epsilon.add((t.source, t.pop))
            if (t.source, t.pop) in divergent:
                transitions.append(PdaTransition(source=t.source, symbol=None, pop=t.pop, target=dead, push=(t.pop,)))
                continue
        else:
            reads.add((t.source, t.symbol, t.pop))
        transitions.append(t)
    for state in dpda.states:
        for top in stack:
            if (state, top) in has_epsilon:
                continue
            for symbol in dpda.input_alphabet:
                if (state, symbol, top) not in reads:
                    transitions.append(PdaTransition(source=state, symbol=symbol, pop=top, target=dead, push=(top,)))
    transitions += [
        PdaTransition(source=dead, symbol=a, pop=x, target=dead, push=(x,)) for x in stack for a in dpda.input_alphabet
    ]

    accepting = set(dpda.accepting)
    complement = Dpda(
        states=dpda.states + (start, dead),
        input_alphabet=dpda.input_alphabet,
        stack_alphabet=stack,
        transitions=tuple(transitions),
        start=start,
        initial_stack_symbol=bottom,
        accepting=tuple(q for q in dpda.states if q not in accepting) + (dead,),
    )
    ensure_valid(complement)
    n = size_of(dpda)
    notes = [f"{len(divergent)} divergent ε-chains redirected"] if divergent else []
    return complement, _receipt("dpda-complement", n, size_of(complement), "n + 3", n + 3, notes)


def generating_nonterminals(cfg: Cfg) -> Set[str]:
    """Nonterminals that derive at least one terminal word."""
    nonterminals = set(cfg.nonterminals)
    generating: Set[str] = set()
    changed = True
    while changed:
        changed = False
        for rule in cfg.rules:
            if rule.lhs in generating:
                continue
            if all(s in generating or s not in nonterminals for s in rule.rhs):
                generating.add(rule.lhs)
                changed = True
    return generating


def cfg_trim(cfg: Cfg) -> Cfg:
    """Remove nonterminals that generate nothing or cannot be reached.

    The start symbol always stays, so an empty language keeps a one-symbol
    grammar.
    """
    nonterminals = set(cfg.nonterminals)
    generating = generating_nonterminals(cfg)
    useful_rules = [
        r for r in cfg.rules if r.lhs in generating and all(s in generating or s not in nonterminals for s in r.rhs)
    ]
    by_lhs: Dict[str, List[Rule]] = {}
    for rule in useful_rules:
        by_lhs.setdefault(rule.lhs, []).append(rule)
    reached = {cfg.start}
    queue = deque([cfg.start])
    while queue:
        for rule in by_lhs.get(queue.popleft(), ()):
            for symbol in rule.rhs:
                if symbol in nonterminals and symbol not in reached:
                    reached.add(symbol)
                    queue.append(symbol)
    return Cfg(
        nonterminals=tuple(n for n in cfg.nonterminals if n in reached),
        terminals=cfg.terminals,
        rules=tuple(r for r in useful_rules if r.lhs in reached),
        start=cfg.start,
    )
