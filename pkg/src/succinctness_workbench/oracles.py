"""Builtin reference predicates.

Each oracle decides its language directly from the definition, without a
grammar, and carries a versioned label so reports can name it.  The CLI
refers to them as ``builtin:<name>[:<arg>...]``.
"""

from typing import Callable, Literal, Optional, Sequence

from succinctness_workbench.devices import PredicateOracle, Word
from succinctness_workbench.errors import DomainError
from succinctness_workbench.formats import load_machine
from succinctness_workbench.tm_encodings import TmMachine, acc_oracle, encoding_alphabet

ORACLE_VERSION = "1"
Mode = Literal["exact", "at-most", "at-least"]


def not_ww_oracle(n: int) -> PredicateOracle:
    """Words over {a, b} that are not of the form ww with |w| = n."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")

    def predicate(word: Word) -> bool:
        return not (len(word) == 2 * n and word[:n] == word[n:])

    return PredicateOracle(label=f"builtin:not-ww:{n}", alphabet=("a", "b"), predicate=predicate, version=ORACLE_VERSION)


def w_dollar_w_oracle(n: int) -> PredicateOracle:
    """Words w$w with w ∈ {a, b}^n."""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")

    def predicate(word: Word) -> bool:
        if len(word) != 2 * n + 1 or word[n] != "$":
            return False
        left, right = word[:n], word[n + 1 :]
        return left == right and "$" not in left

    return PredicateOracle(
        label=f"builtin:w-dollar-w:{n}", alphabet=("a", "b", "$"), predicate=predicate, version=ORACLE_VERSION
    )


def counter_oracle(n: int, mode: Mode = "exact", alphabet: Sequence[str] = ("Y",)) -> PredicateOracle:
    """Words of length exactly n, at most n, or at least n."""
    tests: dict = {
        "exact": lambda length: length == n,
        "at-most": lambda length: length <= n,
        "at-least": lambda length: length >= n,
    }
    if mode not in tests:
        raise DomainError(f"unknown counter mode {mode!r}")
    test: Callable[[int], bool] = tests[mode]
    return PredicateOracle(
        label=f"builtin:counter:{mode}:{n}",
        alphabet=tuple(alphabet),
        predicate=lambda word: test(len(word)),
        version=ORACLE_VERSION,
    )


def acc_predicate_oracle(
    machine: TmMachine,
    variant: Literal["acc", "oddacc", "evenacc"],
    x: Optional[Sequence[str]] = None,
    complement: bool = False,
) -> PredicateOracle:
    """ACC, ODDACC or EVENACC of ``machine`` (on x, or over all inputs when x is None)."""
    scope = "*" if x is None else "".join(x)
    label = f"builtin:{'not-' if complement else ''}{variant}:{machine.name}:{scope}"

    def predicate(word: Word) -> bool:
        return acc_oracle(machine, variant, word, x) != complement

    return PredicateOracle(label=label, alphabet=encoding_alphabet(machine), predicate=predicate, version=ORACLE_VERSION)


BUILTIN_PREFIX = "builtin:"
_ACC_VARIANTS = ("acc", "oddacc", "evenacc")


def _int_argument(value: Optional[str], n: Optional[int], reference: str) -> int:
    if value is not None:
        try:
            return int(value)
        except ValueError:
            raise DomainError(f"{reference}: {value!r} is not a number") from None
    if n is None:
        raise DomainError(f"{reference} needs a size: give it as the last part or with --n")
    return n


def builtin_oracle(reference: str, n: Optional[int] = None) -> PredicateOracle:
    """Resolve a ``builtin:`` reference.

    Recognized forms are ``not-ww[:n]``, ``w-dollar-w[:n]``,
    ``counter[:mode][:n]`` and ``[not-]acc|oddacc|evenacc:<machine>[:<x>]``
    where x is ``*`` (all inputs, the default) or the input symbols; an
    empty x is the empty input.
    """
    if not reference.startswith(BUILTIN_PREFIX):
        raise DomainError(f"not a builtin reference: {reference!r}")
    name, *args = reference[len(BUILTIN_PREFIX) :].split(":")
    if name == "not-ww":
        return not_ww_oracle(_int_argument(args[0] if args else None, n, reference))
    if name == "w-dollar-w":
        return w_dollar_w_oracle(_int_argument(args[0] if args else None, n, reference))
    if name == "counter":
        mode = args[0] if args and not args[0].isdigit() else "exact"
        size = args[-1] if args and args[-1].isdigit() else None
        return counter_oracle(_int_argument(size, n, reference), mode)  # type: ignore[arg-type]
    complement = name.startswith("not-")
    variant = name[4:] if complement else name
    if variant in _ACC_VARIANTS:
        if not args:
            raise DomainError(f"{reference} needs a machine name")
        machine = load_machine(args[0])
        x = None if len(args) < 2 or args[1] == "*" else tuple(args[1])
        return acc_predicate_oracle(machine, variant, x, complement)  # type: ignore[arg-type]
    raise DomainError(f"unknown builtin oracle {name!r}")
