"""A unary language that differs from each of the first f(n) enumerated grammars.

On input a^s the decider computes t = g(n, s), looks back over a window of
shorter inputs to see which requirements R_1..R_t already hold (R_i holds
once some a^k with k in the window is decided differently from grammar
P_i), rejects if all of them hold, and otherwise answers the opposite of
P_i on a^s for the least open requirement i.
"""

import math
from typing import Dict, List, Set

from succinctness_workbench.devices import Cfg
from succinctness_workbench.enumeration import enumerate_devices
from succinctness_workbench.errors import DomainError
from succinctness_workbench.membership import member
from succinctness_workbench.models import DiagConfig, DiagProfile, Lookback, RequirementStatus
from succinctness_workbench.tty_logger import get_logger

logger = get_logger(__name__)

Window = Lookback


def log_star(s: int) -> int:
    """Iterated base-2 logarithm: how often log2 is applied before the value is at most 1."""
    count = 0
    value = float(s)
    while value > 1:
        value = math.log2(value)
        count += 1
    return count


def window_end(s: int, lookback: Window) -> int:
    """One past the last earlier input consulted at a^s."""
    if lookback == "full":
        return s
    return min(log_star(s) + 1, s)


def space_capacity(s: int) -> int:
    """How many satisfied requirements fit in the space of a^s: floor(log2 s), 0 for s = 0."""
    return int(math.floor(math.log2(s))) if s >= 1 else 0


class Diagonalizer:
    """Decides the diagonal language for one configuration.

    Answers are computed for a^0, a^1, ... in order and remembered, since
    every input only looks back at shorter ones.
    """

    def __init__(self, config: DiagConfig):
        self.config = config
        self.n = config.n
        highest = max(config.schedule.value(config.n, s) for s in range(config.max_s + 1))
        highest = max(highest, config.schedule.limit(config.n))
        self.grammars: List[Cfg] = (
            enumerate_devices(config.enumeration, highest, config.budget) if highest else []  # type: ignore[assignment]
        )
        self._bits: List[bool] = []
        self._membership: Dict[int, List[bool]] = {}
        self.cap_rejections: Set[int] = set()

    def grammar_member(self, index: int, s: int) -> bool:
        """Whether a^s is derived by P_index (1-based)."""
        bits = self._membership.setdefault(index, [])
        while len(bits) <= s:
            bits.append(member(self.grammars[index - 1], ("a",) * len(bits)))
        return bits[s]

    def _check(self, s: int) -> None:
        if s < 0 or s > self.config.max_s:
            raise DomainError(f"s must be between 0 and {self.config.max_s}, got {s}")

    def satisfied_at(self, s: int, lookback: Window) -> Set[int]:
        """Requirements among R_1..R_t, t = g(n, s), already met on the window of a^s."""
        self._check(s)
        t = self.config.schedule.value(self.n, s)
        end = window_end(s, lookback)
        satisfied = set()
        for i in range(1, t + 1):
            if any(self.decide(k) != self.grammar_member(i, k) for k in range(end)):
                satisfied.add(i)
        return satisfied

    def _step(self, s: int, satisfied: Set[int]) -> bool:
        t = self.config.schedule.value(self.n, s)
        if self.config.space_cap and len(satisfied) > space_capacity(s):
            self.cap_rejections.add(s)
            return False
        open_requirements = [i for i in range(1, t + 1) if i not in satisfied]
        if not open_requirements:
            return False
        return not self.grammar_member(open_requirements[0], s)

    def decide(self, s: int) -> bool:
        """Membership of a^s."""
        self._check(s)
        while len(self._bits) <= s:
            current = len(self._bits)
            self._bits.append(self._step(current, self.satisfied_at(current, self.config.lookback)))
        return self._bits[s]

    def decide_from_scratch(self, s: int) -> bool:
        """Membership of a^s recomputed without the stored answers, for small s."""
        self._check(s)
        t = self.config.schedule.value(self.n, s)
        end = window_end(s, self.config.lookback)
        earlier = [self.decide_from_scratch(k) for k in range(end)]
        satisfied = {
            i for i in range(1, t + 1) if any(earlier[k] != self.grammar_member(i, k) for k in range(end))
        }
        return self._step(s, satisfied)


def diag_member(config: DiagConfig, s: int) -> bool:
    """Whether a^s belongs to the diagonal language of ``config``."""
    return Diagonalizer(config).decide(s)


def diag_profile(config: DiagConfig) -> DiagProfile:
    """Membership bits on a^0..a^max_s and, per requirement up to the limit, its first witness."""
    diagonalizer = Diagonalizer(config)
    bits = [diagonalizer.decide(s) for s in range(config.max_s + 1)]
    limit = config.schedule.limit(config.n)
    requirements = []
    for i in range(1, limit + 1):
        witness = next(
            (s for s in range(config.max_s + 1) if bits[s] != diagonalizer.grammar_member(i, s)), None
        )
        grammar = "; ".join(str(rule) for rule in diagonalizer.grammars[i - 1].rules)
        if witness is not None:
            requirements.append(RequirementStatus(index=i, grammar=grammar, satisfied=True, witness=witness))
        else:
            reason = "space_cap" if diagonalizer.cap_rejections else "max_s"
            requirements.append(RequirementStatus(index=i, grammar=grammar, satisfied=False, reason=reason))
    profile = DiagProfile(config=config, bits=bits, limit=limit, requirements=requirements)
    logger.info(
        f"diagonal profile n={config.n} max_s={config.max_s}: members {profile.members}, "
        f"{len(profile.unsatisfied)} of {limit} requirements open"
    )
    return profile
