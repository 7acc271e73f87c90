"""
Reference strategy and RT weight schedule of the reward transformation framework.

The controller owns the sequence of strongly convex-concave subproblems
(SCCPs): it decides when the reference strategy is replaced by the current
strategy and which weight multiplier w the next subproblem uses.
"""

from dataclasses import dataclass, field
import logging
import math
from typing import Callable, NamedTuple

import numpy as np

from .treeplex import BehaviorStrategy

logger = logging.getLogger(__name__)

Profile = tuple[BehaviorStrategy, BehaviorStrategy]
NEGATIVE_TOLERANCE = -1e-9


class PHASE:
    EXPLOIT = 'exploit'
    KEEP = 'keep'
    EXPLORE = 'explore'
    REFRESH = 'refresh'  # Fixed-interval reference update of the non-adaptive framework.


class POLICY:
    ADAPTIVE = 'adaptive'
    FIXED = 'fixed'
    STATIC = 'static'
    ALL = (ADAPTIVE, FIXED, STATIC)


class COUNT_UNIT:
    UPDATE = 'update'
    ITERATION = 'iteration'
    ALL = (UPDATE, ITERATION)


PHASE_WEIGHTS = {PHASE.EXPLOIT: 2.0, PHASE.KEEP: 1.0, PHASE.EXPLORE: 0.5, PHASE.REFRESH: 1.0}


class ExploitabilityError(ValueError):
    """Raised when an exploitability oracle reports a clearly negative value."""


class PhaseEvent(NamedTuple):
    t: int  # Iteration at which the transition happened.
    phase: str
    epsilon: float  # Exploitability of the new reference (NaN for fixed refreshes).
    epsilon_min: float  # The minimum exploitability before the transition.
    w: float  # The multiplier of the new SCCP.
    n: int  # Index of the new SCCP.
    k: int  # Counter value when the previous SCCP ended.


@dataclass
class SccpController:
    """
    :param reference: The current reference strategy of both players.
    :param epsilon_min: Smallest exploitability accepted as a reference so far.
    :param T: SCCP interval, in units of `count_unit`.
    :param m: Exploitability is checked every m iterations.
    """
    reference: Profile
    epsilon_min: float
    T: int
    m: int = 1
    w: float = 1.0
    k: int = 0
    n: int = 0
    policy: str = POLICY.ADAPTIVE
    count_unit: str = COUNT_UNIT.UPDATE
    phase_log: list[PhaseEvent] = field(default_factory=list)

    def __post_init__(self):
        if self.T < 1:
            raise ValueError(f"SCCP interval T must be at least 1, not {self.T}.")
        if self.m < 1:
            raise ValueError(f"Exploitability cadence m must be at least 1, not {self.m}.")
        if self.policy not in POLICY.ALL:
            raise ValueError(f"Unknown reference policy {self.policy!r}, expected one of {POLICY.ALL}.")
        if self.count_unit not in COUNT_UNIT.ALL:
            raise ValueError(f"Unknown count unit {self.count_unit!r}, expected one of {COUNT_UNIT.ALL}.")

    @classmethod
    def start(cls, profile: Profile, epsilon: float, T: int, m: int = 1,
              policy: str = POLICY.ADAPTIVE, count_unit: str = COUNT_UNIT.UPDATE) -> 'SccpController':
        """Open the first SCCP with the initial profile as reference and w = 1."""
        return cls(reference=tuple(s.copy() for s in profile), epsilon_min=float(epsilon),
                   T=T, m=m, policy=policy, count_unit=count_unit)

    def advance(self, player_updates: int = 2) -> None:
        """Count one iteration made of `player_updates` player updates."""
        self.k += player_updates if self.count_unit == COUNT_UNIT.UPDATE else 1

    def _transition(self, t: int, phase: str, profile: Profile, epsilon: float) -> PhaseEvent:
        event = PhaseEvent(t=t, phase=phase, epsilon=epsilon, epsilon_min=self.epsilon_min,
                           w=PHASE_WEIGHTS[phase], n=self.n + 1, k=self.k)
        if phase in (PHASE.EXPLOIT, PHASE.KEEP):
            self.epsilon_min = epsilon
        self.reference = tuple(s.copy() for s in profile)
        self.w = event.w
        self.k = 0
        self.n += 1
        self.phase_log.append(event)
        logger.debug(f"t={t} {phase}: eps={epsilon:.6g} eps_min={self.epsilon_min:.6g} w={self.w} n={self.n}")
        return event

    def tick(self, t: int, profile: Profile, epsilon_fn: Callable[[Profile], float]) -> PhaseEvent | None:
        """
        Check for a phase transition at the end of iteration t.

        :param t: The iteration just completed (t >= 1).
        :param profile: The current behavior profile.
        :param epsilon_fn: Returns the exploitability of a profile. Only called on checks.
        :return: The transition that happened, or None.
        """
        if t < 1:
            raise ValueError(f"Iterations start at 1, not {t}.")
        if self.policy == POLICY.STATIC:
            return None
        if self.policy == POLICY.FIXED:
            if t % self.T == 0:
                return self._transition(t, PHASE.REFRESH, profile, math.nan)
            return None
        if t % self.m != 0:
            return None

        epsilon = float(epsilon_fn(profile))
        if epsilon < NEGATIVE_TOLERANCE:
            raise ExploitabilityError(f"Exploitability oracle returned {epsilon:.6g} at iteration {t}.")
        if epsilon <= self.epsilon_min / 2:
            return self._transition(t, PHASE.EXPLOIT, profile, epsilon)
        elif epsilon <= self.epsilon_min and self.k >= self.T:
            return self._transition(t, PHASE.KEEP, profile, epsilon)
        elif self.k >= 2 * self.T:
            return self._transition(t, PHASE.EXPLORE, profile, epsilon)
        return None


def halving_schedule_check(phase_log: list[PhaseEvent]) -> bool:
    """
    True iff every Exploit-accepted reference has at most half the
    exploitability of the previous one. Logs with fewer than two Exploit
    events pass trivially.
    """
    exploits = [e.epsilon for e in phase_log if e.phase == PHASE.EXPLOIT]
    return all(b <= a / 2 for a, b in zip(exploits, exploits[1:]))


def sccp_lengths(phase_log: list[PhaseEvent]) -> np.ndarray:
    """Counter value at which each SCCP closed."""
    return np.array([e.k for e in phase_log], dtype=np.int64)
