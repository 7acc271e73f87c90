import logging
from typing import NamedTuple
import warnings

import numpy as np

from .treeplex import (BehaviorStrategy, GameForm, SequenceStrategy, Treeplex, behavior_to_sequence,
                       sequence_to_behavior)

logger = logging.getLogger(__name__)

EXPLOITABILITY_FLOOR = -1e-9


class ExploitabilityReport(NamedTuple):
    """
    Exploitability of a profile and the best responses behind it.

    br_values holds max_q1 <q1, U q2> for player 1 and max_q2 <q2, -U^T q1>
    for player 2, so epsilon = br_values[0] + br_values[1].
    """
    epsilon: float
    br_values: tuple[float, float]
    value: float  # Expected utility of player 1 under the profile.
    br_strategies: tuple[BehaviorStrategy, BehaviorStrategy] | None = None

    @property
    def gains(self) -> tuple[float, float]:
        """How much each player gains by deviating to a best response."""
        return self.br_values[0] - self.value, self.br_values[1] + self.value


def best_response_value(g: GameForm, player: int, q_opp: SequenceStrategy) -> tuple[float, BehaviorStrategy]:
    """
    The best expected utility `player` can reach against a fixed opponent.

    :param g: The game.
    :param player: 1 or 2.
    :param q_opp: The opponent's sequence-form strategy.
    :return: The value and a pure behavior strategy attaining it. Ties go to the lowest action.
    """
    t: Treeplex = g.treeplex(player)
    values = g.utility_vector(player, q_opp)
    sigma = np.ones(t.num_sequences)
    for level in t.levels:
        best, arg = level.argmax(values)
        np.add.at(values, level.parents, best)
        sigma[level.seqs] = 0.0
        sigma[level.seqs[level.offsets + arg]] = 1.0
    return float(values[0]), sigma


def expected_value(g: GameForm, q1: SequenceStrategy, q2: SequenceStrategy) -> float:
    """Expected utility of player 1."""
    return g.expected_value(q1, q2)


def exploitability(g: GameForm, q1: SequenceStrategy, q2: SequenceStrategy,
                   keep_strategies: bool = False) -> ExploitabilityReport:
    """
    epsilon(q) = max_q1' <q1', U q2> - min_q2' <q1, U q2'>.

    Small negative values produced by rounding are clamped to 0.

    :param g: The game.
    :param q1: Sequence-form strategy of player 1.
    :param q2: Sequence-form strategy of player 2.
    :param keep_strategies: Attach the best response strategies to the report.
    :return: An ExploitabilityReport.
    """
    br1, s1 = best_response_value(g, 1, q2)
    br2, s2 = best_response_value(g, 2, q1)
    eps = br1 + br2
    if eps < EXPLOITABILITY_FLOOR:
        warnings.warn(f"Exploitability {eps:.3g} is below the numerical floor; "
                      f"clamping to 0. Check the strategies of {g.name}.")
    eps = 0.0 if eps < 0 else eps  # NaN passes through for the caller to detect.
    return ExploitabilityReport(epsilon=eps,
                                br_values=(br1, br2),
                                value=g.expected_value(q1, q2),
                                br_strategies=(s1, s2) if keep_strategies else None)


def profile_exploitability(g: GameForm, sigma1: BehaviorStrategy, sigma2: BehaviorStrategy) -> float:
    """Exploitability of a behavior profile."""
    return exploitability(g,
                          behavior_to_sequence(g.treeplex(1), sigma1),
                          behavior_to_sequence(g.treeplex(2), sigma2)).epsilon


def _check_same_shape(a, b) -> None:
    if np.shape(a) != np.shape(b):
        raise ValueError(f"Cannot compare strategies of shapes {np.shape(a)} and {np.shape(b)}.")


def behavior_distance(sigma: BehaviorStrategy, other: BehaviorStrategy) -> float:
    """Euclidean distance between two behavior strategies."""
    _check_same_shape(sigma, other)
    return float(np.linalg.norm(np.asarray(sigma) - np.asarray(other)))


def strategy_distance(q: SequenceStrategy, other: SequenceStrategy,
                      t: Treeplex | None = None, reach: SequenceStrategy | None = None) -> float:
    """
    Distance between two sequence-form strategies.

    Without `reach` this is the Euclidean distance. With a treeplex and a
    reach strategy it is sum_I reach(pI) * ||sigma(I) - sigma'(I)||_2 over the
    behavior strategies of q and other.
    """
    _check_same_shape(q, other)
    if reach is None:
        return float(np.linalg.norm(np.asarray(q) - np.asarray(other)))
    if t is None:
        raise ValueError("A reach-weighted distance needs the treeplex.")
    _check_same_shape(q, reach)
    blocks = t.blocks
    if len(blocks) == 0:
        return 0.0
    diff = sequence_to_behavior(t, q, check=False) - sequence_to_behavior(t, other, check=False)
    per_infoset = np.sqrt(blocks.inner(diff, diff))
    return float(np.sum(reach[blocks.parents] * per_infoset))
