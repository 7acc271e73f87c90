"""
Counterfactual regret traversal with the reward transformation term.

One call to `iterate_once` performs an alternating iteration: player 1 updates
every infoset against player 2's current strategy, then player 2 updates
against player 1's new strategy.
"""

from dataclasses import dataclass, field
import logging
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from .minimizers import MinimizerKind, RegretState, accumulate, immediate_regret, strategy_from_regret
from .treeplex import (BehaviorStrategy, GameForm, SequenceStrategy, Treeplex, behavior_to_sequence,
                       sequence_to_behavior, uniform_strategy)

logger = logging.getLogger(__name__)

FINITE_CHECK_INTERVAL = 1000  # Iterations between non-finite value checks.


class AVERAGING:
    UNIFORM = 'uniform'
    LINEAR = 'linear'
    QUADRATIC = 'quadratic'
    ALL = (UNIFORM, LINEAR, QUADRATIC)


class SolverDivergenceError(ArithmeticError):
    """Raised when regrets or strategies stop being finite."""


class RtTermConfig(NamedTuple):
    """The reward transformation term w * mu * (sigma - reference) of one player."""
    mu: float
    w: float
    reference: BehaviorStrategy


def averaging_weight(t: int, scheme: str) -> float:
    """Weight of the strategy played in iteration t (t >= 1)."""
    if scheme == AVERAGING.UNIFORM:
        return 1.0
    elif scheme == AVERAGING.LINEAR:
        return float(t)
    elif scheme == AVERAGING.QUADRATIC:
        return float(t) * float(t)
    raise ValueError(f"Unknown averaging scheme {scheme!r}, expected one of {AVERAGING.ALL}.")


def counterfactual_losses(g: GameForm, player: int, q_opp: SequenceStrategy,
                          sigma: BehaviorStrategy) -> NDArray[np.float64]:
    """
    The counterfactual loss of every sequence of `player`.

    Each sequence starts with its direct loss -(U q_opp) (player 1) or
    (U^T q_opp) (player 2). Infosets are then visited bottom-up and each adds
    <sigma(I), loss(I)> to the loss of its parent sequence.

    :param g: The game.
    :param player: 1 or 2.
    :param q_opp: The opponent's sequence-form strategy.
    :param sigma: The player's current behavior strategy, weighting child values.
    :return: Loss array indexed by the player's sequences.
    """
    t = g.treeplex(player)
    loss = -g.utility_vector(player, q_opp)
    for level in t.levels:
        np.add.at(loss, level.parents, level.inner(sigma, loss))
    return loss


def rt_loss(loss: NDArray, sigma: NDArray, cfg: RtTermConfig | None, seqs=None) -> NDArray:
    """
    Add the reward transformation term w * mu * (sigma - reference) to a loss.

    :param loss: Counterfactual losses.
    :param sigma: The current behavior strategy.
    :param cfg: The RT term. None or mu = 0 leaves the loss unchanged.
    :param seqs: Restrict the term to these sequence indices (one infoset).
    :return: The transformed loss. The input is not modified.
    """
    if cfg is None or cfg.mu == 0:
        return loss
    if seqs is None:
        return loss + cfg.w * cfg.mu * (sigma - cfg.reference)
    out = loss.copy()
    out[seqs] += cfg.w * cfg.mu * (sigma[seqs] - cfg.reference[seqs])
    return out


@dataclass
class EngineState:
    """Strategies, regrets and averaging accumulators of one run."""
    sigma: list[BehaviorStrategy]
    q: list[SequenceStrategy]
    regrets: list[RegretState]
    average_sum: list[NDArray[np.float64]]
    average_weight: float = 0.0
    t: int = 0
    averaging: str = AVERAGING.QUADRATIC
    rt: list[RtTermConfig | None] = field(default_factory=lambda: [None, None])

    @classmethod
    def initial(cls, g: GameForm, averaging: str = AVERAGING.QUADRATIC) -> 'EngineState':
        """Uniform strategies and zero regrets everywhere."""
        averaging_weight(1, averaging)
        sigma = [uniform_strategy(t) for t in g.treeplexes]
        return cls(sigma=sigma,
                   q=[behavior_to_sequence(t, s) for t, s in zip(g.treeplexes, sigma)],
                   regrets=[RegretState.zeros(t.num_sequences) for t in g.treeplexes],
                   average_sum=[np.zeros(t.num_sequences) for t in g.treeplexes],
                   averaging=averaging)

    def profile(self) -> tuple[SequenceStrategy, SequenceStrategy]:
        return self.q[0], self.q[1]

    def behaviors(self) -> tuple[BehaviorStrategy, BehaviorStrategy]:
        return self.sigma[0], self.sigma[1]

    def set_rt_reference(self, reference: tuple[BehaviorStrategy, BehaviorStrategy], mu: float, w: float) -> None:
        """Install a new reference strategy and weight for both players."""
        self.rt = [RtTermConfig(mu, w, ref.copy()) for ref in reference]

    def clear_rt(self) -> None:
        self.rt = [None, None]


def update_player(g: GameForm, state: EngineState, player: int, kind: MinimizerKind) -> None:
    """Run the local minimizers of every infoset of one player, in place."""
    t: Treeplex = g.treeplex(player)
    blocks = t.blocks
    if len(blocks) == 0:
        return
    i = player - 1
    sigma = state.sigma[i]
    loss = counterfactual_losses(g, player, state.q[1 - i], sigma)
    loss = rt_loss(loss, sigma, state.rt[i])
    r = immediate_regret(loss, sigma, blocks)
    state.regrets[i] = accumulate(state.regrets[i], r, kind, check=False)
    state.sigma[i] = strategy_from_regret(state.regrets[i], kind, blocks)
    state.q[i] = behavior_to_sequence(t, state.sigma[i])


def check_finite(state: EngineState) -> None:
    for i in range(2):
        for name, values in (('regret', state.regrets[i].R), ('strategy', state.sigma[i])):
            if not np.all(np.isfinite(values)):
                bad = int(np.count_nonzero(~np.isfinite(values)))
                raise SolverDivergenceError(f"Player {i + 1} {name} has {bad} non-finite entries "
                                            f"after iteration {state.t}.")


def accumulate_average(state: EngineState) -> None:
    """Add the strategies about to be played in iteration t + 1 to the average."""
    weight = averaging_weight(state.t + 1, state.averaging)
    for i in range(2):
        state.average_sum[i] += weight * state.q[i]
    state.average_weight += weight


def iterate_once(g: GameForm, state: EngineState, kind: MinimizerKind, track_average: bool = True) -> EngineState:
    """
    One alternating iteration of counterfactual regret minimization. The state
    is updated in place and returned.

    :param g: The game.
    :param state: The run state. Its `rt` entries hold the RT term of each player.
    :param kind: The local regret minimizer.
    :param track_average: Add the strategies played this iteration to the average.
    :return: The updated state.
    """
    if track_average:
        accumulate_average(state)
    update_player(g, state, 1, kind)
    update_player(g, state, 2, kind)
    state.t += 1
    if state.t % FINITE_CHECK_INTERVAL == 0:
        check_finite(state)
    return state


def average_strategy(g: GameForm, state: EngineState) -> tuple[SequenceStrategy, SequenceStrategy]:
    """
    The weighted average of the sequence-form strategies played so far, with
    flow conservation restored by a round trip through behavior form.
    """
    if state.average_weight <= 0:
        raise ValueError("No iteration has been averaged yet.")
    out = []
    for t, total in zip(g.treeplexes, state.average_sum):
        q = total / state.average_weight
        out.append(behavior_to_sequence(t, sequence_to_behavior(t, q, check=False)))
    return out[0], out[1]
