from collections import defaultdict
from typing import Hashable, Iterable

import numpy as np

from ..treeplex import EMPTY_SEQUENCE, GameForm, TreeplexBuilder

CHANCE = 0  # Player id of chance nodes.


class ExtensiveGame:
    """
    A rule description of a two-player zero-sum extensive-form game.

    Subclasses describe states as hashable values and implement the tree
    navigation methods below. The description is compiled once into a
    GameForm by `compile_game`; it also serves as a tree-walking oracle.
    """
    name = 'game'

    def initial_state(self):
        raise NotImplementedError

    def is_terminal(self, state) -> bool:
        raise NotImplementedError

    def utility(self, state) -> float:
        """Terminal utility of player 1. Player 2 receives the negation."""
        raise NotImplementedError

    def current_player(self, state) -> int:
        """1, 2 or CHANCE."""
        raise NotImplementedError

    def chance_outcomes(self, state) -> Iterable[tuple[Hashable, float]]:
        raise NotImplementedError

    def legal_actions(self, state) -> tuple:
        raise NotImplementedError

    def infoset_key(self, state, player: int) -> Hashable:
        raise NotImplementedError

    def next_state(self, state, action):
        raise NotImplementedError


def compile_game(desc: ExtensiveGame) -> GameForm:
    """
    Walk the whole game tree depth-first and build the sequence-form game.

    Infosets are registered in first-visit order. Terminal utilities are
    multiplied by the chance reach and aggregated per (seq1, seq2) pair; pairs
    whose aggregate is zero are kept as entries.

    :param desc: The game description.
    :return: The compiled GameForm with `source` set to the description.
    """
    builders = (TreeplexBuilder(1), TreeplexBuilder(2))
    payoffs: dict[tuple[int, int], float] = defaultdict(float)

    def visit(state, reach: float, seqs: tuple[int, int]) -> None:
        if desc.is_terminal(state):
            payoffs[seqs] += reach * desc.utility(state)
            return
        player = desc.current_player(state)
        if player == CHANCE:
            for outcome, prob in desc.chance_outcomes(state):
                if prob > 0:
                    visit(desc.next_state(state, outcome), reach * prob, seqs)
            return

        builder = builders[player - 1]
        actions = desc.legal_actions(state)
        iid = builder.add(desc.infoset_key(state, player), seqs[player - 1], actions)
        for idx, action in enumerate(actions):
            seq = builder.sequence(iid, idx)
            nxt = (seq, seqs[1]) if player == 1 else (seqs[0], seq)
            visit(desc.next_state(state, action), reach, nxt)

    visit(desc.initial_state(), 1.0, (EMPTY_SEQUENCE, EMPTY_SEQUENCE))

    keys = sorted(payoffs)
    return GameForm(name=desc.name,
                    treeplexes=(builders[0].build(), builders[1].build()),
                    rows=np.array([k[0] for k in keys], dtype=np.int64),
                    cols=np.array([k[1] for k in keys], dtype=np.int64),
                    values=np.array([payoffs[k] for k in keys], dtype=np.float64),
                    source=desc)


def tree_value(form: GameForm, sigma1: np.ndarray, sigma2: np.ndarray) -> float:
    """
    Expected utility of player 1 computed by walking the game tree of the
    description that produced `form`, independently of the payoff entries.
    """
    desc: ExtensiveGame = form.source
    if desc is None:
        raise ValueError(f"Game {form.name!r} was not compiled from a rule description.")
    sigmas = (sigma1, sigma2)

    def value(state) -> float:
        if desc.is_terminal(state):
            return desc.utility(state)
        player = desc.current_player(state)
        if player == CHANCE:
            return sum(prob * value(desc.next_state(state, outcome))
                       for outcome, prob in desc.chance_outcomes(state) if prob > 0)
        node = form.treeplex(player).infoset(desc.infoset_key(state, player))
        total = 0.0
        for action, seq in zip(node.actions, node.sequences):
            p = sigmas[player - 1][seq]
            if p > 0:
                total += p * value(desc.next_state(state, action))
        return total

    return value(desc.initial_state())
