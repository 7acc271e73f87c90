import itertools

import numpy as np
import pytest

from RegretToolbox.games import CHANCE, build_game
from RegretToolbox.treeplex import GameForm, TreeplexBuilder, behavior_to_sequence


@pytest.fixture(scope='session')
def kuhn():
    return build_game('kuhn:3')


@pytest.fixture(scope='session')
def leduc():
    return build_game('leduc:3')


@pytest.fixture
def two_level():
    """Root infoset A with two actions; infoset B below the first action of A."""
    builder = TreeplexBuilder(1)
    a = builder.add('A', 0, ('x', 'y'))
    builder.add('B', builder.sequence(a, 0), ('u', 'v'))
    return builder.build()


# Kuhn(3) equilibrium with alpha = 0. Actions are (pass, bet).
KUHN_NE_1 = {(0, ''): [1, 0], (0, 'pb'): [1, 0],
             (1, ''): [1, 0], (1, 'pb'): [2 / 3, 1 / 3],
             (2, ''): [1, 0], (2, 'pb'): [0, 1]}
KUHN_NE_2 = {(0, 'p'): [2 / 3, 1 / 3], (0, 'b'): [1, 0],
             (1, 'p'): [1, 0], (1, 'b'): [2 / 3, 1 / 3],
             (2, 'p'): [0, 1], (2, 'b'): [0, 1]}


def random_behavior(t, rng, positive=False):
    sigma = np.ones(t.num_sequences)
    for node in t.infosets:
        p = rng.uniform(0.05 if positive else 0.0, 1.0, size=len(node.sequences))
        if not positive and rng.uniform() < 0.2:
            p = np.zeros(len(node.sequences))
            p[rng.integers(len(node.sequences))] = 1.0
        sigma[list(node.sequences)] = p / p.sum()
    return sigma


def pure_behaviors(t):
    """Every pure behavior strategy of a (small) treeplex."""
    nodes = list(t.infosets)
    for choice in itertools.product(*(range(len(n.sequences)) for n in nodes)):
        sigma = np.ones(t.num_sequences)
        for node, c in zip(nodes, choice):
            sigma[list(node.sequences)] = 0.0
            sigma[node.sequences[c]] = 1.0
        yield sigma


def brute_force_best_response(g: GameForm, player: int, q_opp):
    t = g.treeplex(player)
    u = g.utility_vector(player, q_opp)
    return max(float(behavior_to_sequence(t, s) @ u) for s in pure_behaviors(t))


def own_reach_oracle(g: GameForm, player: int, sigma):
    """Sequence-form strategy from a walk of the game tree, multiplying own action probabilities."""
    desc = g.source
    t = g.treeplex(player)
    q = np.zeros(t.num_sequences)
    q[0] = 1.0

    def walk(state, reach):
        if desc.is_terminal(state):
            return
        p = desc.current_player(state)
        if p == CHANCE:
            for outcome, _ in desc.chance_outcomes(state):
                walk(desc.next_state(state, outcome), reach)
            return
        if p != player:
            for action in desc.legal_actions(state):
                walk(desc.next_state(state, action), reach)
            return
        node = t.infoset(desc.infoset_key(state, player))
        for action, seq in zip(node.actions, node.sequences):
            q[seq] = reach * sigma[seq]
            walk(desc.next_state(state, action), reach * sigma[seq])

    walk(desc.initial_state(), 1.0)
    return q


def counterfactual_loss_oracle(g: GameForm, player: int, sigma_own, sigma_opp):
    """
    Losses as sums over terminal histories: for every (I, a),
    -sum_{h in I} reach_opp_and_chance(h) * value_own(ha).
    """
    desc = g.source
    t = g.treeplex(player)
    loss = np.zeros(t.num_sequences)
    sign = 1.0 if player == 1 else -1.0

    def walk(state, reach):
        if desc.is_terminal(state):
            return sign * desc.utility(state)
        p = desc.current_player(state)
        if p == CHANCE:
            return sum(prob * walk(desc.next_state(state, o), reach * prob)
                       for o, prob in desc.chance_outcomes(state))
        node = g.treeplex(p).infoset(desc.infoset_key(state, p))
        total = 0.0
        for action, seq in zip(node.actions, node.sequences):
            if p == player:
                v = walk(desc.next_state(state, action), reach)
                loss[seq] -= reach * v
                total += sigma_own[seq] * v
            else:
                total += sigma_opp[seq] * walk(desc.next_state(state, action), reach * sigma_opp[seq])
        return total

    walk(desc.initial_state(), 1.0)
    return loss
