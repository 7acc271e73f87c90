from typing import NamedTuple

from .base import CHANCE, ExtensiveGame


class GoofspielState(NamedTuple):
    prizes: tuple[int, ...]  # Prize cards revealed so far, in order.
    bids1: tuple[int, ...]
    bids2: tuple[int, ...]


class Goofspiel(ExtensiveGame):
    """
    Goofspiel with k cards per suit, valued 1..k.

    Each round a prize card is drawn uniformly from the remaining prizes and
    shown to both players, who then bid a card from their hand simultaneously.
    Player 2's infoset hides player 1's bid of the current round; both bids are
    revealed once the round is over. The higher bid wins the prize and ties split
    it. The last round, with one card left everywhere, is played out. The reward
    is the difference of scores.
    """

    def __init__(self, k: int = 4) -> None:
        if k < 2:
            raise ValueError(f"Goofspiel needs at least 2 cards per suit, not {k}.")
        self.k = k
        self.name = f"goofspiel:{k}"

    def initial_state(self):
        return GoofspielState((), (), ())

    def is_terminal(self, state) -> bool:
        return len(state.bids2) == self.k

    def utility(self, state) -> float:
        score = 0.0
        for prize, b1, b2 in zip(state.prizes, state.bids1, state.bids2):
            if b1 > b2:
                score += prize
            elif b2 > b1:
                score -= prize
        return score

    def current_player(self, state) -> int:
        played = len(state.bids2)
        if len(state.prizes) == played:
            return CHANCE
        return 1 if len(state.bids1) == played else 2

    def chance_outcomes(self, state):
        remaining = [c for c in range(1, self.k + 1) if c not in state.prizes]
        return [(c, 1.0 / len(remaining)) for c in remaining]

    def legal_actions(self, state) -> tuple:
        bids = state.bids1 if self.current_player(state) == 1 else state.bids2
        return tuple(c for c in range(1, self.k + 1) if c not in bids)

    def infoset_key(self, state, player: int):
        played = len(state.bids2)
        if player == 1:
            return (state.prizes, state.bids1, state.bids2)
        return (state.prizes, state.bids2, state.bids1[:played])

    def next_state(self, state, action):
        player = self.current_player(state)
        if player == CHANCE:
            return state._replace(prizes=state.prizes + (action,))
        if player == 1:
            return state._replace(bids1=state.bids1 + (action,))
        return state._replace(bids2=state.bids2 + (action,))
