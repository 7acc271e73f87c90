from typing import NamedTuple

import numpy as np

from ..treeplex import EMPTY_SEQUENCE, GameForm, TreeplexBuilder
from .base import CHANCE, ExtensiveGame

LIAR = 'liar'


class LiarsDiceState(NamedTuple):
    dice: tuple[int, int] | None
    claims: tuple[int, ...]  # Claim indices in the order they were made.
    called: bool = False


class LiarsDice(ExtensiveGame):
    """
    Liar's Dice with one k-sided die per player.

    A claim (quantity, face) states that at least `quantity` of the two dice
    show `face`. Claims are indexed in (quantity, face) order and every claim
    must be higher than the previous one. Instead of raising, a player may call
    the last claim a lie. If the claim holds the caller loses, otherwise the
    claimer loses; the winner receives 1.
    """

    def __init__(self, k: int = 6) -> None:
        if k < 2:
            raise ValueError(f"Liar's Dice needs dice with at least 2 sides, not {k}.")
        self.k = k
        self.num_claims = 2 * k
        self.name = f"liarsdice:{k}"

    def claim(self, index: int) -> tuple[int, int]:
        """The (quantity, face) pair of a claim index."""
        return index // self.k + 1, index % self.k + 1

    def initial_state(self):
        return LiarsDiceState(None, ())

    def is_terminal(self, state) -> bool:
        return state.called

    def utility(self, state) -> float:
        caller = 1 + (len(state.claims) % 2)
        quantity, face = self.claim(state.claims[-1])
        claim_holds = sum(1 for d in state.dice if d == face) >= quantity
        caller_wins = not claim_holds
        if caller == 1:
            return 1.0 if caller_wins else -1.0
        return -1.0 if caller_wins else 1.0

    def current_player(self, state) -> int:
        if state.dice is None:
            return CHANCE
        return 1 + len(state.claims) % 2

    def chance_outcomes(self, state):
        prob = 1.0 / (self.k * self.k)
        return [((d1, d2), prob) for d1 in range(1, self.k + 1) for d2 in range(1, self.k + 1)]

    def actions_after(self, claims: tuple[int, ...]) -> tuple:
        first = claims[-1] + 1 if claims else 0
        raises = tuple(range(first, self.num_claims))
        return raises + (LIAR,) if claims else raises

    def legal_actions(self, state) -> tuple:
        return self.actions_after(state.claims)

    def infoset_key(self, state, player: int):
        return (state.dice[player - 1], state.claims)

    def next_state(self, state, action):
        if state.dice is None:
            return state._replace(dice=action)
        if action == LIAR:
            return state._replace(called=True)
        return state._replace(claims=state.claims + (action,))

    def claim_histories(self, claims: tuple[int, ...] = ()):
        """Every claim sequence that leaves a decision, in depth-first order."""
        yield claims
        first = claims[-1] + 1 if claims else 0
        for claim in range(first, self.num_claims):
            yield from self.claim_histories(claims + (claim,))

    def _slot(self, claims: tuple[int, ...], action) -> int:
        first = claims[-1] + 1 if claims else 0
        return self.num_claims - first if action == LIAR else action - first

    def compile(self) -> GameForm:
        """
        Build the sequence form from the claim lattice, which is the same for
        every die. The result equals `compile_game(self)` entry for entry,
        infoset order included, without walking every dice outcome.
        """
        k = self.k
        histories = list(self.claim_histories())
        builders = (TreeplexBuilder(1), TreeplexBuilder(2))
        ids = ({}, {})

        def seq(i: int, die: int, claims: tuple[int, ...], action) -> int:
            return builders[i].sequence(ids[i][die, claims], self._slot(claims, action))

        # A depth-first walk registers all infosets of a die before the next die.
        for i, builder in enumerate(builders):
            for die in range(1, k + 1):
                for claims in histories:
                    if len(claims) % 2 != i:
                        continue
                    parent = EMPTY_SEQUENCE if len(claims) < 2 else seq(i, die, claims[:-2], claims[-2])
                    ids[i][die, claims] = builder.add((die, claims), parent, self.actions_after(claims))

        quantity, face = np.divmod(np.arange(self.num_claims), k)
        dice = np.arange(1, k + 1)
        shows = dice[None, :] == face[:, None] + 1
        holds = shows[:, :, None].astype(int) + shows[:, None, :] >= quantity[:, None, None] + 1
        prob = 1.0 / (k * k)

        rows, cols, values = [], [], []
        for claims in histories[1:]:
            caller = len(claims) % 2
            liar = [seq(caller, d, claims, LIAR) for d in range(1, k + 1)]
            claimer = [seq(1 - caller, d, claims[:-1], claims[-1]) for d in range(1, k + 1)]
            seq1, seq2 = (liar, claimer) if caller == 0 else (claimer, liar)
            sign = 1.0 if caller == 0 else -1.0
            rows.append(np.repeat(seq1, k))
            cols.append(np.tile(seq2, k))
            values.append((sign * np.where(holds[claims[-1]], -1.0, 1.0) * prob).ravel())

        rows, cols, values = np.concatenate(rows), np.concatenate(cols), np.concatenate(values)
        order = np.lexsort((cols, rows))
        return GameForm(name=self.name,
                        treeplexes=(builders[0].build(), builders[1].build()),
                        rows=rows[order].astype(np.int64),
                        cols=cols[order].astype(np.int64),
                        values=values[order],
                        source=self)
