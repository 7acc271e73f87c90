from collections import Counter
from typing import NamedTuple

from .base import CHANCE, ExtensiveGame

PASS, BET = 'p', 'b'
FOLD, CALL, RAISE = 'f', 'c', 'r'  # CALL doubles as check when no raise is pending.
ANTE = 1


class Kuhn(ExtensiveGame):
    """
    Kuhn poker with n ranked cards. Each player antes 1 and receives one
    distinct card; a single bet of 1 is allowed.

    States are (cards, history) with cards = (card1, card2) or None before the deal.
    """

    def __init__(self, n: int = 3) -> None:
        if n < 2:
            raise ValueError(f"Kuhn poker needs at least 2 cards, not {n}.")
        self.n = n
        self.name = f"kuhn:{n}"

    def initial_state(self):
        return (None, '')

    def is_terminal(self, state) -> bool:
        return state[1] in ('pp', 'bp', 'bb', 'pbp', 'pbb')

    def utility(self, state) -> float:
        (c1, c2), history = state
        if history == 'bp':
            return 1.0
        if history == 'pbp':
            return -1.0
        stake = 2.0 if history in ('bb', 'pbb') else 1.0
        return stake if c1 > c2 else -stake

    def current_player(self, state) -> int:
        if state[0] is None:
            return CHANCE
        return 1 + len(state[1]) % 2

    def chance_outcomes(self, state):
        prob = 1.0 / (self.n * (self.n - 1))
        return [((c1, c2), prob) for c1 in range(self.n) for c2 in range(self.n) if c1 != c2]

    def legal_actions(self, state) -> tuple:
        return (PASS, BET)

    def infoset_key(self, state, player: int):
        return (state[0][player - 1], state[1])

    def next_state(self, state, action):
        if state[0] is None:
            return (action, '')
        return (state[0], state[1] + action)


class LeducState(NamedTuple):
    private: tuple[int, int] | None
    public: int | None
    rounds: tuple[str, ...]  # Betting history of each round so far.


def _round_closed(history: str) -> bool:
    if history.endswith(FOLD):
        return True
    if history == CALL + CALL:
        return True
    return len(history) >= 2 and history[-1] == CALL and history[-2] == RAISE


class Leduc(ExtensiveGame):
    """
    Leduc hold'em with two copies of each of n ranks.

    Both players ante 1. Two betting rounds (raise size 2, then 4) allow at most
    two raises each and a player may only fold when facing a raise. A public
    card is revealed between the rounds. A pair with the public card wins,
    otherwise the higher rank wins, equal ranks split.
    """
    max_raises = 2
    raise_sizes = (2, 4)

    def __init__(self, n: int = 3) -> None:
        if n < 2:
            raise ValueError(f"Leduc poker needs at least 2 ranks, not {n}.")
        self.n = n
        self.name = f"leduc:{n}"

    def initial_state(self):
        return LeducState(None, None, ('',))

    def _contributions(self, rounds: tuple[str, ...]) -> tuple[list[int], int | None]:
        """Chips put in by each player and the player who folded, if any."""
        contrib = [ANTE, ANTE]
        for size, history in zip(self.raise_sizes, rounds):
            for i, action in enumerate(history):
                p, o = i % 2, 1 - i % 2
                if action == RAISE:
                    contrib[p] = contrib[o] + size
                elif action == CALL:
                    contrib[p] = contrib[o]
                else:
                    return contrib, p + 1
        return contrib, None

    def is_terminal(self, state) -> bool:
        last = state.rounds[-1]
        if last.endswith(FOLD):
            return True
        return len(state.rounds) == 2 and _round_closed(last)

    def utility(self, state) -> float:
        contrib, folder = self._contributions(state.rounds)
        if folder == 1:
            return -float(contrib[0])
        if folder == 2:
            return float(contrib[1])
        c1, c2 = state.private
        rank1 = (1, c1) if c1 == state.public else (0, c1)
        rank2 = (1, c2) if c2 == state.public else (0, c2)
        if rank1 == rank2:
            return 0.0
        return float(contrib[1]) if rank1 > rank2 else -float(contrib[0])

    def current_player(self, state) -> int:
        if state.private is None:
            return CHANCE
        if len(state.rounds) == 1 and _round_closed(state.rounds[0]):
            return CHANCE
        return 1 + len(state.rounds[-1]) % 2

    def chance_outcomes(self, state):
        if state.private is None:
            # Ordered pairs of distinct physical cards, aggregated by rank.
            total = 2 * self.n * (2 * self.n - 1)
            counts = Counter()
            for r1 in range(self.n):
                for r2 in range(self.n):
                    counts[(r1, r2)] = 2 if r1 == r2 else 4
            return [(pair, c / total) for pair, c in counts.items()]
        remaining = 2 * self.n - 2
        outcomes = []
        for rank in range(self.n):
            copies = 2 - sum(1 for c in state.private if c == rank)
            if copies:
                outcomes.append((rank, copies / remaining))
        return outcomes

    def legal_actions(self, state) -> tuple:
        history = state.rounds[-1]
        if history.endswith(RAISE):
            if history.count(RAISE) < self.max_raises:
                return (FOLD, CALL, RAISE)
            return (FOLD, CALL)
        return (CALL, RAISE)

    def infoset_key(self, state, player: int):
        return (state.private[player - 1], state.public) + tuple(state.rounds)

    def next_state(self, state, action):
        if state.private is None:
            return state._replace(private=action)
        if self.current_player(state) == CHANCE:
            return state._replace(public=action, rounds=state.rounds + ('',))
        return state._replace(rounds=state.rounds[:-1] + (state.rounds[-1] + action,))
