import numpy as np
from numpy.typing import ArrayLike

from ..treeplex import GameForm, TreeplexBuilder

PAYOFF_LOW, PAYOFF_HIGH = -1.0, 1.0


def random_payoffs(n: int, m: int, seed: int) -> np.ndarray:
    """
    Draw an n x m payoff matrix uniformly from [-1, 1).

    The generator is numpy's PCG64 seeded with `seed`, so a seed always maps to
    the same matrix.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.uniform(PAYOFF_LOW, PAYOFF_HIGH, size=(n, m))


def matrix_game(payoffs: ArrayLike, name: str | None = None) -> GameForm:
    """
    Wrap a dense payoff matrix of player 1 as a sequence-form game where each
    player has a single infoset.
    """
    payoffs = np.atleast_2d(np.asarray(payoffs, dtype=np.float64))
    n, m = payoffs.shape
    if n < 1 or m < 1:
        raise ValueError(f"A matrix game needs at least one action per player, got {payoffs.shape}.")
    treeplexes = []
    for player, size in ((1, n), (2, m)):
        builder = TreeplexBuilder(player)
        builder.add('root', 0, range(size))
        treeplexes.append(builder.build())
    rows, cols = np.meshgrid(np.arange(1, n + 1), np.arange(1, m + 1), indexing='ij')
    return GameForm(name=name or f"matrix:{n}x{m}",
                    treeplexes=tuple(treeplexes),
                    rows=rows.ravel().astype(np.int64),
                    cols=cols.ravel().astype(np.int64),
                    values=payoffs.ravel().copy())


def build_matrix_game(n: int, m: int, seed: int) -> GameForm:
    """
    :param n: Number of actions of player 1.
    :param m: Number of actions of player 2.
    :param seed: Seed of the payoff generator.
    :return: A random matrix game with payoffs in [-1, 1].
    """
    if n < 1 or m < 1:
        raise ValueError(f"Matrix dimensions must be positive, not {n}x{m}.")
    return matrix_game(random_payoffs(n, m, seed), name=f"matrix:{n}x{m}:{seed}")


def single_agent_game(utilities: ArrayLike) -> GameForm:
    """
    A one-decision game: player 1 picks an action and receives its utility,
    player 2 never moves and has an empty treeplex.
    """
    utilities = np.asarray(utilities, dtype=np.float64).ravel()
    if utilities.size == 0:
        raise ValueError("A single-agent game needs at least one action.")
    builder = TreeplexBuilder(1)
    builder.add('root', 0, range(utilities.size))
    name = 'single:' + '/'.join(f"{u:g}" for u in utilities)
    return GameForm(name=name,
                    treeplexes=(builder.build(), TreeplexBuilder(2).build()),
                    rows=np.arange(1, utilities.size + 1, dtype=np.int64),
                    cols=np.zeros(utilities.size, dtype=np.int64),
                    values=utilities.copy())
