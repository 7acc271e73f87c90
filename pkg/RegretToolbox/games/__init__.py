"""
Benchmark games and their size statistics.

Game identifiers:
    matrix:<n>x<m>:<seed>, kuhn:<n>, leduc:<n>, goofspiel:<k>, liarsdice:<k>, single:<u1>/<u2>/...
"""

from functools import lru_cache
import logging
from typing import NamedTuple

from ..treeplex import GameForm
from .base import CHANCE, ExtensiveGame, compile_game, tree_value
from .goofspiel import Goofspiel
from .liars_dice import LiarsDice
from .matrix import build_matrix_game, matrix_game, random_payoffs, single_agent_game
from .poker import Kuhn, Leduc

logger = logging.getLogger(__name__)


class GAME:
    MATRIX = 'matrix'
    KUHN = 'kuhn'
    LEDUC = 'leduc'
    GOOFSPIEL = 'goofspiel'
    LIARS_DICE = 'liarsdice'
    SINGLE = 'single'


class GameSpec(NamedTuple):
    kind: str
    size: tuple[int, ...]  # (n, m) for matrix games, (n,) or (k,) otherwise.
    seed: int | None = None
    utilities: tuple[float, ...] = ()  # Single-agent games only.


class GameStats(NamedTuple):
    infosets: int
    sequences: int
    leaves: int


def build_kuhn(n: int) -> GameForm:
    return compile_game(Kuhn(n))


def build_leduc(n: int) -> GameForm:
    return compile_game(Leduc(n))


def build_goofspiel(k: int) -> GameForm:
    return compile_game(Goofspiel(k))


def build_liars_dice(k: int) -> GameForm:
    return LiarsDice(k).compile()


def _positive(text: str, game_id: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"Invalid size {text!r} in game id {game_id!r}.") from None
    if value < 1:
        raise ValueError(f"Sizes must be positive in game id {game_id!r}.")
    return value


def parse_game_id(game_id: str) -> GameSpec:
    """
    Parse a game identifier such as 'kuhn:3' or 'matrix:10x10:0'. A matrix id may leave out
    its seed, see `with_seed`.

    :param game_id: The identifier.
    :return: The parsed GameSpec.
    """
    kind, _, rest = game_id.strip().partition(':')
    kind = kind.lower()
    if kind == GAME.MATRIX:
        dims, _, seed = rest.partition(':')
        n, x, m = dims.partition('x')
        if not x:
            raise ValueError(f"Matrix game ids look like 'matrix:<n>x<m>[:<seed>]', not {game_id!r}.")
        try:
            seed = int(seed) if seed else None
        except ValueError:
            raise ValueError(f"Invalid seed {seed!r} in game id {game_id!r}.") from None
        return GameSpec(kind, (_positive(n, game_id), _positive(m, game_id)), seed)
    elif kind in (GAME.KUHN, GAME.LEDUC, GAME.GOOFSPIEL, GAME.LIARS_DICE):
        size = _positive(rest, game_id)
        if size < 2:
            raise ValueError(f"{kind} needs a size of at least 2, not {size}.")
        return GameSpec(kind, (size,))
    elif kind == GAME.SINGLE:
        try:
            utilities = tuple(float(u) for u in rest.split('/'))
        except ValueError:
            raise ValueError(f"Invalid utilities in game id {game_id!r}.") from None
        return GameSpec(kind, (len(utilities),), utilities=utilities)
    raise ValueError(f"Unknown game id {game_id!r}.")


@lru_cache(maxsize=16)
def build_game(game_id: str) -> GameForm:
    """Build (and cache) the game named by a CLI identifier. A matrix id without a seed uses seed 0."""
    spec = parse_game_id(game_id)
    logger.debug(f"Building {game_id}.")
    if spec.kind == GAME.MATRIX:
        return build_matrix_game(spec.size[0], spec.size[1], spec.seed or 0)
    elif spec.kind == GAME.KUHN:
        return build_kuhn(spec.size[0])
    elif spec.kind == GAME.LEDUC:
        return build_leduc(spec.size[0])
    elif spec.kind == GAME.GOOFSPIEL:
        return build_goofspiel(spec.size[0])
    elif spec.kind == GAME.LIARS_DICE:
        return build_liars_dice(spec.size[0])
    return single_agent_game(spec.utilities)


def game_stats(g: GameForm) -> GameStats:
    """Infosets and sequences summed over both players, and the number of payoff entries."""
    return GameStats(infosets=sum(t.num_infosets for t in g.treeplexes),
                     sequences=sum(t.num_sequences for t in g.treeplexes),
                     leaves=len(g.values))


def with_seed(game_id: str, seed: int) -> str:
    """Complete a matrix id that carries no seed, e.g. 'matrix:10x10' -> 'matrix:10x10:<seed>'."""
    spec = parse_game_id(game_id)
    if spec.kind == GAME.MATRIX and spec.seed is None:
        return f"{GAME.MATRIX}:{spec.size[0]}x{spec.size[1]}:{seed}"
    return game_id
