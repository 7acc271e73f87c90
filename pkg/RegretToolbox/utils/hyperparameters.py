"""
Tuned hyperparameters of the benchmark runs, keyed by algorithm id and game id.

Matrix game keys are 'matrix:10x10:<seed>'. Values are dictionaries of
ExperimentConfig fields.
"""

DRM_DEFAULTS = {'alpha': 2.0, 'beta': 0.0}

MATRIX_GAMES = tuple(f"matrix:10x10:{seed}" for seed in range(4))
EFG_GAMES = ('kuhn:3', 'leduc:3', 'goofspiel:4', 'liarsdice:6')


def _row(games, keys, values) -> dict:
    return {game: dict(zip(keys, v)) for game, v in zip(games, values)}


MATRIX_TABLE = {
    'rt-rm+': _row(MATRIX_GAMES, ('T', 'mu'), [(10, 0.5), (30, 0.1), (20, 0.1), (20, 0.1)]),
    'rt-drm': _row(MATRIX_GAMES, ('T', 'mu'), [(5, 0.5), (20, 0.1), (20, 0.1), (20, 0.1)]),
    'adp-rt-rm+': _row(MATRIX_GAMES, ('T', 'mu'), [(20, 0.1), (40, 0.05), (20, 0.05), (30, 0.05)]),
    'adp-rt-drm': _row(MATRIX_GAMES, ('T', 'mu'), [(20, 0.1), (20, 0.05), (20, 0.05), (20, 0.05)]),
    'omwu': _row(MATRIX_GAMES, ('eta',), [(0.379,), (0.379,), (0.263,), (0.379,)]),
    'reg-omwu': _row(MATRIX_GAMES, ('eta', 'mu_b'),
                     [(0.379, 0.1), (0.379, 0.1), (0.263, 0.1), (0.379, 0.05)]),
    'rnad': _row(MATRIX_GAMES, ('eta', 'T', 'mu_b'),
                 [(1.128, 30, 0.1), (1.128, 30, 0.1), (0.784, 30, 0.05), (0.784, 20, 0.1)]),
}

EFG_TABLE = {
    'rt-cfr+': _row(EFG_GAMES, ('T', 'mu'), [(5, 0.1), (125, 0.001), (30, 0.005), (1, 0.1)]),
    'rt-dcfr': _row(EFG_GAMES, ('T', 'mu'), [(5, 0.05), (125, 0.001), (20, 0.005), (1, 0.1)]),
    'adp-rt-cfr+': _row(EFG_GAMES, ('T', 'mu'), [(5, 0.05), (200, 0.01), (15, 0.1), (1, 0.01)]),
    'adp-rt-dcfr': _row(EFG_GAMES, ('T', 'mu'), [(5, 0.05), (150, 0.01), (10, 0.1), (1, 0.01)]),
    'domwu': _row(EFG_GAMES, ('eta',), [(0.127,), (0.127,), (0.014,), (0.127,)]),
    'reg-domwu': _row(EFG_GAMES, ('eta', 'mu_b'),
                      [(0.127, 1e-7), (0.112, 0.001), (0.127, 1e-4), (0.078, 0.01)]),
    'rnad': _row(EFG_GAMES, ('eta', 'T', 'mu_b'),
                 [(0.236, 10, 0.05), (0.263, 20, 0.1), (0.029, 10, 0.01), (0.263, 10, 0.05)]),
}

# Ids sharing their tuned values with an entry of the other table or another algorithm.
ALIASES = {
    'rt-rm+': 'rt-cfr+', 'rt-cfr+': 'rt-rm+',
    'rt-drm': 'rt-dcfr', 'rt-dcfr': 'rt-drm',
    'adp-rt-rm+': 'adp-rt-cfr+', 'adp-rt-cfr+': 'adp-rt-rm+',
    'adp-rt-drm': 'adp-rt-dcfr', 'adp-rt-dcfr': 'adp-rt-drm',
    'omwu': 'domwu', 'domwu': 'omwu',
    'reg-omwu': 'reg-domwu', 'reg-domwu': 'reg-omwu',
    'mwu': 'omwu',
}


def lookup(algo: str, game: str) -> dict:
    """
    The tuned hyperparameters of an algorithm on a game, or an empty dict if the
    pair was not tuned.
    """
    for table in (MATRIX_TABLE, EFG_TABLE):
        for name in (algo, ALIASES.get(algo), ALIASES.get(ALIASES.get(algo, ''), None)):
            if name is not None and game in table.get(name, {}):
                return dict(table[name][game])
    return {}

