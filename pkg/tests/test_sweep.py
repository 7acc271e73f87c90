"""Tests for hyperparameter sweeps."""

import numpy as np
import pytest
import xarray as xr

from RegretToolbox.core import run
from RegretToolbox.sweep import (PRESETS, best_by_game, best_record, expand_grid, parse_grid, run_name, sweep,
                                 sweep_summary, write_summary)
from RegretToolbox.utils.config import ExperimentConfig

GRID = """
# Fixed-interval RT on a random matrix game
game=matrix:10x10:1
algo=rt-rm+
mu=0.5,0.1
T=5,10
iters=50
stride=10
"""


def test_parse_grid():
    grid = parse_grid(GRID)
    assert grid['mu'] == ['0.5', '0.1']
    assert grid['game'] == ['matrix:10x10:1']


def test_geomspace():
    grid = parse_grid('game=kuhn:3\nalgo=omwu\neta=geomspace:0.01:1:3')
    np.testing.assert_allclose([float(v) for v in grid['eta']], [0.01, 0.1, 1.0])
    with pytest.raises(ValueError):
        parse_grid('game=kuhn:3\nalgo=omwu\neta=geomspace:0.01:1')


def test_empty_grid():
    with pytest.raises(ValueError):
        parse_grid('# nothing\n')
    with pytest.raises(ValueError):
        parse_grid('game=kuhn:3\nalgo=,')


def test_expand_grid():
    configs, keys = expand_grid(parse_grid(GRID))
    assert keys == ['mu', 'T']
    assert len(configs) == 4
    assert {(c.mu, c.T) for c in configs} == {(0.5, 5), (0.5, 10), (0.1, 5), (0.1, 10)}
    assert run_name(configs[0], keys) == 'rt-rm+_matrix-10x10-1_mu=0.5_T=5'


def test_sweep_writes_traces(tmp_path):
    configs, keys = expand_grid(parse_grid(GRID))
    records = sweep(configs, out_dir=tmp_path, keys=keys)
    assert len(records) == 4
    assert len(list(tmp_path.glob('*.csv'))) == 4

    da = sweep_summary(records, keys)
    assert da.dims == ('mu', 'T')
    assert da.shape == (2, 2)
    assert list(da.coords['mu'].values) == [0.1, 0.5]
    assert float(da.sel(mu=0.5, T=5)) == next(r.final_exploitability for r in records
                                              if (r.config.mu, r.config.T) == (0.5, 5))
    path = tmp_path / 'sweep.nc'
    write_summary(da, path)
    with xr.open_dataarray(path) as loaded:
        np.testing.assert_allclose(loaded.values, da.values)


def test_single_point_matches_run():
    configs, _ = expand_grid(parse_grid('game=kuhn:3\nalgo=cfr+\niters=20'))
    (record,) = sweep(configs)
    assert record.final_exploitability == run(configs[0]).final_exploitability


def test_failed_runs_are_skipped():
    configs, keys = expand_grid(parse_grid('game=kuhn:3\nalgo=cfr+,omwu\niters=5'))
    # An SCCP interval of 0 is rejected when the solver starts.
    configs.append(ExperimentConfig(game='kuhn:3', algo='rt-cfr+', T=0, mu=0.1, iters=5))
    records = sweep(configs, keys=keys)
    assert [r.config.algo for r in records] == ['cfr+', 'omwu']


def test_best_record():
    records = sweep([ExperimentConfig(game='kuhn:3', algo='cfr+', iters=n) for n in (1, 50)]
                    + [ExperimentConfig(game='matrix:10x10:0', algo='rm+', iters=10)])
    assert best_record(records[:2]).config.iters == 50
    best = best_by_game(records)
    assert set(best) == {'kuhn:3', 'matrix:10x10:0'}
    with pytest.raises(ValueError):
        best_record([])


def test_presets_parse():
    for text in PRESETS.values():
        configs, keys = expand_grid(parse_grid(text))
        assert configs and keys
