"""
Hyperparameter sweeps over the cartesian product of parameter lists.

A grid file uses the configuration syntax; a value holding commas is a list of
alternatives and `geomspace:<lo>:<hi>:<n>` expands to n log-spaced values:

    game=matrix:10x10:1
    algo=adp-rt-drm
    mu=1,0.5,0.1,0.05
    T=5,10,20,40
    iters=1000
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
import itertools
import logging
import math
import os

import numpy as np
from tqdm import tqdm
import xarray as xr

from .core import RunRecord, run
from .utils.config import ExperimentConfig, parse_key_values

logger = logging.getLogger(__name__)

GEOMSPACE_PREFIX = 'geomspace:'

PRESETS = {
    # Fixed-loss forgetting example: plain RM+ against DRM(1, 1).
    'single-agent': '\n'.join(['game=single:1/0/-1000000',
                               'algo=rm+,drm',
                               'alpha=1',
                               'beta=1',
                               'eval=last',
                               'iters=500000',
                               'stride=1000']),
    # Regret discount study of RTDCFR.
    'e3-grid': '\n'.join(['game=leduc:3',
                          'algo=rt-dcfr',
                          'alpha=1.5,2',
                          'beta=-inf,0,0.5',
                          'iters=10000',
                          'stride=10']),
}


def _expand(key: str, value: str) -> list[str]:
    if value.startswith(GEOMSPACE_PREFIX):
        try:
            lo, hi, n = value[len(GEOMSPACE_PREFIX):].split(':')
            points = np.geomspace(float(lo), float(hi), int(n))
        except ValueError:
            raise ValueError(f"Invalid grid {value!r} for '{key}'; expected geomspace:<lo>:<hi>:<n>.") from None
        return [repr(float(p)) for p in points]
    return [v.strip() for v in value.split(',') if v.strip()]


def parse_grid(text: str) -> dict[str, list[str]]:
    """Parse a grid file into {key: list of values}."""
    grid = {key: _expand(key, value) for key, value in parse_key_values(text).items()}
    empty = [k for k, v in grid.items() if not v]
    if empty or not grid:
        raise ValueError(f"The sweep grid is empty{' for ' + ', '.join(empty) if empty else ''}.")
    return grid


def expand_grid(grid: dict[str, list[str]]) -> tuple[list[ExperimentConfig], list[str]]:
    """
    :param grid: {key: list of values}.
    :return: One config per point of the cartesian product, and the keys that vary.
    """
    keys = list(grid)
    swept = [k for k in keys if len(grid[k]) > 1]
    configs = [ExperimentConfig.from_mapping(dict(zip(keys, values)))
               for values in itertools.product(*(grid[k] for k in keys))]
    return configs, swept


def run_name(config: ExperimentConfig, keys: list[str]) -> str:
    """A file-system friendly name for one grid point."""
    parts = [config.algo, config.game] + [f"{k}={getattr(config, k)}" for k in keys if k not in ('algo', 'game')]
    name = '_'.join(str(p) for p in parts)
    return ''.join(c if c.isalnum() or c in '+-=._' else '-' for c in name)


def _run_one(config: ExperimentConfig, trace_path: str | None):
    try:
        return run(config, trace_path), None
    except Exception as e:
        logger.exception(f"Run {config.algo} on {config.game} failed.")
        return None, f"{type(e).__name__}: {e}"


def sweep(configs: list[ExperimentConfig], out_dir: str | os.PathLike | None = None,
          keys: list[str] | None = None, workers: int = 1) -> list[RunRecord]:
    """
    Execute every configuration. Failed runs are logged and skipped.

    :param configs: The grid points.
    :param out_dir: Directory for <run-name>.csv traces, or None to keep results in memory.
    :param keys: The swept keys, used to name the runs.
    :param workers: Number of worker processes. 1 runs in this process.
    :return: The records of the runs that completed, in grid order.
    """
    if not configs:
        raise ValueError("The sweep grid is empty.")
    keys = keys or []
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
    paths = [os.path.join(out_dir, run_name(c, keys) + '.csv') if out_dir is not None else None
             for c in configs]

    results = [None] * len(configs)
    if workers <= 1:
        for i, (config, path) in enumerate(tqdm(list(zip(configs, paths)), desc='sweep', unit='run')):
            results[i] = _run_one(config, path)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(_run_one, c, p): i for i, (c, p) in enumerate(zip(configs, paths))}
            for future in tqdm(as_completed(futures), total=len(futures), desc='sweep', unit='run'):
                results[futures[future]] = future.result()

    records = []
    for config, (record, error) in zip(configs, results):
        if record is None:
            logger.warning(f"Skipping {config.algo} on {config.game}: {error}")
        else:
            records.append(record)
    logger.info(f"Sweep finished: {len(records)} of {len(configs)} runs completed.")
    return records


def best_record(records: list[RunRecord]) -> RunRecord:
    """The record with the lowest final exploitability."""
    if not records:
        raise ValueError("No records to choose from.")
    return min(records, key=lambda r: r.final_exploitability
               if math.isfinite(r.final_exploitability) else math.inf)


def best_by_game(records: list[RunRecord]) -> dict[str, RunRecord]:
    games = {}
    for record in records:
        games.setdefault(record.config.game, []).append(record)
    return {game: best_record(rs) for game, rs in games.items()}


def sweep_summary(records: list[RunRecord], keys: list[str]) -> xr.DataArray:
    """
    Final exploitability of every run laid out over the swept parameters.
    Grid points without a completed run are NaN.
    """
    coords = {k: sorted({getattr(r.config, k) for r in records}, key=_sort_key) for k in keys}
    shape = tuple(len(coords[k]) for k in keys)
    values = np.full(shape, np.nan)
    for r in records:
        index = tuple(coords[k].index(getattr(r.config, k)) for k in keys)
        values[index] = r.final_exploitability
    da = xr.DataArray(values, coords=coords, dims=keys, name='exploitability')
    da.attrs['description'] = 'Final exploitability of each sweep run.'
    if records:
        da.attrs['iterations'] = int(records[0].config.iters)
    return da


def _sort_key(value):
    return (0, value, '') if isinstance(value, (int, float)) else (1, 0, str(value))


def write_summary(da: xr.DataArray, path: str | os.PathLike) -> None:
    da.to_netcdf(path)
    logger.info(f"Wrote sweep summary to {path}.")
