"""Tests for configuration text, hyperparameter tables and trace artifacts."""

import math

import numpy as np
import pandas as pd
import pytest

from RegretToolbox.utils import hyperparameters
from RegretToolbox.utils.artifacts import (CSV_HEADER, TraceRow, emit_csv, emit_plot, format_row, read_trace,
                                           rows_from_frame)
from RegretToolbox.utils.config import (OUTPUT_ROOT_ENV, ExperimentConfig, parse_key_values,
                                        resolve_output)


def test_config_text_round_trip():
    config = ExperimentConfig(game='leduc:3', algo='rt-dcfr', mu=0.001, T=125, alpha=1.5, beta=-math.inf,
                              iters=10_000)
    text = config.to_text()
    assert 'beta=-inf' in text
    assert 'eta' not in parse_key_values(text)
    assert ExperimentConfig.from_text(text) == config


def test_parse_key_values():
    text = "# comment\ngame = kuhn:3\n\nalgo=cfr+  # trailing\niters=10\niters=20\n"
    assert parse_key_values(text) == {'game': 'kuhn:3', 'algo': 'cfr+', 'iters': '20'}
    with pytest.raises(ValueError, match='Line 1'):
        parse_key_values('game kuhn:3')


def test_config_errors():
    with pytest.raises(ValueError, match='Unknown'):
        ExperimentConfig.from_mapping({'game': 'kuhn:3', 'algo': 'cfr+', 'lr': '0.1'})
    with pytest.raises(ValueError, match='missing'):
        ExperimentConfig.from_mapping({'game': 'kuhn:3'})
    with pytest.raises(ValueError, match='Invalid value'):
        ExperimentConfig.from_mapping({'game': 'kuhn:3', 'algo': 'cfr+', 'iters': 'many'})


def test_config_update_skips_none():
    config = ExperimentConfig(game='kuhn:3', algo='cfr+', iters=5)
    assert config.update(iters=None, seed=3) == ExperimentConfig(game='kuhn:3', algo='cfr+', iters=5, seed=3)


def test_resolve_output(monkeypatch, tmp_path):
    monkeypatch.delenv(OUTPUT_ROOT_ENV, raising=False)
    assert resolve_output('run.csv') == 'run.csv'
    monkeypatch.setenv(OUTPUT_ROOT_ENV, str(tmp_path))
    assert resolve_output('run.csv') == str(tmp_path / 'run.csv')
    assert resolve_output('/abs/run.csv') == '/abs/run.csv'


def test_hyperparameter_lookup():
    assert hyperparameters.lookup('adp-rt-dcfr', 'leduc:3') == {'T': 150, 'mu': 0.01}
    assert hyperparameters.lookup('adp-rt-drm', 'leduc:3') == {'T': 150, 'mu': 0.01}
    assert hyperparameters.lookup('adp-rt-drm', 'matrix:10x10:1') == {'T': 20, 'mu': 0.05}
    assert hyperparameters.lookup('domwu', 'matrix:10x10:2') == {'eta': 0.263}
    assert hyperparameters.lookup('rnad', 'goofspiel:4') == {'eta': 0.029, 'T': 10, 'mu_b': 0.01}
    assert hyperparameters.lookup('cfr+', 'kuhn:3') == {}
    assert hyperparameters.lookup('rt-cfr+', 'kuhn:5') == {}


def test_format_row():
    row = TraceRow(iter=3, exploitability=0.1, sccp_n=2, phase='exploit', w=2.0, wall_ms=1.23456)
    assert format_row(row) == '3,0.10000000000000001,2,exploit,2,1.235'


def test_csv_round_trip(tmp_path):
    rows = [TraceRow(0, 0.5, 0, '', 1.0, 0.0), TraceRow(10, 1e-9, 1, 'explore', 0.5, 12.5)]
    path = tmp_path / 'trace.csv'
    emit_csv(rows, path)
    assert path.read_text().splitlines()[0] == CSV_HEADER
    assert rows_from_frame(read_trace(path)) == rows


def test_csv_keeps_every_digit(tmp_path):
    rng = np.random.default_rng(0)
    rows = [TraceRow(i, float(x), 0, '', float(w), float(i)) for i, (x, w) in
            enumerate(zip(rng.random(200) / 3, rng.random(200) * 2))]
    rows.append(TraceRow(200, 0.1 + 0.2, 0, '', 1.0, 0.0))
    path = tmp_path / 'digits.csv'
    emit_csv(rows, path)
    assert rows_from_frame(read_trace(path)) == rows


def test_header_only_trace(tmp_path):
    path = tmp_path / 'empty.csv'
    emit_csv([], path)
    df = read_trace(path)
    assert df.empty and ','.join(df.columns) == CSV_HEADER


def test_read_trace_rejects_other_files(tmp_path):
    path = tmp_path / 'other.csv'
    path.write_text('a,b\n1,2\n')
    with pytest.raises(ValueError):
        read_trace(path)


def test_plot(tmp_path):
    traces = {
        'cfr+': pd.DataFrame({'iter': [0, 10, 20], 'exploitability': [0.5, 0.1, 0.01]}),
        'adp-rt-cfr+': pd.DataFrame({'iter': [0, 10, 20], 'exploitability': [0.5, 0.05, 1e-4]}),
    }
    path = tmp_path / 'compare.svg'
    fig = emit_plot(traces, path, title='Kuhn')
    assert path.exists() and path.stat().st_size > 0
    labels = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
    assert labels == ['cfr+', 'adp-rt-cfr+']
    with pytest.raises(ValueError):
        emit_plot({}, tmp_path / 'none.svg')
