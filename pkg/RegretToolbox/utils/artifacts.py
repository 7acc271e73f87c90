import logging
import os
from typing import NamedTuple

from matplotlib.figure import Figure
import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('iter', 'exploitability', 'sccp_n', 'phase', 'w', 'wall_ms')
CSV_HEADER = ','.join(CSV_COLUMNS)


class TraceRow(NamedTuple):
    iter: int
    exploitability: float
    sccp_n: int
    phase: str  # Empty unless a controller transition happened at this iteration.
    w: float
    wall_ms: float


def format_row(row: TraceRow) -> str:
    return f"{row.iter:d},{row.exploitability:.17g},{row.sccp_n:d},{row.phase},{row.w:.17g},{row.wall_ms:.3f}"


class TraceWriter:
    """
    Write trace rows to a CSV file as they are produced. Every row is flushed so
    an interrupted run leaves a readable prefix.
    """

    def __init__(self, path: str | os.PathLike | None) -> None:
        self.path = path
        self._file = None

    def __enter__(self) -> 'TraceWriter':
        if self.path is not None:
            directory = os.path.dirname(os.fspath(self.path))
            if directory:
                os.makedirs(directory, exist_ok=True)
            self._file = open(self.path, 'w', newline='')
            self._file.write(CSV_HEADER + '\n')
            self._file.flush()
        return self

    def write(self, row: TraceRow) -> None:
        if self._file is not None:
            self._file.write(format_row(row) + '\n')
            self._file.flush()

    def __exit__(self, *exc) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None


def emit_csv(rows: list[TraceRow], path: str | os.PathLike) -> None:
    """Write a whole trace. An empty trace produces a header-only file."""
    with TraceWriter(path) as writer:
        for row in rows:
            writer.write(row)


def read_trace(path: str | os.PathLike) -> pd.DataFrame:
    """
    Read a trace CSV.

    :param path: The CSV file.
    :return: A DataFrame with the CSV columns; phase is '' where no transition happened.
    """
    df = pd.read_csv(path, dtype={'iter': np.int64, 'exploitability': np.float64, 'sccp_n': np.int64,
                                  'phase': str, 'w': np.float64, 'wall_ms': np.float64},
                     keep_default_na=False, float_precision='round_trip',
                     na_values={'exploitability': ['nan'], 'w': ['nan'], 'wall_ms': ['nan']})
    if tuple(df.columns) != CSV_COLUMNS:
        raise ValueError(f"{path} is not a trace file; columns are {list(df.columns)}.")
    return df


def rows_from_frame(df: pd.DataFrame) -> list[TraceRow]:
    return [TraceRow(int(r.iter), float(r.exploitability), int(r.sccp_n), str(r.phase), float(r.w),
                     float(r.wall_ms)) for r in df.itertuples(index=False)]


def emit_plot(traces: dict[str, pd.DataFrame], path: str | os.PathLike, title: str | None = None) -> Figure:
    """
    Plot exploitability against iteration on a log scale, one series per trace.

    :param traces: {legend label: trace DataFrame}.
    :param path: Output file; the format follows the extension (SVG is self-contained).
    :param title: Optional plot title.
    :return: The figure, already saved.
    """
    if not traces:
        raise ValueError("Nothing to plot.")
    fig = Figure(figsize=(7, 4.5))
    ax = fig.add_subplot()
    for label, df in traces.items():
        ax.plot(df['iter'], df['exploitability'], label=label, linewidth=1.2)
    ax.set_yscale('log')
    ax.set_xlabel('Iteration')
    ax.set_ylabel('Exploitability')
    if title:
        ax.set_title(title)
    ax.grid(True, which='both', alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    logger.info(f"Wrote plot of {len(traces)} traces to {path}.")
    return fig


def save_strategies(strategies: dict[str, np.ndarray], path: str | os.PathLike) -> None:
    np.savez(path, **strategies)


def write_text(text: str, path: str | os.PathLike) -> None:
    with open(path, 'w') as f:
        f.write(text)
