"""
Experiment configuration as flat key=value text.

    # Adaptive RTCFR+ on Kuhn poker
    game=kuhn:3
    algo=adp-rt-cfr+
    iters=10000
"""

from dataclasses import dataclass, fields, replace
import math
import os

OUTPUT_ROOT_ENV = 'REGRET_TOOLBOX_OUTPUT'  # Environment variable naming the output root directory.

EVAL_LAST, EVAL_AVG = 'last', 'avg'


@dataclass(frozen=True)
class ExperimentConfig:
    game: str
    algo: str
    mu: float | None = None
    T: int | None = None
    m: int = 1
    policy: str | None = None  # Reference policy of RT algorithms; defaults per algorithm.
    count_unit: str = 'update'
    alpha: float | None = None
    beta: float | None = None
    eta: float | None = None
    mu_b: float | None = None
    iters: int = 1000
    stride: int = 1
    seed: int = 0  # Payoff seed of a matrix game id given without one, e.g. 'matrix:10x10'.
    averaging: str = 'quadratic'
    eval: str | None = None  # 'last' or 'avg'; defaults per algorithm.
    dilation: str = 'all-ones'
    out: str | None = None

    def to_text(self) -> str:
        """Serialize the parameters that are set, one key=value per line."""
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, float):
                value = _format_float(value)
            lines.append(f"{f.name}={value}")
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> 'ExperimentConfig':
        """Build a config from string values, converting each to its field's type."""
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise ValueError(f"Unknown configuration keys: {', '.join(sorted(unknown))}.")
        for required in ('game', 'algo'):
            if required not in mapping:
                raise ValueError(f"Configuration is missing the '{required}' key.")
        return cls(**{k: _convert(k, v) for k, v in mapping.items()})

    @classmethod
    def from_text(cls, text: str) -> 'ExperimentConfig':
        return cls.from_mapping(parse_key_values(text))

    def update(self, **changes) -> 'ExperimentConfig':
        """A copy with the given (non-None) fields replaced."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


INT_FIELDS = {'T', 'm', 'iters', 'stride', 'seed'}
FLOAT_FIELDS = {'mu', 'alpha', 'beta', 'eta', 'mu_b'}


def _format_float(value: float) -> str:
    if math.isinf(value):
        return 'inf' if value > 0 else '-inf'
    return repr(value)


def _convert(key: str, value):
    if not isinstance(value, str):
        return value
    value = value.strip()
    try:
        if key in INT_FIELDS:
            return int(value)
        if key in FLOAT_FIELDS:
            return float(value)
    except ValueError:
        raise ValueError(f"Invalid value {value!r} for '{key}'.") from None
    return value


def parse_key_values(text: str) -> dict[str, str]:
    """
    Parse key=value lines. Blank lines and '#' comments are ignored, later keys
    override earlier ones.
    """
    out = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition('=')
        if not sep or not key.strip():
            raise ValueError(f"Line {number} is not a key=value pair: {line!r}")
        out[key.strip()] = value.strip()
    return out


def resolve_output(path: str | os.PathLike) -> str:
    """Resolve a relative output path under $REGRET_TOOLBOX_OUTPUT if it is set."""
    path = os.fspath(path)
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root and not os.path.isabs(path):
        return os.path.join(root, path)
    return path
