from .core import (ALGORITHMS,
                   RunRecord,
                   resolve_config,
                   run)
from .games import build_game, game_stats, parse_game_id
from .metrics import exploitability
from .treeplex import (GameForm,
                       Treeplex,
                       behavior_to_sequence,
                       sequence_to_behavior,
                       uniform_strategy,
                       validate)
from .utils.config import ExperimentConfig
