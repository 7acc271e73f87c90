"""
Command line front end.

    regret-toolbox solve --game kuhn:3 --algo adp-rt-cfr+ --iters 10000 --out kuhn.csv
    regret-toolbox sweep --config grid.cfg --out-dir sweeps/matrix1
    regret-toolbox stats --game leduc:3
    regret-toolbox plot --in a.csv b.csv --out compare.svg
"""

import argparse
import logging
import os
import sys

from .core import ALGORITHMS, resolve_config, run
from .games import build_game, game_stats
from .sweep import PRESETS, best_record, expand_grid, parse_grid, sweep, sweep_summary, write_summary
from .utils.artifacts import emit_plot, read_trace
from .utils.config import ExperimentConfig, parse_key_values, resolve_output

logger = logging.getLogger(__name__)


def _solve(args: argparse.Namespace) -> int:
    mapping = {}
    if args.config:
        with open(args.config) as f:
            mapping.update(parse_key_values(f.read()))
    cli_values = {'game': args.game, 'algo': args.algo, 'mu': args.mu, 'T': args.T, 'm': args.m,
                  'policy': args.policy, 'count_unit': args.count_unit, 'alpha': args.alpha,
                  'beta': args.beta, 'eta': args.eta, 'mu_b': args.mu_b, 'iters': args.iters,
                  'stride': args.stride, 'seed': args.seed, 'averaging': args.averaging, 'eval': args.eval,
                  'dilation': args.dilation}
    mapping.update({k: str(v) for k, v in cli_values.items() if v is not None})
    out = resolve_output(args.out) if args.out else None
    if out:
        mapping['out'] = out
    config = resolve_config(ExperimentConfig.from_mapping(mapping))
    record = run(config, trace_path=out)
    print(f"{config.algo} on {config.game}: exploitability {record.final_exploitability:.6g} "
          f"after {record.rows[-1].iter} iterations")
    if args.show_strategy:
        g = build_game(config.game)
        for player in (1, 2):
            view = g.treeplex(player).infoset_view(record.strategies[f"sigma{player}"])
            for key, probs in view.items():
                print(f"P{player} {key}: " + " ".join(f"{p:.4f}" for p in probs))
    return 0


def _sweep(args: argparse.Namespace) -> int:
    if args.preset:
        text = PRESETS[args.preset]
    else:
        with open(args.config) as f:
            text = f.read()
    configs, keys = expand_grid(parse_grid(text))
    out_dir = resolve_output(args.out_dir)
    records = sweep(configs, out_dir=out_dir, keys=keys, workers=args.workers)
    if not records:
        logger.error("Every run of the sweep failed.")
        return 1
    write_summary(sweep_summary(records, keys), os.path.join(out_dir, 'sweep.nc'))
    best = best_record(records)
    settings = ', '.join(f"{k}={getattr(best.config, k)}" for k in keys)
    print(f"best: {best.config.algo} on {best.config.game} ({settings}) "
          f"exploitability {best.final_exploitability:.6g}")
    return 0


def _stats(args: argparse.Namespace) -> int:
    print(f"{'game':<16}{'infosets':>12}{'sequences':>12}{'leaves':>12}")
    for game_id in args.game:
        stats = game_stats(build_game(game_id))
        print(f"{game_id:<16}{stats.infosets:>12}{stats.sequences:>12}{stats.leaves:>12}")
    return 0


def _plot(args: argparse.Namespace) -> int:
    traces = {os.path.splitext(os.path.basename(p))[0]: read_trace(p) for p in args.inputs}
    emit_plot(traces, resolve_output(args.out), title=args.title)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='regret-toolbox',
                                     description='Regret minimization solvers for two-player zero-sum games.')
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    sub = parser.add_subparsers(dest='command', required=True)

    solve = sub.add_parser('solve', help='Run one algorithm on one game.')
    solve.add_argument('--config', help='key=value file; command line options override it.')
    solve.add_argument('--game', help='Game id, e.g. kuhn:3 or matrix:10x10:0.')
    solve.add_argument('--algo', help=f"One of: {', '.join(ALGORITHMS)}.")
    solve.add_argument('--mu', type=float, help='RT weight.')
    solve.add_argument('--T', type=int, help='SCCP interval.')
    solve.add_argument('--m', type=int, help='Exploitability check cadence of the adaptive controller.')
    solve.add_argument('--policy', choices=['adaptive', 'fixed', 'static'])
    solve.add_argument('--count-unit', choices=['update', 'iteration'])
    solve.add_argument('--alpha', type=float)
    solve.add_argument('--beta', type=float)
    solve.add_argument('--eta', type=float, help='Learning rate of multiplicative baselines.')
    solve.add_argument('--mu-b', type=float, help='Regularization weight of multiplicative baselines.')
    solve.add_argument('--iters', type=int)
    solve.add_argument('--stride', type=int, help='Checkpoint stride of the trace.')
    solve.add_argument('--seed', type=int)
    solve.add_argument('--averaging', choices=['uniform', 'linear', 'quadratic'])
    solve.add_argument('--eval', choices=['last', 'avg'])
    solve.add_argument('--dilation', choices=['all-ones', 'depth'])
    solve.add_argument('--out', help='Trace CSV path.')
    solve.add_argument('--show-strategy', action='store_true', help='Print the final strategy per infoset.')
    solve.set_defaults(func=_solve)

    sw = sub.add_parser('sweep', help='Run a hyperparameter grid.')
    source = sw.add_mutually_exclusive_group(required=True)
    source.add_argument('--config', help='Grid file.')
    source.add_argument('--preset', choices=sorted(PRESETS))
    sw.add_argument('--out-dir', required=True)
    sw.add_argument('--workers', type=int, default=1)
    sw.set_defaults(func=_sweep)

    stats = sub.add_parser('stats', help='Print game sizes.')
    stats.add_argument('--game', nargs='+', required=True)
    stats.set_defaults(func=_stats)

    plot = sub.add_parser('plot', help='Plot exploitability traces.')
    plot.add_argument('--in', dest='inputs', nargs='+', required=True)
    plot.add_argument('--out', required=True)
    plot.add_argument('--title')
    plot.set_defaults(func=_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        logger.error(str(e))
        return 2


if __name__ == '__main__':
    sys.exit(main())
