"""
Run one experiment: build the game, drive the solver, evaluate exploitability
and record the trace.
"""

from dataclasses import dataclass, field
import logging
import math
import os
import time
from typing import NamedTuple

import numpy as np

from .baselines import BASELINE_STEPS, DILATION, MwuState
from .controller import COUNT_UNIT, POLICY, PhaseEvent, SccpController
from .engine import (AVERAGING, EngineState, SolverDivergenceError, averaging_weight, average_strategy,
                     counterfactual_losses, iterate_once)
from .games import build_game, with_seed
from .metrics import exploitability
from .minimizers import MinimizerKind, drm
from .treeplex import GameForm, behavior_to_sequence, sequence_to_behavior
from .utils import hyperparameters
from .utils.artifacts import TraceRow, TraceWriter, save_strategies, write_text
from .utils.config import EVAL_AVG, EVAL_LAST, ExperimentConfig

logger = logging.getLogger(__name__)


class FAMILY:
    REGRET = 'regret'
    MULTIPLICATIVE = 'multiplicative'


class AlgorithmSpec(NamedTuple):
    family: str
    minimizer: str | None  # Regret matching variant for the regret family.
    policy: str | None  # Reference policy; None means no RT term.
    eval: str  # Default evaluation, 'last' or 'avg'.


def _regret(minimizer, policy=None, evaluate=EVAL_LAST):
    return AlgorithmSpec(FAMILY.REGRET, minimizer, policy, evaluate)


def _multiplicative(evaluate=EVAL_LAST):
    return AlgorithmSpec(FAMILY.MULTIPLICATIVE, None, None, evaluate)


ALGORITHMS = {
    # Averaging baselines. The -cfr names are the same dynamics on extensive-form games.
    'rm': _regret('rm', evaluate=EVAL_AVG),
    'rm+': _regret('rm+', evaluate=EVAL_AVG),
    'drm': _regret('drm', evaluate=EVAL_AVG),
    'prm+': _regret('prm+', evaluate=EVAL_AVG),
    'cfr': _regret('rm', evaluate=EVAL_AVG),
    'cfr+': _regret('rm+', evaluate=EVAL_AVG),
    'dcfr': _regret('drm', evaluate=EVAL_AVG),
    'pcfr+': _regret('prm+', evaluate=EVAL_AVG),
    # Reward transformation with a fixed refresh interval.
    'rt-rm+': _regret('rm+', POLICY.FIXED),
    'rt-drm': _regret('drm', POLICY.FIXED),
    'rt-cfr+': _regret('rm+', POLICY.FIXED),
    'rt-dcfr': _regret('drm', POLICY.FIXED),
    # Adaptive reward transformation.
    'adp-rt-rm+': _regret('rm+', POLICY.ADAPTIVE),
    'adp-rt-drm': _regret('drm', POLICY.ADAPTIVE),
    'adp-rt-cfr+': _regret('rm+', POLICY.ADAPTIVE),
    'adp-rt-dcfr': _regret('drm', POLICY.ADAPTIVE),
    # Multiplicative weights baselines.
    'mwu': _multiplicative(EVAL_AVG),
    'omwu': _multiplicative(),
    'reg-omwu': _multiplicative(),
    'rnad': _multiplicative(),
    'domwu': _multiplicative(),
    'reg-domwu': _multiplicative(),
}


def algorithm(algo: str) -> AlgorithmSpec:
    try:
        return ALGORITHMS[algo]
    except KeyError:
        raise ValueError(f"Unknown algorithm {algo!r}; known ids are {', '.join(ALGORITHMS)}.") from None


def resolve_config(config: ExperimentConfig) -> ExperimentConfig:
    """
    Fill parameters left unset from the algorithm defaults and the tuned
    hyperparameter tables, then check that the algorithm has what it needs.

    :param config: The configuration as given.
    :return: A complete configuration.
    """
    spec = algorithm(config.algo)
    config = config.update(game=with_seed(config.game, config.seed))
    tuned = hyperparameters.lookup(config.algo, config.game)
    filled = {k: v for k, v in tuned.items() if getattr(config, k) is None}
    if spec.minimizer == 'drm':
        filled.update({k: v for k, v in hyperparameters.DRM_DEFAULTS.items() if getattr(config, k) is None})
    if config.eval is None:
        filled['eval'] = spec.eval
    if config.policy is None and spec.policy is not None:
        filled['policy'] = spec.policy
    config = config.update(**filled)

    missing = []
    if spec.policy is not None:
        missing += [k for k in ('mu', 'T') if getattr(config, k) is None]
    if spec.family == FAMILY.MULTIPLICATIVE:
        missing += [k for k in ('eta',) if config.eta is None]
        if config.algo in ('reg-omwu', 'reg-domwu', 'rnad') and config.mu_b is None:
            missing.append('mu_b')
        if config.algo == 'rnad' and config.T is None:
            missing.append('T')
    if missing:
        raise ValueError(f"{config.algo} on {config.game} needs {', '.join(missing)}; "
                         f"no tuned value is available.")
    if config.iters < 0:
        raise ValueError(f"Iteration budget must be nonnegative, not {config.iters}.")
    if config.stride < 1:
        raise ValueError(f"Checkpoint stride must be at least 1, not {config.stride}.")
    if config.eval not in (EVAL_LAST, EVAL_AVG):
        raise ValueError(f"eval must be '{EVAL_LAST}' or '{EVAL_AVG}', not {config.eval!r}.")
    if config.averaging not in AVERAGING.ALL:
        raise ValueError(f"Unknown averaging scheme {config.averaging!r}.")
    if config.dilation not in DILATION.ALL:
        raise ValueError(f"Unknown dilation scheme {config.dilation!r}.")
    if config.count_unit not in COUNT_UNIT.ALL:
        raise ValueError(f"Unknown count unit {config.count_unit!r}.")
    if config.policy is not None and config.policy not in POLICY.ALL:
        raise ValueError(f"Unknown reference policy {config.policy!r}.")
    if config.mu is not None and config.mu < 0:
        raise ValueError(f"RT weight mu must be nonnegative, not {config.mu}.")
    if config.eta is not None and config.eta <= 0:
        raise ValueError(f"Learning rate eta must be positive, not {config.eta}.")
    return config


def minimizer_kind(config: ExperimentConfig) -> MinimizerKind:
    name = algorithm(config.algo).minimizer
    if name == 'drm':
        return drm(config.alpha, config.beta)
    return MinimizerKind.parse(name)


@dataclass
class RunRecord:
    config: ExperimentConfig
    rows: list[TraceRow] = field(default_factory=list)
    events: list[PhaseEvent] = field(default_factory=list)
    strategies: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def config_text(self) -> str:
        return self.config.to_text()

    @property
    def final_exploitability(self) -> float:
        return self.rows[-1].exploitability if self.rows else math.nan


class RegretSolver:
    """Counterfactual regret minimization, optionally with a reward transformation controller."""

    def __init__(self, g: GameForm, config: ExperimentConfig) -> None:
        self.g = g
        self.kind = minimizer_kind(config)
        self.state = EngineState.initial(g, config.averaging)
        self.mu = config.mu or 0.0
        self.controller = None
        if config.policy is not None and algorithm(config.algo).policy is not None:
            self.controller = SccpController.start(self.state.behaviors(),
                                                   exploitability(g, *self.state.profile()).epsilon,
                                                   T=config.T,
                                                   m=config.m, policy=config.policy,
                                                   count_unit=config.count_unit)
            self.state.set_rt_reference(self.controller.reference, self.mu, self.controller.w)

    @property
    def t(self) -> int:
        return self.state.t

    def step(self, epsilon_fn) -> PhaseEvent | None:
        iterate_once(self.g, self.state, self.kind)
        if self.controller is None:
            return None
        self.controller.advance(2)
        event = self.controller.tick(self.state.t, self.state.behaviors(), lambda _: epsilon_fn())
        if event is not None:
            self.state.set_rt_reference(self.controller.reference, self.mu, self.controller.w)
        return event

    def current(self):
        return self.state.profile()

    def average(self):
        return average_strategy(self.g, self.state)

    def behaviors(self):
        return self.state.behaviors()

    @property
    def sccp_n(self) -> int:
        return self.controller.n if self.controller else 0

    @property
    def w(self) -> float:
        return self.controller.w if self.controller else 1.0


class MultiplicativeSolver:
    """Alternating multiplicative weights updates on counterfactual losses."""
    sccp_n = 0
    w = 1.0

    def __init__(self, g: GameForm, config: ExperimentConfig) -> None:
        self.g = g
        self.step_fn = BASELINE_STEPS[config.algo]
        self.averaging = config.averaging
        self.states = [MwuState.initial(t, config.eta, mu_b=config.mu_b or 0.0, T=config.T or 0,
                                        dilation=config.dilation) for t in g.treeplexes]
        self.q = [behavior_to_sequence(t, s.sigma) for t, s in zip(g.treeplexes, self.states)]
        self.average_sum = [np.zeros(t.num_sequences) for t in g.treeplexes]
        self.average_weight = 0.0
        self.t = 0

    def step(self, epsilon_fn) -> None:
        weight = averaging_weight(self.t + 1, self.averaging)
        for i in range(2):
            self.average_sum[i] += weight * self.q[i]
        self.average_weight += weight
        for i, player in enumerate((1, 2)):
            t = self.g.treeplex(player)
            if t.num_infosets == 0:
                continue
            state = self.states[i]
            loss = counterfactual_losses(self.g, player, self.q[1 - i], state.sigma)
            self.states[i] = self.step_fn(state, loss)
            self.q[i] = behavior_to_sequence(t, self.states[i].sigma)
        self.t += 1

    def current(self):
        return self.q[0], self.q[1]

    def average(self):
        out = []
        for t, total in zip(self.g.treeplexes, self.average_sum):
            q = total / self.average_weight
            out.append(behavior_to_sequence(t, sequence_to_behavior(t, q, check=False)))
        return out[0], out[1]

    def behaviors(self):
        return self.states[0].sigma, self.states[1].sigma



def run(config: ExperimentConfig, trace_path: str | os.PathLike | None = None,
        g: GameForm | None = None) -> RunRecord:
    """
    Execute one experiment.

    Exploitability is recorded at iteration 0 (the initial profile), every
    `stride` iterations, at every controller transition and at the last
    iteration. It is evaluated on the current strategy for eval=last and on the
    averaged strategy for eval=avg.

    :param config: The experiment. Unset parameters are filled by `resolve_config`.
    :param trace_path: Optional CSV written row by row. Final strategies go to
        <stem>.npz and the configuration to <stem>.cfg next to it.
    :param g: A prebuilt game, to share one game between runs.
    :return: The RunRecord.
    """
    config = resolve_config(config)
    spec = algorithm(config.algo)
    g = g if g is not None else build_game(config.game)
    logger.info(f"Running {config.algo} on {config.game} for {config.iters} iterations.")

    if spec.family == FAMILY.REGRET:
        solver = RegretSolver(g, config)
    else:
        solver = MultiplicativeSolver(g, config)

    cache = {}

    def current_epsilon() -> float:
        if solver.t not in cache:
            cache.clear()
            cache[solver.t] = exploitability(g, *solver.current()).epsilon
        return cache[solver.t]

    def evaluate() -> float:
        if config.eval == EVAL_AVG and solver.t > 0:
            return exploitability(g, *solver.average()).epsilon
        return current_epsilon()

    record = RunRecord(config=config)
    started = time.perf_counter()

    def emit(event: PhaseEvent | None) -> None:
        eps = evaluate()
        if not math.isfinite(eps):
            raise SolverDivergenceError(f"Exploitability became {eps} at iteration {solver.t}.")
        row = TraceRow(iter=solver.t, exploitability=eps, sccp_n=solver.sccp_n,
                       phase=event.phase if event else '', w=solver.w,
                       wall_ms=1000.0 * (time.perf_counter() - started))
        record.rows.append(row)
        writer.write(row)

    try:
        with TraceWriter(trace_path) as writer:
            emit(None)
            for _ in range(config.iters):
                event = solver.step(current_epsilon)
                if event is not None:
                    record.events.append(event)
                if event is not None or solver.t % config.stride == 0 or solver.t == config.iters:
                    emit(event)
    except SolverDivergenceError:
        logger.error(f"{config.algo} on {config.game} diverged at iteration {solver.t}; "
                     f"the partial trace is kept.")
        raise
    except OSError:
        logger.exception(f"Could not write the trace of {config.algo} on {config.game} to {trace_path}.")
        raise

    sigma1, sigma2 = solver.behaviors()
    q1, q2 = solver.current()
    record.strategies = {'sigma1': sigma1.copy(), 'sigma2': sigma2.copy(), 'q1': q1.copy(), 'q2': q2.copy()}
    if solver.t > 0 and config.eval == EVAL_AVG:
        avg1, avg2 = solver.average()
        record.strategies.update(avg_q1=avg1, avg_q2=avg2)

    if trace_path is not None:
        stem = os.path.splitext(os.fspath(trace_path))[0]
        save_strategies(record.strategies, stem + '.npz')
        write_text(record.config_text, stem + '.cfg')
    logger.info(f"{config.algo} on {config.game}: final exploitability {record.final_exploitability:.6g} "
                f"after {solver.t} iterations, {len(record.events)} phase transitions.")
    return record
