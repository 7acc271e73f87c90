"""
Local regret minimizers of the regret matching family.

Every operation works either on a single simplex (plain arrays) or, given a
`Segments` layout, on every infoset of a treeplex at once. In the second case
arrays are indexed by sequence and only the entries listed in the layout are
touched.
"""

from dataclasses import dataclass, field, replace
import math
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray

from .treeplex import Segments


class VARIANT:
    RM = 'rm'
    RM_PLUS = 'rm+'
    DRM = 'drm'
    PRM_PLUS = 'prm+'


class MinimizerKind(NamedTuple):
    """A regret matching variant. alpha and beta are only used by DRM."""
    variant: str
    alpha: float = math.inf
    beta: float = -math.inf

    @classmethod
    def parse(cls, text: str) -> 'MinimizerKind':
        """
        Parse 'rm', 'rm+', 'prm+', 'drm' or 'drm(<alpha>,<beta>)'. A bare 'drm'
        uses (alpha, beta) = (2, 0).
        """
        text = text.strip().lower().replace(' ', '')
        if text in (VARIANT.RM, VARIANT.RM_PLUS, VARIANT.PRM_PLUS):
            return cls(text)
        if text == VARIANT.DRM:
            return drm()
        if text.startswith('drm(') and text.endswith(')'):
            try:
                alpha, beta = (float(x) for x in text[4:-1].split(','))
            except ValueError:
                raise ValueError(f"Invalid discount parameters in {text!r}.") from None
            return drm(alpha, beta)
        raise ValueError(f"Unknown minimizer {text!r}.")

    def __str__(self) -> str:
        if self.variant == VARIANT.DRM:
            return f"drm({self.alpha:g},{self.beta:g})"
        return self.variant

    @property
    def clips(self) -> bool:
        """Whether cumulative regrets are kept nonnegative."""
        return self.variant in (VARIANT.RM_PLUS, VARIANT.PRM_PLUS)


def rm() -> MinimizerKind:
    return MinimizerKind(VARIANT.RM)


def rm_plus() -> MinimizerKind:
    return MinimizerKind(VARIANT.RM_PLUS)


def prm_plus() -> MinimizerKind:
    return MinimizerKind(VARIANT.PRM_PLUS)


def drm(alpha: float = 2.0, beta: float = 0.0) -> MinimizerKind:
    if alpha < beta:
        raise ValueError(f"DRM needs alpha >= beta, got ({alpha}, {beta}).")
    return MinimizerKind(VARIANT.DRM, float(alpha), float(beta))


@dataclass
class RegretState:
    R: NDArray[np.float64]
    r_prev: NDArray[np.float64] = field(default=None)
    t: int = 0

    def __post_init__(self):
        if self.r_prev is None:
            self.r_prev = np.zeros_like(self.R)

    @classmethod
    def zeros(cls, size: int) -> 'RegretState':
        return cls(np.zeros(size))


def _discount(t: float, exponent: float) -> float:
    if exponent == math.inf:
        return 1.0
    if exponent == -math.inf:
        return 0.0
    p = t ** exponent
    return p / (p + 1.0)


def discount_weights(t: int, kind: MinimizerKind) -> tuple[float, float]:
    """The DRM factors (t^a / (t^a + 1), t^b / (t^b + 1)) at iteration t."""
    return _discount(float(t), kind.alpha), _discount(float(t), kind.beta)


def immediate_regret(loss: NDArray, sigma: NDArray, segments: Segments | None = None) -> NDArray:
    """
    r = <loss, sigma> 1 - loss on every simplex.

    :param loss: The loss of every action.
    :param sigma: The strategy that was played.
    :param segments: Optional infoset layout. Without it the arrays are one simplex.
    :return: The immediate regret, shaped like `loss`.
    """
    if np.shape(loss) != np.shape(sigma):
        raise ValueError(f"Loss shape {np.shape(loss)} does not match strategy shape {np.shape(sigma)}.")
    if segments is None:
        return float(loss @ sigma) - loss
    r = np.zeros_like(loss)
    r[segments.seqs] = segments.spread(segments.inner(loss, sigma)) - loss[segments.seqs]
    return r


def _check_finite(r: NDArray) -> None:
    if not np.all(np.isfinite(r)):
        raise ValueError("Immediate regret contains non-finite values.")


def accumulate(state: RegretState, r: NDArray, kind: MinimizerKind, check: bool = True) -> RegretState:
    """
    Add an immediate regret to the cumulative regret according to the variant.

    :param state: The current cumulative regret.
    :param r: The immediate regret.
    :param kind: The regret matching variant.
    :param check: Reject non-finite regrets.
    :return: A new RegretState with t incremented.
    """
    if check:
        _check_finite(r)
    t = state.t + 1
    total = state.R + r
    if kind.variant == VARIANT.RM:
        R = total
    elif kind.variant == VARIANT.DRM:
        wp, wn = discount_weights(t, kind)
        R = wp * np.maximum(total, 0.0) + wn * np.minimum(total, 0.0)
    else:
        R = np.maximum(total, 0.0)
    r_prev = r.copy() if kind.variant == VARIANT.PRM_PLUS else state.r_prev
    return RegretState(R, r_prev, t)


def _normalize(theta: NDArray, segments: Segments | None) -> NDArray:
    if segments is None:
        total = theta.sum()
        if total > 0:
            return theta / total
        return np.full_like(theta, 1.0 / theta.size)
    sigma = np.ones_like(theta)
    if len(segments) == 0:
        return sigma
    totals = segments.sum(theta)
    per_entry = segments.spread(totals)
    positive = per_entry > 0
    sigma[segments.seqs] = np.where(positive,
                                    theta[segments.seqs] / np.where(positive, per_entry, 1.0),
                                    1.0 / segments.spread(segments.sizes))
    return sigma


def strategy_from_regret(state: RegretState, kind: MinimizerKind, segments: Segments | None = None) -> NDArray:
    """
    Normalize the positive part of the cumulative regret, or of R + r_prev for
    PRM+. A simplex without positive regret plays uniformly.
    """
    R = state.R + state.r_prev if kind.variant == VARIANT.PRM_PLUS else state.R
    return _normalize(np.maximum(R, 0.0), segments)


def omd_oracle_step(state: RegretState, r: NDArray, kind: MinimizerKind, eta: float = 1.0) -> RegretState:
    """
    The mirror descent form of the regret matching update,
    theta <- theta + eta r followed by the variant's projection or reweighting.

    PRM+ shares the RM+ projection.
    """
    if eta <= 0:
        raise ValueError(f"Step size must be positive, not {eta}.")
    t = state.t + 1
    theta = state.R + eta * r
    if kind.variant == VARIANT.RM:
        R = theta
    elif kind.variant == VARIANT.DRM:
        wp, wn = discount_weights(t, kind)
        R = np.where(theta > 0, wp, wn) * theta
    else:
        R = np.maximum(theta, 0.0)
    r_prev = (eta * r).copy() if kind.variant == VARIANT.PRM_PLUS else state.r_prev
    return replace(state, R=R, r_prev=r_prev, t=t)


def selection_time(loss: NDArray, kind: MinimizerKind, max_iterations: int = 1_000_000) -> int | None:
    """
    Run a single decision maker against a fixed loss vector from the uniform
    strategy and return the first iteration after which only the best action
    keeps positive cumulative regret, so the strategy is pure.

    Same updates as `accumulate` and `strategy_from_regret`, done in place on
    one simplex.

    :param loss: The fixed loss of every action.
    :param kind: The regret matching variant.
    :param max_iterations: Give up after this many iterations.
    :return: The iteration count, or None if the best action is never selected.
    """
    loss = np.asarray(loss, dtype=np.float64)
    best = int(np.argmin(loss))
    R = np.zeros_like(loss)
    r = np.empty_like(loss)
    positive = np.empty_like(loss)
    sigma = np.full(loss.size, 1.0 / loss.size)
    for t in range(1, max_iterations + 1):
        np.subtract(loss @ sigma, loss, out=r)
        R += r
        if kind.variant == VARIANT.DRM:
            wp, wn = discount_weights(t, kind)
            np.maximum(R, 0.0, out=positive)
            np.minimum(R, 0.0, out=R)
            R *= wn
            positive *= wp
            R += positive
        elif kind.clips:
            np.maximum(R, 0.0, out=R)
        np.maximum(R, 0.0, out=positive)
        if positive[best] > 0 and np.count_nonzero(positive) == 1:
            return t
        if kind.variant == VARIANT.PRM_PLUS:
            np.add(R, r, out=positive)
            np.maximum(positive, 0.0, out=positive)
        total = positive.sum()
        if total > 0:
            np.divide(positive, total, out=sigma)
        else:
            sigma.fill(1.0 / loss.size)
    return None
