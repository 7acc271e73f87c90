"""
Multiplicative weights baselines: MWU, OMWU, Reg-OMWU and R-NaD.

The updates are comparison-grade implementations of the named algorithms.
They act on every infoset of a treeplex at once; a matrix game is the case of
one infoset per player. On extensive-form games the losses are the engine's
counterfactual losses, which gives the dilated variants (DOMWU, Reg-DOMWU)
with per-infoset step size eta / beta_I.
"""

from dataclasses import dataclass, field, replace
import logging

import numpy as np
from numpy.typing import NDArray

from .treeplex import BehaviorStrategy, Segments, Treeplex, uniform_strategy

logger = logging.getLogger(__name__)


class DILATION:
    ALL_ONES = 'all-ones'
    DEPTH = 'depth'
    ALL = (ALL_ONES, DEPTH)


def subtree_heights(t: Treeplex) -> NDArray[np.int64]:
    """Number of own decision levels below each infoset (0 for leaves), by position."""
    positions = {node.id: pos for pos, node in enumerate(t.infosets)}
    height = np.zeros(t.num_infosets, dtype=np.int64)
    for pos, node in enumerate(t.infosets):  # Children come first.
        below = [height[positions[c]] + 1 for children in node.children for c in children]
        height[pos] = max(below, default=0)
    return height


def dilation_weights(t: Treeplex, scheme: str = DILATION.ALL_ONES) -> NDArray[np.float64]:
    """
    The dilation weight beta_I of every infoset broadcast onto its sequences
    (1 on the empty sequence).

    'all-ones' sets beta_I = 1 everywhere, 'depth' sets beta_I = 1 + the height
    of the subtree below I.
    """
    beta = np.ones(t.num_sequences)
    if scheme == DILATION.ALL_ONES:
        return beta
    elif scheme == DILATION.DEPTH:
        blocks = t.blocks
        beta[blocks.seqs] = blocks.spread(1.0 + subtree_heights(t)[blocks.infosets])
        return beta
    raise ValueError(f"Unknown dilation scheme {scheme!r}, expected one of {DILATION.ALL}.")


@dataclass
class MwuState:
    """
    State of a multiplicative weights learner over every infoset of one player.

    `reference`, `T` and `k` are only used by R-NaD.
    """
    sigma: BehaviorStrategy
    layout: Segments
    eta: float
    mu_b: float = 0.0
    loss_prev: NDArray[np.float64] | None = None
    reference: BehaviorStrategy | None = None
    T: int = 0
    k: int = 0
    dilation: NDArray[np.float64] | None = None

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"Learning rate must be positive, not {self.eta}.")
        if self.dilation is None:
            self.dilation = np.ones_like(self.sigma)
        if self.reference is None:
            self.reference = self.sigma.copy()

    @classmethod
    def initial(cls, t: Treeplex, eta: float, mu_b: float = 0.0, T: int = 0,
                dilation: str = DILATION.ALL_ONES) -> 'MwuState':
        return cls(sigma=uniform_strategy(t), layout=t.blocks, eta=eta, mu_b=mu_b, T=T,
                   dilation=dilation_weights(t, dilation))


def _multiplicative_update(state: MwuState, g: NDArray) -> BehaviorStrategy:
    """sigma'(I) proportional to sigma(I) exp(-eta_I g(I)), normalized with a max shift."""
    layout = state.layout
    sigma = state.sigma.copy()
    if len(layout) == 0:
        return sigma
    seqs = layout.seqs
    logits = np.log(state.sigma[seqs]) - (state.eta / state.dilation[seqs]) * g[seqs]
    logits -= layout.spread(np.maximum.reduceat(logits, layout.offsets))
    weights = np.exp(logits)
    totals = np.add.reduceat(weights, layout.offsets)
    sigma[seqs] = weights / layout.spread(totals)
    return sigma


def mwu_step(state: MwuState, loss: NDArray) -> MwuState:
    """sigma' proportional to sigma * exp(-eta * loss)."""
    return replace(state, sigma=_multiplicative_update(state, loss), loss_prev=np.array(loss, copy=True))


def omwu_step(state: MwuState, loss: NDArray) -> MwuState:
    """
    sigma' proportional to sigma * exp(-eta * (2 loss - loss_prev)). The first
    step has no previous loss and uses loss itself.
    """
    prev = loss if state.loss_prev is None else state.loss_prev
    return replace(state, sigma=_multiplicative_update(state, 2.0 * loss - prev),
                   loss_prev=np.array(loss, copy=True))


def _log_ratio(state: MwuState, anchor: NDArray) -> NDArray:
    out = np.zeros_like(state.sigma)
    seqs = state.layout.seqs
    if np.any(state.sigma[seqs] <= 0) or np.any(anchor[seqs] <= 0):
        raise ValueError("Entropy regularization needs strictly positive strategies.")
    out[seqs] = np.log(state.sigma[seqs]) - np.log(anchor[seqs])
    return out


def reg_omwu_step(state: MwuState, loss_raw: NDArray) -> MwuState:
    """OMWU on loss_raw + mu_b (log sigma - log uniform)."""
    if state.mu_b == 0:
        return omwu_step(state, loss_raw)
    uniform = np.ones_like(state.sigma)
    uniform[state.layout.seqs] = 1.0 / state.layout.spread(state.layout.sizes)
    return omwu_step(state, loss_raw + state.mu_b * _log_ratio(state, uniform))


def rnad_step(state: MwuState, loss_raw: NDArray) -> MwuState:
    """
    MWU on loss_raw + mu_b (log sigma - log reference). The reference is replaced
    by the current strategy every T player updates.
    """
    if state.mu_b == 0:
        new = mwu_step(state, loss_raw)
    else:
        new = mwu_step(state, loss_raw + state.mu_b * _log_ratio(state, state.reference))
    k = new.k + 1
    if new.T > 0 and k >= new.T:
        return replace(new, reference=new.sigma.copy(), k=0)
    return replace(new, k=k)


def domwu_step(state: MwuState, counterfactual_loss: NDArray) -> MwuState:
    """Dilated OMWU: the per-infoset optimistic update on counterfactual losses."""
    return omwu_step(state, counterfactual_loss)


BASELINE_STEPS = {
    'mwu': mwu_step,
    'omwu': omwu_step,
    'reg-omwu': reg_omwu_step,
    'rnad': rnad_step,
    'domwu': domwu_step,
    'reg-domwu': reg_omwu_step,
}
