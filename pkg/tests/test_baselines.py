"""Tests for the multiplicative weights baselines."""

from dataclasses import replace

import numpy as np
import pytest

from RegretToolbox.baselines import (BASELINE_STEPS, DILATION, MwuState, dilation_weights, domwu_step, mwu_step,
                                     omwu_step, reg_omwu_step, rnad_step, subtree_heights)
from RegretToolbox.engine import counterfactual_losses
from RegretToolbox.games import matrix_game
from RegretToolbox.metrics import exploitability
from RegretToolbox.treeplex import behavior_to_sequence

MATCHING_PENNIES = [[1, -1], [-1, 1]]


def _losses(t, rng, steps):
    return [rng.normal(size=t.num_sequences) for _ in range(steps)]


def test_constant_loss_shift_changes_nothing(kuhn):
    t = kuhn.treeplex(1)
    state = MwuState.initial(t, eta=0.5)
    loss = np.random.default_rng(0).normal(size=t.num_sequences)
    np.testing.assert_allclose(mwu_step(state, loss).sigma, mwu_step(state, loss + 3.0).sigma, atol=1e-14)


def test_tiny_step_barely_moves(kuhn):
    t = kuhn.treeplex(2)
    state = MwuState.initial(t, eta=1e-9)
    loss = np.random.default_rng(1).normal(size=t.num_sequences)
    np.testing.assert_allclose(omwu_step(state, loss).sigma, state.sigma, atol=1e-8)


def test_first_optimistic_step_uses_current_loss(kuhn):
    t = kuhn.treeplex(1)
    state = MwuState.initial(t, eta=0.3)
    loss = np.random.default_rng(2).normal(size=t.num_sequences)
    np.testing.assert_allclose(omwu_step(state, loss).sigma, mwu_step(state, loss).sigma, atol=1e-15)


def test_optimistic_step_extrapolates():
    g = matrix_game([[0.0, 0.0]])
    state = MwuState.initial(g.treeplex(2), eta=1.0)
    state = omwu_step(state, np.array([0.0, 1.0, 0.0]))
    sigma = omwu_step(state, np.array([0.0, 0.0, 0.0])).sigma
    # Second gradient is 2 * 0 - (1, 0), applied to the first iterate.
    expected = state.sigma[1:] * np.exp([1.0, 0.0])
    np.testing.assert_allclose(sigma[1:], expected / expected.sum())


def test_unregularized_variants_match(kuhn):
    t = kuhn.treeplex(1)
    rng = np.random.default_rng(3)
    plain, reg = MwuState.initial(t, eta=0.2), MwuState.initial(t, eta=0.2, mu_b=0.0)
    mwu, rnad = MwuState.initial(t, eta=0.2), MwuState.initial(t, eta=0.2, mu_b=0.0, T=4)
    for loss in _losses(t, rng, 30):
        plain, reg = omwu_step(plain, loss), reg_omwu_step(reg, loss)
        mwu, rnad = mwu_step(mwu, loss), rnad_step(rnad, loss)
        np.testing.assert_array_equal(plain.sigma, reg.sigma)
        np.testing.assert_array_equal(mwu.sigma, rnad.sigma)


def test_regularizers_vanish_at_their_anchor(kuhn):
    t = kuhn.treeplex(2)
    loss = np.random.default_rng(4).normal(size=t.num_sequences)
    uniform_start = MwuState.initial(t, eta=0.2, mu_b=0.5)
    np.testing.assert_allclose(reg_omwu_step(uniform_start, loss).sigma,
                               omwu_step(uniform_start, loss).sigma, atol=1e-15)
    # The R-NaD reference starts at the current strategy.
    np.testing.assert_allclose(rnad_step(uniform_start, loss).sigma,
                               mwu_step(uniform_start, loss).sigma, atol=1e-15)


def test_rnad_refreshes_reference(kuhn):
    t = kuhn.treeplex(1)
    state = MwuState.initial(t, eta=0.2, mu_b=0.1, T=3)
    rng = np.random.default_rng(5)
    for i, loss in enumerate(_losses(t, rng, 3), start=1):
        state = rnad_step(state, loss)
        assert state.k == i % 3
    np.testing.assert_array_equal(state.reference, state.sigma)


def test_strategies_stay_interior(kuhn):
    rng = np.random.default_rng(6)
    for name, step in BASELINE_STEPS.items():
        t = kuhn.treeplex(1)
        state = MwuState.initial(t, eta=0.5, mu_b=0.01, T=5)
        for loss in _losses(t, rng, 500):
            state = step(state, 5.0 * loss)
        blocks = t.blocks
        assert np.all(state.sigma[blocks.seqs] > 0), name
        np.testing.assert_allclose(blocks.sum(state.sigma), 1.0, atol=1e-12)


def test_entropy_regularization_needs_positive_strategies(kuhn):
    t = kuhn.treeplex(1)
    state = MwuState.initial(t, eta=0.2, mu_b=0.1)
    sigma = state.sigma.copy()
    sigma[t.blocks.seqs[0]], sigma[t.blocks.seqs[1]] = 0.0, 1.0
    with pytest.raises(ValueError):
        rnad_step(replace(state, sigma=sigma), np.zeros(t.num_sequences))


def test_learning_rate_must_be_positive(kuhn):
    with pytest.raises(ValueError):
        MwuState.initial(kuhn.treeplex(1), eta=0.0)


def test_optimistic_matching_pennies_converges():
    g = matrix_game(MATCHING_PENNIES)
    s1 = replace(MwuState.initial(g.treeplex(1), eta=0.1), sigma=np.array([1.0, 0.9, 0.1]))
    s2 = replace(MwuState.initial(g.treeplex(2), eta=0.1), sigma=np.array([1.0, 0.3, 0.7]))
    for _ in range(10_000):
        l1 = counterfactual_losses(g, 1, s2.sigma, s1.sigma)
        l2 = counterfactual_losses(g, 2, s1.sigma, s2.sigma)
        s1, s2 = omwu_step(s1, l1), omwu_step(s2, l2)
    assert exploitability(g, s1.sigma, s2.sigma).epsilon < 1e-3


def test_dilated_update_on_single_infoset_is_omwu():
    g = matrix_game([[0.5, -1.0, 0.2]])
    t = g.treeplex(2)
    a, b = MwuState.initial(t, eta=0.3), MwuState.initial(t, eta=0.3, dilation=DILATION.DEPTH)
    rng = np.random.default_rng(7)
    for loss in _losses(t, rng, 20):
        a, b = omwu_step(a, loss), domwu_step(b, loss)
        np.testing.assert_array_equal(a.sigma, b.sigma)


def test_depth_dilation_on_kuhn(kuhn):
    t = kuhn.treeplex(1)
    beta = dilation_weights(t, DILATION.DEPTH)
    for card in range(3):
        np.testing.assert_array_equal(beta[list(t.infoset((card, '')).sequences)], [2.0, 2.0])
        np.testing.assert_array_equal(beta[list(t.infoset((card, 'pb')).sequences)], [1.0, 1.0])
    assert beta[0] == 1.0
    np.testing.assert_array_equal(dilation_weights(kuhn.treeplex(2), DILATION.DEPTH), 1.0)
    np.testing.assert_array_equal(dilation_weights(t), 1.0)
    assert sorted(subtree_heights(t)) == [0, 0, 0, 1, 1, 1]
    with pytest.raises(ValueError):
        dilation_weights(t, 'width')


def test_depth_dilation_slows_upper_infosets(kuhn):
    t = kuhn.treeplex(1)
    loss = np.random.default_rng(8).normal(size=t.num_sequences)
    flat = domwu_step(MwuState.initial(t, eta=0.4), loss).sigma
    deep = domwu_step(MwuState.initial(t, eta=0.4, dilation=DILATION.DEPTH), loss).sigma
    leaf = list(t.infoset((1, 'pb')).sequences)
    root = list(t.infoset((1, '')).sequences)
    np.testing.assert_allclose(deep[leaf], flat[leaf], atol=1e-15)
    assert np.abs(deep[root] - 0.5).max() < np.abs(flat[root] - 0.5).max()


def test_strategies_are_sequence_form_compatible(kuhn):
    t = kuhn.treeplex(1)
    state = omwu_step(MwuState.initial(t, eta=0.3), np.random.default_rng(9).normal(size=t.num_sequences))
    q = behavior_to_sequence(t, state.sigma)
    assert q[0] == 1.0 and np.all(q >= 0)
