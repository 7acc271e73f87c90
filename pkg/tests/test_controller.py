"""Tests for the reference and weight schedule of the reward transformation."""

import math

import numpy as np
import pytest

from RegretToolbox.controller import (COUNT_UNIT, PHASE, POLICY, ExploitabilityError, PhaseEvent, SccpController,
                                      halving_schedule_check, sccp_lengths)


def _profile(value=0.5):
    return np.array([1.0, value, 1 - value]), np.array([1.0, 1 - value, value])


def _controller(epsilon_min=0.1, T=5, **kwargs):
    return SccpController.start(_profile(), epsilon_min, T=T, **kwargs)


def _never(_):
    raise AssertionError("exploitability should not be evaluated")


def test_exploit_doubles_weight():
    ctrl = _controller()
    ctrl.advance()
    new = _profile(0.9)
    event = ctrl.tick(1, new, lambda _: 0.04)
    assert event.phase == PHASE.EXPLOIT
    assert (ctrl.w, ctrl.epsilon_min, ctrl.k, ctrl.n) == (2.0, 0.04, 0, 1)
    np.testing.assert_array_equal(ctrl.reference[0], new[0])
    assert event.epsilon_min == 0.1 and event.k == 2


def test_keep_after_interval():
    ctrl = _controller(T=5)
    ctrl.k = 2 * 5 - 1
    event = ctrl.tick(7, _profile(0.6), lambda _: 0.08)
    assert event.phase == PHASE.KEEP
    assert ctrl.w == 1.0 and ctrl.epsilon_min == 0.08


def test_no_keep_before_interval():
    ctrl = _controller(T=5)
    ctrl.k = 4
    assert ctrl.tick(2, _profile(0.6), lambda _: 0.08) is None
    assert ctrl.n == 0 and ctrl.k == 4


def test_explore_after_twice_the_interval():
    ctrl = _controller(T=5)
    ctrl.k = 10
    event = ctrl.tick(5, _profile(0.7), lambda _: 0.2)
    assert event.phase == PHASE.EXPLORE
    assert ctrl.w == 0.5
    # Explore does not lower the bar.
    assert ctrl.epsilon_min == 0.1
    assert event.epsilon == 0.2


def test_reference_is_copied():
    ctrl = _controller()
    profile = _profile(0.9)
    ctrl.tick(1, profile, lambda _: 0.0)
    profile[0][1] = 0.0
    assert ctrl.reference[0][1] == 0.9


def test_checks_every_m_iterations():
    ctrl = _controller(m=3)
    assert ctrl.tick(1, _profile(), _never) is None
    assert ctrl.tick(2, _profile(), _never) is None
    assert ctrl.tick(3, _profile(), lambda _: 0.01).phase == PHASE.EXPLOIT


def test_negative_exploitability_is_rejected():
    ctrl = _controller()
    with pytest.raises(ExploitabilityError):
        ctrl.tick(1, _profile(), lambda _: -1e-6)
    # Rounding noise is tolerated.
    assert ctrl.tick(1, _profile(), lambda _: -1e-12).phase == PHASE.EXPLOIT


def test_count_units():
    updates = _controller()
    iterations = _controller(count_unit=COUNT_UNIT.ITERATION)
    for _ in range(3):
        updates.advance(2)
        iterations.advance(2)
    assert (updates.k, iterations.k) == (6, 3)


def test_fixed_policy_refreshes_every_interval():
    ctrl = _controller(T=3, policy=POLICY.FIXED)
    events = [ctrl.tick(t, _profile(), _never) for t in range(1, 10)]
    refreshes = [e for e in events if e is not None]
    assert [e.t for e in refreshes] == [3, 6, 9]
    assert all(e.phase == PHASE.REFRESH and e.w == 1.0 and math.isnan(e.epsilon) for e in refreshes)
    assert ctrl.n == 3


def test_static_policy_never_moves():
    ctrl = _controller(policy=POLICY.STATIC)
    for t in range(1, 50):
        ctrl.advance()
        assert ctrl.tick(t, _profile(0.9), _never) is None
    assert ctrl.reference[0][1] == 0.5


@pytest.mark.parametrize('kwargs', [{'T': 0}, {'m': 0}, {'policy': 'greedy'}, {'count_unit': 'seconds'}])
def test_invalid_settings(kwargs):
    with pytest.raises(ValueError):
        _controller(**kwargs)


def test_iterations_start_at_one():
    with pytest.raises(ValueError):
        _controller().tick(0, _profile(), _never)


def _event(phase, epsilon, k=2):
    return PhaseEvent(t=1, phase=phase, epsilon=epsilon, epsilon_min=1.0, w=1.0, n=1, k=k)


def test_halving_schedule_check():
    assert halving_schedule_check([])
    assert halving_schedule_check([_event(PHASE.EXPLOIT, 0.3)])
    assert halving_schedule_check([_event(PHASE.EXPLOIT, 0.4), _event(PHASE.EXPLORE, 0.9),
                                   _event(PHASE.KEEP, 0.35), _event(PHASE.EXPLOIT, 0.2)])
    assert not halving_schedule_check([_event(PHASE.EXPLOIT, 0.4), _event(PHASE.EXPLOIT, 0.25)])


def test_sccp_lengths():
    log = [_event(PHASE.EXPLOIT, 0.1, k=4), _event(PHASE.EXPLORE, 0.2, k=10)]
    np.testing.assert_array_equal(sccp_lengths(log), [4, 10])
