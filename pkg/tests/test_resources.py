import numpy as np
import pytest

from purisim.resources import (
    interpolate_to_fidelity,
    interpolate_to_resources,
    lep_round_update,
    new_ledger,
    relative_gain,
    tcp_round_update,
)
from purisim.strategies import TraceRound


class FakeTrace:
    def __init__(self, points):
        self.rounds = [
            TraceRound(i, "x", f, 1.0, r) for i, (f, r) in enumerate(points)
        ]


def test_tcp_update_first_round():
    ledger = tcp_round_update(new_ledger(7.0), 0.58)
    assert ledger.current == pytest.approx(2 * 7 / 0.58, abs=1e-12)


def test_tcp_update_pure_doubling():
    ledger = new_ledger(7.0)
    ledger = tcp_round_update(tcp_round_update(ledger, 1.0), 1.0)
    assert ledger.current == 28.0


def test_tcp_update_product_form():
    ledger = new_ledger(11.0)
    for p in (0.5, 0.8, 1.0):
        ledger = tcp_round_update(ledger, p)
    assert ledger.current == pytest.approx(220.0, abs=1e-12)


def test_tcp_update_rejects_zero_probability():
    with pytest.raises(ValueError):
        tcp_round_update(new_ledger(7.0), 0.0)


def test_lep_update_first_round():
    ledger = lep_round_update(new_ledger(7.0), 1, 1.0, 0.58)
    assert ledger.current == pytest.approx(8 / 0.58, abs=1e-12)


def test_lep_update_certain_success():
    ledger = lep_round_update(new_ledger(20.0), 3, 1.0, 1.0)
    assert ledger.current == 23.0


def test_lep_update_with_prepurification_multiplier():
    mult = 2.0 / 0.58
    ledger = lep_round_update(new_ledger(7.0), 1, mult, 0.58)
    # expectation expanded by hand: (7 + 1 * (2/0.58)) / 0.58
    assert ledger.current == pytest.approx((7 + mult) / 0.58, abs=1e-12)
    assert ledger.current == pytest.approx(18.014268727705114, abs=1e-9)


def test_lep_update_validation():
    with pytest.raises(ValueError):
        lep_round_update(new_ledger(7.0), 0, 1.0, 0.5)
    with pytest.raises(ValueError):
        lep_round_update(new_ledger(7.0), 1, 0.5, 0.5)
    with pytest.raises(ValueError):
        lep_round_update(new_ledger(7.0), 1, 1.0, 0.0)


def test_recurrence_equals_closed_form_random():
    rng = np.random.default_rng(19)
    for _ in range(200):
        probs = rng.uniform(0.05, 1.0, size=int(rng.integers(1, 9)))
        ledger = new_ledger(7.0)
        for p in probs:
            ledger = tcp_round_update(ledger, float(p))
        closed = 7.0 * np.prod(2.0 / probs)
        assert ledger.current == pytest.approx(closed, rel=1e-12)


def test_ledger_history_and_mixed_closed_form():
    rng = np.random.default_rng(29)
    for _ in range(100):
        ledger = new_ledger(10.0)
        expected = 10.0
        for _ in range(int(rng.integers(1, 7))):
            if rng.random() < 0.5:
                p = float(rng.uniform(0.2, 1.0))
                ledger = tcp_round_update(ledger, p)
                expected = 2 * expected / p
            else:
                m = int(rng.integers(1, 4))
                mult = float(rng.uniform(1.0, 5.0))
                p = float(rng.uniform(0.2, 1.0))
                ledger = lep_round_update(ledger, m, mult, p)
                expected = (expected + m * mult) / p
        assert ledger.current == pytest.approx(expected, rel=1e-12)
        assert ledger.current >= ledger.base


def test_interpolate_fidelity_midpoint():
    trace = FakeTrace([(0.88, 100.0), (0.92, 200.0)])
    res = interpolate_to_fidelity(trace, 0.90)
    assert res.status == "interpolated"
    assert res.p == pytest.approx(0.5)
    assert res.value == pytest.approx(150.0)


def test_interpolate_fidelity_same():
    trace = FakeTrace([(0.95, 7.0), (0.99, 50.0)])
    res = interpolate_to_fidelity(trace, 0.90)
    assert res.status == "same"
    assert res.value == 7.0


def test_interpolate_fidelity_unreachable():
    trace = FakeTrace([(0.5, 7.0), (0.85, 100.0)])
    assert interpolate_to_fidelity(trace, 0.90).status == "unreachable"


def test_interpolate_fidelity_exact_hits():
    # target exactly on a round: bracketed against the previous round with the
    # whole weight on the exact hit
    trace = FakeTrace([(0.8, 7.0), (0.9, 50.0), (0.95, 100.0)])
    res = interpolate_to_fidelity(trace, 0.9)
    assert res.bracket == (0, 1)
    assert res.p == pytest.approx(0.0)
    assert res.value == pytest.approx(50.0)
    # a trace already starting at the target is "same", taking precedence over
    # any later (possibly degenerate) bracket
    flat = FakeTrace([(0.9, 7.0), (0.9, 50.0)])
    assert interpolate_to_fidelity(flat, 0.9).status == "same"


def test_interpolate_fidelity_uses_first_bracket():
    # De-purifying tails must not steal the bracket from the earliest crossing.
    trace = FakeTrace([(0.5, 7.0), (0.95, 100.0), (0.7, 200.0), (0.96, 400.0)])
    res = interpolate_to_fidelity(trace, 0.9)
    assert res.bracket == (0, 1)


def test_interpolate_resources_midpoint():
    trace = FakeTrace([(0.6, 800.0), (0.8, 1200.0)])
    res = interpolate_to_resources(trace, 1000.0)
    assert res.p == pytest.approx(0.5)
    assert res.value == pytest.approx(0.7)


def test_interpolate_resources_capped():
    trace = FakeTrace([(0.6, 7.0), (1.0, 500.0)])
    res = interpolate_to_resources(trace, 10000.0)
    assert res.status == "capped"
    assert res.value == 1.0


def test_interpolate_resources_below_preparation_cost():
    trace = FakeTrace([(0.6, 7.0)])
    with pytest.raises(ValueError):
        interpolate_to_resources(trace, 3.0)


def test_interpolation_round_trip():
    rng = np.random.default_rng(37)
    for _ in range(300):
        count = int(rng.integers(2, 9))
        fids = np.sort(rng.uniform(0.2, 0.999, size=count))
        res = np.sort(rng.uniform(5, 1e6, size=count))
        trace = FakeTrace(list(zip(fids, res)))
        target = float(rng.uniform(fids[0] + 1e-9, fids[-1] - 1e-9))
        tf = interpolate_to_fidelity(trace, target)
        assert tf.status == "interpolated"
        assert 0.0 <= tf.p <= 1.0
        back = interpolate_to_resources(trace, tf.value)
        assert back.value == pytest.approx(target, abs=1e-10)


def test_relative_gain():
    assert relative_gain(0.8, 0.9) == pytest.approx(12.5)
    assert relative_gain(0.37, 0.37) == 0.0
    with pytest.raises(ValueError):
        relative_gain(0.0, 0.5)
