import math

import numpy as np
import pytest

from drhlab.bias import (
    StepSeries,
    char_bias_series,
    crossings,
    densities,
    loglog_ratio,
    sarnak_statistic,
    tau_bias_series,
    weighted_pi,
)
from drhlab.errors import DensityDomainError, GridError
from drhlab.euler import decompose_many
from drhlab.families import delta_family


def test_weighted_pi_counts():
    assert weighted_pi(20, 4, 3, 0) == 4.0
    assert weighted_pi(20, 4, 1, 0) == 3.0


def test_weighted_pi_half_exponent_hand_sum():
    expected = 3**-0.5 + 7**-0.5 + 11**-0.5 + 19**-0.5
    assert weighted_pi(20, 4, 3, 0.5) == pytest.approx(expected, abs=1e-14)


def test_weighted_pi_partition_identity(primes_1e6):
    rng = np.random.default_rng(23)
    for _ in range(100):
        x = int(rng.integers(10, 10**6))
        s = float(rng.uniform(0.0, 2.0))
        lhs = (
            weighted_pi(x, 4, 1, s, table=primes_1e6)
            + weighted_pi(x, 4, 3, s, table=primes_1e6)
            + 2.0**-s
        )
        full = primes_1e6.upto(x).astype(np.float64)
        rhs = float(np.sum(full**-s)) if s else float(len(full))
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_char_series_jumps(primes_1e6):
    for s in (0.0, 0.5):
        series = char_bias_series(10**4, s, table=primes_1e6)
        jumps = np.diff(np.concatenate([[0.0], np.asarray(series.values, float)]))
        for p, j in zip(series.breakpoints.tolist(), jumps.tolist()):
            expected = (1.0 if p % 4 == 3 else -1.0) * p**-s
            assert j == pytest.approx(expected, rel=1e-12)


def test_char_series_race_narrative(primes_1e6):
    series = char_bias_series(30000, 0, table=primes_1e6)
    events = crossings(series)
    strict = [c.x for c in events if not c.zero_touch]
    touches = [c.x for c in events if c.zero_touch]
    assert strict[0] == 26861.0
    assert all(x >= 26861.0 for x in strict)
    assert 26863.0 in touches
    assert series.value_at(26863) == 0
    assert series.value_at(26861) == -1


def test_char_series_no_crossing_below_first_violation(primes_1e6):
    series = char_bias_series(26860, 0, table=primes_1e6)
    assert [c for c in crossings(series) if not c.zero_touch] == []
    assert int(np.min(series.values)) >= 0


def test_tau_series_head_values(tau_1e6, primes_1e6):
    series = tau_bias_series(10**4, tau_1e6, ptable=primes_1e6)
    assert series.value_at(2) == pytest.approx(-0.375, abs=1e-15)
    assert series.value_at(3) == pytest.approx(-0.375 + 252 / 729, abs=1e-14)
    assert series.value_at(4) == series.value_at(3)
    assert series.value_at(5) == pytest.approx(0.279799, abs=1e-6)


def test_tau_series_sign_history_to_1e4(tau_1e6, primes_1e6):
    series = tau_bias_series(10**4, tau_1e6, ptable=primes_1e6)
    events = crossings(series)
    assert events and all(c.x < 10.0 for c in events)
    mask = series.breakpoints >= 5
    assert np.all(series.values[mask] > 0.0)


def test_tau_series_equals_first_decomposition_term(tau_1e6, primes_1e6):
    fam = delta_family(tau_1e6)
    series = tau_bias_series(10**5, tau_1e6, ptable=primes_1e6)
    for d in decompose_many(fam, [10, 10**3, 10**5], table=primes_1e6):
        assert series.value_at(d.x) == pytest.approx(d.I, abs=1e-12)


def test_sarnak_statistic_values(tau_1e6, primes_1e6):
    samples = sarnak_statistic(10**6, [2, 10**3, 10**4, 10**5, 10**6],
                               tau_1e6, ptable=primes_1e6)
    x0, v0 = samples[0]
    assert v0 == pytest.approx(math.log(2) / math.sqrt(2) * (-24 / 2**5.5), rel=1e-12)
    positives = [v for _, v in samples[1:] if v > 0]
    assert len(positives) >= 3  # majority positive on the sampled grid


def test_sarnak_is_lambda_partial_sum(tau_1e6, primes_1e6):
    fam = delta_family(tau_1e6)
    primes = primes_1e6.upto(10**4)
    lam_sum = float(np.sum(fam.lambda_array(primes)))
    (x, v), = sarnak_statistic(10**4, [10**4], tau_1e6, ptable=primes_1e6)
    assert v == pytest.approx(math.log(x) / math.sqrt(x) * lam_sum, rel=1e-12)


def test_densities_constant_series():
    pos = StepSeries(np.array([2.0]), np.array([1.0]), 100.0)
    rep = densities(pos, 100.0)
    assert rep.natural_density == 1.0
    assert rep.log_density == pytest.approx(1.0, abs=1e-15)
    neg = StepSeries(np.array([2.0]), np.array([-1.0]), 100.0)
    rep = densities(neg, 100.0)
    assert rep.natural_density == 0.0 and rep.log_density == 0.0
    assert rep.positive_measure == 0.0


def test_densities_zero_stretch_counts_for_neither():
    breaks = np.array([2.0, 10.0, 20.0])
    series = StepSeries(breaks, np.array([1.0, 0.0, -2.0]), 30.0)
    rep = densities(series, 30.0)
    flipped = densities(StepSeries(breaks, -series.values, 30.0), 30.0)
    assert rep.positive_measure == 8.0
    assert rep.natural_density + flipped.natural_density < 1.0
    assert rep.natural_density == pytest.approx(8.0 / 28.0)
    assert flipped.natural_density == pytest.approx(10.0 / 28.0)


def test_densities_domain_errors():
    series = StepSeries(np.array([2.0]), np.array([1.0]), 100.0)
    with pytest.raises(DensityDomainError):
        densities(series, 1000.0)
    with pytest.raises(DensityDomainError):
        densities(series, 1.0)


def test_crossings_monotone_positive_empty():
    series = StepSeries(np.arange(2.0, 12.0), np.arange(1.0, 11.0), 20.0)
    assert crossings(series) == []


def test_crossings_zero_touch_flagging():
    series = StepSeries(
        np.array([2.0, 3.0, 5.0, 7.0]), np.array([1.0, 0.0, -1.0, 1.0]), 10.0
    )
    events = crossings(series)
    assert [(c.x, c.zero_touch) for c in events] == [
        (3.0, True),
        (5.0, False),
        (7.0, False),
    ]


def test_loglog_ratio_grid_validation(tau_1e6, primes_1e6):
    series = tau_bias_series(10**4, tau_1e6, ptable=primes_1e6)
    with pytest.raises(GridError):
        loglog_ratio(series, 10**4, grid=[10.0, 100.0])
    samples = loglog_ratio(series, 10**4, grid=[16.0, 100.0, 10**4])
    for x, ratio in samples:
        assert ratio == pytest.approx(
            float(series.value_at(x)) / (0.5 * math.log(math.log(x))), rel=1e-15
        )


def test_loglog_ratio_chi4_half_at_1e8(primes_1e8):
    series = char_bias_series(10**8, 0.5, table=primes_1e8)
    (_, ratio), = loglog_ratio(series, 10**8, grid=[10**8])
    assert 0.4 <= ratio <= 1.8
    # the weighted race never dips negative anywhere on [3, 1e8]
    assert float(np.min(series.values)) > 0.0
