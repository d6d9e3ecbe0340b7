"""Unit tests for fixed-velocity fitting and velocity statistics."""

from typing import Callable, List

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from linfric.exceptions import (
    DegenerateInputError,
    InsufficientSpanError,
    InvalidInputError,
    OutOfRangeError,
)
from linfric.gas_physics import BAR, DAY, velocity_from_state
from linfric.models.gas import GasSpec, PipeSpec
from linfric.models.history import StateHistory, SyntheticProfile
from linfric.models.velocity import VelocityDistribution, VelocitySeries
from linfric.synthetic import generate_synthetic_history
from linfric.velocity_fit import (
    fit_constant_velocity_lsq,
    implied_spread,
    lagged_velocities,
    lagged_velocity,
    least_squares_terms,
    percentile_spread_relative_error,
    sum_squared_error,
    summarize_history,
    velocity_cdf,
    velocity_change_curve,
    velocity_series_from_history,
    weighted_mean_velocity,
)

pytestmark = pytest.mark.unit


HistoryFactory = Callable[..., StateHistory]


def make_series(values: List[float], interval: int = 180, start: int = 0) -> VelocitySeries:
    return VelocitySeries(
        sample_interval=interval,
        timestamps=start + interval * np.arange(len(values)),
        abs_velocity=values,
    )


class TestVelocitySeriesFromHistory:
    """Test cases for velocity_series_from_history."""

    def test_zero_flow_gives_zero_series(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that zero flow yields zero velocities."""
        history = make_history([60 * BAR] * 4, [59 * BAR] * 4, [0.0] * 4)
        series = velocity_series_from_history(history, pipe, gas)
        np.testing.assert_array_equal(series.abs_velocity, np.zeros(4))

    def test_matches_scalar_evaluation(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test one sample against velocity_from_state at the mean pressure."""
        history = make_history([60 * BAR], [50 * BAR], [-120.0])
        p_mean = 2.0 / 3.0 * (110 - 3000 / 110) * BAR
        expected = abs(velocity_from_state(p_mean, -120.0, pipe, gas))

        series = velocity_series_from_history(history, pipe, gas)
        assert series.abs_velocity[0] == pytest.approx(expected, rel=1e-12)

    def test_constant_state_gives_constant_series(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that repeated states give repeated velocities."""
        history = make_history([60 * BAR] * 5, [59 * BAR] * 5, [150.0] * 5)
        series = velocity_series_from_history(history, pipe, gas)
        assert np.all(series.abs_velocity == series.abs_velocity[0])

    def test_gaps_become_missing(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that a gap yields NaN without aborting the series."""
        history = make_history(
            [60 * BAR, np.nan, 60 * BAR], [59 * BAR, np.nan, 59 * BAR], [150.0, np.nan, 150.0]
        )
        series = velocity_series_from_history(history, pipe, gas)

        assert series.missing_mask.tolist() == [False, True, False]
        assert len(series.present_values()) == 2


class TestFitConstantVelocity:
    """Test cases for fit_constant_velocity_lsq and its helpers."""

    def test_constant_velocity_history(
        self, constant_history: StateHistory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that |v| fixed at 5 m/s is recovered."""
        assert fit_constant_velocity_lsq(constant_history, pipe, gas) == pytest.approx(
            5.0, abs=1e-9
        )

    def test_two_sample_weighted_mean(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test (|v|, q) = (2, q1) and (4, 2 q1) giving 18 / 5."""
        per_flow = velocity_from_state(50 * BAR, 1.0, pipe, gas)
        q1 = 2.0 / per_flow
        history = make_history([50 * BAR] * 2, [50 * BAR] * 2, [q1, 2.0 * q1])

        assert fit_constant_velocity_lsq(history, pipe, gas) == pytest.approx(3.6, rel=1e-12)

    def test_matches_weighted_mean_identity(
        self, reversing_history: StateHistory, short_pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test the closed form against the q^2-weighted mean of |v|."""
        fitted = fit_constant_velocity_lsq(reversing_history, short_pipe, gas)
        weighted = weighted_mean_velocity(reversing_history, short_pipe, gas)
        assert fitted == pytest.approx(weighted, rel=1e-10)

    def test_matches_bounded_search_on_random_histories(
        self, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test the closed form against a bounded scalar search over [0, 50] m/s."""
        rng = np.random.default_rng(99)
        for seed in range(100):
            profile = SyntheticProfile(
                base_pressure=float(rng.uniform(20, 80)) * BAR,
                base_abs_velocity=float(rng.uniform(0.5, 10)),
                daily_amplitude=float(rng.uniform(0, 0.8)),
                noise_std=float(rng.uniform(0, 0.3)),
                reversal_probability=float(rng.uniform(0, 0.5)),
                duration=DAY,
                seed=seed,
            )
            history = generate_synthetic_history(profile, pipe, gas)
            a, b = least_squares_terms(history, pipe, gas)

            fitted = fit_constant_velocity_lsq(history, pipe, gas)
            oracle = minimize_scalar(
                lambda v: sum_squared_error(v, a, b),
                bounds=(0.0, 50.0),
                method="bounded",
                options={"xatol": 1e-10},
            )
            assert fitted == pytest.approx(oracle.x, rel=1e-6)
            assert fitted == pytest.approx(weighted_mean_velocity(history, pipe, gas), rel=1e-10)
            grid = np.linspace(0.0, 50.0, 501)
            best = min(sum_squared_error(v, a, b) for v in grid)
            assert sum_squared_error(fitted, a, b) <= best * (1 + 1e-12)

    def test_above_plain_mean_for_daily_cycle(
        self, sinusoid_history: StateHistory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that weighting by q^2 lifts v_c above the plain mean |v|."""
        fitted = fit_constant_velocity_lsq(sinusoid_history, pipe, gas)
        series = velocity_series_from_history(sinusoid_history, pipe, gas)
        plain = float(np.mean(series.abs_velocity))
        assert fitted > plain

    def test_regressors_satisfy_exactness(
        self, sinusoid_history: StateHistory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test a_t = |v_t| b_t."""
        a, b = least_squares_terms(sinusoid_history, pipe, gas)
        velocity = velocity_series_from_history(sinusoid_history, pipe, gas).abs_velocity
        np.testing.assert_allclose(a, velocity * b, rtol=1e-12)

    def test_low_flow_threshold_drops_samples(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that samples slower than the threshold are left out of the fit."""
        per_flow = velocity_from_state(50 * BAR, 1.0, pipe, gas)
        flows = [0.01 / per_flow, 3.0 / per_flow]
        history = make_history([50 * BAR] * 2, [50 * BAR] * 2, flows)

        a, _ = least_squares_terms(history, pipe, gas, min_velocity=0.02)
        assert a.size == 1
        fitted = fit_constant_velocity_lsq(history, pipe, gas, min_velocity=0.02)
        assert fitted == pytest.approx(3.0, rel=1e-12)

    def test_zero_flow_is_degenerate(
        self, make_history: HistoryFactory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that a history without flow cannot be fitted."""
        history = make_history([60 * BAR] * 3, [60 * BAR] * 3, [0.0] * 3)
        with pytest.raises(DegenerateInputError):
            fit_constant_velocity_lsq(history, pipe, gas)


class TestLaggedVelocity:
    """Test cases for lagged_velocity and lagged_velocities."""

    def test_constant_series(self) -> None:
        """Test that a constant series returns its value."""
        series = make_series([2.5] * 2000)
        assert lagged_velocity(series, 1999 * 180) == 2.5

    def test_zero_lag_returns_current_value(self) -> None:
        """Test that lag 0 reads the sample itself."""
        series = make_series([1.0, 2.0, 3.0])
        assert lagged_velocity(series, 360, lag=0) == 3.0

    def test_step_change(self) -> None:
        """Test that the pre-step level is seen for 48 hours after the step."""
        steps_per_lag = 172800 // 180
        series = make_series([1.0] * 1000 + [4.0] * 2000)
        step_time = 1000 * 180

        for t in (step_time, step_time + 172800 - 180):
            assert lagged_velocity(series, t) == 1.0
        assert lagged_velocity(series, step_time + 172800) == 4.0
        looked_up = lagged_velocities(series, np.array([step_time + 180 * steps_per_lag]))
        assert looked_up.tolist() == [4.0]

    def test_missing_sample_returns_none(self) -> None:
        """Test that a gap at t - lag yields None."""
        series = make_series([1.0, np.nan, 3.0])
        assert lagged_velocity(series, 360, lag=180) is None

    def test_before_series_start_raises_error(self) -> None:
        """Test that t - lag before the first sample is out of range."""
        series = make_series([1.0] * 10)
        with pytest.raises(OutOfRangeError):
            lagged_velocity(series, 900)

    def test_off_grid_time_raises_error(self) -> None:
        """Test that lookups between samples are rejected."""
        series = make_series([1.0] * 10)
        with pytest.raises(InvalidInputError):
            lagged_velocity(series, 250, lag=0)


class TestVelocityDistribution:
    """Test cases for velocity_cdf and percentile statistics."""

    def test_median(self) -> None:
        """Test the median of 1..5."""
        assert velocity_cdf(np.array([5.0, 3.0, 1.0, 4.0, 2.0])).percentile(50) == 3.0

    def test_extreme_percentiles(self) -> None:
        """Test that percentiles 0 and 100 are the extremes."""
        distribution = velocity_cdf(make_series([0.5, 2.0, 7.5, 1.0]))
        assert distribution.percentile(0) == 0.5
        assert distribution.percentile(100) == 7.5

    def test_percentile_is_monotone(self) -> None:
        """Test that percentiles never decrease with alpha."""
        values = np.random.default_rng(1).gamma(2.0, 2.0, 500)
        distribution = velocity_cdf(values)
        percentiles = [distribution.percentile(alpha) for alpha in np.linspace(0, 100, 101)]
        assert np.all(np.diff(percentiles) >= 0)

    def test_missing_values_ignored(self) -> None:
        """Test that NaN entries are left out of the distribution."""
        assert len(velocity_cdf(make_series([1.0, np.nan, 2.0]))) == 2

    def test_empty_series_raises_error(self) -> None:
        """Test that a series without values has no distribution."""
        with pytest.raises(DegenerateInputError):
            velocity_cdf(make_series([np.nan, np.nan]))

    def test_cumulative_table(self) -> None:
        """Test distinct values with cumulative fractions."""
        table = velocity_cdf(np.array([1.0, 2.0, 2.0, 4.0])).cumulative_table()
        assert table == [(1.0, 0.25), (2.0, 0.75), (4.0, 1.0)]

    def test_fraction_below(self) -> None:
        """Test the share of values under a threshold."""
        distribution = velocity_cdf(np.array([0.0, 0.01, 0.5, 3.0]))
        assert distribution.fraction_below(0.02) == 0.5

    def test_percentile_out_of_range(self) -> None:
        """Test that alpha outside [0, 100] is rejected."""
        distribution = velocity_cdf(np.array([1.0, 2.0]))
        with pytest.raises(InvalidInputError):
            distribution.percentile(101)


class TestPercentileSpread:
    """Test cases for percentile_spread_relative_error and implied_spread."""

    def test_pipe_a_arithmetic(self) -> None:
        """Test spread 3.10 m/s around a mean of 4.290 m/s."""
        low, high = 4.290 - 3.875 / 2, 4.290 + 3.875 / 2
        distribution = VelocityDistribution(values=np.linspace(low, high, 1001))

        ratio = percentile_spread_relative_error(distribution)
        assert distribution.percentile(90) - distribution.percentile(10) == pytest.approx(3.10)
        assert ratio == pytest.approx(3.10 / 2 / 4.290, rel=1e-9)
        assert ratio * 100 == pytest.approx(36.0, abs=0.5)

    def test_implied_spreads(self) -> None:
        """Test the spreads implied by 44 % at 3.445 m/s and 54 % at 2.610 m/s."""
        assert implied_spread(0.44, 3.445) == pytest.approx(3.03, abs=0.005)
        assert implied_spread(0.54, 2.610) == pytest.approx(2.82, abs=0.005)

    def test_inverse_round_trip(self) -> None:
        """Test that the implied spread reproduces the ratio."""
        distribution = velocity_cdf(np.random.default_rng(3).uniform(0.5, 6.0, 999))
        ratio = percentile_spread_relative_error(distribution)
        spread = distribution.percentile(90) - distribution.percentile(10)
        assert implied_spread(ratio, distribution.mean) == pytest.approx(spread, rel=1e-12)

    def test_constant_series(self) -> None:
        """Test that a constant series has no spread."""
        assert percentile_spread_relative_error(make_series([3.0] * 50)) == 0.0

    def test_zero_mean_raises_error(self) -> None:
        """Test that a zero mean is degenerate."""
        with pytest.raises(DegenerateInputError):
            percentile_spread_relative_error(make_series([0.0] * 5))


class TestVelocityChangeCurve:
    """Test cases for velocity_change_curve."""

    def test_constant_series(self) -> None:
        """Test that a constant series never changes."""
        series = make_series([3.0] * (8 * 480))
        curve = velocity_change_curve(series, horizon_step=3600)

        assert curve.horizons[0] == 180
        assert curve.horizons[-1] == 604800
        assert np.all(curve.mean_abs_change == 0.0)
        assert np.all(curve.mean_rel_change == 0.0)

    def test_daily_minima(self) -> None:
        """Test local minima at one and two days for a daily cycle."""
        t = 180 * np.arange(10 * 480)
        series = make_series((3.0 + np.sin(2 * np.pi * t / DAY)).tolist())
        curve = velocity_change_curve(series, horizon_step=3600)

        for day in (DAY, 2 * DAY):
            at_day = curve.at(day)[0]
            assert at_day < curve.at(day - 3600)[0]
            assert at_day < curve.at(day + 3600)[0]
            assert at_day == pytest.approx(0.0, abs=1e-9)

    def test_step_series_enumeration(self) -> None:
        """Test the absolute curve of a single step against direct enumeration."""
        values = [1.0] * 300 + [2.5] * 300
        series = make_series(values)
        curve = velocity_change_curve(series, max_horizon=180 * 200)

        for shift in (1, 17, 200):
            pairs = [abs(values[i + shift] - values[i]) for i in range(len(values) - shift)]
            expected = sum(pairs) / len(pairs)
            assert curve.at(180 * shift)[0] == pytest.approx(expected, rel=1e-12)
            assert expected == pytest.approx(1.5 * shift / (600 - shift))

    def test_time_reversal_invariance(self) -> None:
        """Test that the absolute curve is symmetric in time."""
        values = np.random.default_rng(8).uniform(0.5, 5.0, 400)
        forward = velocity_change_curve(make_series(values.tolist()), max_horizon=180 * 100)
        backward = velocity_change_curve(make_series(values[::-1].tolist()), max_horizon=180 * 100)
        np.testing.assert_allclose(forward.mean_abs_change, backward.mean_abs_change, rtol=1e-12)

    def test_low_velocity_starts_ignored(self) -> None:
        """Test that starts below the threshold do not contribute."""
        series = make_series([0.01, 1.0, 1.0])
        curve = velocity_change_curve(series, max_horizon=180)

        assert curve.pair_counts.tolist() == [1]
        assert curve.at(180) == (0.0, 0.0)

    def test_insufficient_span(self) -> None:
        """Test that a series shorter than the horizon is rejected."""
        with pytest.raises(InsufficientSpanError):
            velocity_change_curve(make_series([1.0] * 100))


class TestSummarizeHistory:
    """Test cases for summarize_history."""

    def test_constant_history(
        self, constant_history: StateHistory, pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test the property table of a constant 5 m/s history."""
        summary = summarize_history(constant_history, pipe, gas)

        assert summary.pipe_id == "const"
        assert summary.n_samples == 4 * 480
        assert summary.n_gaps == 0
        assert summary.avg_pressure_bar == pytest.approx(60.0, rel=1e-9)
        assert summary.avg_abs_velocity == pytest.approx(5.0, rel=1e-9)
        assert summary.main_direction_share == 1.0
        assert summary.fraction_below_min_velocity == 0.0

    def test_reversing_history(
        self, reversing_history: StateHistory, short_pipe: PipeSpec, gas: GasSpec
    ) -> None:
        """Test that reversals lower the main-direction share."""
        summary = summarize_history(reversing_history, short_pipe, gas)
        assert 0.0 < summary.main_direction_share < 1.0
