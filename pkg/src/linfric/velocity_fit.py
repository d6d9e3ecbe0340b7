"""Fixed-velocity determination and velocity statistics.

Approach A fits one constant velocity per pipe by least squares on the friction drops of a
training period. Approach B reuses the velocity observed a fixed lag (48 h by default) earlier.
The statistics here (distribution, percentile spread, change over horizon) judge how well either
choice can work on a given pipe.
"""

import logging
from typing import Optional, Tuple, Union

import numpy as np

from .exceptions import (
    DegenerateInputError,
    InsufficientSpanError,
    InvalidInputError,
    OutOfRangeError,
)
from .gas_physics import BAR, mean_pressure_stationary, velocity_from_state
from .history import main_direction_share
from .models.gas import GasSpec, PipeSpec
from .models.history import StateHistory
from .models.report import LAG_48H, MIN_VELOCITY, PipeSummary
from .models.velocity import ChangeCurve, VelocityDistribution, VelocitySeries
from .pipe_model import friction_drop_true, linearized_drop_coefficient

logger = logging.getLogger(__name__)

WEEK = 604800


def _usable(history: StateHistory) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        return ~history.gap_mask & (history.p_in > 0) & (history.p_out > 0)


def velocity_series_from_history(
    history: StateHistory, pipe: PipeSpec, gas: GasSpec
) -> VelocitySeries:
    """
    Absolute velocity of every sample, evaluated at its stationary mean pressure.

    Gaps and unusable samples become missing values; they never abort the series.
    """
    usable = _usable(history)
    velocity = np.full(len(history), np.nan)
    if np.any(usable):
        p_mean = mean_pressure_stationary(history.p_in[usable], history.p_out[usable])
        velocity[usable] = np.abs(velocity_from_state(p_mean, history.q[usable], pipe, gas))
    return VelocitySeries(
        pipe_id=history.pipe_id,
        sample_interval=history.sample_interval,
        timestamps=history.timestamps,
        abs_velocity=velocity,
    )


def least_squares_terms(
    history: StateHistory,
    pipe: PipeSpec,
    gas: GasSpec,
    min_velocity: float = 0.0,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Regression data (a_t, b_t) of the approach-A objective sum (a_t - v_c b_t)^2.

    a_t is the true friction drop of sample t and b_t = lambda L / (2 D A) q_t, so that
    a_t = |v_t| b_t. Samples slower than ``min_velocity`` are left out.
    """
    usable = _usable(history)
    if min_velocity > 0:
        series = velocity_series_from_history(history, pipe, gas)
        with np.errstate(invalid="ignore"):
            usable &= series.abs_velocity >= min_velocity
    p_in, p_out, q = history.p_in[usable], history.p_out[usable], history.q[usable]
    if not q.size:
        return np.empty(0), np.empty(0)
    a = np.asarray(friction_drop_true(p_in, p_out, q, pipe, gas))
    b = linearized_drop_coefficient(pipe) * q
    return a, b


def sum_squared_error(v_c: float, a: np.ndarray, b: np.ndarray) -> float:
    """Approach-A objective for a candidate velocity."""
    return float(np.sum((a - v_c * b) ** 2))


def fit_constant_velocity_lsq(
    train: StateHistory,
    pipe: PipeSpec,
    gas: GasSpec,
    min_velocity: float = 0.0,
) -> float:
    """
    Constant velocity minimizing the squared friction-drop error over ``train``.

    The objective is quadratic in v_c, so the minimizer over v_c >= 0 is
    max(0, sum(a b) / sum(b^2)).

    Raises:
        DegenerateInputError: If every usable flow is zero.
    """
    a, b = least_squares_terms(train, pipe, gas, min_velocity=min_velocity)
    denominator = float(np.dot(b, b))
    if denominator == 0.0:
        raise DegenerateInputError(
            f"cannot fit a velocity for {train.pipe_id!r}: no sample with nonzero flow"
        )
    v_c = max(0.0, float(np.dot(a, b)) / denominator)
    logger.info("fitted v_c=%.6f m/s for %s on %d samples", v_c, train.pipe_id, a.size)
    return v_c


def weighted_mean_velocity(
    history: StateHistory,
    pipe: PipeSpec,
    gas: GasSpec,
    min_velocity: float = 0.0,
) -> float:
    """q^2-weighted mean of |v|; equals the least-squares velocity by construction."""
    series = velocity_series_from_history(history, pipe, gas)
    velocity = series.abs_velocity
    with np.errstate(invalid="ignore"):
        keep = ~np.isnan(velocity) & (velocity >= min_velocity)
    weights = history.q[keep] ** 2
    total = float(np.sum(weights))
    if total == 0.0:
        raise DegenerateInputError("weighted mean velocity is undefined without flow")
    return float(np.dot(weights, velocity[keep])) / total


def _lag_rows(series: VelocitySeries, timestamps: np.ndarray, lag: int) -> np.ndarray:
    if lag < 0:
        raise InvalidInputError("lag must be nonnegative")
    if not len(series):
        raise OutOfRangeError("cannot look up a lagged velocity in an empty series")
    targets = np.asarray(timestamps, dtype=np.int64) - lag
    offsets = targets - series.timestamps[0]
    if np.any(offsets < 0):
        first = int(targets[offsets < 0][0])
        raise OutOfRangeError(
            f"lagged time {first} precedes the start {int(series.timestamps[0])} of "
            f"series {series.pipe_id!r}; the series needs {lag} s of history before the test range"
        )
    if np.any(offsets % series.sample_interval):
        raise InvalidInputError("lagged times are not on the series grid")
    rows = offsets // series.sample_interval
    if np.any(rows >= len(series)):
        raise OutOfRangeError("lagged time lies after the end of the series")
    return rows


def lagged_velocity(series: VelocitySeries, t: int, lag: int = LAG_48H) -> Optional[float]:
    """
    Absolute velocity observed ``lag`` seconds before ``t``, or None if that sample is missing.

    Raises:
        OutOfRangeError: If t - lag lies outside the series.
    """
    row = int(_lag_rows(series, np.array([t]), lag)[0])
    value = float(series.abs_velocity[row])
    return None if np.isnan(value) else value


def lagged_velocities(
    series: VelocitySeries, timestamps: np.ndarray, lag: int = LAG_48H
) -> np.ndarray:
    """Vectorized ``lagged_velocity``; missing values are NaN."""
    return series.abs_velocity[_lag_rows(series, timestamps, lag)]


def velocity_cdf(series: Union[VelocitySeries, np.ndarray]) -> VelocityDistribution:
    """
    Sorted absolute velocities of a series, ignoring missing values.

    Raises:
        DegenerateInputError: If the series has no value.
    """
    if isinstance(series, VelocitySeries):
        values = series.present_values()
    else:
        values = np.asarray(series, dtype=np.float64)
        values = values[~np.isnan(values)]
    if not values.size:
        raise DegenerateInputError("velocity distribution of an empty series")
    return VelocityDistribution(values=values)


def percentile_spread_relative_error(
    series: Union[VelocitySeries, VelocityDistribution],
    lo: float = 10.0,
    hi: float = 90.0,
) -> float:
    """
    Half the spread between two percentiles relative to the mean velocity.

    Raises:
        DegenerateInputError: If the mean velocity is zero.
    """
    distribution = series if isinstance(series, VelocityDistribution) else velocity_cdf(series)
    mean = distribution.mean
    if mean == 0.0:
        raise DegenerateInputError("relative spread is undefined for a zero mean velocity")
    return (distribution.percentile(hi) - distribution.percentile(lo)) / 2.0 / mean


def implied_spread(ratio: float, mean: float) -> float:
    """Percentile spread that yields ``ratio`` for the given mean."""
    return 2.0 * ratio * mean


def velocity_change_curve(
    series: VelocitySeries,
    max_horizon: int = WEEK,
    min_velocity: float = MIN_VELOCITY,
    horizon_step: Optional[int] = None,
) -> ChangeCurve:
    """
    Mean absolute and relative velocity change as a function of the horizon.

    A start time t contributes to horizon tau when v(t) >= ``min_velocity`` and both v(t) and
    v(t + tau) are present. The relative change |v(t + tau) - v(t)| / v(t) additionally needs
    v(t) > 0. Horizons are the first sample interval and every multiple of ``horizon_step``
    (default: the sample interval) up to ``max_horizon``.

    Raises:
        InsufficientSpanError: If the series spans less than ``max_horizon``.
        InvalidInputError: If the step is not a multiple of the sample interval.
    """
    interval = series.sample_interval
    step = interval if horizon_step is None else horizon_step
    if step <= 0 or step % interval:
        raise InvalidInputError(f"horizon step must be a positive multiple of {interval} s")
    if max_horizon < interval:
        raise InvalidInputError("max horizon must cover at least one sample interval")
    if series.span < max_horizon:
        raise InsufficientSpanError(
            f"series {series.pipe_id!r} spans {series.span} s, "
            f"shorter than the {max_horizon} s horizon"
        )

    horizons = sorted({interval, *range(step, max_horizon + 1, step)})
    velocity = series.abs_velocity
    present = ~np.isnan(velocity)
    with np.errstate(invalid="ignore", divide="ignore"):
        starts_ok = present & (velocity >= min_velocity)
        positive = starts_ok & (velocity > 0)
        inverse = np.where(positive, 1.0 / velocity, 0.0)

    abs_change, rel_change, counts = [], [], []
    for horizon in horizons:
        shift = horizon // interval
        head, tail = velocity[:-shift], velocity[shift:]
        valid = starts_ok[:-shift] & present[shift:]
        n_valid = int(np.count_nonzero(valid))
        diff = np.abs(tail - head)
        if n_valid:
            abs_change.append(float(np.sum(diff, where=valid)) / n_valid)
        else:
            abs_change.append(0.0)
        rel_valid = positive[:-shift] & present[shift:]
        n_rel = int(np.count_nonzero(rel_valid))
        if n_rel:
            rel_change.append(float(np.sum(diff * inverse[:-shift], where=rel_valid)) / n_rel)
        else:
            rel_change.append(0.0)
        counts.append(n_valid)
    logger.debug("change curve for %s over %d horizons", series.pipe_id, len(horizons))
    return ChangeCurve(
        horizons=horizons,
        mean_abs_change=abs_change,
        mean_rel_change=rel_change,
        pair_counts=counts,
    )


def summarize_history(
    history: StateHistory,
    pipe: PipeSpec,
    gas: GasSpec,
    min_velocity: float = MIN_VELOCITY,
) -> PipeSummary:
    """Pipe property statistics: mean pressure, mean |v|, flow direction and low-flow share."""
    usable = _usable(history)
    if not np.any(usable):
        raise DegenerateInputError(f"history {history.pipe_id!r} has no usable sample")
    p_mean = mean_pressure_stationary(history.p_in[usable], history.p_out[usable])
    distribution = velocity_cdf(velocity_series_from_history(history, pipe, gas))
    return PipeSummary(
        pipe_id=history.pipe_id,
        n_samples=len(history),
        n_gaps=history.n_gaps,
        avg_pressure_bar=float(np.mean(p_mean)) / BAR,
        avg_abs_velocity=distribution.mean,
        main_direction_share=main_direction_share(history),
        fraction_below_min_velocity=distribution.fraction_below(min_velocity),
    )
