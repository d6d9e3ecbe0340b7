"""Train/test evaluation of fixed-velocity friction and report rendering.

The error of a sample is |fL_true - fL_lin| over the whole pipe. Reports aggregate the mean and
maximum error and the mean and maximum true friction drop; the ratio columns are quotients of
those aggregates, so the two maxima may come from different samples.
"""

import json
import logging
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .exceptions import DegenerateInputError, InvalidInputError, RangeError
from .gas_physics import BAR, YEAR, mean_pressure_stationary, velocity_from_state
from .models.gas import GasSpec, PipeSpec
from .models.history import StateHistory
from .models.report import (
    Approach,
    ConstantVelocity,
    ErrorReport,
    LaggedVelocity,
    OracleVelocity,
    ReportFormat,
    SplitSpec,
    VelocitySource,
)
from .pipe_model import friction_drop_linearized, friction_drop_true
from .velocity_fit import lagged_velocities

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "pipe",
    "approach",
    "v_c_mps",
    "avg_err_bar",
    "max_err_bar",
    "avg_fl_bar",
    "max_fl_bar",
    "ratio_avg",
    "ratio_max",
    "n_samples",
    "n_skipped",
]
_THOUSANDTH = Decimal("0.001")


def train_test_split(history: StateHistory, split: SplitSpec) -> Tuple[StateHistory, StateHistory]:
    """
    Chronological split into half-open train and test ranges.

    Raises:
        RangeError: If either part holds no sample.
    """
    train = history.slice_time(split.train_start, split.train_end)
    test = history.slice_time(split.test_start, split.test_end)
    for name, part in (("train", train), ("test", test)):
        if len(part) == part.n_gaps:
            raise RangeError(f"{name} range of {history.pipe_id!r} contains no sample")
    return train, test


def default_split(history: StateHistory, train_duration: int = YEAR) -> SplitSpec:
    """First ``train_duration`` seconds for training, the remainder for testing."""
    if history.start is None or history.end is None:
        raise RangeError(f"history {history.pipe_id!r} is empty")
    boundary = history.start + train_duration
    end = history.end + history.sample_interval
    if boundary >= end:
        raise RangeError(
            f"history {history.pipe_id!r} spans {history.span} s, "
            f"not more than the {train_duration} s training period"
        )
    return SplitSpec(
        train_start=history.start, train_end=boundary, test_start=boundary, test_end=end
    )


def evaluate_fixed_velocity(
    test: StateHistory,
    source: VelocitySource,
    pipe: PipeSpec,
    gas: GasSpec,
) -> ErrorReport:
    """
    Compare the linearized friction drop with the true one on every usable test sample.

    Gaps are skipped. For a lagged source, samples whose lagged velocity is missing or below the
    source's ``min_velocity`` are skipped as well; all skips are counted in ``n_skipped``.

    Raises:
        DegenerateInputError: If no test sample is usable.
        OutOfRangeError: If a lagged source does not reach back far enough.
    """
    present = ~test.gap_mask
    p_in, p_out, q = test.p_in[present], test.p_out[present], test.q[present]
    skipped = len(test) - int(present.sum())

    v_c: Optional[float] = None
    if isinstance(source, ConstantVelocity):
        approach = Approach.CONSTANT
        v_c = source.v_c
        velocity = np.full(q.size, source.v_c)
    elif isinstance(source, LaggedVelocity):
        approach = Approach.LAGGED
        velocity = lagged_velocities(source.series, test.timestamps[present], source.lag)
        with np.errstate(invalid="ignore"):
            keep = ~np.isnan(velocity) & (velocity >= source.min_velocity)
        skipped += int(np.count_nonzero(~keep))
        p_in, p_out, q, velocity = p_in[keep], p_out[keep], q[keep], velocity[keep]
    elif isinstance(source, OracleVelocity):
        approach = Approach.ORACLE
        velocity = np.empty(0)
        if q.size:
            p_mean = mean_pressure_stationary(p_in, p_out)
            velocity = np.abs(np.asarray(velocity_from_state(p_mean, q, pipe, gas)))
    else:
        raise InvalidInputError(f"unsupported velocity source {source!r}")

    if not q.size:
        raise DegenerateInputError(f"no usable test sample for {test.pipe_id!r}")

    true_drop = np.asarray(friction_drop_true(p_in, p_out, q, pipe, gas))
    errors = np.abs(true_drop - np.asarray(friction_drop_linearized(q, velocity, pipe)))
    abs_drop = np.abs(true_drop)
    max_err = float(np.max(errors))
    max_abs = float(np.max(abs_drop))
    report = ErrorReport.from_values(
        pipe_id=test.pipe_id,
        approach=approach,
        v_c=v_c,
        avg_err=min(float(np.mean(errors)), max_err),
        max_err=max_err,
        avg_abs_fl=min(float(np.mean(abs_drop)), max_abs),
        max_abs_fl=max_abs,
        n_samples=int(q.size),
        n_skipped=skipped,
        sum_squared_error=float(np.sum(errors**2)),
    )
    logger.info(
        "%s approach %s: avg err %.4f bar over %d samples (%d skipped)",
        test.pipe_id,
        report.approach,
        report.avg_err / BAR,
        report.n_samples,
        report.n_skipped,
    )
    return report


def fixed_decimal(value: float, places: Decimal = _THOUSANDTH) -> str:
    """Fixed-point text of ``value`` rounded half-even; non-finite values keep their name."""
    if not np.isfinite(value):
        return str(value)
    return str(Decimal(repr(float(value))).quantize(places, rounding=ROUND_HALF_EVEN))


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fixed_decimal(value)
    return str(value)


def _json_cell(value: Any) -> Any:
    if isinstance(value, float) and np.isfinite(value):
        return float(fixed_decimal(value))
    return value


def render_table(
    rows: Sequence[Mapping[str, Any]],
    columns: Sequence[str],
    fmt: Union[ReportFormat, str] = ReportFormat.TEXT,
) -> str:
    """
    Render rows as a text table, CSV or JSON; floats get 3 decimals, half-even.

    Raises:
        InvalidInputError: If ``rows`` is empty.
    """
    if not rows:
        raise InvalidInputError("nothing to render: no rows")
    fmt = ReportFormat(fmt)
    if fmt is ReportFormat.JSON:
        records = [{column: _json_cell(row[column]) for column in columns} for row in rows]
        return json.dumps(records, indent=2) + "\n"
    frame = pd.DataFrame(
        [[_cell(row[column]) for column in columns] for row in rows], columns=list(columns)
    )
    if fmt is ReportFormat.CSV:
        text: str = frame.to_csv(index=False, lineterminator="\n")
        return text
    return frame.replace("", "-").to_string(index=False) + "\n"


def report_rows(reports: Sequence[ErrorReport]) -> List[Dict[str, Any]]:
    """Report values in display units: bar for pressures, m/s for velocities."""
    return [
        {
            "pipe": report.pipe_id,
            "approach": str(Approach(report.approach).value),
            "v_c_mps": report.v_c,
            "avg_err_bar": report.avg_err / BAR,
            "max_err_bar": report.max_err / BAR,
            "avg_fl_bar": report.avg_abs_fl / BAR,
            "max_fl_bar": report.max_abs_fl / BAR,
            "ratio_avg": report.ratio_avg,
            "ratio_max": report.ratio_max,
            "n_samples": report.n_samples,
            "n_skipped": report.n_skipped,
        }
        for report in reports
    ]


def render_report(
    reports: Sequence[ErrorReport], fmt: Union[ReportFormat, str] = ReportFormat.TEXT
) -> str:
    """
    Serialize reports with stable column names.

    Raises:
        InvalidInputError: If ``reports`` is empty.
    """
    if not reports:
        raise InvalidInputError("nothing to render: no reports")
    return render_table(report_rows(reports), REPORT_COLUMNS, fmt)
