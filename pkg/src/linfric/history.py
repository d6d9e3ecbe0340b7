"""Reading, writing and gap handling of pipeline state histories.

CSV layout (UTF-8, comma separated, header required)::

    timestamp_utc,p_in_bar,p_out_bar,q_kg_per_s
    2015-01-01T00:00:00Z,56.00,55.40,144.98

Rows are strictly ascending on a regular grid; missing slots are simply absent and become gaps.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from .exceptions import (
    DataError,
    DegenerateInputError,
    MonotonicityError,
    ParseError,
    SchemaError,
)
from .gas_physics import BAR
from .models.history import DEFAULT_SAMPLE_INTERVAL, FillPolicy, StateHistory
from .utils.files import PathLike, atomic_write_text

logger = logging.getLogger(__name__)

COLUMNS = ["timestamp_utc", "p_in_bar", "p_out_bar", "q_kg_per_s"]
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"
FLOAT_FORMAT = "%.10f"
_EPOCH = pd.Timestamp(0, tz="UTC")


def _first_line(mask: np.ndarray) -> int:
    # header is line 1
    return int(np.flatnonzero(mask)[0]) + 2


def load_history_csv(
    path: PathLike,
    pipe_id: str,
    sample_interval: int = DEFAULT_SAMPLE_INTERVAL,
) -> StateHistory:
    """
    Load a state history, converting bar to Pa and inserting gaps for missing slots.

    Rows with nonpositive pressures are kept as gaps and logged.

    Raises:
        DataError: If the file does not exist.
        SchemaError: If the header lacks a required column.
        ParseError: If a value cannot be parsed or a timestamp is off the sampling grid.
        MonotonicityError: If timestamps are not strictly ascending.
    """
    source = Path(path)
    if not source.is_file():
        raise DataError(f"history file not found: {source}")
    try:
        frame = pd.read_csv(source, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise SchemaError(f"{source}: missing header line") from e
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise ParseError(f"{source}: {e}") from e

    missing = [column for column in COLUMNS if column not in frame.columns]
    if missing:
        raise SchemaError(f"{source}: missing columns {', '.join(missing)}")
    if frame.empty:
        return StateHistory.empty(pipe_id, sample_interval)

    stamps = pd.to_datetime(frame["timestamp_utc"], utc=True, format="ISO8601", errors="coerce")
    if stamps.isna().any():
        raise ParseError("invalid timestamp", line=_first_line(stamps.isna().to_numpy()))
    seconds = ((stamps - _EPOCH) // pd.Timedelta(seconds=1)).to_numpy(dtype=np.int64)

    values = {}
    for column in COLUMNS[1:]:
        parsed = pd.to_numeric(frame[column], errors="coerce")
        bad = ~np.isfinite(parsed.to_numpy(dtype=np.float64))
        if bad.any():
            raise ParseError(f"invalid number in {column}", line=_first_line(bad))
        values[column] = parsed.to_numpy(dtype=np.float64)

    steps = np.diff(seconds)
    if np.any(steps <= 0):
        line = _first_line(steps <= 0) + 1
        raise MonotonicityError("timestamps not strictly ascending", line=line)
    offsets = seconds - seconds[0]
    off_grid = offsets % sample_interval != 0
    if off_grid.any():
        raise ParseError(f"timestamp off the {sample_interval} s grid", line=_first_line(off_grid))

    rows = offsets // sample_interval
    size = int(rows[-1]) + 1
    p_in = np.full(size, np.nan)
    p_out = np.full(size, np.nan)
    q = np.full(size, np.nan)
    p_in[rows] = values["p_in_bar"] * BAR
    p_out[rows] = values["p_out_bar"] * BAR
    q[rows] = values["q_kg_per_s"]

    invalid = (p_in <= 0) | (p_out <= 0)
    if invalid.any():
        logger.warning(
            "%s: %d rows with nonpositive pressure treated as gaps", source, int(invalid.sum())
        )
        p_in[invalid] = p_out[invalid] = q[invalid] = np.nan

    history = StateHistory(
        pipe_id=pipe_id,
        sample_interval=sample_interval,
        timestamps=seconds[0] + np.arange(size, dtype=np.int64) * sample_interval,
        p_in=p_in,
        p_out=p_out,
        q=q,
    )
    logger.info("loaded %s: %d rows, %d gaps", source, len(history), history.n_gaps)
    return history


def history_to_csv(history: StateHistory) -> str:
    """Serialize the non-gap rows of a history in the CSV layout."""
    present = ~history.gap_mask
    stamps = pd.to_datetime(history.timestamps[present], unit="s", utc=True)
    frame = pd.DataFrame(
        {
            "timestamp_utc": stamps.strftime(TIMESTAMP_FORMAT),
            "p_in_bar": history.p_in[present] / BAR,
            "p_out_bar": history.p_out[present] / BAR,
            "q_kg_per_s": history.q[present],
        },
        columns=COLUMNS,
    )
    text: str = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return text


def write_history_csv(history: StateHistory, path: PathLike) -> Path:
    """Write a history atomically; gaps are omitted rows."""
    return atomic_write_text(path, history_to_csv(history))


def resample_and_fill(
    history: StateHistory, policy: Union[FillPolicy, str] = FillPolicy.SKIP
) -> StateHistory:
    """
    Apply a gap policy: keep gaps explicit (skip) or repeat the previous sample (hold-last).

    Leading gaps stay gaps under hold-last since nothing precedes them.
    """
    policy = FillPolicy(policy)
    p_in, p_out, q = history.p_in, history.p_out, history.q
    if policy is FillPolicy.HOLD_LAST and history.n_gaps:
        frame = pd.DataFrame({"p_in": p_in, "p_out": p_out, "q": q})
        gaps = history.gap_mask
        frame.loc[gaps, :] = np.nan
        filled = frame.ffill()
        p_in = filled["p_in"].to_numpy()
        p_out = filled["p_out"].to_numpy()
        q = filled["q"].to_numpy()
        logger.debug("held %d gap rows of %s", int(gaps.sum()), history.pipe_id)
    return StateHistory(
        pipe_id=history.pipe_id,
        sample_interval=history.sample_interval,
        timestamps=history.timestamps,
        p_in=p_in,
        p_out=p_out,
        q=q,
        fill_policy=policy,
    )


def main_direction_share(history: StateHistory) -> float:
    """Fraction of non-gap samples flowing in the main (q >= 0) direction."""
    q = history.q[~history.gap_mask]
    if not q.size:
        raise DegenerateInputError(f"history {history.pipe_id!r} has no samples")
    return float(np.count_nonzero(q >= 0)) / q.size
