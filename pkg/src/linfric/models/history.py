"""Models for pipeline state histories."""

from enum import Enum
from typing import Iterator, List, Optional, Sequence

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..exceptions import DataError, MonotonicityError
from .base import BaseModel

DEFAULT_SAMPLE_INTERVAL = 180
# 2015-01-01T00:00:00Z
DEFAULT_START = 1420070400


class FillPolicy(str, Enum):
    """How gaps are treated by ``resample_and_fill``."""

    SKIP = "skip"
    HOLD_LAST = "hold-last"


class StateSample(BaseModel):
    """One measured pipe state; pressures in Pa, signed mass flow in kg/s."""

    timestamp: int
    p_in: float = Field(..., gt=0, allow_inf_nan=False)
    p_out: float = Field(..., gt=0, allow_inf_nan=False)
    q: float = Field(..., allow_inf_nan=False)


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


class StateHistory(BaseModel):
    """Regularly sampled state history of one pipe, stored column-wise.

    Row ``i`` belongs to ``timestamps[i] = start + i * sample_interval``. A row whose pressures
    or flow are NaN is a gap.
    """

    pipe_id: str
    sample_interval: int = Field(DEFAULT_SAMPLE_INTERVAL, gt=0)
    timestamps: np.ndarray
    p_in: np.ndarray
    p_out: np.ndarray
    q: np.ndarray
    fill_policy: Optional[FillPolicy] = None

    @field_validator("timestamps", mode="before")
    @classmethod
    def _as_int_array(cls, value: object) -> np.ndarray:
        return _frozen(np.array(value, dtype=np.int64).reshape(-1))

    @field_validator("p_in", "p_out", "q", mode="before")
    @classmethod
    def _as_float_array(cls, value: object) -> np.ndarray:
        return _frozen(np.array(value, dtype=np.float64).reshape(-1))

    @model_validator(mode="after")
    def _check_grid(self) -> "StateHistory":
        n = self.timestamps.size
        if not (self.p_in.size == self.p_out.size == self.q.size == n):
            raise ValueError("timestamps, p_in, p_out and q must have equal length")
        if n > 1:
            steps = np.diff(self.timestamps)
            bad = np.flatnonzero(steps <= 0)
            if bad.size:
                raise MonotonicityError(
                    f"timestamps not strictly ascending at row {int(bad[0]) + 1}"
                )
            if np.any(steps != self.sample_interval):
                raise DataError(
                    f"history {self.pipe_id!r} is not sampled every {self.sample_interval} s"
                )
        present = ~self.gap_mask
        if np.any(self.p_in[present] <= 0) or np.any(self.p_out[present] <= 0):
            raise ValueError("pressures of non-gap samples must be positive")
        if np.any(np.isinf(self.p_in) | np.isinf(self.p_out) | np.isinf(self.q)):
            raise ValueError("state values must be finite or NaN (gap)")
        return self

    @classmethod
    def empty(cls, pipe_id: str, sample_interval: int = DEFAULT_SAMPLE_INTERVAL) -> "StateHistory":
        """History without samples."""
        return cls(
            pipe_id=pipe_id,
            sample_interval=sample_interval,
            timestamps=[],
            p_in=[],
            p_out=[],
            q=[],
        )

    @classmethod
    def from_samples(
        cls,
        pipe_id: str,
        samples: Sequence[StateSample],
        sample_interval: int = DEFAULT_SAMPLE_INTERVAL,
    ) -> "StateHistory":
        """Build a history from samples, inserting gaps for missing slots."""
        if not samples:
            return cls.empty(pipe_id, sample_interval)
        stamps = np.array([s.timestamp for s in samples], dtype=np.int64)
        if np.any(np.diff(stamps) <= 0):
            raise MonotonicityError("samples must be sorted strictly ascending by timestamp")
        offsets = stamps - stamps[0]
        if np.any(offsets % sample_interval):
            raise DataError(f"sample timestamps are not on a {sample_interval} s grid")
        rows = offsets // sample_interval
        size = int(rows[-1]) + 1
        columns = {name: np.full(size, np.nan) for name in ("p_in", "p_out", "q")}
        for row, sample in zip(rows, samples):
            columns["p_in"][row] = sample.p_in
            columns["p_out"][row] = sample.p_out
            columns["q"][row] = sample.q
        return cls(
            pipe_id=pipe_id,
            sample_interval=sample_interval,
            timestamps=stamps[0] + np.arange(size, dtype=np.int64) * sample_interval,
            **columns,
        )

    def __len__(self) -> int:
        return int(self.timestamps.size)

    @property
    def gap_mask(self) -> np.ndarray:
        """Boolean mask, True where the row is a gap."""
        return np.isnan(self.p_in) | np.isnan(self.p_out) | np.isnan(self.q)

    @property
    def n_gaps(self) -> int:
        return int(np.count_nonzero(self.gap_mask))

    @property
    def start(self) -> Optional[int]:
        return int(self.timestamps[0]) if len(self) else None

    @property
    def end(self) -> Optional[int]:
        return int(self.timestamps[-1]) if len(self) else None

    @property
    def span(self) -> int:
        """Seconds between the first and the last row."""
        if not len(self):
            return 0
        return int(self.timestamps[-1] - self.timestamps[0])

    def sample(self, index: int) -> Optional[StateSample]:
        """Return row ``index`` as a sample, or None for a gap."""
        if self.gap_mask[index]:
            return None
        return StateSample(
            timestamp=int(self.timestamps[index]),
            p_in=float(self.p_in[index]),
            p_out=float(self.p_out[index]),
            q=float(self.q[index]),
        )

    def samples(self) -> Iterator[Optional[StateSample]]:
        """Iterate rows in time order; gaps yield None."""
        for index in range(len(self)):
            yield self.sample(index)

    def present_samples(self) -> List[StateSample]:
        return [sample for sample in self.samples() if sample is not None]

    def slice_time(self, start: int, end: int) -> "StateHistory":
        """Rows with ``start <= timestamp < end``."""
        keep = (self.timestamps >= start) & (self.timestamps < end)
        return self.take(keep)

    def take(self, mask: np.ndarray) -> "StateHistory":
        """Rows selected by a contiguous boolean mask."""
        index = np.flatnonzero(mask)
        if index.size and index[-1] - index[0] + 1 != index.size:
            raise DataError("row selection must be contiguous")
        rows = slice(int(index[0]), int(index[-1]) + 1) if index.size else slice(0, 0)
        return type(self)(
            pipe_id=self.pipe_id,
            sample_interval=self.sample_interval,
            timestamps=self.timestamps[rows],
            p_in=self.p_in[rows],
            p_out=self.p_out[rows],
            q=self.q[rows],
            fill_policy=self.fill_policy,
        )


class SyntheticProfile(BaseModel):
    """Parameters of a generated velocity history.

    Fractions are relative to ``base_abs_velocity``; probabilities are per day.
    ``return_probability`` is the chance of switching back to the main direction while flowing
    in reverse and defaults to ``reversal_probability``.
    """

    base_pressure: float = Field(..., gt=0)
    base_abs_velocity: float = Field(..., ge=0)
    daily_amplitude: float = Field(0.0, ge=0, le=1)
    noise_std: float = Field(0.0, ge=0, le=1)
    reversal_probability: float = Field(0.0, ge=0, le=1)
    return_probability: Optional[float] = Field(None, ge=0, le=1)
    drift: float = Field(0.0, ge=0, le=1)
    duration: int = Field(..., gt=0)
    seed: int = Field(0, ge=0, lt=2**64)
    start: int = DEFAULT_START
    sample_interval: int = Field(DEFAULT_SAMPLE_INTERVAL, gt=0)
