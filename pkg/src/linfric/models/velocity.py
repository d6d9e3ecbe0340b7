"""Models for velocity series and their statistics."""

from typing import List, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..exceptions import DataError, InvalidInputError
from .base import BaseModel


def _frozen(values: object, dtype: type) -> np.ndarray:
    array = np.array(values, dtype=dtype).reshape(-1)
    array.setflags(write=False)
    return array


class VelocitySeries(BaseModel):
    """Absolute velocities in m/s on a regular time grid; NaN marks a missing value."""

    pipe_id: str = ""
    sample_interval: int = Field(..., gt=0)
    timestamps: np.ndarray
    abs_velocity: np.ndarray

    @field_validator("timestamps", mode="before")
    @classmethod
    def _as_int_array(cls, value: object) -> np.ndarray:
        return _frozen(value, np.int64)

    @field_validator("abs_velocity", mode="before")
    @classmethod
    def _as_float_array(cls, value: object) -> np.ndarray:
        return _frozen(value, np.float64)

    @model_validator(mode="after")
    def _check(self) -> "VelocitySeries":
        if self.timestamps.size != self.abs_velocity.size:
            raise ValueError("timestamps and abs_velocity must have equal length")
        if self.timestamps.size > 1 and np.any(np.diff(self.timestamps) != self.sample_interval):
            raise DataError("velocity series must be sampled on a regular grid")
        if np.any(self.abs_velocity[~np.isnan(self.abs_velocity)] < 0):
            raise ValueError("absolute velocities must be nonnegative")
        return self

    def __len__(self) -> int:
        return int(self.timestamps.size)

    @property
    def missing_mask(self) -> np.ndarray:
        return np.isnan(self.abs_velocity)

    @property
    def span(self) -> int:
        if not len(self):
            return 0
        return int(self.timestamps[-1] - self.timestamps[0])

    def present_values(self) -> np.ndarray:
        return self.abs_velocity[~self.missing_mask]


class VelocityDistribution(BaseModel):
    """Sorted absolute velocities with percentile lookup."""

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _sorted(cls, value: object) -> np.ndarray:
        return _frozen(np.sort(np.asarray(value, dtype=np.float64)), np.float64)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    def percentile(self, alpha: float) -> float:
        """Percentile by linear interpolation between closest ranks."""
        if not 0.0 <= alpha <= 100.0:
            raise InvalidInputError(f"percentile must lie in [0, 100], got {alpha}")
        return float(np.percentile(self.values, alpha, method="linear"))

    def fraction_below(self, threshold: float) -> float:
        """Share of values strictly below ``threshold``."""
        return float(np.count_nonzero(self.values < threshold)) / len(self)

    def cumulative_table(self) -> List[Tuple[float, float]]:
        """Distinct values with the fraction of values less than or equal to each."""
        distinct, counts = np.unique(self.values, return_counts=True)
        cumulative = np.cumsum(counts) / len(self)
        return [(float(v), float(c)) for v, c in zip(distinct, cumulative)]


class ChangeCurve(BaseModel):
    """Mean velocity change as a function of the time horizon."""

    horizons: np.ndarray
    mean_abs_change: np.ndarray
    mean_rel_change: np.ndarray
    pair_counts: np.ndarray

    @field_validator("horizons", "pair_counts", mode="before")
    @classmethod
    def _as_int_array(cls, value: object) -> np.ndarray:
        return _frozen(value, np.int64)

    @field_validator("mean_abs_change", "mean_rel_change", mode="before")
    @classmethod
    def _as_float_array(cls, value: object) -> np.ndarray:
        return _frozen(value, np.float64)

    @model_validator(mode="after")
    def _check(self) -> "ChangeCurve":
        n = self.horizons.size
        sizes = {self.mean_abs_change.size, self.mean_rel_change.size, self.pair_counts.size}
        if sizes != {n}:
            raise ValueError("curve columns must have equal length")
        if n > 1 and np.any(np.diff(self.horizons) <= 0):
            raise ValueError("horizons must be strictly increasing")
        return self

    def at(self, horizon: int) -> Tuple[float, float]:
        """(absolute, relative) change at an exact horizon in seconds."""
        index = np.flatnonzero(self.horizons == horizon)
        if not index.size:
            raise InvalidInputError(f"horizon {horizon} s is not on the curve")
        i = int(index[0])
        return float(self.mean_abs_change[i]), float(self.mean_rel_change[i])
