"""Models for train/test evaluation and reporting."""

import math
from enum import Enum
from typing import Annotated, Literal, Optional, Union

from pydantic import Field, model_validator

from .base import BaseModel
from .gas import GasSpec, PipeSpec
from .velocity import ChangeCurve, VelocityDistribution, VelocitySeries

LAG_48H = 172800
MIN_VELOCITY = 0.02


class Approach(str, Enum):
    """How the fixed velocity of a report was chosen."""

    CONSTANT = "A"
    LAGGED = "B"
    ORACLE = "oracle"


class SplitSpec(BaseModel):
    """Half-open chronological train and test ranges in epoch seconds."""

    train_start: int
    train_end: int
    test_start: int
    test_end: int

    @model_validator(mode="after")
    def _check_order(self) -> "SplitSpec":
        if self.train_start >= self.train_end or self.test_start >= self.test_end:
            raise ValueError("split ranges must be nonempty [start, end) intervals")
        if self.train_end > self.test_start:
            raise ValueError("train range must precede and not overlap the test range")
        return self


class FitRecord(BaseModel):
    """A stored constant velocity with the settings it was fitted under."""

    pipe_id: str
    v_c: float = Field(..., ge=0)
    seed: int
    split: SplitSpec
    pipe: PipeSpec
    gas: GasSpec
    fit_min_velocity: float = Field(0.0, ge=0)

    def same_settings(self, other: "FitRecord") -> bool:
        """Whether both records were fitted from the same data and settings."""
        return self.model_dump(exclude={"v_c"}) == other.model_dump(exclude={"v_c"})


class ConstantVelocity(BaseModel):
    """Use one velocity for every test sample."""

    kind: Literal["constant"] = "constant"
    v_c: float = Field(..., ge=0)


class LaggedVelocity(BaseModel):
    """Use the velocity observed ``lag`` seconds before each test sample."""

    kind: Literal["lagged"] = "lagged"
    series: VelocitySeries
    lag: int = Field(LAG_48H, ge=0)
    min_velocity: float = Field(MIN_VELOCITY, ge=0)


class OracleVelocity(BaseModel):
    """Use each test sample's own absolute velocity; the linearization is then exact."""

    kind: Literal["oracle"] = "oracle"


VelocitySource = Annotated[
    Union[ConstantVelocity, LaggedVelocity, OracleVelocity], Field(discriminator="kind")
]


def _quotient(numerator: float, denominator: float) -> float:
    if denominator == 0.0:
        return 0.0 if numerator == 0.0 else math.inf
    return numerator / denominator


class ErrorReport(BaseModel):
    """Error of the linearized friction drop against the true one, pressures in Pa."""

    pipe_id: str
    approach: Approach
    v_c: Optional[float] = None
    avg_err: float = Field(..., ge=0)
    max_err: float = Field(..., ge=0)
    avg_abs_fl: float = Field(..., ge=0)
    max_abs_fl: float = Field(..., ge=0)
    ratio_avg: float
    ratio_max: float
    sum_squared_error: float = Field(0.0, ge=0)
    n_samples: int = Field(..., ge=0)
    n_skipped: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_consistency(self) -> "ErrorReport":
        if self.avg_err > self.max_err or self.avg_abs_fl > self.max_abs_fl:
            raise ValueError("averages cannot exceed maxima")
        return self

    @classmethod
    def from_values(
        cls,
        pipe_id: str,
        approach: Approach,
        avg_err: float,
        max_err: float,
        avg_abs_fl: float,
        max_abs_fl: float,
        n_samples: int,
        n_skipped: int = 0,
        v_c: Optional[float] = None,
        sum_squared_error: float = 0.0,
    ) -> "ErrorReport":
        """Build a report from aggregates; ratios are quotients of the aggregates."""
        return cls(
            pipe_id=pipe_id,
            approach=approach,
            v_c=v_c,
            avg_err=avg_err,
            max_err=max_err,
            avg_abs_fl=avg_abs_fl,
            max_abs_fl=max_abs_fl,
            ratio_avg=_quotient(avg_err, avg_abs_fl),
            ratio_max=_quotient(max_err, max_abs_fl),
            sum_squared_error=sum_squared_error,
            n_samples=n_samples,
            n_skipped=n_skipped,
        )


class PipeSummary(BaseModel):
    """Per-pipe statistics of a history, in the units of the pipe property table."""

    pipe_id: str
    n_samples: int
    n_gaps: int
    avg_pressure_bar: float
    avg_abs_velocity: float
    main_direction_share: float
    fraction_below_min_velocity: float


class ReportFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"
    JSON = "json"


class PipeAnalysis(BaseModel):
    """Velocity statistics of one pipe over its full history."""

    pipe_id: str
    summary: PipeSummary
    distribution: VelocityDistribution
    curve: ChangeCurve
    p10: float
    p90: float
    spread_ratio: float
