"""Gas and pipeline parameter models."""

import math
from typing import Optional

from pydantic import Field, field_validator

from .base import BaseModel


class GasSpec(BaseModel):
    """Aggregated gas parameters.

    Attributes:
        specific_gas_constant: Rs in J/(kg K).
        pseudo_critical_pressure: p_c in Pa.
        pseudo_critical_temperature: T_c in K.
        molar_mass: Optional molar mass in kg/mol, carried through mixing.
    """

    specific_gas_constant: float = Field(..., gt=0)
    pseudo_critical_pressure: float = Field(..., gt=0)
    pseudo_critical_temperature: float = Field(..., gt=0)
    molar_mass: Optional[float] = Field(None, gt=0)


class PipeSpec(BaseModel):
    """Geometry and environment of a single pipeline, SI units throughout."""

    length: float = Field(..., gt=0)
    diameter: float = Field(..., gt=0)
    roughness: float = Field(..., gt=0)
    slope: float = 0.0
    temperature: float = Field(..., gt=0)

    @field_validator("slope")
    @classmethod
    def _check_slope(cls, value: float) -> float:
        if not abs(value) < 1.0:
            raise ValueError("slope must satisfy |h'| < 1")
        return value

    @property
    def cross_section(self) -> float:
        """Cross-sectional area D^2 pi / 4."""
        return self.diameter**2 * math.pi / 4.0
