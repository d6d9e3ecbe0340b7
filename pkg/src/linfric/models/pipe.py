"""Models for the per-pipe flow equations."""

from typing import Annotated, Literal, Union

from pydantic import Field

from .base import BaseModel


class TrueNonlinear(BaseModel):
    """Friction evaluated with the actual velocity of the state."""

    kind: Literal["true_nonlinear"] = "true_nonlinear"


class FixedVelocity(BaseModel):
    """Friction evaluated with the absolute velocity fixed to ``v_c``."""

    kind: Literal["fixed_velocity"] = "fixed_velocity"
    v_c: float = Field(..., ge=0)


FrictionMode = Annotated[Union[TrueNonlinear, FixedVelocity], Field(discriminator="kind")]


class PressureDropResult(BaseModel):
    """Outlet pressure of a pipe and its decomposition, all in Pa.

    ``p_out == p_in - friction_component - gravity_component`` holds up to rounding.
    """

    p_in: float
    p_out: float
    friction_component: float
    gravity_component: float
    mean_pressure: float
    iterations: int
