"""Seeded synthetic state histories and the presets of the six study pipes.

Generated samples follow a target absolute velocity

    |v(t)| = base (1 + amplitude sin(2 pi t / day)) (1 + drift t / year) (1 + noise(t))

clamped at zero, with t counted from the profile start. The flow direction is a two-state regime
that leaves the main direction with the per-day reversal probability and returns with the per-day
return probability. Flows are computed from the target velocity at the base pressure, and the end
pressures are placed so that their stationary mean equals the base pressure and their difference
equals the friction plus gravity drop at that mean. The stored endpoints are therefore an exact
solution of the discretized momentum balance.
"""

import logging
import math
from typing import Dict

import numpy as np
from pydantic import Field

from .exceptions import ConfigError, InvalidInputError
from .gas_physics import BAR, DAY, GRAVITY, YEAR, compressibility_papay
from .models.base import BaseModel
from .models.gas import GasSpec, PipeSpec
from .models.history import StateHistory, SyntheticProfile
from .pipe_model import friction_gradient_true
from .utils.random import SplitMix64

logger = logging.getLogger(__name__)

DEFAULT_GAS = GasSpec(
    specific_gas_constant=500.0,
    pseudo_critical_pressure=45.9 * BAR,
    pseudo_critical_temperature=191.5,
)
DEFAULT_TEMPERATURE = 283.15
DEFAULT_ROUGHNESS = 5e-5


class PipePreset(BaseModel):
    """Reference properties of a study pipe plus the generator settings that mimic it."""

    length_km: float = Field(..., gt=0)
    diameter_mm: float = Field(..., gt=0)
    avg_pressure_bar: float = Field(..., gt=0)
    avg_abs_velocity: float = Field(..., ge=0)
    main_direction_share: float = Field(..., ge=0, le=1)
    daily_amplitude: float = 0.0
    noise_std: float = 0.0
    reversal_probability: float = 0.0

    @property
    def return_probability(self) -> float:
        """Per-day return probability giving the preset's long-run main-direction share."""
        share = self.main_direction_share
        if self.reversal_probability == 0.0 or share >= 1.0:
            return 0.0
        return min(1.0, self.reversal_probability * share / (1.0 - share))


_PRESET_FIELDS = (
    "length_km",
    "diameter_mm",
    "avg_pressure_bar",
    "avg_abs_velocity",
    "main_direction_share",
    "daily_amplitude",
    "noise_std",
    "reversal_probability",
)
_PRESET_ROWS = {
    # L km, D mm, p bar, |v| m/s, main share | amplitude, noise, reversals per day
    "A": (16, 1000, 56, 4.2, 1.00, 0.10, 0.10, 0.0),
    "B": (16, 900, 63, 3.4, 0.99, 0.10, 0.12, 0.005),
    "C": (15, 1100, 70, 2.5, 0.99, 0.15, 0.15, 0.005),
    "D": (20, 1100, 71, 1.4, 0.76, 0.30, 0.25, 0.10),
    "E": (3, 400, 54, 2.7, 0.93, 0.40, 0.20, 0.03),
    "F": (2, 300, 16, 4.4, 1.00, 0.40, 0.15, 0.0),
}
PIPE_PRESETS: Dict[str, PipePreset] = {
    name: PipePreset(**dict(zip(_PRESET_FIELDS, row))) for name, row in _PRESET_ROWS.items()
}


def _preset(name: str) -> PipePreset:
    try:
        return PIPE_PRESETS[name.upper()]
    except KeyError:
        raise ConfigError(
            f"unknown pipe preset {name!r}; choose one of {', '.join(PIPE_PRESETS)}"
        ) from None


def preset_pipe(name: str) -> PipeSpec:
    """Pipe geometry of a study pipe, horizontal, at the default temperature and roughness."""
    preset = _preset(name)
    return PipeSpec(
        length=preset.length_km * 1000.0,
        diameter=preset.diameter_mm / 1000.0,
        roughness=DEFAULT_ROUGHNESS,
        slope=0.0,
        temperature=DEFAULT_TEMPERATURE,
    )


def preset_profile(name: str, seed: int = 0, duration: int = 2 * YEAR) -> SyntheticProfile:
    """Generator profile reproducing a study pipe's mean pressure, mean |v| and flow direction."""
    preset = _preset(name)
    return SyntheticProfile(
        base_pressure=preset.avg_pressure_bar * BAR,
        base_abs_velocity=preset.avg_abs_velocity,
        daily_amplitude=preset.daily_amplitude,
        noise_std=preset.noise_std,
        reversal_probability=preset.reversal_probability,
        return_probability=preset.return_probability,
        duration=duration,
        seed=seed,
    )


def _step_probability(per_day: float, interval: int) -> float:
    return 1.0 - (1.0 - per_day) ** (interval / DAY)


def _flow_direction(profile: SyntheticProfile, draws: np.ndarray) -> np.ndarray:
    direction = np.ones(draws.size)
    if profile.reversal_probability == 0.0:
        return direction
    leave = _step_probability(profile.reversal_probability, profile.sample_interval)
    back_per_day = (
        profile.reversal_probability
        if profile.return_probability is None
        else profile.return_probability
    )
    back = _step_probability(back_per_day, profile.sample_interval)
    sign = 1.0
    for i, draw in enumerate(draws.tolist()):
        if draw < (leave if sign > 0 else back):
            sign = -sign
        direction[i] = sign
    return direction


def target_velocity(
    profile: SyntheticProfile, elapsed: np.ndarray, noise: np.ndarray
) -> np.ndarray:
    """Target absolute velocity at ``elapsed`` seconds after the start, noise already scaled."""
    daily = 1.0 + profile.daily_amplitude * np.sin(2.0 * np.pi * elapsed / DAY)
    trend = 1.0 + profile.drift * elapsed / YEAR
    return np.maximum(0.0, profile.base_abs_velocity * daily * trend * (1.0 + noise))


def generate_synthetic_history(
    profile: SyntheticProfile,
    pipe: PipeSpec,
    gas: GasSpec,
    pipe_id: str = "synthetic",
) -> StateHistory:
    """
    Deterministic synthetic history for one pipe.

    Raises:
        InvalidInputError: If the profile yields no sample or an infeasible pressure drop.
    """
    interval = profile.sample_interval
    n = profile.duration // interval
    if n < 1:
        raise InvalidInputError("profile duration is shorter than one sample interval")

    rng = SplitMix64(profile.seed)
    noise = rng.normal(n) * profile.noise_std
    direction = _flow_direction(profile, rng.uniform(n))

    elapsed = np.arange(n, dtype=np.float64) * interval
    velocity = direction * target_velocity(profile, elapsed, noise)

    base = profile.base_pressure
    z = float(compressibility_papay(base, pipe.temperature, gas))
    density = base / (gas.specific_gas_constant * pipe.temperature * z)
    q = velocity * pipe.cross_section * density

    friction = pipe.length * np.asarray(friction_gradient_true(base, q, pipe, gas, z=z))
    gravity = pipe.length * GRAVITY * pipe.slope * density
    drop = friction + gravity

    # mean of (m + d/2, m - d/2) is m + d^2 / (12 m); pick m so that it equals base
    discriminant = base**2 - drop**2 / 3.0
    if np.any(discriminant <= 0):
        raise InvalidInputError("profile drives the pressure drop beyond the base pressure")
    middle = 0.5 * (base + np.sqrt(discriminant))
    p_in = middle + 0.5 * drop
    p_out = middle - 0.5 * drop
    if np.any(p_in <= 0) or np.any(p_out <= 0):
        raise InvalidInputError("profile yields nonpositive end pressures")

    history = StateHistory(
        pipe_id=pipe_id,
        sample_interval=interval,
        timestamps=profile.start + np.arange(n, dtype=np.int64) * interval,
        p_in=p_in,
        p_out=p_out,
        q=q,
    )
    logger.info(
        "generated %d samples for %s (seed %d, mean |v| %.3f m/s)",
        n,
        pipe_id,
        profile.seed,
        float(np.mean(np.abs(velocity))),
    )
    return history


def days(count: float) -> int:
    """Duration in whole seconds."""
    return int(math.floor(count * DAY))
