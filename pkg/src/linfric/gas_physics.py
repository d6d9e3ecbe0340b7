"""Thermodynamic and hydraulic helper functions.

Every function accepts Python floats or numpy arrays (broadcast together) and returns a float for
scalar input. Units are SI: Pa, K, kg/s, m.
"""

import logging
import math
import warnings
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import InvalidInputError, RangeWarning
from .models.gas import GasSpec, PipeSpec

logger = logging.getLogger(__name__)

FloatOrArray = Union[float, np.ndarray]

GRAVITY = 9.80665
BAR = 1e5
DAY = 86400
YEAR = 365 * DAY


def squeeze_scalar(values: np.ndarray) -> FloatOrArray:
    return float(values) if np.ndim(values) == 0 else values


def compressibility_papay(
    p: FloatOrArray, temperature: FloatOrArray, gas: GasSpec
) -> FloatOrArray:
    """
    Compressibility factor from the Papay correlation.

        z = 1 - 3.52 p_r exp(-2.26 T_r) + 0.274 p_r^2 exp(-1.878 T_r)

    with reduced pressure p_r = p / p_c and reduced temperature T_r = T / T_c.

    Args:
        p: Pressure in Pa, nonnegative.
        temperature: Temperature in K, positive.
        gas: Gas providing the pseudo-critical point.

    Raises:
        InvalidInputError: If p < 0 or T <= 0.
    """
    p_arr = np.asarray(p, dtype=np.float64)
    t_arr = np.asarray(temperature, dtype=np.float64)
    if np.any(p_arr < 0):
        raise InvalidInputError("pressure must be nonnegative")
    if np.any(t_arr <= 0):
        raise InvalidInputError("temperature must be positive")
    p_r = p_arr / gas.pseudo_critical_pressure
    t_r = t_arr / gas.pseudo_critical_temperature
    z = 1.0 - 3.52 * p_r * np.exp(-2.26 * t_r) + 0.274 * p_r**2 * np.exp(-1.878 * t_r)
    if np.any(z <= 0):
        warnings.warn(
            "Papay compressibility is nonpositive; state is outside the correlation's range",
            RangeWarning,
            stacklevel=2,
        )
    return squeeze_scalar(z)


def friction_factor_nikuradse(pipe: PipeSpec) -> float:
    """Fully rough friction factor (2 log10(D/k) + 1.138)^-2, constant per pipe."""
    relative = pipe.diameter / pipe.roughness
    if relative <= 1.0:
        raise InvalidInputError(f"diameter/roughness must exceed 1, got {relative:g}")
    return (2.0 * math.log10(relative) + 1.138) ** -2


def density_from_pressure(
    p: FloatOrArray, temperature: float, gas: GasSpec, z: Optional[FloatOrArray] = None
) -> FloatOrArray:
    """Real-gas density p / (Rs T z)."""
    p_arr = np.asarray(p, dtype=np.float64)
    if z is None:
        z = compressibility_papay(p_arr, temperature, gas)
    return squeeze_scalar(p_arr / (gas.specific_gas_constant * temperature * np.asarray(z)))


def pressure_from_density(
    rho: FloatOrArray, temperature: float, gas: GasSpec, z: FloatOrArray
) -> FloatOrArray:
    """Real-gas pressure Rs rho T z."""
    rho_arr = np.asarray(rho, dtype=np.float64)
    return squeeze_scalar(gas.specific_gas_constant * rho_arr * temperature * np.asarray(z))


def velocity_from_state(
    p: FloatOrArray,
    q: FloatOrArray,
    pipe: PipeSpec,
    gas: GasSpec,
    z: Optional[FloatOrArray] = None,
) -> FloatOrArray:
    """
    Signed gas velocity v = (Rs T z / A) q / p.

    Args:
        p: Pressure in Pa at which the velocity is evaluated.
        q: Signed mass flow in kg/s.
        pipe: Pipe providing cross section and temperature.
        gas: Gas parameters.
        z: Compressibility override; Papay at (p, T) when omitted.

    Raises:
        InvalidInputError: If p <= 0.
    """
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any(p_arr <= 0):
        raise InvalidInputError("pressure must be positive")
    if z is None:
        z = compressibility_papay(p_arr, pipe.temperature, gas)
    scale = gas.specific_gas_constant * pipe.temperature * np.asarray(z) / pipe.cross_section
    return squeeze_scalar(scale * np.asarray(q, dtype=np.float64) / p_arr)


def mean_pressure_stationary(p_in: FloatOrArray, p_out: FloatOrArray) -> FloatOrArray:
    """Stationary mean pressure (2/3)(p_in + p_out - p_in p_out / (p_in + p_out))."""
    a = np.asarray(p_in, dtype=np.float64)
    b = np.asarray(p_out, dtype=np.float64)
    if np.any(a <= 0) or np.any(b <= 0):
        raise InvalidInputError("pressures must be positive")
    total = a + b
    return squeeze_scalar(2.0 / 3.0 * (total - a * b / total))


def mix_gas_parameters(inflows: Sequence[Tuple[float, GasSpec]]) -> GasSpec:
    """
    Flow-weighted gas parameters of the mixture leaving a junction.

    Each parameter of the result is sum(q_i X_i) / sum(q_i). The molar mass is mixed only when
    every contributing gas carries one.

    Raises:
        InvalidInputError: If a flow is negative or no flow is positive.
    """
    if any(flow < 0 for flow, _ in inflows):
        raise InvalidInputError("junction inflows must be nonnegative")
    active = [(flow, gas) for flow, gas in inflows if flow > 0]
    if not active:
        raise InvalidInputError("at least one inflow must be positive")
    first = active[0][1]
    if all(gas == first for _, gas in active):
        return first

    weights = np.array([flow for flow, _ in active])

    def weighted(values: Sequence[float]) -> float:
        return float(np.dot(weights, values) / weights.sum())

    gases = [gas for _, gas in active]
    molar = [gas.molar_mass for gas in gases]
    mixed = GasSpec(
        specific_gas_constant=weighted([g.specific_gas_constant for g in gases]),
        pseudo_critical_pressure=weighted([g.pseudo_critical_pressure for g in gases]),
        pseudo_critical_temperature=weighted([g.pseudo_critical_temperature for g in gases]),
        molar_mass=None if None in molar else weighted([float(m) for m in molar if m is not None]),
    )
    logger.debug("mixed %d inflows into %s", len(active), mixed)
    return mixed
