"""Single-segment discretization of the isothermal pipe flow equations.

Momentum balance per pipe, with the spatial derivative replaced by the difference quotient over
the whole length and friction/compressibility evaluated at the stationary mean pressure:

    (p_out - p_in) / L + f(p_mean, q) + g h' p_mean / (Rs T z) = 0

Mass balance per pipe, lumped over the length:

    A L / (Rs T z) (p(t + dt) - p(t)) / dt + (q_out - q_in) = 0
"""

import logging
from typing import Optional

import numpy as np

from .exceptions import ConvergenceError, InvalidInputError, NonPhysicalResultError
from .gas_physics import (
    GRAVITY,
    FloatOrArray,
    compressibility_papay,
    friction_factor_nikuradse,
    mean_pressure_stationary,
    squeeze_scalar,
)
from .models.gas import GasSpec, PipeSpec
from .models.pipe import FixedVelocity, FrictionMode, PressureDropResult, TrueNonlinear

logger = logging.getLogger(__name__)

PRESSURE_TOLERANCE = 1e-6
MAX_ITERATIONS = 100


def friction_gradient_true(
    p: FloatOrArray,
    q: FloatOrArray,
    pipe: PipeSpec,
    gas: GasSpec,
    z: Optional[FloatOrArray] = None,
) -> FloatOrArray:
    """
    Friction-based pressure difference per meter, lambda Rs T z / (2 D A^2) |q| q / p.

    Args:
        p: Pressure in Pa.
        q: Signed mass flow in kg/s.
        pipe: Pipe geometry.
        gas: Gas parameters.
        z: Compressibility override; Papay at (p, T) when omitted.

    Returns:
        Signed gradient in Pa/m, with the sign of q.

    Raises:
        InvalidInputError: If p <= 0.
    """
    p_arr = np.asarray(p, dtype=np.float64)
    if np.any(p_arr <= 0):
        raise InvalidInputError("pressure must be positive")
    if z is None:
        z = compressibility_papay(p_arr, pipe.temperature, gas)
    lam = friction_factor_nikuradse(pipe)
    area = pipe.cross_section
    scale = lam * gas.specific_gas_constant * pipe.temperature * np.asarray(z)
    scale = scale / (2.0 * pipe.diameter * area**2)
    q_arr = np.asarray(q, dtype=np.float64)
    return squeeze_scalar(scale * np.abs(q_arr) * q_arr / p_arr)


def friction_drop_true(
    p_in: FloatOrArray,
    p_out: FloatOrArray,
    q: FloatOrArray,
    pipe: PipeSpec,
    gas: GasSpec,
) -> FloatOrArray:
    """Friction pressure drop fL over the whole pipe, gradient taken at the mean pressure."""
    p_mean = mean_pressure_stationary(p_in, p_out)
    z = compressibility_papay(p_mean, pipe.temperature, gas)
    gradient = np.asarray(friction_gradient_true(p_mean, q, pipe, gas, z=z))
    return squeeze_scalar(pipe.length * gradient)


def linearized_drop_coefficient(pipe: PipeSpec) -> float:
    """lambda L / (2 D A): the linearized drop is this times v_c times q."""
    lam = friction_factor_nikuradse(pipe)
    return lam * pipe.length / (2.0 * pipe.diameter * pipe.cross_section)


def friction_drop_linearized(q: FloatOrArray, v_c: FloatOrArray, pipe: PipeSpec) -> FloatOrArray:
    """
    Friction drop with the absolute velocity fixed to v_c, lambda v_c / (2 D A) q L.

    Raises:
        InvalidInputError: If v_c < 0.
    """
    v_arr = np.asarray(v_c, dtype=np.float64)
    if np.any(v_arr < 0):
        raise InvalidInputError("fixed velocity must be nonnegative")
    lam = friction_factor_nikuradse(pipe)
    scale = lam * v_arr / (2.0 * pipe.diameter * pipe.cross_section)
    return squeeze_scalar(scale * np.asarray(q, dtype=np.float64) * pipe.length)


def gravity_gradient(p: FloatOrArray, pipe: PipeSpec, gas: GasSpec) -> FloatOrArray:
    """Hydrostatic pressure difference per meter, g h' p / (Rs T z)."""
    p_arr = np.asarray(p, dtype=np.float64)
    z = compressibility_papay(p_arr, pipe.temperature, gas)
    weight = GRAVITY * pipe.slope / (gas.specific_gas_constant * pipe.temperature)
    return squeeze_scalar(weight * p_arr / np.asarray(z))


def pressure_drop_total(
    p_in: float,
    q: float,
    pipe: PipeSpec,
    gas: GasSpec,
    mode: Optional[FrictionMode] = None,
    tolerance: float = PRESSURE_TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
) -> PressureDropResult:
    """
    Outlet pressure from the discretized momentum balance.

    The mean pressure depends on p_out, so the balance is solved by fixed-point iteration
    starting at p_out = p_in until successive iterates differ by less than ``tolerance`` Pa.

    Args:
        p_in: Inlet pressure in Pa.
        q: Signed mass flow in kg/s.
        pipe: Pipe geometry.
        gas: Gas parameters.
        mode: TrueNonlinear (default) or FixedVelocity(v_c).
        tolerance: Convergence threshold on p_out in Pa.
        max_iterations: Iteration cap.

    Raises:
        InvalidInputError: If p_in <= 0.
        NonPhysicalResultError: If an iterate of p_out is nonpositive.
        ConvergenceError: If the iteration cap is reached.
    """
    if p_in <= 0:
        raise InvalidInputError("inlet pressure must be positive")
    mode = mode if mode is not None else TrueNonlinear()
    fixed_friction: Optional[float] = None
    if isinstance(mode, FixedVelocity):
        fixed_friction = float(friction_drop_linearized(q, mode.v_c, pipe))

    p_out = p_in
    for iteration in range(1, max_iterations + 1):
        p_mean = float(mean_pressure_stationary(p_in, p_out))
        if fixed_friction is not None:
            friction = fixed_friction
        else:
            friction = pipe.length * float(friction_gradient_true(p_mean, q, pipe, gas))
        gravity = pipe.length * float(gravity_gradient(p_mean, pipe, gas))
        candidate = p_in - friction - gravity
        if candidate <= 0:
            raise NonPhysicalResultError(
                f"outlet pressure {candidate:.6g} Pa is nonpositive for p_in={p_in:.6g} Pa, "
                f"q={q:.6g} kg/s"
            )
        if abs(candidate - p_out) < tolerance:
            logger.debug("p_out converged after %d iterations", iteration)
            return PressureDropResult(
                p_in=p_in,
                p_out=candidate,
                friction_component=friction,
                gravity_component=gravity,
                mean_pressure=p_mean,
                iterations=iteration,
            )
        p_out = candidate
    raise ConvergenceError(f"outlet pressure did not converge in {max_iterations} iterations")


def mass_balance_residual(
    p_t: FloatOrArray,
    p_t_next: FloatOrArray,
    q_in: FloatOrArray,
    q_out: FloatOrArray,
    dt: float,
    pipe: PipeSpec,
    gas: GasSpec,
) -> FloatOrArray:
    """
    Residual of the lumped mass balance in kg/s; zero for a consistent pair of states.

    z is evaluated at the stationary mean of the two pressures.

    Raises:
        InvalidInputError: On nonpositive pressures or dt.
    """
    if dt <= 0:
        raise InvalidInputError("time step must be positive")
    p_now = np.asarray(p_t, dtype=np.float64)
    p_next = np.asarray(p_t_next, dtype=np.float64)
    p_mean = mean_pressure_stationary(p_now, p_next)
    z = compressibility_papay(p_mean, pipe.temperature, gas)
    capacity = pipe.cross_section * pipe.length / (gas.specific_gas_constant * pipe.temperature * z)
    linepack_rate = capacity * (p_next - p_now) / dt
    return squeeze_scalar(linepack_rate + (np.asarray(q_out) - np.asarray(q_in)))
