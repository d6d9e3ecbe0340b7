"""Fixed-velocity linearization of gas pipeline friction."""

from .config import RunConfig, load_config
from .evaluation import (
    default_split,
    evaluate_fixed_velocity,
    render_report,
    train_test_split,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DataError,
    DegenerateInputError,
    InsufficientSpanError,
    InvalidInputError,
    LinfricError,
    MonotonicityError,
    NonPhysicalResultError,
    NumericError,
    OutOfRangeError,
    ParseError,
    RangeError,
    RangeWarning,
    SchemaError,
)
from .gas_physics import (
    compressibility_papay,
    friction_factor_nikuradse,
    mean_pressure_stationary,
    mix_gas_parameters,
    velocity_from_state,
)
from .history import load_history_csv, resample_and_fill, write_history_csv
from .models.gas import GasSpec, PipeSpec
from .models.history import FillPolicy, StateHistory, StateSample, SyntheticProfile
from .models.pipe import FixedVelocity, PressureDropResult, TrueNonlinear
from .models.report import (
    ConstantVelocity,
    ErrorReport,
    FitRecord,
    LaggedVelocity,
    OracleVelocity,
    SplitSpec,
)
from .models.velocity import ChangeCurve, VelocityDistribution, VelocitySeries
from .pipe_model import (
    friction_drop_linearized,
    friction_drop_true,
    mass_balance_residual,
    pressure_drop_total,
)
from .study import PipelineStudy
from .synthetic import PIPE_PRESETS, generate_synthetic_history
from .velocity_fit import (
    fit_constant_velocity_lsq,
    lagged_velocity,
    percentile_spread_relative_error,
    velocity_cdf,
    velocity_change_curve,
)

__version__ = "1.0.0"
__all__ = [
    "PipelineStudy",
    "RunConfig",
    "load_config",
    "LinfricError",
    "ConfigError",
    "DataError",
    "ParseError",
    "SchemaError",
    "MonotonicityError",
    "RangeError",
    "OutOfRangeError",
    "InsufficientSpanError",
    "NumericError",
    "InvalidInputError",
    "DegenerateInputError",
    "ConvergenceError",
    "NonPhysicalResultError",
    "RangeWarning",
    "GasSpec",
    "PipeSpec",
    "StateSample",
    "StateHistory",
    "FillPolicy",
    "SyntheticProfile",
    "TrueNonlinear",
    "FixedVelocity",
    "PressureDropResult",
    "SplitSpec",
    "ConstantVelocity",
    "LaggedVelocity",
    "OracleVelocity",
    "ErrorReport",
    "FitRecord",
    "VelocitySeries",
    "VelocityDistribution",
    "ChangeCurve",
    "PIPE_PRESETS",
    "compressibility_papay",
    "friction_factor_nikuradse",
    "velocity_from_state",
    "mean_pressure_stationary",
    "mix_gas_parameters",
    "friction_drop_true",
    "friction_drop_linearized",
    "pressure_drop_total",
    "mass_balance_residual",
    "load_history_csv",
    "write_history_csv",
    "resample_and_fill",
    "generate_synthetic_history",
    "fit_constant_velocity_lsq",
    "lagged_velocity",
    "velocity_cdf",
    "percentile_spread_relative_error",
    "velocity_change_curve",
    "train_test_split",
    "default_split",
    "evaluate_fixed_velocity",
    "render_report",
]
