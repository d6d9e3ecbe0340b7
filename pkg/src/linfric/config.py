"""Run configuration: the YAML schema and how it is resolved.

Configuration files use engineering units (km, mm, bar, hours, days); the ``to_*`` helpers
convert to the SI domain types.
"""

import logging
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Mapping, Optional, Union

import yaml
from pydantic import Field, ValidationError, field_validator, model_validator

from .exceptions import ConfigError
from .gas_physics import BAR, DAY
from .models.base import BaseModel
from .models.gas import GasSpec, PipeSpec
from .models.history import DEFAULT_SAMPLE_INTERVAL, SyntheticProfile
from .models.report import MIN_VELOCITY, ReportFormat, SplitSpec
from .synthetic import DEFAULT_ROUGHNESS, DEFAULT_TEMPERATURE, PIPE_PRESETS, preset_profile

logger = logging.getLogger(__name__)

CONFIG_ENV = "LINFRIC_CONFIG"
OUT_DIR_ENV = "LINFRIC_OUT_DIR"
FORMAT_ENV = "LINFRIC_FORMAT"


class GasEntry(BaseModel):
    specific_gas_constant: float = Field(500.0, gt=0)
    pseudo_critical_pressure_bar: float = Field(45.9, gt=0)
    pseudo_critical_temperature_k: float = Field(191.5, gt=0)
    molar_mass: Optional[float] = Field(None, gt=0)

    def to_spec(self) -> GasSpec:
        return GasSpec(
            specific_gas_constant=self.specific_gas_constant,
            pseudo_critical_pressure=self.pseudo_critical_pressure_bar * BAR,
            pseudo_critical_temperature=self.pseudo_critical_temperature_k,
            molar_mass=self.molar_mass,
        )


class CsvSource(BaseModel):
    kind: Literal["csv"] = "csv"
    path: Path
    sample_interval_s: int = Field(DEFAULT_SAMPLE_INTERVAL, gt=0)


class SyntheticSource(BaseModel):
    """Generated history; unset fields come from ``preset`` when one is named."""

    kind: Literal["synthetic"] = "synthetic"
    preset: Optional[str] = None
    base_pressure_bar: Optional[float] = Field(None, gt=0)
    base_abs_velocity: Optional[float] = Field(None, ge=0)
    daily_amplitude: Optional[float] = Field(None, ge=0, le=1)
    noise_std: Optional[float] = Field(None, ge=0, le=1)
    reversal_probability: Optional[float] = Field(None, ge=0, le=1)
    return_probability: Optional[float] = Field(None, ge=0, le=1)
    drift: Optional[float] = Field(None, ge=0, le=1)
    duration_days: float = Field(730.0, gt=0)
    sample_interval_s: int = Field(DEFAULT_SAMPLE_INTERVAL, gt=0)
    seed: Optional[int] = Field(None, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _check_base(self) -> "SyntheticSource":
        missing_base = self.base_pressure_bar is None or self.base_abs_velocity is None
        if self.preset is None and missing_base:
            raise ValueError(
                "synthetic source needs a preset or base_pressure_bar and base_abs_velocity"
            )
        return self

    def to_profile(self, seed: int) -> SyntheticProfile:
        duration = int(self.duration_days * DAY)
        values: Dict[str, Any] = {}
        if self.preset is not None:
            values = preset_profile(self.preset, seed=seed, duration=duration).model_dump()
        overrides = {
            "base_pressure": (
                None if self.base_pressure_bar is None else self.base_pressure_bar * BAR
            ),
            "base_abs_velocity": self.base_abs_velocity,
            "daily_amplitude": self.daily_amplitude,
            "noise_std": self.noise_std,
            "reversal_probability": self.reversal_probability,
            "return_probability": self.return_probability,
            "drift": self.drift,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        values.update(duration=duration, seed=seed, sample_interval=self.sample_interval_s)
        return SyntheticProfile(**values)


DataSource = Annotated[Union[CsvSource, SyntheticSource], Field(discriminator="kind")]


class PipeEntry(BaseModel):
    """One pipe of a study: geometry, gas and where its history comes from."""

    pipe_id: str = Field(..., pattern=r"^[A-Za-z0-9_.-]+$")
    preset: Optional[str] = None
    length_km: float = Field(..., gt=0)
    diameter_mm: float = Field(..., gt=0)
    roughness_mm: float = Field(DEFAULT_ROUGHNESS * 1000.0, gt=0)
    slope: float = 0.0
    temperature_k: float = Field(DEFAULT_TEMPERATURE, gt=0)
    gas: GasEntry = Field(default_factory=GasEntry)
    source: DataSource

    @model_validator(mode="before")
    @classmethod
    def _apply_preset(cls, data: Any) -> Any:
        if not isinstance(data, dict) or data.get("preset") is None:
            return data
        name = str(data["preset"]).upper()
        if name not in PIPE_PRESETS:
            raise ValueError(f"unknown preset {data['preset']!r}")
        preset = PIPE_PRESETS[name]
        data = {"length_km": preset.length_km, "diameter_mm": preset.diameter_mm, **data}
        source = data.get("source")
        if isinstance(source, dict) and source.get("kind") == "synthetic":
            data["source"] = {"preset": name, **source}
        return data

    def to_pipe_spec(self) -> PipeSpec:
        return PipeSpec(
            length=self.length_km * 1000.0,
            diameter=self.diameter_mm / 1000.0,
            roughness=self.roughness_mm / 1000.0,
            slope=self.slope,
            temperature=self.temperature_k,
        )


def _epoch(moment: datetime) -> int:
    """Epoch seconds; naive datetimes are taken as UTC."""
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return int(moment.timestamp())


class SplitEntry(BaseModel):
    train_start: datetime
    train_end: datetime
    test_start: datetime
    test_end: datetime

    @model_validator(mode="after")
    def _check_order(self) -> "SplitEntry":
        train_start, train_end, test_start, test_end = (
            _epoch(moment)
            for moment in (self.train_start, self.train_end, self.test_start, self.test_end)
        )
        if not train_start < train_end <= test_start < test_end:
            raise ValueError("split must satisfy train_start < train_end <= test_start < test_end")
        return self

    def to_spec(self) -> SplitSpec:
        return SplitSpec(
            train_start=_epoch(self.train_start),
            train_end=_epoch(self.train_end),
            test_start=_epoch(self.test_start),
            test_end=_epoch(self.test_end),
        )


class RunConfig(BaseModel):
    """A batch study over several pipes."""

    pipes: List[PipeEntry] = Field(..., min_length=1)
    approaches: List[Literal["A", "B"]] = Field(default_factory=lambda: ["A", "B"], min_length=1)
    split: Optional[SplitEntry] = None
    train_days: float = Field(365.0, gt=0)
    lag_hours: float = Field(48.0, gt=0)
    min_velocity: float = Field(MIN_VELOCITY, ge=0)
    fit_min_velocity: float = Field(0.0, ge=0)
    change_max_horizon_hours: float = Field(168.0, gt=0)
    change_horizon_step_s: Optional[int] = Field(None, gt=0)
    seed: int = Field(0, ge=0, lt=2**64)
    output_dir: Path = Path("out")
    format: ReportFormat = ReportFormat.TEXT
    workers: int = Field(1, ge=1)
    base_dir: Path = Path(".")

    @field_validator("pipes")
    @classmethod
    def _unique_ids(cls, pipes: List[PipeEntry]) -> List[PipeEntry]:
        ids = [pipe.pipe_id for pipe in pipes]
        duplicates = sorted({pipe_id for pipe_id in ids if ids.count(pipe_id) > 1})
        if duplicates:
            raise ValueError(f"duplicate pipe ids: {', '.join(duplicates)}")
        return pipes

    @property
    def lag(self) -> int:
        """Lag in seconds."""
        return int(round(self.lag_hours * 3600))

    @property
    def change_max_horizon(self) -> int:
        return int(round(self.change_max_horizon_hours * 3600))

    def resolve(self, path: Path) -> Path:
        """Resolve a config-relative path."""
        return path if path.is_absolute() else self.base_dir / path

    def pipe(self, pipe_id: str) -> PipeEntry:
        for entry in self.pipes:
            if entry.pipe_id == pipe_id:
                return entry
        raise KeyError(pipe_id)


def _env_defaults() -> Dict[str, Any]:
    defaults: Dict[str, Any] = {}
    if os.getenv(OUT_DIR_ENV):
        defaults["output_dir"] = os.environ[OUT_DIR_ENV]
    if os.getenv(FORMAT_ENV):
        defaults["format"] = os.environ[FORMAT_ENV]
    return defaults


def config_from_dict(
    data: Mapping[str, Any],
    base_dir: Optional[Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Validate a parsed config document.

    Values resolve as ``overrides`` > ``data`` > environment > model default. ``None`` overrides
    are ignored so unset CLI flags fall through.
    """
    merged: Dict[str, Any] = {**_env_defaults(), **data}
    merged.update({key: value for key, value in (overrides or {}).items() if value is not None})
    if base_dir is not None:
        merged.setdefault("base_dir", base_dir)
    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(part) for part in error['loc']) or 'config'}: {error['msg']}"
            for error in e.errors(include_url=False)
        )
        raise ConfigError(
            f"invalid config: {problems}",
            details={"errors": e.errors(include_url=False)},
        ) from e

    for entry in config.pipes:
        if isinstance(entry.source, CsvSource):
            csv_path = config.resolve(entry.source.path)
            if not csv_path.is_file():
                raise ConfigError(f"pipe {entry.pipe_id}: history file not found: {csv_path}")
    return config


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Read and validate a YAML run config.

    Args:
        path: Config file. Falls back to the ``LINFRIC_CONFIG`` environment variable.
        overrides: Top-level values taking precedence over the file (CLI flags).

    Raises:
        ConfigError: If no file is given, it cannot be read or parsed, or it fails validation.
    """
    path = path or os.getenv(CONFIG_ENV)
    if not path:
        raise ConfigError(f"no config file given; pass --config or set {CONFIG_ENV}")

    config_path = Path(path)
    if not config_path.is_file():
        raise ConfigError(f"config file not found: {config_path}")
    try:
        document = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot read config {config_path}: {e}") from e
    if not isinstance(document, dict):
        raise ConfigError(f"config {config_path} must be a mapping at the top level")

    logger.debug("Loaded config %s", config_path)
    return config_from_dict(document, base_dir=config_path.parent, overrides=overrides)
