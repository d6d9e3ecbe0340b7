"""Pytest configuration and shared fixtures."""

import logging
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List

import numpy as np
import pytest
import yaml

from linfric.gas_physics import BAR, DAY
from linfric.models.gas import GasSpec, PipeSpec
from linfric.models.history import DEFAULT_START, StateHistory, SyntheticProfile
from linfric.synthetic import DEFAULT_GAS, generate_synthetic_history, preset_pipe

CSV_HEADER = "timestamp_utc,p_in_bar,p_out_bar,q_kg_per_s"


@pytest.fixture
def gas() -> GasSpec:
    """Return the default natural gas."""
    return DEFAULT_GAS


@pytest.fixture
def pipe() -> PipeSpec:
    """Return the geometry of study pipe A."""
    return preset_pipe("A")


@pytest.fixture
def short_pipe() -> PipeSpec:
    """Return the geometry of study pipe F."""
    return preset_pipe("F")


@pytest.fixture
def constant_profile() -> SyntheticProfile:
    """Return a profile with |v| fixed at 5 m/s for four days."""
    return SyntheticProfile(
        base_pressure=60 * BAR, base_abs_velocity=5.0, duration=4 * DAY, seed=7
    )


@pytest.fixture
def constant_history(
    constant_profile: SyntheticProfile, pipe: PipeSpec, gas: GasSpec
) -> StateHistory:
    """Return a four-day history flowing at a constant 5 m/s."""
    return generate_synthetic_history(constant_profile, pipe, gas, pipe_id="const")


@pytest.fixture
def sinusoid_history(pipe: PipeSpec, gas: GasSpec) -> StateHistory:
    """Return a ten-day noiseless history with a strong daily cycle."""
    profile = SyntheticProfile(
        base_pressure=56 * BAR,
        base_abs_velocity=4.0,
        daily_amplitude=0.5,
        duration=10 * DAY,
        seed=11,
    )
    return generate_synthetic_history(profile, pipe, gas, pipe_id="sine")


@pytest.fixture
def reversing_history(short_pipe: PipeSpec, gas: GasSpec) -> StateHistory:
    """Return a noisy ten-day history with frequent flow reversals."""
    profile = SyntheticProfile(
        base_pressure=40 * BAR,
        base_abs_velocity=3.0,
        daily_amplitude=0.3,
        noise_std=0.2,
        reversal_probability=0.8,
        return_probability=0.8,
        duration=10 * DAY,
        seed=23,
    )
    return generate_synthetic_history(profile, short_pipe, gas, pipe_id="rev")


@pytest.fixture
def make_history() -> Callable[..., StateHistory]:
    """Return a factory for small hand-written histories on the 180 s grid."""

    def factory(
        p_in: List[float], p_out: List[float], q: List[float], pipe_id: str = "hand"
    ) -> StateHistory:
        n = len(q)
        return StateHistory(
            pipe_id=pipe_id,
            sample_interval=180,
            timestamps=DEFAULT_START + 180 * np.arange(n),
            p_in=p_in,
            p_out=p_out,
            q=q,
        )

    return factory


@pytest.fixture
def write_csv(tmp_path: Path) -> Callable[[List[str], str], Path]:
    """Return a helper writing history CSV rows below the standard header."""

    def writer(rows: List[str], name: str = "history.csv") -> Path:
        path = tmp_path / name
        path.write_text("\n".join([CSV_HEADER, *rows]) + "\n", encoding="utf-8")
        return path

    return writer


@pytest.fixture
def study_config(tmp_path: Path) -> Dict[str, Any]:
    """Return a config document for two short synthetic pipes."""
    return {
        "pipes": [
            {
                "pipe_id": "A",
                "preset": "A",
                "source": {"kind": "synthetic", "duration_days": 12, "seed": 1},
            },
            {
                "pipe_id": "flat",
                "length_km": 10,
                "diameter_mm": 800,
                "source": {
                    "kind": "synthetic",
                    "base_pressure_bar": 60,
                    "base_abs_velocity": 5.0,
                    "duration_days": 12,
                },
            },
        ],
        "train_days": 6,
        "output_dir": str(tmp_path / "out"),
    }


@pytest.fixture
def config_file(tmp_path: Path, study_config: Dict[str, Any]) -> Path:
    """Write ``study_config`` as YAML and return its path."""
    path = tmp_path / "study.yaml"
    path.write_text(yaml.safe_dump(study_config, sort_keys=False), encoding="utf-8")
    return path


@pytest.fixture
def restore_logging() -> Iterator[None]:
    """Undo root logger changes made by ``configure_logging``."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
