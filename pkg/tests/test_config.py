"""Unit tests for run configuration loading."""

from pathlib import Path
from typing import Any, Dict

import pytest
import yaml

from linfric.config import (
    CONFIG_ENV,
    FORMAT_ENV,
    OUT_DIR_ENV,
    CsvSource,
    SyntheticSource,
    config_from_dict,
    load_config,
)
from linfric.exceptions import ConfigError
from linfric.gas_physics import BAR, DAY
from linfric.models.history import DEFAULT_START


pytestmark = pytest.mark.unit


def write_yaml(path: Path, document: Any) -> Path:
    path.write_text(yaml.safe_dump(document, sort_keys=False), encoding="utf-8")
    return path


class TestLoadConfig:
    """Test cases for load_config."""

    def test_load_from_file(self, config_file: Path, tmp_path: Path) -> None:
        """Test a two-pipe config with defaults filled in."""
        config = load_config(config_file)

        assert [entry.pipe_id for entry in config.pipes] == ["A", "flat"]
        assert config.approaches == ["A", "B"]
        assert config.lag == 172800
        assert config.min_velocity == 0.02
        assert config.train_days == 6
        assert config.output_dir == tmp_path / "out"
        assert config.base_dir == tmp_path

    def test_preset_fills_geometry(self, config_file: Path) -> None:
        """Test that a preset supplies length, diameter and generator settings."""
        entry = load_config(config_file).pipe("A")
        pipe = entry.to_pipe_spec()

        assert pipe.length == 16000.0
        assert pipe.diameter == 1.0
        assert isinstance(entry.source, SyntheticSource)
        assert entry.source.preset == "A"
        profile = entry.source.to_profile(seed=1)
        assert profile.base_pressure == 56 * BAR
        assert profile.base_abs_velocity == 4.2
        assert profile.duration == 12 * DAY

    def test_engineering_units(self, config_file: Path) -> None:
        """Test km, mm and bar conversion."""
        entry = load_config(config_file).pipe("flat")
        pipe = entry.to_pipe_spec()
        gas = entry.gas.to_spec()

        assert pipe.length == 10000.0
        assert pipe.diameter == 0.8
        assert pipe.roughness == pytest.approx(5e-5)
        assert gas.pseudo_critical_pressure == pytest.approx(45.9 * BAR)

    def test_path_from_environment(
        self, config_file: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Test that LINFRIC_CONFIG is used when no path is given."""
        monkeypatch.setenv(CONFIG_ENV, str(config_file))
        assert len(load_config().pipes) == 2

    def test_no_path(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that a missing path is a configuration error."""
        monkeypatch.delenv(CONFIG_ENV, raising=False)
        with pytest.raises(ConfigError, match=CONFIG_ENV):
            load_config()

    def test_missing_file(self, tmp_path: Path) -> None:
        """Test that a nonexistent config file is reported."""
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.yaml")

    def test_invalid_yaml(self, tmp_path: Path) -> None:
        """Test that unparseable YAML is a configuration error."""
        path = tmp_path / "broken.yaml"
        path.write_text("pipes: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="cannot read"):
            load_config(path)

    def test_top_level_list(self, tmp_path: Path) -> None:
        """Test that the document must be a mapping."""
        with pytest.raises(ConfigError, match="mapping"):
            load_config(write_yaml(tmp_path / "list.yaml", [1, 2]))

    def test_overrides_take_precedence(self, config_file: Path) -> None:
        """Test that overrides beat file values and None overrides are ignored."""
        config = load_config(config_file, {"lag_hours": 24, "train_days": None, "format": "csv"})

        assert config.lag == 86400
        assert config.train_days == 6
        assert config.format == "csv"


class TestConfigFromDict:
    """Test cases for config_from_dict validation."""

    def test_environment_defaults(
        self, study_config: Dict[str, Any], monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Test that environment values apply only where the document is silent."""
        monkeypatch.setenv(OUT_DIR_ENV, "from-env")
        monkeypatch.setenv(FORMAT_ENV, "json")

        config = config_from_dict(study_config)
        assert config.format == "json"
        assert config.output_dir != Path("from-env")

        document = {key: value for key, value in study_config.items() if key != "output_dir"}
        assert config_from_dict(document).output_dir == Path("from-env")

    def test_duplicate_pipe_ids(self, study_config: Dict[str, Any]) -> None:
        """Test that pipe ids must be unique."""
        study_config["pipes"].append(study_config["pipes"][0])
        with pytest.raises(ConfigError, match="duplicate pipe ids: A") as exc_info:
            config_from_dict(study_config)
        assert exc_info.value.exit_code == 2

    def test_unknown_preset(self, study_config: Dict[str, Any]) -> None:
        """Test that preset names are checked."""
        study_config["pipes"][0]["preset"] = "Q"
        with pytest.raises(ConfigError, match="unknown preset"):
            config_from_dict(study_config)

    def test_synthetic_source_needs_base(self, study_config: Dict[str, Any]) -> None:
        """Test that a synthetic source without preset needs base values."""
        del study_config["pipes"][1]["source"]["base_abs_velocity"]
        with pytest.raises(ConfigError, match="pipes.1.source"):
            config_from_dict(study_config)

    def test_unknown_approach(self, study_config: Dict[str, Any]) -> None:
        """Test that only approaches A and B can be configured."""
        study_config["approaches"] = ["C"]
        with pytest.raises(ConfigError, match="approaches"):
            config_from_dict(study_config)

    def test_nonpositive_lag(self, study_config: Dict[str, Any]) -> None:
        """Test that the lag must be positive."""
        study_config["lag_hours"] = 0
        with pytest.raises(ConfigError, match="lag_hours"):
            config_from_dict(study_config)

    def test_unknown_key(self, study_config: Dict[str, Any]) -> None:
        """Test that typos are reported instead of ignored."""
        study_config["lag_hour"] = 24
        with pytest.raises(ConfigError, match="lag_hour"):
            config_from_dict(study_config)

    def test_split_in_utc(self, study_config: Dict[str, Any]) -> None:
        """Test that naive split datetimes are read as UTC."""
        study_config["split"] = yaml.safe_load(
            "train_start: 2015-01-01 00:00:00\n"
            "train_end: 2015-01-07 00:00:00\n"
            "test_start: 2015-01-07 00:00:00\n"
            "test_end: 2015-01-13 00:00:00\n"
        )
        split = config_from_dict(study_config).split
        assert split is not None
        spec = split.to_spec()
        assert spec.train_start == DEFAULT_START
        assert spec.test_end == DEFAULT_START + 12 * DAY

    def test_split_order(self, study_config: Dict[str, Any]) -> None:
        """Test that overlapping splits are rejected at load time."""
        study_config["split"] = {
            "train_start": "2015-01-01T00:00:00Z",
            "train_end": "2015-01-08T00:00:00Z",
            "test_start": "2015-01-07T00:00:00Z",
            "test_end": "2015-01-13T00:00:00Z",
        }
        with pytest.raises(ConfigError, match="train_end <= test_start"):
            config_from_dict(study_config)

    def test_csv_source_resolved_against_config_dir(
        self, study_config: Dict[str, Any], tmp_path: Path
    ) -> None:
        """Test that relative CSV paths are resolved against the config directory."""
        (tmp_path / "data").mkdir()
        (tmp_path / "data" / "flat.csv").write_text("", encoding="utf-8")
        study_config["pipes"][1]["source"] = {"kind": "csv", "path": "data/flat.csv"}

        config = config_from_dict(study_config, base_dir=tmp_path)
        source = config.pipe("flat").source
        assert isinstance(source, CsvSource)
        assert config.resolve(source.path) == tmp_path / "data" / "flat.csv"

    def test_missing_csv_names_path(self, study_config: Dict[str, Any], tmp_path: Path) -> None:
        """Test that a missing history file is reported with its path."""
        study_config["pipes"][1]["source"] = {"kind": "csv", "path": "missing.csv"}
        with pytest.raises(ConfigError) as exc_info:
            config_from_dict(study_config, base_dir=tmp_path)

        assert "pipe flat" in exc_info.value.message
        assert str(tmp_path / "missing.csv") in exc_info.value.message

    def test_unknown_pipe(self, study_config: Dict[str, Any]) -> None:
        """Test that looking up an unknown pipe raises KeyError."""
        with pytest.raises(KeyError):
            config_from_dict(study_config).pipe("Z")
