"""Fits resource: the least-squares constant velocity of every pipe."""

import json
import logging
from pathlib import Path
from typing import Dict, Optional, Union

from ..evaluation import render_table, train_test_split
from ..exceptions import DataError
from ..models.report import FitRecord, ReportFormat
from ..velocity_fit import fit_constant_velocity_lsq
from .base import BaseResource

logger = logging.getLogger(__name__)

FIT_COLUMNS = ["pipe", "v_c_mps"]


class Fits(BaseResource):
    """Resource for fitting and storing constant velocities."""

    FILENAME = "vc.json"
    SETTINGS_FILENAME = "vc.meta.json"

    def fit(self, pipe_id: str) -> float:
        """
        Fit v_c on the training part of a pipe's history.

        Returns:
            The fitted velocity in m/s.
        """
        study = self._study
        train, _ = train_test_split(study.history(pipe_id), study.split(pipe_id))
        return fit_constant_velocity_lsq(
            train,
            study.pipe_spec(pipe_id),
            study.gas_spec(pipe_id),
            min_velocity=study.config.fit_min_velocity,
        )

    def run(self) -> Dict[str, float]:
        """Fit every pipe; the mapping keeps config order."""
        values = self._study.map_pipes(self.fit)
        return dict(zip(self._study.pipe_ids, values))

    def record(self, pipe_id: str, v_c: float) -> FitRecord:
        """Describe ``v_c`` together with the current study settings of the pipe."""
        study = self._study
        return FitRecord(
            pipe_id=pipe_id,
            v_c=v_c,
            seed=study.seed_for(pipe_id),
            split=study.split(pipe_id),
            pipe=study.pipe_spec(pipe_id),
            gas=study.gas_spec(pipe_id),
            fit_min_velocity=study.config.fit_min_velocity,
        )

    def save(self, values: Dict[str, float], output_dir: Optional[Path] = None) -> Path:
        """Write ``vc.json`` and, next to it, the settings each velocity was fitted under."""
        records = [self.record(pipe_id, v_c).to_dict() for pipe_id, v_c in values.items()]
        self._write(self.SETTINGS_FILENAME, json.dumps(records, indent=2) + "\n", output_dir)
        path = self._write(self.FILENAME, json.dumps(values, indent=2) + "\n", output_dir)
        logger.info("wrote %d fitted velocities to %s", len(values), path)
        return path

    def load(self, output_dir: Optional[Path] = None) -> Optional[Dict[str, float]]:
        """
        Read a stored ``vc.json``.

        Returns:
            The stored velocities, or ``None`` if the file does not exist.

        Raises:
            DataError: If the file is not a JSON object of nonnegative numbers.
        """
        path = self._output_path(self.FILENAME, output_dir)
        if not path.is_file():
            return None
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise DataError(f"cannot read fitted velocities from {path}: {e}") from e
        if not isinstance(document, dict):
            raise DataError(f"{path} must map pipe ids to velocities")

        values: Dict[str, float] = {}
        for pipe_id, value in document.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
                raise DataError(f"{path}: invalid velocity {value!r} for pipe {pipe_id!r}")
            values[str(pipe_id)] = float(value)
        return values

    def load_records(self, output_dir: Optional[Path] = None) -> Optional[Dict[str, FitRecord]]:
        """
        Read the fit settings stored next to ``vc.json``.

        Returns:
            Records by pipe id, or ``None`` if the file does not exist.

        Raises:
            DataError: If the file is not a list of fit records.
        """
        path = self._output_path(self.SETTINGS_FILENAME, output_dir)
        if not path.is_file():
            return None
        try:
            document = json.loads(path.read_text(encoding="utf-8"))
            if not isinstance(document, list):
                raise DataError(f"{path} must list fit records")
            records = [FitRecord.from_dict(item) for item in document]
        except (OSError, ValueError, TypeError) as e:
            raise DataError(f"cannot read fit settings from {path}: {e}") from e
        return {record.pipe_id: record for record in records}

    def current(self, output_dir: Optional[Path] = None) -> Optional[Dict[str, float]]:
        """
        Stored velocities that still match the study settings.

        A pipe whose seed, split, geometry, gas or fit threshold changed since ``fit`` ran is
        left out with a warning, so callers fit it again.
        """
        values = self.load(output_dir)
        if values is None:
            return None
        records = self.load_records(output_dir)
        if records is None:
            logger.warning("%s has no stored fit settings; using it as is", self.FILENAME)
            return values

        current: Dict[str, float] = {}
        for pipe_id, v_c in values.items():
            if pipe_id not in self._study.pipe_ids:
                continue
            stored = records.get(pipe_id)
            if stored is None or stored.v_c != v_c or not stored.same_settings(
                self.record(pipe_id, v_c)
            ):
                logger.warning("stored v_c of %s is stale; fitting again", pipe_id)
                continue
            current[pipe_id] = v_c
        return current

    def render(
        self, values: Dict[str, float], fmt: Union[ReportFormat, str] = ReportFormat.TEXT
    ) -> str:
        rows = [{"pipe": pipe_id, "v_c_mps": v_c} for pipe_id, v_c in values.items()]
        return render_table(rows, FIT_COLUMNS, fmt)
