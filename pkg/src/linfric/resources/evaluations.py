"""Evaluations resource: error reports per approach."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from ..evaluation import evaluate_fixed_velocity, render_report, train_test_split
from ..models.report import (
    Approach,
    ConstantVelocity,
    ErrorReport,
    LaggedVelocity,
    OracleVelocity,
    ReportFormat,
    VelocitySource,
)
from ..velocity_fit import velocity_series_from_history
from .base import BaseResource

logger = logging.getLogger(__name__)

EXTENSIONS = {ReportFormat.TEXT: "txt", ReportFormat.CSV: "csv", ReportFormat.JSON: "json"}


class Evaluations(BaseResource):
    """Resource for evaluating fixed-velocity friction on the test split."""

    def source(
        self, pipe_id: str, approach: Union[Approach, str], v_c: Optional[float] = None
    ) -> VelocitySource:
        """
        Velocity source of one approach for one pipe.

        Approach A uses ``v_c`` when given and fits it otherwise. Approach B looks up the lagged
        velocity in the full history so the start of the test range can reach into training data.
        """
        study = self._study
        approach = Approach(approach)
        if approach is Approach.CONSTANT:
            return ConstantVelocity(v_c=study.fits.fit(pipe_id) if v_c is None else v_c)
        if approach is Approach.LAGGED:
            series = velocity_series_from_history(
                study.history(pipe_id), study.pipe_spec(pipe_id), study.gas_spec(pipe_id)
            )
            return LaggedVelocity(
                series=series, lag=study.config.lag, min_velocity=study.config.min_velocity
            )
        return OracleVelocity()

    def evaluate(
        self, pipe_id: str, approach: Union[Approach, str], v_c: Optional[float] = None
    ) -> ErrorReport:
        study = self._study
        _, test = train_test_split(study.history(pipe_id), study.split(pipe_id))
        return evaluate_fixed_velocity(
            test,
            self.source(pipe_id, approach, v_c),
            study.pipe_spec(pipe_id),
            study.gas_spec(pipe_id),
        )

    def run(
        self,
        approaches: Optional[Sequence[Union[Approach, str]]] = None,
        fitted: Optional[Dict[str, float]] = None,
    ) -> Dict[str, List[ErrorReport]]:
        """
        Evaluate every pipe for each approach.

        Args:
            approaches: Approaches to run; defaults to the configured ones.
            fitted: Constant velocities for approach A. Defaults to the stored ``vc.json`` entries
                whose fit settings still match; other pipes are fitted inline.

        Returns:
            Reports per approach value, each list in config order.
        """
        study = self._study
        selected = [Approach(a) for a in (approaches or study.config.approaches)]
        if Approach.CONSTANT in selected and fitted is None:
            fitted = study.fits.current()
            if fitted is not None:
                logger.info("using stored fitted velocities for %d pipes", len(fitted))
        reports: Dict[str, List[ErrorReport]] = {}
        for approach in selected:
            reports[approach.value] = self._evaluate_all(approach, fitted or {})
        return reports

    def _evaluate_all(self, approach: Approach, fitted: Dict[str, float]) -> List[ErrorReport]:
        def work(pipe_id: str) -> ErrorReport:
            return self.evaluate(pipe_id, approach, fitted.get(pipe_id))

        return self._study.map_pipes(work)

    def save(
        self,
        reports: Dict[str, List[ErrorReport]],
        fmt: Union[ReportFormat, str] = ReportFormat.TEXT,
        output_dir: Optional[Path] = None,
    ) -> List[Path]:
        fmt = ReportFormat(fmt)
        paths = []
        for approach, items in reports.items():
            name = f"report_{approach}.{EXTENSIONS[fmt]}"
            paths.append(self._write(name, render_report(items, fmt), output_dir))
        return paths
