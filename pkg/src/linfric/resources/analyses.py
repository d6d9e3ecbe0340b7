"""Analyses resource: velocity distributions and change curves."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from ..evaluation import render_table
from ..models.report import PipeAnalysis, ReportFormat
from ..velocity_fit import (
    percentile_spread_relative_error,
    summarize_history,
    velocity_cdf,
    velocity_change_curve,
    velocity_series_from_history,
)
from .base import BaseResource

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = [
    "pipe",
    "spread_ratio",
    "mean_abs_velocity_mps",
    "p10_mps",
    "p90_mps",
    "main_direction_share",
    "fraction_below_min_velocity",
    "avg_pressure_bar",
    "n_samples",
    "n_gaps",
]


def _frame_csv(frame: pd.DataFrame) -> str:
    text: str = frame.to_csv(index=False, lineterminator="\n", float_format="%.10g")
    return text


class Analyses(BaseResource):
    """Resource for the velocity statistics of whole histories."""

    def analyze(self, pipe_id: str) -> PipeAnalysis:
        study = self._study
        config = study.config
        history = study.history(pipe_id)
        pipe, gas = study.pipe_spec(pipe_id), study.gas_spec(pipe_id)

        series = velocity_series_from_history(history, pipe, gas)
        distribution = velocity_cdf(series)
        curve = velocity_change_curve(
            series,
            max_horizon=config.change_max_horizon,
            min_velocity=config.min_velocity,
            horizon_step=config.change_horizon_step_s,
        )
        analysis = PipeAnalysis(
            pipe_id=pipe_id,
            summary=summarize_history(history, pipe, gas, config.min_velocity),
            distribution=distribution,
            curve=curve,
            p10=distribution.percentile(10),
            p90=distribution.percentile(90),
            spread_ratio=percentile_spread_relative_error(distribution),
        )
        logger.info("%s: percentile spread ratio %.3f", pipe_id, analysis.spread_ratio)
        return analysis

    def run(self) -> List[PipeAnalysis]:
        return self._study.map_pipes(self.analyze)

    @staticmethod
    def summary_rows(analyses: List[PipeAnalysis]) -> List[Dict[str, Any]]:
        return [
            {
                "pipe": a.pipe_id,
                "spread_ratio": a.spread_ratio,
                "mean_abs_velocity_mps": a.summary.avg_abs_velocity,
                "p10_mps": a.p10,
                "p90_mps": a.p90,
                "main_direction_share": a.summary.main_direction_share,
                "fraction_below_min_velocity": a.summary.fraction_below_min_velocity,
                "avg_pressure_bar": a.summary.avg_pressure_bar,
                "n_samples": a.summary.n_samples,
                "n_gaps": a.summary.n_gaps,
            }
            for a in analyses
        ]

    def render(
        self, analyses: List[PipeAnalysis], fmt: Union[ReportFormat, str] = ReportFormat.TEXT
    ) -> str:
        return render_table(self.summary_rows(analyses), SUMMARY_COLUMNS, fmt)

    def save(self, analyses: List[PipeAnalysis], output_dir: Optional[Path] = None) -> List[Path]:
        """Write ``cdf_<pipe>.csv``, ``change_<pipe>.csv`` and ``summary.csv``."""
        paths = []
        for analysis in analyses:
            cdf = pd.DataFrame(
                analysis.distribution.cumulative_table(),
                columns=["value", "cumulative_fraction"],
            )
            paths.append(self._write(f"cdf_{analysis.pipe_id}.csv", _frame_csv(cdf), output_dir))
            change = pd.DataFrame(
                {
                    "horizon_s": analysis.curve.horizons,
                    "mean_abs_change_mps": analysis.curve.mean_abs_change,
                    "mean_rel_change": analysis.curve.mean_rel_change,
                }
            )
            name = f"change_{analysis.pipe_id}.csv"
            paths.append(self._write(name, _frame_csv(change), output_dir))
        summary = pd.DataFrame(self.summary_rows(analyses), columns=SUMMARY_COLUMNS)
        paths.append(self._write("summary.csv", _frame_csv(summary), output_dir))
        return paths
