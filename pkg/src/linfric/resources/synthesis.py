"""Synthesis resource: history CSV export."""

import logging
from pathlib import Path
from typing import List, Optional

from ..history import write_history_csv
from .base import BaseResource

logger = logging.getLogger(__name__)


class Synthesis(BaseResource):
    """Resource for writing the histories of a study as CSV files."""

    def export(self, pipe_id: str, output_dir: Optional[Path] = None) -> Path:
        path = write_history_csv(
            self._study.history(pipe_id), self._output_path(f"{pipe_id}.csv", output_dir)
        )
        logger.info("wrote history of %s to %s", pipe_id, path)
        return path

    def run(self, output_dir: Optional[Path] = None) -> List[Path]:
        """Write ``<pipe_id>.csv`` for every pipe, in config order."""
        return self._study.map_pipes(lambda pipe_id: self.export(pipe_id, output_dir))
