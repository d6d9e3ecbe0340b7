"""Batch study over the pipes of a run configuration."""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, TypeVar, Union

from .config import CsvSource, PipeEntry, RunConfig, load_config
from .evaluation import default_split
from .gas_physics import DAY
from .history import load_history_csv
from .models.gas import GasSpec, PipeSpec
from .models.history import StateHistory
from .models.report import SplitSpec
from .resources.analyses import Analyses
from .resources.evaluations import Evaluations
from .resources.fits import Fits
from .resources.synthesis import Synthesis
from .synthetic import generate_synthetic_history
from .utils.random import derive_seed

logger = logging.getLogger(__name__)

T = TypeVar("T")


class PipelineStudy:
    """
    Entry point for fitting and evaluating fixed-velocity friction models.

    Args:
      config: A validated ``RunConfig`` or a path to a YAML config. If not provided, the path is
        read from the ``LINFRIC_CONFIG`` environment variable.
      overrides: Top-level config values taking precedence over the file.

    Example
    ```python
      from linfric import PipelineStudy

      study = PipelineStudy("study.yaml")
      reports = study.evaluations.run()
    ```
    """

    def __init__(
        self,
        config: Optional[Union[RunConfig, str, Path]] = None,
        overrides: Optional[Mapping[str, object]] = None,
    ) -> None:
        if isinstance(config, RunConfig):
            self.config = config
        else:
            self.config = load_config(config, overrides)

        self._histories: Dict[str, StateHistory] = {}
        self._lock = threading.Lock()

        # Resources
        self.fits = Fits(self)
        self.evaluations = Evaluations(self)
        self.analyses = Analyses(self)
        self.synthesis = Synthesis(self)

    @property
    def pipe_ids(self) -> List[str]:
        return [entry.pipe_id for entry in self.config.pipes]

    @property
    def output_dir(self) -> Path:
        return self.config.output_dir

    def entry(self, pipe_id: str) -> PipeEntry:
        return self.config.pipe(pipe_id)

    def pipe_spec(self, pipe_id: str) -> PipeSpec:
        return self.entry(pipe_id).to_pipe_spec()

    def gas_spec(self, pipe_id: str) -> GasSpec:
        return self.entry(pipe_id).gas.to_spec()

    def seed_for(self, pipe_id: str) -> int:
        """Generator seed of a synthetic pipe: its own seed, else one derived from the run seed."""
        source = self.entry(pipe_id).source
        if isinstance(source, CsvSource) or source.seed is None:
            return derive_seed(self.config.seed, pipe_id)
        return source.seed

    def history(self, pipe_id: str) -> StateHistory:
        """Full history of a pipe, loaded or generated once per study."""
        with self._lock:
            cached = self._histories.get(pipe_id)
        if cached is not None:
            return cached

        entry = self.entry(pipe_id)
        if isinstance(entry.source, CsvSource):
            history = load_history_csv(
                self.config.resolve(entry.source.path),
                pipe_id=pipe_id,
                sample_interval=entry.source.sample_interval_s,
            )
        else:
            profile = entry.source.to_profile(self.seed_for(pipe_id))
            history = generate_synthetic_history(
                profile, self.pipe_spec(pipe_id), self.gas_spec(pipe_id), pipe_id=pipe_id
            )

        with self._lock:
            return self._histories.setdefault(pipe_id, history)

    def split(self, pipe_id: str) -> SplitSpec:
        if self.config.split is not None:
            return self.config.split.to_spec()
        return default_split(self.history(pipe_id), int(self.config.train_days * DAY))

    def map_pipes(self, work: Callable[[str], T]) -> List[T]:
        """Run ``work`` for every pipe; results keep config order whatever the completion order."""
        if self.config.workers == 1 or len(self.config.pipes) == 1:
            return [work(pipe_id) for pipe_id in self.pipe_ids]
        logger.debug("running %d pipes on %d workers", len(self.pipe_ids), self.config.workers)
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            return list(executor.map(work, self.pipe_ids))
