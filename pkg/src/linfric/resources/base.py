"""Base class for study resources."""

from pathlib import Path
from typing import TYPE_CHECKING, Optional

from ..utils.files import atomic_write_text

if TYPE_CHECKING:
    from ..study import PipelineStudy


class BaseResource:
    """Base class for per-command work bound to a study."""

    def __init__(self, study: "PipelineStudy") -> None:
        self._study = study

    def _output_path(self, name: str, output_dir: Optional[Path] = None) -> Path:
        """Path of an output file inside the study's output directory."""
        return Path(output_dir or self._study.output_dir) / name

    def _write(self, name: str, text: str, output_dir: Optional[Path] = None) -> Path:
        return atomic_write_text(self._output_path(name, output_dir), text)
