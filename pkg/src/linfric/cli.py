"""Command-line entry point: ``linfric fit|evaluate|analyze|synth``."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

from .config import config_from_dict
from .evaluation import render_report
from .exceptions import ConfigError, LinfricError
from .models.report import ReportFormat
from .study import PipelineStudy
from .synthetic import PIPE_PRESETS
from .utils.logs import configure_logging

logger = logging.getLogger(__name__)

MAX_SEED = 2**64


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Run config YAML (default: $LINFRIC_CONFIG)")
    common.add_argument("--out", type=Path, help="Output directory (default: $LINFRIC_OUT_DIR)")
    common.add_argument(
        "--format",
        choices=[f.value for f in ReportFormat],
        help="Console and report format (default: text)",
    )
    common.add_argument("--lag-hours", type=float, help="Lag of approach B in hours (default 48)")
    common.add_argument(
        "--min-velocity", type=float, help="Low-flow threshold in m/s (default 0.02)"
    )
    common.add_argument("--seed", type=_seed, help="Run seed for synthetic histories")
    common.add_argument("--workers", type=int, help="Pipes processed in parallel (default 1)")
    common.add_argument(
        "--log-level", help="Logging level (default: $LINFRIC_LOG_LEVEL or WARNING)"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="linfric",
        description="Fixed-velocity friction linearization for gas pipelines",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser(
        "fit", parents=[common], help="Fit the least-squares constant velocity of every pipe"
    )

    evaluate = commands.add_parser(
        "evaluate", parents=[common], help="Error reports of the fixed-velocity friction"
    )
    evaluate.add_argument(
        "--approach", action="append", choices=["A", "B"], help="Restrict to an approach"
    )
    evaluate.add_argument(
        "--oracle-velocity",
        action="store_true",
        help="Use each sample's own velocity (zero error; for testing)",
    )

    analyze = commands.add_parser(
        "analyze", parents=[common], help="Velocity distributions and change curves"
    )
    analyze.add_argument(
        "--max-horizon-hours", type=float, help="Change curve length in hours (default 168)"
    )
    analyze.add_argument(
        "--horizon-step", type=int, help="Change curve step in seconds (default: the sample interval)"
    )

    synth = commands.add_parser("synth", parents=[common], help="Write synthetic history CSVs")
    synth.add_argument("--preset", choices=sorted(PIPE_PRESETS), help="Study pipe to imitate")
    synth.add_argument("--pipe-id", help="Pipe id and file stem (default: preset or 'synthetic')")
    synth.add_argument("--length-km", type=float)
    synth.add_argument("--diameter-mm", type=float)
    synth.add_argument("--base-pressure-bar", type=float)
    synth.add_argument("--base-velocity", type=float, help="Mean |v| in m/s")
    synth.add_argument("--amplitude", type=float, help="Daily amplitude, fraction of |v|")
    synth.add_argument("--noise", type=float, help="Noise std, fraction of |v|")
    synth.add_argument("--reversal-probability", type=float, help="Reversals per day")
    synth.add_argument("--return-probability", type=float, help="Returns per day")
    synth.add_argument("--drift", type=float, help="Relative change of |v| per year")
    synth.add_argument("--days", type=float, default=730.0, help="Duration (default 730)")
    synth.add_argument("--interval", type=int, default=180, help="Sample interval in seconds")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "output_dir": args.out,
        "format": args.format,
        "lag_hours": args.lag_hours,
        "min_velocity": args.min_velocity,
        "seed": args.seed,
        "workers": args.workers,
        "change_max_horizon_hours": getattr(args, "max_horizon_hours", None),
        "change_horizon_step_s": getattr(args, "horizon_step", None),
    }


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_fit(args: argparse.Namespace) -> int:
    study = PipelineStudy(args.config, _overrides(args))
    values = study.fits.run()
    study.fits.save(values)
    _emit(study.fits.render(values, study.config.format))
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    study = PipelineStudy(args.config, _overrides(args))
    approaches = ["oracle"] if args.oracle_velocity else args.approach
    reports = study.evaluations.run(approaches)
    study.evaluations.save(reports, study.config.format)
    fmt = ReportFormat(study.config.format)
    for approach, items in reports.items():
        if fmt is ReportFormat.TEXT:
            _emit(f"approach {approach}\n")
        _emit(render_report(items, fmt))
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    study = PipelineStudy(args.config, _overrides(args))
    analyses = study.analyses.run()
    study.analyses.save(analyses)
    _emit(study.analyses.render(analyses, study.config.format))
    if ReportFormat(study.config.format) is ReportFormat.TEXT:
        for analysis in analyses:
            _emit(
                f"{analysis.pipe_id}: (p90 - p10) / 2 / mean = "
                f"{analysis.spread_ratio * 100:.1f} %\n"
            )
    return 0


def _synth_config(args: argparse.Namespace) -> Dict[str, Any]:
    pipe_id = args.pipe_id or args.preset or "synthetic"
    source = {
        "kind": "synthetic",
        "base_pressure_bar": args.base_pressure_bar,
        "base_abs_velocity": args.base_velocity,
        "daily_amplitude": args.amplitude,
        "noise_std": args.noise,
        "reversal_probability": args.reversal_probability,
        "return_probability": args.return_probability,
        "drift": args.drift,
        "duration_days": args.days,
        "sample_interval_s": args.interval,
        "seed": 0 if args.seed is None else args.seed,
    }
    pipe = {
        "pipe_id": pipe_id,
        "preset": args.preset,
        "length_km": args.length_km,
        "diameter_mm": args.diameter_mm,
        "source": {key: value for key, value in source.items() if value is not None},
    }
    return {"pipes": [{key: value for key, value in pipe.items() if value is not None}]}


def cmd_synth(args: argparse.Namespace) -> int:
    if args.config is not None:
        study = PipelineStudy(args.config, _overrides(args))
    else:
        config = config_from_dict(_synth_config(args), overrides=_overrides(args))
        study = PipelineStudy(config)
    for path in study.synthesis.run():
        _emit(f"{path}\n")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "fit": cmd_fit,
    "evaluate": cmd_evaluate,
    "analyze": cmd_analyze,
    "synth": cmd_synth,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else ConfigError.exit_code

    try:
        configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except LinfricError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"linfric: error: {e.message}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"linfric: error: {e}", file=sys.stderr)
        return ConfigError.exit_code


if __name__ == "__main__":
    sys.exit(main())
