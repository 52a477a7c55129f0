"""
wavepath Command Line
=====================

    python -m wavepath.cli <command> --config <path|name> --out <dir>
        [--seed N] [--threads N] [--tolerance-scale F]

Exit codes: 0 success, 2 configuration error, 1 any other failure. On
failure an error record is printed to stderr and written to
<out>/error.json.

Author: wavepath Team
Version: 1.0.0
"""

import argparse
from pathlib import Path
from typing import List, Optional

from shared.schemas import Command
from wavepath.cli.commands import COMMANDS
from wavepath.cli.loader import apply_overrides, load_config, packaged_scenarios
from wavepath.cli.output import RunWriter, error_record, write_error
from wavepath.config import override_settings, settings
from wavepath.errors import ConfigError
from wavepath.logging import get_logger, set_command, set_run_id, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavepath",
        description="Guiding, Bohmian and weak-measurement trajectories of a 2D time-dependent oscillator.",
    )
    parser.add_argument("command", choices=[c.value for c in Command], help="Command to run")
    parser.add_argument("--config", required=True,
                        help=f"Scenario JSON file or packaged name ({', '.join(packaged_scenarios())})")
    parser.add_argument("--out", required=True, type=Path, help="Output directory")
    parser.add_argument("--seed", type=int, default=None, help="Override the scenario seed (u64)")
    parser.add_argument("--threads", type=int, default=settings.threads, help="Worker threads")
    parser.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="Multiply rtol and atol by this factor")
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level")
    return parser


def run(
    command: Command,
    config_source: str,
    out_dir: Path,
    seed: Optional[int] = None,
    threads: int = 1,
    tolerance_scale: float = 1.0,
) -> int:
    """Run one command end to end and return the process exit code."""
    run_id = set_run_id()
    set_command(command.value)
    try:
        if threads < 1:
            raise ConfigError("threads must be >= 1", {"threads": threads})
        config = apply_overrides(load_config(config_source), seed, tolerance_scale)
    except ConfigError as exc:
        logger.error("command_failed", error=exc.code, message=exc.message)
        write_error(error_record(exc, EXIT_CONFIG, command.value, run_id), out_dir)
        return EXIT_CONFIG

    logger.info("command_started", scenario=config.name, seed=config.seed, threads=threads)
    try:
        with override_settings(**config.tolerances.model_dump(), threads=threads):
            result = COMMANDS[command](config, threads)
            writer = RunWriter(out_dir, command, run_id)
            for name, rows in result.tables.items():
                writer.write_table(name, rows)
            writer.write_manifest(config, threads, tolerance_scale, result.success, result.summary)
    except ConfigError as exc:
        logger.error("command_failed", error=exc.code, message=exc.message)
        write_error(error_record(exc, EXIT_CONFIG, command.value, run_id), out_dir)
        return EXIT_CONFIG
    except Exception as exc:
        code = getattr(exc, "code", "internal_error")
        logger.error("command_failed", error=code, message=str(exc), exc_info=True)
        write_error(error_record(exc, EXIT_FAILURE, command.value, run_id), out_dir)
        return EXIT_FAILURE

    logger.info("command_completed", tables=sorted(result.tables), out=str(out_dir))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(level=args.log_level, json_output=settings.log_json)
    return run(
        Command(args.command),
        args.config,
        args.out,
        seed=args.seed,
        threads=args.threads,
        tolerance_scale=args.tolerance_scale,
    )
