"""
wavepath CLI Package
====================

Scenario loading, command implementations and the run-directory writer
behind `python -m wavepath.cli`.

Author: wavepath Team
Version: 1.0.0
"""

from .commands import COMMANDS, CommandResult, build_postselection, build_state
from .loader import apply_overrides, load_config, packaged_scenarios, parse_config
from .main import build_parser, main, run
from .output import RunWriter, csv_body, error_record, write_error

__all__ = [
    "COMMANDS",
    "CommandResult",
    "RunWriter",
    "apply_overrides",
    "build_parser",
    "build_postselection",
    "build_state",
    "csv_body",
    "error_record",
    "load_config",
    "main",
    "packaged_scenarios",
    "parse_config",
    "run",
    "write_error",
]
