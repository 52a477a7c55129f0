"""
Run Outputs
===========

Single writer for one run directory: CSV tables with a fixed column
layout, the run manifest and the error record.

CSV bodies depend only on config and seed. Timestamps and run ids live
in the manifest, never in a table.

Author: wavepath Team
Version: 1.0.0
"""

import hashlib
import platform
import sys
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from shared.contracts.scenario import ScenarioConfig
from shared.schemas import TABLE_COLUMNS, Command, ErrorRecord, OutputFile, RunManifest
from wavepath.config import settings
from wavepath.errors import WavepathError
from wavepath.logging import get_logger

logger = get_logger(__name__)

_VERSIONED = ("numpy", "scipy", "pandas", "pydantic", "pydantic-settings", "structlog")


def package_versions() -> Dict[str, str]:
    versions = {"python": platform.python_version(), "wavepath": settings.app_version}
    for name in _VERSIONED:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def csv_body(table: str, rows: Sequence[Mapping[str, Any]]) -> str:
    """CSV text of rows in the documented column order."""
    columns = TABLE_COLUMNS[table]
    frame = pd.DataFrame(list(rows), columns=columns)
    return frame.to_csv(index=False, float_format=settings.csv_float_format, lineterminator="\n")


class RunWriter:
    """Writes every artifact of one command run into out_dir, in call order."""

    def __init__(self, out_dir: Path, command: Command, run_id: str):
        self.out_dir = Path(out_dir)
        self.command = command
        self.run_id = run_id
        self.outputs: List[OutputFile] = []
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def write_table(self, table: str, rows: Sequence[Mapping[str, Any]]) -> Path:
        body = csv_body(table, rows)
        path = self.out_dir / f"{table}.csv"
        path.write_text(body, encoding="utf-8")
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        self.outputs.append(OutputFile(name=table, path=path.name, rows=len(rows), sha256=digest))
        logger.debug("table_written", table=table, rows=len(rows), sha256=digest[:12])
        return path

    def write_manifest(
        self,
        config: ScenarioConfig,
        threads: int,
        tolerance_scale: float,
        success: bool,
        summary: Optional[Dict[str, Any]] = None,
    ) -> Path:
        manifest = RunManifest(
            run_id=self.run_id,
            command=self.command,
            success=success,
            created_at=datetime.now(timezone.utc).isoformat(),
            seed=config.seed,
            threads=threads,
            tolerance_scale=tolerance_scale,
            config=config.echo(),
            tolerances={**config.tolerances.model_dump(mode="json"),
                        "window_scale": settings.window_scale,
                        "recurrence_radius_scale": settings.recurrence_radius_scale,
                        "ermakov_residual_tolerance": settings.ermakov_residual_tolerance,
                        "amplitude_growth_warning": settings.amplitude_growth_warning,
                        "csv_float_format": settings.csv_float_format},
            versions=package_versions(),
            outputs=self.outputs,
            summary=_jsonable(summary or {}),
        )
        path = self.out_dir / "manifest.json"
        path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
        return path


def error_record(error: Exception, exit_code: int, command: Optional[str] = None,
                 run_id: Optional[str] = None) -> ErrorRecord:
    if isinstance(error, WavepathError):
        payload = error.to_dict()
        return ErrorRecord(error=payload["error"], message=payload["message"],
                           details=_jsonable(payload["details"]), run_id=run_id,
                           command=command, exit_code=exit_code)
    return ErrorRecord(error="internal_error", message=str(error),
                       details={"type": type(error).__name__}, run_id=run_id,
                       command=command, exit_code=exit_code)


def write_error(record: ErrorRecord, out_dir: Optional[Path] = None) -> None:
    """Print the record to stderr and, when possible, write error.json."""
    text = record.model_dump_json(indent=2)
    print(text, file=sys.stderr)
    if out_dir is None:
        return
    try:
        Path(out_dir).mkdir(parents=True, exist_ok=True)
        (Path(out_dir) / "error.json").write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        logger.error("error_record_not_written", out_dir=str(out_dir), reason=str(exc))
