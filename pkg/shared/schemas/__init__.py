"""
wavepath Shared Schemas Package
===============================

Output contracts of wavepath runs:
    - TABLE_COLUMNS: column layout of every CSV table
    - RunManifest: config echo, tolerances, versions and table hashes
    - ErrorRecord: machine-readable failure record

Author: wavepath Team
Version: 1.0.0
"""

from shared.schemas.outputs import (
    TABLE_COLUMNS,
    Command,
    ErrorRecord,
    OutputFile,
    RunManifest,
)

__all__ = [
    "TABLE_COLUMNS",
    "Command",
    "ErrorRecord",
    "OutputFile",
    "RunManifest",
]
