"""
Report envelopes, schema validation and output writers.

Every command produces one report::

    {"schema_version", "tool", "version", "command", "verdict", "config", "result"}

validated against ``schemas/report-1.0.0.json`` before it is written. JSON has no
infinities, so non-finite floats are written as the strings "inf", "-inf" and
"nan".
"""

import csv
import io
import json
import logging
import math
import sys
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np
from jsonschema import Draft202012Validator

from . import __version__
from .config import RunConfig
from .errors import ConfigError, VolsplitError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1.0.0"
INCONCLUSIVE = "inconclusive"


@lru_cache(maxsize=1)
def load_schema() -> dict[str, Any]:
    schema = resources.files("volsplit").joinpath("schemas").joinpath(f"report-{SCHEMA_VERSION}.json")
    text = schema.read_text(encoding="utf-8")
    return json.loads(text)


def encode_value(value: Any) -> Any:
    """Plain JSON data from report values (numpy scalars and arrays, tuples, non-finite floats)."""
    if isinstance(value, dict):
        return {str(k): encode_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_value(v) for v in value]
    if isinstance(value, np.ndarray):
        return [encode_value(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def build_report(config: RunConfig, verdict: str, result: dict[str, Any]) -> dict[str, Any]:
    """Wrap a command result in the versioned envelope and validate it.

    Raises:
        VolsplitError: the report does not match the schema.
    """
    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": "volsplit",
        "version": __version__,
        "command": config.command,
        "verdict": verdict,
        "config": config.resolved(),
        "result": encode_value(result),
    }
    errors = sorted(Draft202012Validator(load_schema()).iter_errors(report), key=lambda e: str(list(e.path)))
    if errors:
        details = "; ".join(f"{'/'.join(str(p) for p in e.path) or '<root>'}: {e.message}" for e in errors)
        raise VolsplitError(f"Report failed schema validation: {details}")
    return report


def exit_code_for(verdict: str) -> int:
    return 2 if verdict == INCONCLUSIVE else 0


def render_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, allow_nan=False)


def render_csv(rows: list[dict[str, Any]]) -> str:
    """Rows as CSV with the union of keys as header, in first-seen order."""
    fields: list[str] = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: encode_value(v) for k, v in row.items()})
    return buffer.getvalue()


def write_report(
    report: dict[str, Any],
    config: RunConfig,
    rows: list[dict[str, Any]] | None = None,
    stream=None,
) -> Path | None:
    """Write the report as JSON, or its rows as CSV, to the configured path or ``stream``.

    Raises:
        ConfigError: CSV requested for a command without tabular output.
    """
    if config.output.format == "csv":
        if rows is None:
            raise ConfigError(f"Command {config.command!r} has no tabular output; use --format json")
        text = render_csv(rows)
    else:
        text = render_json(report) + "\n"

    if config.output.path is None:
        stream = stream or sys.stdout
        stream.write(text)
        return None
    path = Path(config.output.path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {config.output.format} report to {path}")
    return path
