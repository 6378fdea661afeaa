"""
Shared plumbing for command implementations.

Each ``run_<command>(args)`` resolves a :class:`RunConfig` from ``--config`` and the
flags, calls the library, and hands the verdict and result to :func:`emit`.
"""

import sys
from pathlib import Path
from typing import Any

from ..config import RunConfig, build_run_config, cli_overrides, load_config_file
from ..errors import ConfigError
from ..numerics import QuadratureRule
from ..reports import INCONCLUSIVE, build_report, exit_code_for, write_report
from ..utils import (
    format_number,
    format_rows,
    print_header,
    print_info,
    print_success,
    print_warning,
)


def load_run_config(args, command: str) -> RunConfig:
    config_path = getattr(args, "config", None)
    file_data = load_config_file(Path(config_path)) if config_path else {}
    return build_run_config(command, file_data, cli_overrides(args))


def require(config: RunConfig, *names: str) -> list[Any]:
    """Values of the named inputs, failing with the flag to pass when any is missing."""
    values = []
    missing = []
    for name in names:
        value = getattr(config.inputs, name)
        if value is None:
            missing.append(f"--{name.replace('_', '-')}")
        values.append(value)
    if missing:
        raise ConfigError(
            f"Command {config.command!r} needs {', '.join(missing)} (flag or inputs in the run file)"
        )
    return values


def quadrature_rule(config: RunConfig) -> QuadratureRule:
    return QuadratureRule(config.numerics.quadrature)


def criterion_rows(*reports) -> list[dict[str, Any]]:
    """``k, r, product`` evidence rows for one or more criterion reports."""
    rows = []
    for report in reports:
        for entry in report.entries:
            for r, product in zip(entry.evidence_r.tolist(), entry.evidence_product.tolist()):
                rows.append({"criterion": report.kind, "k": entry.k, "r": r, "product": product})
    return rows


def emit(
    args,
    config: RunConfig,
    verdict: str,
    result: dict[str, Any],
    rows: list[dict[str, Any]] | None = None,
    summary: list[tuple[str, Any]] | None = None,
    table: bool = False,
) -> int:
    """Validate and write the report, print the stderr summary, return the exit status.

    With ``table=True`` the rows (one per ladder rung) are also shown in the summary.
    """
    report = build_report(config, verdict, result)
    path = write_report(report, config, rows)

    if not getattr(args, "quiet", False):
        print_header(f"volsplit {config.command}")
        for label, value in summary or []:
            shown = format_number(value) if isinstance(value, float) else value
            print_info(f"{label}: {shown}")
        if table and rows:
            print(format_rows(rows), file=sys.stderr)
        if path is not None:
            print_info(f"Report written to {path}")
        if verdict == INCONCLUSIVE:
            print_warning(f"Verdict: {verdict}")
        else:
            print_success(f"Verdict: {verdict}")
    return exit_code_for(verdict)
