"""
Terminal output and logging helpers for the volsplit CLI.

Reports go to stdout (or a file); everything printed here goes to stderr.
"""

import logging
import math
import sys
from typing import Any

from .config import env_log_level


class Colors:
    """ANSI codes for the stderr summary, blanked when stderr is not a terminal."""

    RESET = "\033[0m"
    BOLD = "\033[1m"
    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    BLUE = "\033[34m"

    @classmethod
    def disable(cls):
        for name in ("RESET", "BOLD", "RED", "GREEN", "YELLOW", "BLUE"):
            setattr(cls, name, "")


if not sys.stderr.isatty():
    Colors.disable()


LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


def configure_logging(verbosity: int = 0) -> None:
    """Configure root logging once for a CLI run.

    WARNING by default, INFO with ``-v``, DEBUG with ``-vv``; ``VOLSPLIT_LOG_LEVEL``
    overrides the flag.
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    override = env_log_level()
    if override:
        level = getattr(logging, override.upper(), level)
    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
        stream=sys.stderr,
        force=True,
    )


def print_success(message: str):
    print(f"{Colors.GREEN}✓{Colors.RESET} {message}", file=sys.stderr)


def print_error(message: str):
    print(f"{Colors.RED}✗{Colors.RESET} {message}", file=sys.stderr)


def print_warning(message: str):
    print(f"{Colors.YELLOW}!{Colors.RESET} {message}", file=sys.stderr)


def print_info(message: str):
    print(f"{Colors.BLUE}i{Colors.RESET} {message}", file=sys.stderr)


def print_header(message: str):
    print(f"\n{Colors.BOLD}{message}{Colors.RESET}", file=sys.stderr)


def format_number(value: float | None, digits: int = 6) -> str:
    if value is None:
        return "-"
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return f"{value:.{digits}g}"


def format_rows(rows: list[dict[str, Any]], max_rows: int = 24) -> str:
    """
    Format report rows as an aligned text table.

    Columns are the union of the row keys in first-seen order; floats go through
    :func:`format_number` and missing cells show as ``-``. Longer inputs keep the
    first ``max_rows`` rows and end with an elision line.
    """
    if not rows:
        return ""

    columns: list[str] = []
    for row in rows:
        columns.extend(k for k in row if k not in columns)

    def cell(value: Any) -> str:
        return format_number(value) if isinstance(value, float) or value is None else str(value)

    shown = rows[:max_rows]
    body = [[cell(row.get(c)) for c in columns] for row in shown]
    widths = [max(len(c), *(len(line[i]) for line in body)) for i, c in enumerate(columns)]

    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(line, widths)) for line in body)
    if len(rows) > max_rows:
        lines.append(f"... {len(rows) - max_rows} more rows")
    return "\n".join(lines)
