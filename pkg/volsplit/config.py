"""Configuration schemas with pydantic-settings and JSON/YAML run files.

Numerical knobs live in :class:`NumericsSettings`, which reads ``VOLSPLIT_``
environment variables (nested with ``__``, e.g. ``VOLSPLIT_QUADRATURE__ORDER=24``).
A :class:`RunConfig` bundles one command, its inputs, the numerics and the output
target; it is what a run file holds and what every report echoes back.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from .errors import ConfigError

logger = logging.getLogger(__name__)

COMMANDS = (
    "check-doubling",
    "hardy",
    "split-criteria",
    "rl-criteria",
    "op-norm",
    "split-experiment",
    "orthopoly",
    "gram",
    "witness",
    "lemma35",
    "multiplier",
    "counterexample",
)

# Alternative names accepted on the command line and in run files
COMMAND_ALIASES = {"constrained-min": "lemma35"}

Command = Literal[
    "check-doubling",
    "hardy",
    "split-criteria",
    "rl-criteria",
    "op-norm",
    "split-experiment",
    "orthopoly",
    "gram",
    "witness",
    "lemma35",
    "multiplier",
    "counterexample",
]


class StrictModel(BaseModel):
    """Base for every config section: unknown keys are errors, instances are immutable."""

    model_config = ConfigDict(extra="forbid", frozen=True)


# =============================================================================
# Numerics
# =============================================================================


class QuadratureSettings(StrictModel):
    """Composite Gauss-Legendre quadrature."""

    order: int = Field(default=20, ge=2, le=64, description="Gauss nodes per panel")
    rtol: float = Field(default=1e-12, gt=0, description="Relative accuracy target")
    grading_levels: int = Field(
        default=40, ge=4, description="Dyadic panels toward 0 on intervals starting at 0"
    )
    max_depth: int = Field(default=48, ge=1, description="Maximum bisection depth per panel")
    max_panels: int = Field(default=200_000, ge=100, description="Refinement budget")
    tail_policy: Literal["geometric", "substitution"] = Field(
        default="geometric", description="Semi-infinite integrals"
    )
    tail_cutoff: float = Field(default=1.0, gt=0, description="Start of the geometric tail")
    tail_rtol: float = Field(
        default=1e-14, gt=0, description="Stop when a tail panel adds less than this fraction"
    )
    max_tail_panels: int = Field(default=400, ge=8)
    divergence_window: int = Field(default=5, ge=2)
    divergence_doublings: int = Field(
        default=24, ge=1, description="Tail panels seen before divergence may be declared"
    )


class RootSettings(StrictModel):
    max_degree: int = Field(default=12, ge=1)
    scan_points: int = Field(default=4096, ge=64)
    bisection_iterations: int = Field(default=200, ge=20)


class SupremumSettings(StrictModel):
    """Log grid in r for the criterion suprema and the infinity rule."""

    r_min_log2: float = -12
    r_max_log2: float = 24
    points_per_decade: int = Field(default=48, ge=4)
    refine_passes: int = Field(default=3, ge=0)
    golden_iterations: int = Field(default=24, ge=4)
    growth_decades: int = Field(default=5, ge=2)
    growth_factor: float = Field(default=1e4, gt=1)
    monotone_rtol: float = Field(default=1e-9, ge=0)
    slow_growth_rtol: float = Field(default=1e-3, ge=0)

    @model_validator(mode="after")
    def _check_range(self) -> "SupremumSettings":
        if self.r_max_log2 <= self.r_min_log2:
            raise ValueError("r_max_log2 must exceed r_min_log2")
        return self


class DoublingSettings(StrictModel):
    """Sampled interval families for the doubling checks."""

    min_length_log2: int = -10
    max_length_log2: int = 20
    max_center_log2: int = 20
    centers_per_octave: int = Field(default=2, ge=1)
    divergence_threshold: float = Field(default=1e6, gt=1)
    growth_doublings: int = Field(default=5, ge=2)
    weak_r_min_log2: int = -10
    weak_r_max_log2: int = 20
    weak_points_per_octave: int = Field(default=2, ge=1)


class OperatorSettings(StrictModel):
    """Grid, norm estimation and ladder for discretized operators."""

    grid_size: int = Field(default=1024, ge=16)
    panel_order: int = Field(default=8, ge=2, le=32)
    grid_min: float = Field(default=2.0**-40, gt=0)
    grid_scale: float | None = Field(
        default=None, gt=0, description="Length scale where panels turn uniform (None: geometric)"
    )
    r_ladder: list[float] = Field(default_factory=lambda: [2.0**k for k in range(4, 11)])
    power_rtol: float = Field(default=1e-10, gt=0)
    power_max_iter: int = Field(default=300, ge=10)
    seed: int = 0
    svd_check_max: int = Field(default=256, ge=0)
    stabilization_rtol: float = Field(default=0.01, gt=0)

    @field_validator("r_ladder")
    @classmethod
    def _ladder_increasing(cls, value: list[float]) -> list[float]:
        if not value or any(r <= 0 for r in value):
            raise ValueError("r_ladder must hold positive truncation points")
        return sorted(value)


class OrthopolySettings(StrictModel):
    max_degree: int = Field(default=8, ge=1, le=12)
    gram_max_degree: int = Field(default=6, ge=1)
    precision_digits: int = Field(default=40, ge=32)
    ladder_min_log2: float = -4
    ladder_max_log2: float = 12
    spacing_fraction: float = Field(default=0.5, gt=0, lt=1)
    beta_start: float = Field(default=0.5, gt=0, lt=1)
    beta_halvings: int = Field(default=30, ge=1)
    markov_grid: int = Field(default=2048, ge=64)
    markov_max_ratio: float = Field(default=100.0, gt=1)


class NumericsSettings(BaseSettings):
    """All numerical settings; environment variables override defaults."""

    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    roots: RootSettings = Field(default_factory=RootSettings)
    supremum: SupremumSettings = Field(default_factory=SupremumSettings)
    doubling: DoublingSettings = Field(default_factory=DoublingSettings)
    operators: OperatorSettings = Field(default_factory=OperatorSettings)
    orthopoly: OrthopolySettings = Field(default_factory=OrthopolySettings)

    model_config = SettingsConfigDict(
        env_prefix="VOLSPLIT_",
        env_nested_delimiter="__",
        extra="forbid",
        frozen=True,
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # Priority: run file and flags (init) > env vars > defaults
        return (init_settings, env_settings)


# =============================================================================
# Run configuration
# =============================================================================


class InputsConfig(StrictModel):
    """Expressions and parameters for one command; each command reads the fields it needs."""

    u: str | None = None
    v: str | None = None
    weight: str | None = Field(default=None, description="Weight for doubling and orthopoly")
    w: str | None = Field(default=None, description="Doubling weight for the mass set")
    phi: str | None = None
    kernel: list[str] | None = Field(default=None, description="Coefficients a_0..a_n")
    alpha: float | None = Field(default=None, ge=1)
    delta: float = Field(default=0.0, ge=0)
    r: float | None = Field(default=None, gt=0)
    n: int | None = Field(default=None, ge=0)
    l: int | None = Field(default=None, ge=1)  # noqa: E741
    m: int | None = Field(default=None, ge=0)
    beta: float | None = None
    gamma: float | None = None
    a: float | None = None
    pairs: list[tuple[tuple[float, float], tuple[float, float]]] | None = None
    r_ladder: list[float] | None = None
    R: float | None = Field(default=None, gt=0)
    N: int | None = Field(default=None, ge=16)
    adjoint: bool = False
    weak: bool = False
    closure: bool = False


class OutputConfig(StrictModel):
    path: str | None = Field(default=None, description="Report file (stdout when unset)")
    format: Literal["json", "csv"] = "json"


class RunConfig(StrictModel):
    """One command invocation, as stored in a run file and echoed in reports."""

    command: Command
    inputs: InputsConfig = Field(default_factory=InputsConfig)
    numerics: NumericsSettings = Field(default_factory=NumericsSettings)
    output: OutputConfig = Field(default_factory=OutputConfig)

    def resolved(self) -> dict[str, Any]:
        """Fully-defaulted config as plain JSON data."""
        return self.model_dump(mode="json")


def load_config_file(path: Path) -> dict[str, Any]:
    """Read a run file. JSON is the documented format; YAML is accepted as a superset."""
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    try:
        with path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Config parse error in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a mapping at the top level")
    return data


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def cli_overrides(args) -> dict[str, Any]:
    """Collect run-config overrides from parsed command-line arguments."""
    inputs: dict[str, Any] = {}
    for name in InputsConfig.model_fields:
        value = getattr(args, name, None)
        if value is None or value is False:
            continue
        inputs[name] = value
    if inputs.get("pairs"):
        inputs["pairs"] = [json.loads(p) if isinstance(p, str) else p for p in inputs["pairs"]]

    numerics: dict[str, Any] = {}
    if getattr(args, "grid_size", None) is not None:
        numerics.setdefault("operators", {})["grid_size"] = args.grid_size
    if getattr(args, "grid_scale", None) is not None:
        numerics.setdefault("operators", {})["grid_scale"] = args.grid_scale
    if getattr(args, "quad_order", None) is not None:
        numerics.setdefault("quadrature", {})["order"] = args.quad_order
    if getattr(args, "tail_policy", None):
        numerics.setdefault("quadrature", {})["tail_policy"] = args.tail_policy

    output: dict[str, Any] = {}
    if getattr(args, "output", None):
        output["path"] = args.output
    if getattr(args, "format", None):
        output["format"] = args.format

    overrides: dict[str, Any] = {}
    if inputs:
        overrides["inputs"] = inputs
    if numerics:
        overrides["numerics"] = numerics
    if output:
        overrides["output"] = output
    return overrides


def build_run_config(
    command: str,
    file_data: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
) -> RunConfig:
    """Validate a run config. Flags override the file; the subcommand wins over ``command``."""
    data = _merge(file_data or {}, overrides or {})
    command = COMMAND_ALIASES.get(command, command)
    file_command = data.get("command")
    if isinstance(file_command, str):
        file_command = COMMAND_ALIASES.get(file_command, file_command)
    if file_command is not None and file_command != command:
        logger.warning(f"Run file names command {file_command!r}; running {command!r}")
    data["command"] = command
    try:
        # Built explicitly so that VOLSPLIT_* environment overrides apply under the run file
        data["numerics"] = NumericsSettings(**(data.get("numerics") or {}))
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"Invalid configuration: {problems}") from e


def env_log_level() -> str | None:
    return os.environ.get("VOLSPLIT_LOG_LEVEL")
