"""Shared fixtures for the volsplit test suite."""

import argparse

import pytest

from volsplit.config import (
    DoublingSettings,
    OperatorSettings,
    QuadratureSettings,
    SupremumSettings,
)
from volsplit.numerics import QuadratureRule


@pytest.fixture
def rule() -> QuadratureRule:
    return QuadratureRule(QuadratureSettings())


@pytest.fixture
def coarse_supremum() -> SupremumSettings:
    """A shorter r-grid for tests that only need the shape of a criterion curve."""
    return SupremumSettings(r_min_log2=-8, r_max_log2=16, points_per_decade=16)


@pytest.fixture
def coarse_doubling() -> DoublingSettings:
    return DoublingSettings(min_length_log2=-4, max_length_log2=12, max_center_log2=12)


@pytest.fixture
def small_operators() -> OperatorSettings:
    return OperatorSettings(grid_size=128, panel_order=8)


@pytest.fixture
def cli_args():
    """Namespace factory mimicking parsed command-line arguments."""

    def make(**kwargs) -> argparse.Namespace:
        defaults = {"config": None, "output": None, "format": None, "quiet": True, "verbose": 0}
        defaults.update(kwargs)
        return argparse.Namespace(**defaults)

    return make
