"""Shared fixtures for the test suite."""

from pathlib import Path

import numpy as np
import pytest


@pytest.fixture
def rng():
    """Create a seeded generator."""
    return np.random.default_rng(20240601)


@pytest.fixture
def tmp_config(tmp_path):
    """Write key=value config text to a temporary file and return its path."""

    def _write(text: str, name: str = "experiment.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def config_dir():
    """Return the folder of shipped experiment configs."""
    return Path(__file__).resolve().parent.parent / "configs"
