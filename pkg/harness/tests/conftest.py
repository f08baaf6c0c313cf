"""Session fixtures: datasets are produced through the generator CLI only."""

from __future__ import annotations

import os
import subprocess
import sys
from pathlib import Path

import pytest


def generate_datasets(out_dir: Path, *args: str) -> None:
    env = dict(os.environ)
    env.pop("PATHLAP_SEED", None)
    result = subprocess.run(
        [sys.executable, "-m", "pathlap.cli", "generate", "--out", str(out_dir), *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=3600,
    )
    assert result.returncode == 0, result.stderr


@pytest.fixture(scope="session")
def small_pair_dir(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("small")
    generate_datasets(
        out, "--model", "ba", "--n", "20", "--case", "base",
        "--train", "80", "--test", "30", "--seed", "31",
    )
    return out
