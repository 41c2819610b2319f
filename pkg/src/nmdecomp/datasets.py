"""Synthetic 4x4 couple tables shipped with the package.

They mimic the shape of decennial census extracts (four education levels,
wives aged 26-35, about 10,000 couples) but are generated, not observed.
"""
from importlib import resources
from pathlib import Path
from typing import List

from .fileio import read_table
from .tables import ContingencyTable

SYNTHETIC_PERIODS = ("1960", "1980", "2000", "2015")


def synthetic_paths() -> List[Path]:
    """Paths of the shipped CSV files, oldest first."""
    root = resources.files("nmdecomp") / "data"
    return [Path(str(root / f"couples_{p}.csv")) for p in SYNTHETIC_PERIODS]


def load_synthetic() -> List[ContingencyTable]:
    """The four synthetic tables, oldest first."""
    return [read_table(p).table for p in synthetic_paths()]
