"""Shared fixtures: the bundled data snapshot and panel builders."""

from pathlib import Path

import numpy as np
import pytest

from vecmkit.dataio import Panel, QuarterIndex, SeriesSpec, load_panel

SNAPSHOT_DIR = Path(__file__).parent / "data" / "snapshot"

SNAPSHOT_SPECS = [
    SeriesSpec("gdp", "GDPC1", transform="chained-dollars-note"),
    SeriesSpec("disc_rate", "INTDSRUSM193N"),
    SeriesSpec("cpi", "CPIAUCSL"),
    SeriesSpec("us_pop", "POPTHM"),
]


def quarters(n: int, start_year: int = 1950, start_quarter: int = 1) -> tuple[QuarterIndex, ...]:
    out = [QuarterIndex(start_year, start_quarter)]
    while len(out) < n:
        out.append(out[-1].next())
    return tuple(out)


def make_panel(columns: dict[str, np.ndarray], start_year: int = 1950) -> Panel:
    names = tuple(columns)
    values = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    return Panel(quarters(values.shape[0], start_year), names, values)


@pytest.fixture(scope="session")
def snapshot_panel() -> Panel:
    return load_panel(SNAPSHOT_DIR, SNAPSHOT_SPECS)
