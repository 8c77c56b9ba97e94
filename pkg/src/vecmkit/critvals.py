"""Loaders for the critical-value tables shipped with the package.

The tables themselves live under ``resources/`` as versioned CSVs with
their sources cited in the file headers.
"""

from __future__ import annotations

import csv
import functools
from importlib import resources

LEVELS = ("1%", "5%", "10%")


def _read_resource(name: str) -> list[dict[str, str]]:
    text = resources.files("vecmkit.resources").joinpath(name).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    return list(csv.DictReader(lines))


@functools.lru_cache(maxsize=None)
def _response_surface(name: str, key_field: str) -> dict[tuple[str, str], tuple[float, ...]]:
    table = {}
    for row in _read_resource(name):
        coeffs = tuple(float(row[c]) for c in ("binf", "b1", "b2", "b3"))
        table[(row[key_field], row["level"])] = coeffs
    return table


def _evaluate_surface(coeffs: tuple[float, ...], nobs: int) -> float:
    binf, b1, b2, b3 = coeffs
    return binf + b1 / nobs + b2 / nobs**2 + b3 / nobs**3


def adf_critical_values(deterministic: str, nobs: int) -> dict[str, float]:
    """Finite-sample Dickey-Fuller critical values for one test spec."""
    table = _response_surface("adf_critical_values.csv", "deterministic")
    if (deterministic, "5%") not in table:
        known = sorted({k for k, _ in table})
        raise ValueError(f"unknown deterministic spec {deterministic!r}; expected one of {known}")
    return {lvl: _evaluate_surface(table[(deterministic, lvl)], nobs) for lvl in LEVELS}


def eg_critical_values(n_vars: int, nobs: int) -> dict[str, float]:
    """Residual-test critical values keyed by relation size."""
    table = _response_surface("eg_critical_values.csv", "n_vars")
    key = str(n_vars)
    if (key, "5%") not in table:
        sizes = sorted({int(k) for k, _ in table})
        raise ValueError(f"no residual-test table for {n_vars} variables (have {sizes})")
    return {lvl: _evaluate_surface(table[(key, lvl)], nobs) for lvl in LEVELS}


@functools.lru_cache(maxsize=None)
def _johansen_table() -> dict[tuple[str, int], dict[str, float]]:
    table: dict[tuple[str, int], dict[str, float]] = {}
    for row in _read_resource("johansen_trace_critical_values.csv"):
        values = {
            lvl: float(row[col])
            for lvl, col in (("90%", "cv90"), ("95%", "cv95"), ("99%", "cv99"))
            if row[col]
        }
        table[(row["table"], int(row["n_minus_r"]))] = values
    return table


def johansen_trace_critical_value(table: str, n_minus_r: int, level: str = "95%") -> float:
    """Trace-test critical value for a given remaining dimension."""
    tbl = _johansen_table()
    key = (table, n_minus_r)
    if key not in tbl:
        dims = sorted(d for t, d in tbl if t == table)
        if not dims:
            names = sorted({t for t, _ in tbl})
            raise ValueError(f"unknown critical-value table {table!r}; expected one of {names}")
        raise ValueError(f"table {table!r} covers dimensions {dims}, not {n_minus_r}")
    if level not in tbl[key]:
        raise ValueError(f"table {table!r} has no {level} column")
    return tbl[key][level]
