"""Quarterly panel ingestion and serialization.

Loads per-series CSV snapshots (one value column per file, FRED download
layout) into a single aligned panel, and writes panels and summary tables
back out as CSV or JSON records.  The calendar is strictly quarterly; the
loader rejects gaps, duplicates and missing values instead of imputing.
"""

from __future__ import annotations

import csv
import functools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, ParseError

_MONTH_TO_QUARTER = {m: (m - 1) // 3 + 1 for m in range(1, 13)}


@functools.total_ordering
@dataclass(frozen=True)
class QuarterIndex:
    """A calendar quarter, ordered chronologically."""

    year: int
    quarter: int

    def __post_init__(self):
        if self.quarter not in (1, 2, 3, 4):
            raise ValueError(f"quarter must be in 1..4, got {self.quarter}")

    def __lt__(self, other: "QuarterIndex") -> bool:
        return (self.year, self.quarter) < (other.year, other.quarter)

    def next(self) -> "QuarterIndex":
        if self.quarter == 4:
            return QuarterIndex(self.year + 1, 1)
        return QuarterIndex(self.year, self.quarter + 1)

    def __str__(self) -> str:
        return f"{self.year}Q{self.quarter}"


def parse_quarter(text: str) -> QuarterIndex:
    """Parse ``YYYY-MM-DD`` or compact ``YYYYQn`` into a QuarterIndex.

    Months 1-3 map to Q1, 4-6 to Q2, 7-9 to Q3, 10-12 to Q4.
    """
    token = text.strip()
    if not token:
        raise ParseError("empty date token")
    compact = token.upper()
    if "Q" in compact:
        year_part, _, q_part = compact.partition("Q")
        try:
            year, quarter = int(year_part), int(q_part)
        except ValueError:
            raise ParseError(f"malformed quarter token {text!r}") from None
        if quarter not in (1, 2, 3, 4):
            raise ParseError(f"quarter out of range in {text!r}")
        return QuarterIndex(year, quarter)
    parts = token.split("-")
    if len(parts) != 3:
        raise ParseError(f"malformed date token {text!r}")
    try:
        year, month, day = (int(p) for p in parts)
    except ValueError:
        raise ParseError(f"malformed date token {text!r}") from None
    if not 1 <= month <= 12:
        raise ParseError(f"month out of range in {text!r}")
    if not 1 <= day <= 31:
        raise ParseError(f"day out of range in {text!r}")
    return QuarterIndex(year, _MONTH_TO_QUARTER[month])


def quarter_range(start: QuarterIndex, end: QuarterIndex) -> list[QuarterIndex]:
    """All quarters from start to end inclusive."""
    if end < start:
        raise ValueError(f"range end {end} precedes start {start}")
    out = [start]
    while out[-1] < end:
        out.append(out[-1].next())
    return out


@dataclass(frozen=True)
class SeriesSpec:
    """How to pull one variable out of a snapshot directory.

    ``name`` doubles as the file stem (``<name>.csv``); ``source_column``
    is the value column inside that file.  ``transform`` is metadata only
    (e.g. a chained-dollars note) and has no computational effect.
    """

    name: str
    source_column: str
    transform: str = "none"


@dataclass(frozen=True)
class Panel:
    """Aligned multivariate quarterly series.

    Column order is significant: it fixes the Cholesky ordering used by
    the impulse-response and variance-decomposition code downstream.
    """

    index: tuple[QuarterIndex, ...]
    names: tuple[str, ...]
    values: np.ndarray = field(repr=False)  # T x p, float64

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "names", tuple(self.names))
        if values.ndim != 2:
            raise ValueError("panel values must be 2-dimensional")
        if values.shape != (len(self.index), len(self.names)):
            raise ValueError(
                f"panel shape {values.shape} does not match index length "
                f"{len(self.index)} and {len(self.names)} variables"
            )
        if len(set(self.names)) != len(self.names):
            raise ValueError("panel variable names must be unique")
        if np.isnan(values).any():
            raise DataError("panel contains missing values")
        for prev, cur in zip(self.index, self.index[1:]):
            if cur != prev.next():
                raise DataError(f"quarterly index gap between {prev} and {cur}")

    @property
    def nobs(self) -> int:
        return len(self.index)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def subset(self, start: QuarterIndex | None = None, end: QuarterIndex | None = None) -> "Panel":
        """Restrict the sample span, inclusive on both ends."""
        lo = 0 if start is None else next(
            (i for i, q in enumerate(self.index) if not q < start), self.nobs
        )
        hi = self.nobs if end is None else next(
            (i for i, q in enumerate(self.index) if end < q), self.nobs
        )
        if hi <= lo:
            raise DataError(f"empty sample span {start}..{end}")
        return Panel(self.index[lo:hi], self.names, self.values[lo:hi])

    def reorder(self, names: Sequence[str]) -> "Panel":
        """Return a panel with columns permuted into the given order."""
        missing = [n for n in names if n not in self.names]
        if missing:
            raise DataError(f"unknown panel variables: {', '.join(missing)}")
        cols = [self.names.index(n) for n in names]
        return Panel(self.index, tuple(names), self.values[:, cols])


def _read_series_csv(path: Path, value_column: str, date_column: str) -> dict[QuarterIndex, float]:
    """One snapshot file -> quarter-keyed values, with hard validation."""
    if not path.exists():
        raise DataError(f"snapshot file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (date_column, value_column):
            if col not in header:
                raise DataError(f"{path}: missing column {col!r} (header: {header})")
        out: dict[QuarterIndex, float] = {}
        for line_no, row in enumerate(reader, start=2):
            try:
                quarter = parse_quarter(row[date_column])
            except ParseError as exc:
                raise DataError(f"{path}:{line_no}: {exc}") from exc
            raw = (row[value_column] or "").strip()
            try:
                value = float(raw)
            except ValueError:
                raise DataError(
                    f"{path}:{line_no}: unparseable value {raw!r} in column {value_column!r}"
                ) from None
            if quarter in out:
                raise DataError(f"{path}:{line_no}: duplicate quarter {quarter}")
            out[quarter] = value
    if not out:
        raise DataError(f"{path}: no data rows")
    return out


def load_panel(path: str | Path, specs: Sequence[SeriesSpec], date_column: str = "DATE") -> Panel:
    """Inner-join per-series CSVs on the quarterly calendar.

    ``path`` is a directory holding one ``<spec.name>.csv`` per spec.  The
    result spans the maximal common range; any gap inside a source file
    surfaces as a load error rather than being bridged.
    """
    directory = Path(path)
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise DataError(f"duplicate series names in specs: {names}")
    if not specs:
        raise DataError("no series specified")

    per_series: list[dict[QuarterIndex, float]] = []
    for spec in specs:
        series = _read_series_csv(directory / f"{spec.name}.csv", spec.source_column, date_column)
        quarters = sorted(series)
        for prev, cur in zip(quarters, quarters[1:]):
            if cur != prev.next():
                raise DataError(
                    f"{directory / (spec.name + '.csv')}: gap at {prev.next()} "
                    f"(between {prev} and {cur})"
                )
        per_series.append(series)

    start = max(min(s) for s in per_series)
    end = min(max(s) for s in per_series)
    if end < start:
        raise DataError("empty intersection: source files have disjoint date ranges")
    index = quarter_range(start, end)
    values = np.empty((len(index), len(specs)))
    for j, series in enumerate(per_series):
        values[:, j] = [series[q] for q in index]
    return Panel(tuple(index), tuple(names), values)


@dataclass(frozen=True)
class SummaryTable:
    """Per-variable moments for level and first-differenced series."""

    rows: tuple[dict, ...]

    def render(self) -> str:
        header = f"{'variable':<16}{'mean':>14}{'std dev':>14}{'minimum':>14}{'maximum':>14}"
        lines = [header, "-" * len(header)]
        for row in self.rows:
            lines.append(
                f"{row['variable']:<16}{row['mean']:>14.4g}{row['sd']:>14.4g}"
                f"{row['min']:>14.4g}{row['max']:>14.4g}"
            )
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(list(self.rows), indent=2)

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=["variable", "mean", "sd", "min", "max"])
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _csv_num(v) if k != "variable" else v for k, v in row.items()})


def _csv_num(x) -> str:
    return repr(float(x))


def summarize(panel: Panel) -> SummaryTable:
    """Table-2-style summary: differenced rows first, then levels.

    Standard deviations use the n-1 divisor; differenced statistics are
    computed on the T-1 first differences.
    """
    if panel.nobs < 2:
        raise DataError("summarize needs at least two observations")
    rows = []
    for kind in ("diff", "level"):
        for j, name in enumerate(panel.names):
            col = panel.values[:, j]
            data = np.diff(col) if kind == "diff" else col
            label = f"d.{name}" if kind == "diff" else name
            rows.append(
                {
                    "variable": label,
                    "mean": float(np.mean(data)),
                    "sd": float(np.std(data, ddof=1)),
                    "min": float(np.min(data)),
                    "max": float(np.max(data)),
                }
            )
    return SummaryTable(tuple(rows))


def write_panel_csv(panel: Panel, path: str | Path, date_column: str = "DATE") -> None:
    """Serialize a panel; floats use repr so a reload is bit-exact."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([date_column, *panel.names])
        for i, quarter in enumerate(panel.index):
            writer.writerow([str(quarter), *(repr(float(v)) for v in panel.values[i])])


def read_panel_csv(path: str | Path, date_column: str = "DATE") -> Panel:
    """Inverse of :func:`write_panel_csv`."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"panel file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != date_column:
            raise DataError(f"{path}: expected leading {date_column!r} column")
        names = header[1:]
        index: list[QuarterIndex] = []
        rows: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise DataError(f"{path}:{line_no}: expected {len(header)} fields")
            try:
                index.append(parse_quarter(row[0]))
                rows.append([float(v) for v in row[1:]])
            except (ParseError, ValueError) as exc:
                raise DataError(f"{path}:{line_no}: {exc}") from exc
    return Panel(tuple(index), tuple(names), np.array(rows))


def panel_to_json_records(panel: Panel) -> str:
    records = []
    for i, quarter in enumerate(panel.index):
        rec: dict = {"quarter": str(quarter)}
        rec.update({name: float(panel.values[i, j]) for j, name in enumerate(panel.names)})
        records.append(rec)
    return json.dumps(records, indent=2)
