"""Deterministic series transforms shared by every estimator.

Differencing, lagging, quarterly indicator dummies and the construction
of the error-correction design matrix all live here so the rank test and
the equation-by-equation fits see exactly the same regressors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dataio import Panel, QuarterIndex
from .errors import InsufficientSampleError


@dataclass(frozen=True)
class DesignMatrix:
    """Named regressor columns with a common number of rows."""

    names: tuple[str, ...]
    data: np.ndarray  # T_eff x k

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "names", tuple(self.names))
        if data.ndim != 2:
            raise ValueError("design matrix must be 2-dimensional")
        if data.shape[1] != len(self.names):
            raise ValueError(f"{data.shape[1]} columns but {len(self.names)} names")
        if len(set(self.names)) != len(self.names):
            raise ValueError("design column names must be unique")

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.names.index(name)]


@dataclass(frozen=True)
class DummySet:
    """Quarterly 0/1 indicators sd1..sd3; Q4 is the omitted base."""

    sd1: np.ndarray
    sd2: np.ndarray
    sd3: np.ndarray

    def __post_init__(self):
        for name in ("sd1", "sd2", "sd3"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if not np.isin(arr, (0.0, 1.0)).all():
                raise ValueError(f"{name} entries must be 0 or 1")
        if not (len(self.sd1) == len(self.sd2) == len(self.sd3)):
            raise ValueError("dummy columns must share a length")
        if (self.sd1 + self.sd2 + self.sd3 > 1).any():
            raise ValueError("at most one quarterly dummy may be active per row")

    def __len__(self) -> int:
        return len(self.sd1)

    def rows(self, sl: slice) -> "DummySet":
        return DummySet(self.sd1[sl], self.sd2[sl], self.sd3[sl])

    def stacked(self) -> np.ndarray:
        return np.column_stack([self.sd1, self.sd2, self.sd3])


def difference(series, order: int = 1) -> np.ndarray:
    """Apply the first difference ``order`` times."""
    x = np.asarray(series, dtype=float)
    if order < 1:
        raise ValueError("difference order must be positive")
    if order >= len(x):
        raise InsufficientSampleError(
            f"cannot take {order} differences of a length-{len(x)} series"
        )
    return np.diff(x, n=order)


def lag(series, j: int) -> np.ndarray:
    """Shift by j quarters; the first j entries become NaN (unavailable)."""
    x = np.asarray(series, dtype=float)
    if j < 0:
        raise ValueError("lag must be nonnegative")
    if j >= len(x):
        raise InsufficientSampleError(f"lag {j} exceeds series length {len(x)}")
    if j == 0:
        return x.copy()
    out = np.empty_like(x)
    out[:j] = np.nan
    out[j:] = x[:-j]
    return out


def seasonal_dummies(index: Sequence[QuarterIndex]) -> DummySet:
    """Indicator dummies for Q1-Q3; Q4 rows are all zero."""
    if len(index) == 0:
        raise ValueError("empty quarterly index")
    quarters = np.array([q.quarter for q in index])
    return DummySet(
        (quarters == 1).astype(float),
        (quarters == 2).astype(float),
        (quarters == 3).astype(float),
    )


def build_vecm_design(
    panel: Panel,
    k: int,
    ec_terms: Sequence[np.ndarray] = (),
    dummies: DummySet | None = None,
) -> tuple[dict[str, np.ndarray], DesignMatrix]:
    """Responses and regressors for the error-correction system.

    Regressor order follows the reported layout: all variables at lag 1,
    then lag 2, ..., then the constant, seasonal dummies and one column
    per error-correction term.  Each ``ec_terms[j]`` is the equilibrium
    combination evaluated at every sample date (length T); the builder
    lags it one quarter so the regressor is the prior-quarter deviation.

    Rows with any unavailable lag are dropped: with T levels and k lags
    of the differences, T_eff = T - k - 1 rows survive.
    """
    if k < 1:
        raise ValueError("lag count k must be at least 1")
    T, p = panel.nobs, panel.nvars
    if T <= k + 1:
        raise InsufficientSampleError(f"panel length {T} too short for k={k}")
    if dummies is not None and len(dummies) != T:
        raise ValueError("dummies must align with the panel index")
    for ec in ec_terms:
        if len(ec) != T:
            raise ValueError("error-correction series must align with the panel index")

    t_eff = T - k - 1
    deltas = np.diff(panel.values, axis=0)  # row t-1 holds y_t - y_{t-1}
    rows = slice(k + 1, T)  # usable dates, in level indexing

    responses = {f"d.{name}": deltas[k:, j] for j, name in enumerate(panel.names)}

    columns: list[np.ndarray] = []
    names: list[str] = []
    for j_lag in range(1, k + 1):
        for j, name in enumerate(panel.names):
            columns.append(deltas[k - j_lag : T - 1 - j_lag, j])
            names.append(f"d.{name}.l{j_lag}")
    columns.append(np.ones(t_eff))
    names.append("const")
    if dummies is not None:
        stacked = dummies.stacked()[rows]
        for i, name in enumerate(("sd1", "sd2", "sd3")):
            columns.append(stacked[:, i])
            names.append(name)
    for j, ec in enumerate(ec_terms, start=1):
        columns.append(np.asarray(ec, dtype=float)[k : T - 1])
        names.append(f"ec{j}")

    design = DesignMatrix(tuple(names), np.column_stack(columns))
    if t_eff < design.ncols + 1:
        raise InsufficientSampleError(
            f"{t_eff} usable rows cannot support {design.ncols} regressors"
        )
    return responses, design
