"""Augmented Dickey-Fuller testing and the two-step residual cointegration test.

The ADF regression is

    dx_t = [c] + [b*t] + g*x_{t-1} + sum_i d_i * dx_{t-i} + e_t

and the test statistic is the t-ratio on the lagged level.  The decision
rule is one-sided left-tail throughout: reject the unit root when the
statistic falls below the (negative) critical value.  Level tests default
to a constant; residual tests run without deterministics and draw their
critical values from the residual-test table keyed by the number of
variables in the levels regression.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import critvals
from .dataio import Panel
from .errors import InsufficientSampleError
from .regress import RegressionResult, ols
from .series import DesignMatrix, difference

DETERMINISTIC_SPECS = ("none", "constant", "constant+trend")


@dataclass(frozen=True)
class AdfResult:
    """Unit-root test outcome; ``statistic`` is the t-ratio on x_{t-1}."""

    statistic: float
    lags_used: int
    deterministic: str
    critical_values: dict[str, float]
    nobs: int
    regression: RegressionResult

    def rejects(self, level: str = "5%") -> bool:
        return self.statistic < self.critical_values[level]

    def decision(self, level: str = "5%") -> str:
        return "reject unit root" if self.rejects(level) else "fail to reject"

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "lags_used": self.lags_used,
            "deterministic": self.deterministic,
            "critical_values": dict(self.critical_values),
            "nobs": self.nobs,
            "decision_5pct": self.decision(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


@dataclass(frozen=True)
class EgResult:
    """Two-step cointegration test: levels OLS, then a residual unit-root test."""

    dependent: str
    step1: RegressionResult
    residual_test: AdfResult
    cointegrated: bool

    def to_dict(self) -> dict:
        return {
            "dependent": self.dependent,
            "step1": self.step1.to_dict(),
            "residual_test": self.residual_test.to_dict(),
            "cointegrated": self.cointegrated,
        }


def _adf_design(x: np.ndarray, lags: int, deterministic: str, offset: int) -> tuple[np.ndarray, DesignMatrix]:
    """Rows t = offset+1 .. len(x)-1 of the test regression (level indexing)."""
    dx = np.diff(x)
    n = len(x)
    response = dx[offset:]
    t_eff = n - 1 - offset
    columns = [x[offset : n - 1]]
    names = ["level.l1"]
    for i in range(1, lags + 1):
        columns.append(dx[offset - i : n - 1 - i])
        names.append(f"d.l{i}")
    if deterministic in ("constant", "constant+trend"):
        columns.append(np.ones(t_eff))
        names.append("const")
    if deterministic == "constant+trend":
        columns.append(np.arange(1, t_eff + 1, dtype=float))
        names.append("trend")
    return response, DesignMatrix(tuple(names), np.column_stack(columns))


def _adf_regression(x: np.ndarray, lags: int, deterministic: str) -> tuple[float, RegressionResult]:
    response, design = _adf_design(x, lags, deterministic, offset=lags)
    fit = ols(response, design)
    return float(fit.t_stats[0]), fit


def _bic_lags(x: np.ndarray, max_lags: int, deterministic: str) -> int:
    """Smallest-BIC lag count, evaluated on the common max_lags-aligned sample."""
    best_lag, best_bic = 0, np.inf
    for lags in range(max_lags + 1):
        response, design = _adf_design(x, lags, deterministic, offset=max_lags)
        fit = ols(response, design)
        n = len(response)
        rss = float(fit.residuals @ fit.residuals)
        bic = n * np.log(rss / n) + design.ncols * np.log(n)
        if bic < best_bic - 1e-12:
            best_lag, best_bic = lags, bic
    return best_lag


def adf_test(
    series,
    deterministic: str = "constant",
    max_lags: int = 4,
    lag_rule: str = "fixed",
) -> AdfResult:
    """Augmented Dickey-Fuller test with embedded critical values.

    ``lag_rule`` is either "fixed" (use max_lags lagged differences, the
    quarterly convention) or "bic" (search 0..max_lags).
    """
    x = np.asarray(series, dtype=float)
    if deterministic not in DETERMINISTIC_SPECS:
        raise ValueError(f"deterministic must be one of {DETERMINISTIC_SPECS}")
    if lag_rule not in ("fixed", "bic"):
        raise ValueError("lag_rule must be 'fixed' or 'bic'")
    if len(x) < max_lags + 10:
        raise InsufficientSampleError(
            f"series of length {len(x)} is too short for max_lags={max_lags}"
        )
    lags = max_lags if lag_rule == "fixed" else _bic_lags(x, max_lags, deterministic)
    statistic, fit = _adf_regression(x, lags, deterministic)
    cvs = critvals.adf_critical_values(deterministic, fit.nobs)
    return AdfResult(
        statistic=statistic,
        lags_used=lags,
        deterministic=deterministic,
        critical_values=cvs,
        nobs=fit.nobs,
        regression=fit,
    )


def classify_integration(
    series,
    max_order: int = 2,
    deterministic: str = "constant",
    max_lags: int = 4,
    lag_rule: str = "fixed",
) -> int | None:
    """Smallest d whose d-th difference rejects a unit root at 5%.

    Returns None when every difference up to max_order fails to reject
    (inconclusive beyond max_order).
    """
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    x = np.asarray(series, dtype=float)
    for d in range(max_order + 1):
        data = x if d == 0 else difference(x, d)
        if adf_test(data, deterministic, max_lags, lag_rule).rejects():
            return d
    return None


def engle_granger(
    panel: Panel,
    dependent: str,
    max_lags: int = 4,
    lag_rule: str = "fixed",
) -> EgResult:
    """Levels regression plus residual unit-root test.

    Step 1 regresses the dependent level on the other levels and a
    constant; step 2 tests the residuals with no deterministics against
    critical values keyed by the number of variables in the relation.
    """
    if panel.nvars < 2:
        raise ValueError("cointegration testing needs at least two variables")
    if dependent not in panel.names:
        raise ValueError(f"unknown dependent variable {dependent!r}")
    others = [n for n in panel.names if n != dependent]
    columns = [panel.column(n) for n in others] + [np.ones(panel.nobs)]
    design = DesignMatrix(tuple(others) + ("const",), np.column_stack(columns))
    step1 = ols(panel.column(dependent), design)

    residuals = step1.residuals
    if len(residuals) < max_lags + 10:
        raise InsufficientSampleError("too few residuals for the residual unit-root test")
    lags = max_lags if lag_rule == "fixed" else _bic_lags(residuals, max_lags, "none")
    statistic, fit = _adf_regression(residuals, lags, "none")
    cvs = critvals.eg_critical_values(panel.nvars, fit.nobs)
    residual_test = AdfResult(
        statistic=statistic,
        lags_used=lags,
        deterministic="none",
        critical_values=cvs,
        nobs=fit.nobs,
        regression=fit,
    )
    return EgResult(
        dependent=dependent,
        step1=step1,
        residual_test=residual_test,
        cointegrated=residual_test.rejects(),
    )
