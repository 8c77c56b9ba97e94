"""Level dynamics of an estimated error-correction system.

The fitted system in differences converts to a VAR in levels,

    y_t = c + D d_t + A_1 y_{t-1} + ... + A_{k+1} y_{t-k-1} + e_t,

with A_1 = I + Pi + G_1, A_i = G_i - G_{i-1}, A_{k+1} = -G_k.  Everything
downstream runs off that representation: h-step forecasts iterate the
recursion feeding predictions back in; impulse responses use the moving
average weights Phi_0 = I, Phi_s = sum_i Phi_{s-i} A_i scaled by a
triangular factor of the residual covariance; the variance decomposition
accumulates the squared orthogonalized weights.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .dataio import DataError, Panel, QuarterIndex
from .errors import InsufficientSampleError, NumericalError
from .johansen import VecmModel
from .series import DummySet


@dataclass(frozen=True)
class LevelVarModel:
    """VAR-in-levels coefficients implied by an error-correction fit."""

    variable_names: tuple[str, ...]
    coefficient_matrices: tuple[np.ndarray, ...]  # A_1 .. A_{k+1}
    constants: np.ndarray  # p
    dummy_coefficients: np.ndarray | None  # p x 3, or None
    residual_cov: np.ndarray  # p x p

    @property
    def p(self) -> int:
        return len(self.variable_names)

    @property
    def n_lags(self) -> int:
        return len(self.coefficient_matrices)

    def deterministic(self, quarter: QuarterIndex | None) -> np.ndarray:
        """Constant plus the seasonal contribution for one calendar quarter."""
        det = self.constants.copy()
        if self.dummy_coefficients is not None:
            if quarter is None:
                raise ValueError("model has seasonal terms; a calendar quarter is required")
            if quarter.quarter <= 3:
                det = det + self.dummy_coefficients[:, quarter.quarter - 1]
        return det


def vecm_to_var(model: VecmModel) -> LevelVarModel:
    """Rewrite the fitted difference equations as a VAR in levels."""
    if model.k < 1:
        raise ValueError("conversion needs at least one differenced lag")
    p, k = model.p, model.k
    gammas = [model.gamma(i) for i in range(1, k + 1)]
    matrices = [np.eye(p) + model.pi + gammas[0]]
    for i in range(1, k):
        matrices.append(gammas[i] - gammas[i - 1])
    matrices.append(-gammas[k - 1])
    return LevelVarModel(
        variable_names=model.variable_names,
        coefficient_matrices=tuple(matrices),
        constants=model.constants,
        dummy_coefficients=model.dummy_coefficients,
        residual_cov=model.residual_cov,
    )


@dataclass(frozen=True)
class ForecastResult:
    """Iterated level forecasts, with errors when actuals are supplied."""

    variable_names: tuple[str, ...]
    quarters: tuple[QuarterIndex, ...]
    point_forecasts: np.ndarray  # h x p
    actuals: np.ndarray | None  # h x p
    rmse: dict[str, float] | None
    mape: dict[str, float] | None

    @property
    def horizon(self) -> int:
        return len(self.quarters)

    def render(self) -> str:
        lines = []
        for j, name in enumerate(self.variable_names):
            lines.append(f"{name}:")
            header = f"  {'quarter':<10}{'predicted':>14}"
            if self.actuals is not None:
                header += f"{'actual':>14}"
            lines.append(header)
            for i, quarter in enumerate(self.quarters):
                row = f"  {str(quarter):<10}{self.point_forecasts[i, j]:>14.4f}"
                if self.actuals is not None:
                    row += f"{self.actuals[i, j]:>14.4f}"
                lines.append(row)
            if self.rmse is not None:
                lines.append(f"  RMSE {self.rmse[name]:.4f}   MAPE {self.mape[name]:.4f}%")
            lines.append("")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variable_names),
            "quarters": [str(q) for q in self.quarters],
            "point_forecasts": self.point_forecasts.tolist(),
            "actuals": None if self.actuals is None else self.actuals.tolist(),
            "rmse": self.rmse,
            "mape": self.mape,
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            header = ["quarter"]
            for name in self.variable_names:
                header.append(f"{name}.predicted")
                if self.actuals is not None:
                    header.append(f"{name}.actual")
            writer.writerow(header)
            for i, quarter in enumerate(self.quarters):
                row = [str(quarter)]
                for j in range(len(self.variable_names)):
                    row.append(repr(float(self.point_forecasts[i, j])))
                    if self.actuals is not None:
                        row.append(repr(float(self.actuals[i, j])))
                writer.writerow(row)


def forecast(
    model: LevelVarModel,
    history: Panel,
    h: int,
    future_dummies: DummySet | None = None,
    actuals: np.ndarray | None = None,
) -> ForecastResult:
    """Iterate the level recursion h steps past the end of ``history``.

    ``future_dummies`` is accepted for interface completeness but the
    seasonal contribution is derived from the forecast calendar itself
    whenever the model carries dummy terms; when supplied it must agree
    with that calendar.
    """
    if h < 1:
        raise ValueError("forecast horizon must be at least 1")
    if tuple(history.names) != tuple(model.variable_names):
        raise ValueError("history variables do not match the model")
    m = model.n_lags
    if history.nobs < m:
        raise InsufficientSampleError(f"history must supply at least {m} level rows")
    if future_dummies is not None and len(future_dummies) != h:
        raise ValueError("future_dummies must have one row per forecast step")

    quarters = []
    cursor = history.index[-1]
    for _ in range(h):
        cursor = cursor.next()
        quarters.append(cursor)
    if future_dummies is not None and model.dummy_coefficients is not None:
        expected = np.column_stack(
            [[1.0 if q.quarter == j else 0.0 for q in quarters] for j in (1, 2, 3)]
        )
        if not np.array_equal(future_dummies.stacked(), expected):
            raise ValueError("future_dummies disagree with the forecast calendar")

    window = [history.values[-i] for i in range(1, m + 1)]  # y_{t}, y_{t-1}, ...
    out = np.empty((h, model.p))
    for step, quarter in enumerate(quarters):
        value = model.deterministic(quarter)
        for i, matrix in enumerate(model.coefficient_matrices):
            value = value + matrix @ window[i]
        out[step] = value
        window = [value] + window[:-1]

    rmse_by, mape_by = None, None
    if actuals is not None:
        actuals = np.asarray(actuals, dtype=float)
        if actuals.shape != out.shape:
            raise ValueError(f"actuals shape {actuals.shape} != forecasts {out.shape}")
        labels = [str(q) for q in quarters]
        rmse_by = {
            name: rmse(actuals[:, j], out[:, j])
            for j, name in enumerate(model.variable_names)
        }
        mape_by = {
            name: mape(actuals[:, j], out[:, j], labels=labels)
            for j, name in enumerate(model.variable_names)
        }
    return ForecastResult(
        variable_names=model.variable_names,
        quarters=tuple(quarters),
        point_forecasts=out,
        actuals=actuals,
        rmse=rmse_by,
        mape=mape_by,
    )


def rmse(actual, predicted) -> float:
    """Root mean squared forecast error."""
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.shape != predicted.shape or actual.size == 0:
        raise ValueError("rmse needs equally sized, nonempty inputs")
    return float(np.sqrt(np.mean((actual - predicted) ** 2)))


def mape(actual, predicted, labels: Sequence[str] | None = None) -> float:
    """Mean absolute percentage error, in percent."""
    actual = np.asarray(actual, dtype=float)
    predicted = np.asarray(predicted, dtype=float)
    if actual.shape != predicted.shape or actual.size == 0:
        raise ValueError("mape needs equally sized, nonempty inputs")
    zeros = np.nonzero(actual == 0)[0]
    if zeros.size:
        where = labels[zeros[0]] if labels is not None else f"position {zeros[0]}"
        raise DataError(f"mape undefined: actual value is zero at {where}")
    return float(100.0 * np.mean(np.abs(actual - predicted) / np.abs(actual)))


def _ma_weights(model: LevelVarModel, horizon: int) -> list[np.ndarray]:
    """Phi_0 .. Phi_H of the level moving-average representation."""
    p, m = model.p, model.n_lags
    phis = [np.eye(p)]
    for s in range(1, horizon + 1):
        acc = np.zeros((p, p))
        for i in range(1, min(s, m) + 1):
            acc += phis[s - i] @ model.coefficient_matrices[i - 1]
        phis.append(acc)
    return phis


def _orthogonal_factor(
    model: LevelVarModel, ordering: Sequence[str] | None
) -> tuple[np.ndarray, tuple[str, ...]]:
    """Triangular shock factor with rows back in model variable order."""
    names = model.variable_names
    ordering = tuple(ordering) if ordering is not None else names
    if sorted(ordering) != sorted(names):
        raise ValueError(f"ordering must be a permutation of {names}")
    perm = [names.index(v) for v in ordering]
    sigma = model.residual_cov[np.ix_(perm, perm)]
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("residual covariance is not positive definite") from exc
    factor = np.zeros_like(chol)
    factor[perm, :] = chol  # rows back in model order; columns follow the ordering
    return factor, ordering


@dataclass(frozen=True)
class IrfResult:
    """Responses to one orthogonal one-standard-deviation shock."""

    impulse: str
    ordering: tuple[str, ...]
    variable_names: tuple[str, ...]
    responses: np.ndarray  # (H+1) x p, horizon 0 first
    cumulative: bool = False

    @property
    def horizon(self) -> int:
        return self.responses.shape[0] - 1

    def response(self, variable: str) -> np.ndarray:
        return self.responses[:, self.variable_names.index(variable)]

    def to_dict(self) -> dict:
        return {
            "impulse": self.impulse,
            "ordering": list(self.ordering),
            "variables": list(self.variable_names),
            "responses": self.responses.tolist(),
            "cumulative": self.cumulative,
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["horizon", *self.variable_names])
            for s in range(self.responses.shape[0]):
                writer.writerow([s, *(repr(float(v)) for v in self.responses[s])])


def irf(
    model: LevelVarModel,
    impulse: str,
    H: int,
    ordering: Sequence[str] | None = None,
    cumulative: bool = False,
) -> IrfResult:
    """Orthogonalized impulse responses out to horizon H."""
    if impulse not in model.variable_names:
        raise ValueError(f"unknown impulse variable {impulse!r}")
    if H < 0:
        raise ValueError("horizon must be nonnegative")
    factor, ordering = _orthogonal_factor(model, ordering)
    if impulse not in ordering:
        raise ValueError(f"impulse {impulse!r} missing from ordering")
    shock = factor[:, ordering.index(impulse)]
    phis = _ma_weights(model, H)
    responses = np.vstack([phi @ shock for phi in phis])
    if cumulative:
        responses = np.cumsum(responses, axis=0)
    return IrfResult(
        impulse=impulse,
        ordering=ordering,
        variable_names=model.variable_names,
        responses=responses,
        cumulative=cumulative,
    )


@dataclass(frozen=True)
class FevdMatrix:
    """Forecast-error variance shares per horizon, target and shock."""

    variable_names: tuple[str, ...]
    shock_names: tuple[str, ...]
    proportions: np.ndarray  # H x p(target) x p(shock); horizon 1 first

    @property
    def horizon(self) -> int:
        return self.proportions.shape[0]

    def table(self, target: str) -> np.ndarray:
        """H x p share matrix for one target variable."""
        return self.proportions[:, self.variable_names.index(target), :]

    def render(self) -> str:
        blocks = []
        for name in self.variable_names:
            lines = [f"Variance decomposition of d.{name}"]
            lines.append("".join(f"{f'd.{s}':>14}" for s in self.shock_names))
            for row in self.table(name):
                lines.append("".join(f"{v:>14.6g}" for v in row))
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variable_names),
            "shocks": list(self.shock_names),
            "proportions": self.proportions.tolist(),
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["target", "horizon", *(f"d.{s}" for s in self.shock_names)])
            for j, name in enumerate(self.variable_names):
                for h in range(self.horizon):
                    writer.writerow(
                        [name, h + 1, *(repr(float(v)) for v in self.proportions[h, j])]
                    )


def fevd(
    model: LevelVarModel,
    H: int,
    ordering: Sequence[str] | None = None,
) -> FevdMatrix:
    """Share of each orthogonal shock in every h-step forecast-error variance."""
    if H < 1:
        raise ValueError("horizon must be at least 1")
    factor, ordering = _orthogonal_factor(model, ordering)
    phis = _ma_weights(model, H - 1)
    thetas = np.stack([phi @ factor for phi in phis])  # s x target x shock
    squared = np.cumsum(thetas**2, axis=0)  # sum over s < h
    totals = squared.sum(axis=2, keepdims=True)
    return FevdMatrix(
        variable_names=model.variable_names,
        shock_names=ordering,
        proportions=squared / totals,
    )
