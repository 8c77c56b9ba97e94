"""Ordinary least squares with full inferential output.

One estimation engine serves the cointegrating levels regression, the
unit-root test regressions and every equation of the error-correction
system.  Solutions go through a Householder QR factorization because the
level variables span several orders of magnitude and raw normal equations
square the condition number; an independent normal-equations oracle lives
in the test suite.

Student-t tail probabilities are evaluated through the regularized
incomplete beta function,

    I_x(a, b) = B(x; a, b) / B(a, b),    x = df / (df + t^2),

using the Lentz continued-fraction expansion (Numerical Recipes 6.4),
which converges to ~1e-15 for all df >= 1; the advertised tolerance is
1e-10.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientSampleError, SingularDesignError
from .series import DesignMatrix

RCOND_THRESHOLD = 1e-12

_SIGNIFICANCE_STARS = ((0.001, "***"), (0.01, "**"), (0.05, "*"), (0.1, "."))


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise RuntimeError(f"incomplete beta failed to converge for a={a}, b={b}, x={x}")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # use whichever tail the continued fraction converges fastest on
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: int) -> float:
    """Two-sided tail probability 2*(1 - CDF(|t|)) of Student's t."""
    if df < 1:
        raise ValueError("degrees of freedom must be at least 1")
    if math.isnan(t):
        return float("nan")
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def f_survival(f: float, df1: int, df2: int) -> float:
    """P(F > f) for the F distribution, via the incomplete beta."""
    if f <= 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    x = df2 / (df2 + df1 * f)
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x)


@dataclass(frozen=True)
class RegressionResult:
    """Coefficients plus the usual inferential columns.

    ``f_stat`` jointly tests every non-constant coefficient; ``sigma2``
    is RSS / (n - k').
    """

    regressor_names: tuple[str, ...]
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    p_values: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    r_squared: float
    f_stat: float
    f_df: tuple[int, int]
    f_pvalue: float
    sigma2: float
    nobs: int

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.regressor_names.index(name)])

    def p_value(self, name: str) -> float:
        return float(self.p_values[self.regressor_names.index(name)])

    def render(self, title: str | None = None) -> str:
        lines = []
        if title:
            lines += [title, "=" * max(len(title), 64)]
        lines.append(
            f"{'':<18}{'Estimate':>14}{'Std. Error':>14}{'T-Statistic':>13}{'Pr(>|t|)':>12}"
        )
        for i, name in enumerate(self.regressor_names):
            lines.append(
                f"{name:<18}{self.coefficients[i]:>14.5g}{self.standard_errors[i]:>14.5g}"
                f"{self.t_stats[i]:>13.3g}{self.p_values[i]:>12.4g} "
                f"{significance_stars(self.p_values[i])}"
            )
        lines.append("-" * 71)
        lines.append(f"Observations      {self.nobs}")
        lines.append(f"R-squared         {self.r_squared:.4f}")
        if not math.isnan(self.f_stat):
            lines.append(
                f"F-statistic       {self.f_stat:.4g} on {self.f_df[0]} and {self.f_df[1]} DF"
                f" (p = {self.f_pvalue:.4g})"
            )
        lines.append(f"Residual std err  {math.sqrt(self.sigma2):.4g}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "regressors": list(self.regressor_names),
            "coefficients": [float(v) for v in self.coefficients],
            "standard_errors": [float(v) for v in self.standard_errors],
            "t_stats": [float(v) for v in self.t_stats],
            "p_values": [float(v) for v in self.p_values],
            "r_squared": self.r_squared,
            "f_stat": self.f_stat,
            "f_df": list(self.f_df),
            "f_pvalue": self.f_pvalue,
            "sigma2": self.sigma2,
            "nobs": self.nobs,
            "residuals": [float(v) for v in self.residuals],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionResult":
        residuals = np.array(d["residuals"])
        coef = np.array(d["coefficients"])
        return cls(
            regressor_names=tuple(d["regressors"]),
            coefficients=coef,
            standard_errors=np.array(d["standard_errors"]),
            t_stats=np.array(d["t_stats"]),
            p_values=np.array(d["p_values"]),
            residuals=residuals,
            fitted=np.full(len(residuals), np.nan),
            r_squared=d["r_squared"],
            f_stat=d["f_stat"],
            f_df=(d["f_df"][0], d["f_df"][1]),
            f_pvalue=d["f_pvalue"],
            sigma2=d["sigma2"],
            nobs=d["nobs"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def significance_stars(p: float) -> str:
    for threshold, marker in _SIGNIFICANCE_STARS:
        if p <= threshold:
            return marker
    return ""


def _constant_column(X: np.ndarray) -> int | None:
    for j in range(X.shape[1]):
        col = X[:, j]
        if col[0] != 0.0 and np.ptp(col) == 0.0:
            return j
    return None


def ols(y: Sequence[float] | np.ndarray, X: DesignMatrix) -> RegressionResult:
    """Least squares of y on the named design, QR-based.

    Raises ``SingularDesignError`` when the reciprocal condition estimate
    of the triangular factor falls below 1e-12, naming the columns whose
    pivots collapsed, and ``InsufficientSampleError`` when n <= k'.
    """
    y = np.asarray(y, dtype=float)
    n, kp = X.nrows, X.ncols
    if len(y) != n:
        raise ValueError(f"response length {len(y)} != design rows {n}")
    if n <= kp:
        raise InsufficientSampleError(f"{n} observations cannot support {kp} regressors")

    q, r = np.linalg.qr(X.data)
    diag = np.abs(np.diag(r))
    scale = diag.max()
    if scale == 0.0 or diag.min() / scale < RCOND_THRESHOLD:
        bad = [X.names[j] for j in np.nonzero(diag <= scale * RCOND_THRESHOLD)[0]]
        raise SingularDesignError(
            f"design matrix is numerically singular; collinear columns: {', '.join(bad)}",
            columns=bad,
        )
    coef = np.linalg.solve(r, q.T @ y)
    fitted = X.data @ coef
    residuals = y - fitted
    rss = float(residuals @ residuals)
    df_resid = n - kp
    sigma2 = rss / df_resid

    r_inv = np.linalg.solve(r, np.eye(kp))
    xtx_inv_diag = np.sum(r_inv * r_inv, axis=1)
    se = np.sqrt(sigma2 * xtx_inv_diag)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = coef / se
    # exact fits give se = 0; keep t finite only for genuinely zero coefficients
    exact = se == 0
    if exact.any():
        t_stats[exact] = [math.copysign(math.inf, c) if c != 0 else 0.0 for c in coef[exact]]
    p_values = np.array([student_t_two_sided_p(float(t), df_resid) for t in t_stats])

    const_idx = _constant_column(X.data)
    if const_idx is not None:
        tss = float(np.sum((y - y.mean()) ** 2))
        df_model = kp - 1
    else:
        tss = float(y @ y)
        df_model = kp
    r_squared = 1.0 - rss / tss if tss > 0 else 1.0
    r_squared = min(max(r_squared, 0.0), 1.0)
    if df_model > 0 and rss > 0:
        f_stat = ((tss - rss) / df_model) / (rss / df_resid)
        f_pvalue = f_survival(f_stat, df_model, df_resid)
    else:
        f_stat, f_pvalue = float("nan"), float("nan")

    return RegressionResult(
        regressor_names=X.names,
        coefficients=coef,
        standard_errors=se,
        t_stats=t_stats,
        p_values=p_values,
        residuals=residuals,
        fitted=fitted,
        r_squared=r_squared,
        f_stat=f_stat if df_model > 0 else float("nan"),
        f_df=(df_model, df_resid),
        f_pvalue=f_pvalue,
        sigma2=sigma2,
        nobs=n,
    )
