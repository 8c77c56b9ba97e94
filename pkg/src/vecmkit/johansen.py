"""Reduced-rank cointegration analysis and error-correction estimation.

The rank test concentrates out the short-run dynamics: both dy_t and the
lagged level y_{t-1} are regressed on {dy_{t-1}..dy_{t-k}, constant,
seasonal dummies}, and the residual product-moment matrices

    S00 = R0'R0/T,   S01 = R0'R1/T,   S11 = R1'R1/T

define the generalized eigenproblem |lambda*S11 - S10*S00^{-1}*S01| = 0.
S11 is reduced by its Cholesky factor so a symmetric solver can be used;
the eigenvalues are squared canonical correlations in [0, 1).  The trace
statistic for rank at most r is -T * sum_{i>r} log(1 - lambda_i).

Estimation with a chosen rank r then runs equation-by-equation OLS on a
design holding the differenced lags, a constant, the dummies and the r
lagged equilibrium deviations, so the system and the rank test see the
same deterministic terms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import critvals
from .dataio import Panel
from .errors import InsufficientSampleError, NumericalError
from .regress import RegressionResult, ols
from .series import DummySet, build_vecm_design, seasonal_dummies


@dataclass(frozen=True)
class JohansenResult:
    """Eigenvalues, trace sequence and candidate long-run vectors."""

    variable_names: tuple[str, ...]
    eigenvalues: np.ndarray  # p, descending
    trace_stats: np.ndarray  # p, null hypotheses r<=0 .. r<=p-1
    critical_values_5pct: np.ndarray
    beta: np.ndarray  # p x p candidate vectors, column-normalized
    alpha: np.ndarray  # p x p adjustment loadings
    selected_rank: int
    t_eff: int
    k: int
    cv_table: str

    def decisions(self) -> list[str]:
        return [
            "reject" if stat > cv else "fail to reject"
            for stat, cv in zip(self.trace_stats, self.critical_values_5pct)
        ]

    def render(self) -> str:
        lines = [
            f"{'null':<10}{'eigenvalue':>12}{'trace':>10}{'5% critical':>13}  result",
            "-" * 55,
        ]
        for r in range(len(self.trace_stats)):
            lines.append(
                f"r <= {r:<5}{self.eigenvalues[r]:>12.4f}{self.trace_stats[r]:>10.2f}"
                f"{self.critical_values_5pct[r]:>13.2f}  {self.decisions()[r]}"
            )
        lines.append(f"selected rank: {self.selected_rank} "
                     f"(cv table: {self.cv_table}, T_eff={self.t_eff}, k={self.k})")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variable_names),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "trace_stats": [float(v) for v in self.trace_stats],
            "critical_values_5pct": [float(v) for v in self.critical_values_5pct],
            "decisions": self.decisions(),
            "beta": self.beta.tolist(),
            "alpha": self.alpha.tolist(),
            "selected_rank": self.selected_rank,
            "t_eff": self.t_eff,
            "k": self.k,
            "cv_table": self.cv_table,
        }


def _qr_residuals(Z: np.ndarray, targets: list[np.ndarray]) -> list[np.ndarray]:
    q, _ = np.linalg.qr(Z)
    return [m - q @ (q.T @ m) for m in targets]


def _first_nonzero_normalize(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        magnitude = np.abs(col).max()
        if magnitude == 0:
            continue
        pivot = col[np.abs(col) > 1e-9 * magnitude][0]
        out[:, j] = col / pivot
    return out


def johansen_trace(
    panel: Panel,
    k: int,
    dummies: bool = True,
    cv_table: str = "standard",
) -> JohansenResult:
    """Trace-statistic rank test with k lagged differences.

    The concentration regressions include the constant (and the seasonal
    dummies when requested) so the rank decision and the estimated model
    share identical deterministics.
    """
    T, p = panel.nobs, panel.nvars
    if k < 1:
        raise ValueError("lag count k must be at least 1")
    t_eff = T - k - 1
    if t_eff <= p * (k + 1) + 5:
        raise InsufficientSampleError(
            f"T_eff={t_eff} is too small for p={p}, k={k}"
        )

    deltas = np.diff(panel.values, axis=0)
    dy = deltas[k:]  # dy_t, t = k+1 .. T-1
    y_lag = panel.values[k : T - 1]  # y_{t-1}

    z_cols = [deltas[k - i : T - 1 - i] for i in range(1, k + 1)]
    z_cols.append(np.ones((t_eff, 1)))
    if dummies:
        z_cols.append(seasonal_dummies(panel.index).stacked()[k + 1 : T])
    Z = np.hstack(z_cols)

    r0, r1 = _qr_residuals(Z, [dy, y_lag])
    s00 = r0.T @ r0 / t_eff
    s01 = r0.T @ r1 / t_eff
    s11 = r1.T @ r1 / t_eff

    try:
        l11 = np.linalg.cholesky(s11)
        s00_inv = np.linalg.inv(s00)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"residual moment matrices are ill-conditioned: {exc}") from exc
    if np.linalg.cond(s00) > 1e14 or np.linalg.cond(s11) > 1e14:
        raise NumericalError("residual moment matrices are numerically singular")

    l_inv = np.linalg.inv(l11)
    core = l_inv @ s01.T @ s00_inv @ s01 @ l_inv.T
    core = (core + core.T) / 2.0
    eigvals, eigvecs = np.linalg.eigh(core)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, 1.0 - 1e-12)
    vectors = l_inv.T @ eigvecs[:, order]  # beta'S11beta = I in this scaling

    beta = _first_nonzero_normalize(vectors)
    alpha = s01 @ beta @ np.linalg.inv(beta.T @ s11 @ beta)

    tail_logs = np.log(1.0 - eigvals)
    trace_stats = -t_eff * np.array([tail_logs[r:].sum() for r in range(p)])
    cvs = np.array(
        [critvals.johansen_trace_critical_value(cv_table, p - r) for r in range(p)]
    )
    rank = select_rank(trace_stats, cvs)

    return JohansenResult(
        variable_names=panel.names,
        eigenvalues=eigvals,
        trace_stats=trace_stats,
        critical_values_5pct=cvs,
        beta=beta,
        alpha=alpha,
        selected_rank=rank,
        t_eff=t_eff,
        k=k,
        cv_table=cv_table,
    )


def select_rank(trace_stats, critical_values) -> int:
    """First hypothesized rank whose trace statistic fails to reject."""
    trace_stats = np.asarray(trace_stats, dtype=float)
    critical_values = np.asarray(critical_values, dtype=float)
    if trace_stats.shape != critical_values.shape:
        raise ValueError("trace statistics and critical values must align")
    for r, (stat, cv) in enumerate(zip(trace_stats, critical_values)):
        if stat <= cv:
            return r
    return len(trace_stats)


def msbic(residual_cov: np.ndarray, k_prime: int, t_eff: int) -> float:
    """Multivariate Schwarz criterion log|Sigma| + (k'/T) log T."""
    residual_cov = np.asarray(residual_cov, dtype=float)
    try:
        np.linalg.cholesky(residual_cov)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("residual covariance is not positive definite") from exc
    sign, logdet = np.linalg.slogdet(residual_cov)
    if sign <= 0:
        raise NumericalError("residual covariance is not positive definite")
    return float(logdet + k_prime / t_eff * np.log(t_eff))


def select_lag(panel: Panel, max_k: int, dummies: bool = True) -> int:
    """Smallest-MSBIC lag count over a common estimation sample.

    Every candidate k is fit on the rows feasible for max_k so the
    criterion values are comparable; ties break toward fewer lags.
    """
    if max_k < 1:
        raise ValueError("max_k must be at least 1")
    T, p = panel.nobs, panel.nvars
    t_eff = T - max_k - 1
    if t_eff <= p * (max_k + 1) + 5:
        raise InsufficientSampleError(f"panel too short to compare lags up to {max_k}")

    deltas = np.diff(panel.values, axis=0)
    dy = deltas[max_k:]
    y_lag = panel.values[max_k : T - 1]
    dummy_block = (
        seasonal_dummies(panel.index).stacked()[max_k + 1 : T] if dummies else None
    )

    best_k, best_value = 1, np.inf
    for k in range(1, max_k + 1):
        z_cols = [deltas[max_k - i : T - 1 - i] for i in range(1, k + 1)]
        z_cols.append(np.ones((t_eff, 1)))
        if dummy_block is not None:
            z_cols.append(dummy_block)
        z_cols.append(y_lag)
        Z = np.hstack(z_cols)
        (resid,) = _qr_residuals(Z, [dy])
        sigma = resid.T @ resid / t_eff
        value = msbic(sigma, Z.shape[1], t_eff)
        if value < best_value - 1e-12:
            best_k, best_value = k, value
    return best_k


@dataclass(frozen=True)
class VecmModel:
    """Estimated rank-r error-correction system.

    ``equations`` holds one OLS fit per differenced variable over a shared
    regressor layout; ``beta`` carries the r cointegrating vectors the
    equilibrium deviations were built from.
    """

    variable_names: tuple[str, ...]
    equations: tuple[RegressionResult, ...]
    beta: np.ndarray  # p x r
    k: int
    rank: int
    dummies: bool
    residual_cov: np.ndarray  # p x p, divided by T_eff
    t_eff: int
    span: tuple[str, str]

    @property
    def p(self) -> int:
        return len(self.variable_names)

    def equation(self, name: str) -> RegressionResult:
        return self.equations[self.variable_names.index(name)]

    def gamma(self, lag_index: int) -> np.ndarray:
        """Short-run coefficient matrix on dy_{t-lag_index}."""
        if not 1 <= lag_index <= self.k:
            raise ValueError(f"lag index must be in 1..{self.k}")
        out = np.empty((self.p, self.p))
        for i, eq in enumerate(self.equations):
            for j, name in enumerate(self.variable_names):
                out[i, j] = eq.coefficient(f"d.{name}.l{lag_index}")
        return out

    @property
    def alpha(self) -> np.ndarray:
        """Adjustment loadings: coefficients on the equilibrium deviations."""
        out = np.empty((self.p, self.rank))
        for i, eq in enumerate(self.equations):
            for j in range(self.rank):
                out[i, j] = eq.coefficient(f"ec{j + 1}")
        return out

    @property
    def pi(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros((self.p, self.p))
        return self.alpha @ self.beta.T

    @property
    def constants(self) -> np.ndarray:
        return np.array([eq.coefficient("const") for eq in self.equations])

    @property
    def dummy_coefficients(self) -> np.ndarray | None:
        if not self.dummies:
            return None
        out = np.empty((self.p, 3))
        for i, eq in enumerate(self.equations):
            for j, name in enumerate(("sd1", "sd2", "sd3")):
                out[i, j] = eq.coefficient(name)
        return out

    def render(self) -> str:
        blocks = []
        for name, eq in zip(self.variable_names, self.equations):
            blocks.append(eq.render(title=f"d.{name} as the dependent variable"))
        return "\n\n".join(blocks)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variable_names),
            "equations": [eq.to_dict() for eq in self.equations],
            "beta": self.beta.tolist(),
            "k": self.k,
            "rank": self.rank,
            "dummies": self.dummies,
            "residual_cov": self.residual_cov.tolist(),
            "t_eff": self.t_eff,
            "span": list(self.span),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "VecmModel":
        return cls(
            variable_names=tuple(d["variables"]),
            equations=tuple(RegressionResult.from_dict(e) for e in d["equations"]),
            beta=np.array(d["beta"], dtype=float).reshape(len(d["variables"]), d["rank"]),
            k=d["k"],
            rank=d["rank"],
            dummies=d["dummies"],
            residual_cov=np.array(d["residual_cov"]),
            t_eff=d["t_eff"],
            span=(d["span"][0], d["span"][1]),
        )


def _model_beta(candidate: np.ndarray, r: int) -> np.ndarray:
    """First r candidate vectors, identified on the leading r x r block."""
    if r == 0:
        return np.zeros((candidate.shape[0], 0))
    block = candidate[:r, :r]
    if np.linalg.cond(block) < 1e10:
        return candidate[:, :r] @ np.linalg.inv(block)
    return _first_nonzero_normalize(candidate[:, :r])


def estimate_vecm(
    panel: Panel,
    r: int,
    k: int,
    dummies: bool = True,
    cv_table: str = "standard",
) -> VecmModel:
    """Fit the p error-correction equations at a given rank and lag count."""
    p = panel.nvars
    if not 0 <= r <= p:
        raise ValueError(f"rank must be in 0..{p}")
    joh = johansen_trace(panel, k, dummies=dummies, cv_table=cv_table)
    beta = _model_beta(joh.beta, r)

    ec_levels = panel.values @ beta  # T x r equilibrium combinations
    ec_terms = [ec_levels[:, j] for j in range(r)]
    dummy_set = seasonal_dummies(panel.index) if dummies else None
    responses, design = build_vecm_design(panel, k, ec_terms, dummy_set)

    equations = tuple(ols(responses[f"d.{name}"], design) for name in panel.names)
    resid = np.column_stack([eq.residuals for eq in equations])
    residual_cov = resid.T @ resid / resid.shape[0]

    return VecmModel(
        variable_names=panel.names,
        equations=equations,
        beta=beta,
        k=k,
        rank=r,
        dummies=dummies,
        residual_cov=residual_cov,
        t_eff=design.nrows,
        span=(str(panel.index[0]), str(panel.index[-1])),
    )
