import math

import numpy as np
import pytest

from vecmkit.errors import InsufficientSampleError, SingularDesignError
from vecmkit.regress import (
    RegressionResult,
    f_survival,
    ols,
    significance_stars,
    student_t_two_sided_p,
)
from vecmkit.series import DesignMatrix


def solve_normal_equations(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Independent oracle: X'X b = X'y by explicit Gaussian elimination."""
    a = (X.T @ X).astype(float)
    b = (X.T @ y).astype(float)
    n = len(b)
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            b[[col, pivot]] = b[[pivot, col]]
        for row in range(col + 1, n):
            factor = a[row, col] / a[col, col]
            a[row, col:] -= factor * a[col, col:]
            b[row] -= factor * b[col]
    out = np.zeros(n)
    for col in range(n - 1, -1, -1):
        out[col] = (b[col] - a[col, col + 1 :] @ out[col + 1 :]) / a[col, col]
    return out


def t_pdf_integral(t: float, df: int) -> float:
    """Quadrature oracle for the two-sided t tail.

    Substituting u = sqrt(df) * tan(theta) maps the tail onto the finite
    interval [atan(|t|/sqrt(df)), pi/2] with integrand cos(theta)^(df-1),
    handled by composite Simpson; heavy tails need no truncation.
    """
    c = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(df * math.pi)
    lo, hi, n = math.atan(abs(t) / math.sqrt(df)), math.pi / 2, 40001
    grid = np.linspace(lo, hi, n)
    values = np.cos(grid) ** (df - 1)
    h = (hi - lo) / (n - 1)
    simpson = h / 3 * (values[0] + values[-1] + 4 * values[1:-1:2].sum() + 2 * values[2:-1:2].sum())
    return 2.0 * c * math.sqrt(df) * simpson


class TestStudentT:
    def test_symmetry_at_zero(self):
        for df in (1, 5, 100):
            assert student_t_two_sided_p(0.0, df) == pytest.approx(1.0)

    def test_normal_limit(self):
        assert student_t_two_sided_p(1.96, 10000) == pytest.approx(0.05, abs=0.002)

    def test_against_quadrature_oracle(self):
        for t, df in [(0.5, 3), (1.0, 10), (2.5, 7), (1.96, 10000), (4.0, 30), (0.1, 1)]:
            assert student_t_two_sided_p(t, df) == pytest.approx(
                t_pdf_integral(t, df), abs=1e-8
            )

    def test_monotone_decreasing_in_magnitude(self):
        ps = [student_t_two_sided_p(t, 12) for t in (0.0, 0.5, 1.0, 2.0, 5.0, 20.0)]
        assert all(a > b for a, b in zip(ps, ps[1:]))

    def test_limit_at_infinity(self):
        assert student_t_two_sided_p(50.0, 5) < 1e-6
        assert student_t_two_sided_p(float("inf"), 5) == 0.0

    def test_f_survival_consistency(self):
        # F(1, df) equals t(df) squared
        for t, df in [(1.3, 9), (2.4, 25)]:
            assert f_survival(t * t, 1, df) == pytest.approx(
                student_t_two_sided_p(t, df), abs=1e-10
            )


class TestOls:
    def test_exact_fit_single_column(self):
        X = DesignMatrix(("x",), np.array([[1.0], [2.0], [3.0]]))
        fit = ols([2.0, 4.0, 6.0], X)
        assert fit.coefficients[0] == pytest.approx(2.0)
        assert np.allclose(fit.residuals, 0.0, atol=1e-12)
        assert fit.r_squared == pytest.approx(1.0)

    def test_matches_normal_equations_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n, k = 30, 4
            X = rng.normal(size=(n, k)) * rng.uniform(0.5, 50, size=k)
            y = X @ rng.normal(size=k) + rng.normal(size=n)
            design = DesignMatrix(tuple(f"x{i}" for i in range(k)), X)
            fit = ols(y, design)
            oracle = solve_normal_equations(X, y)
            assert np.allclose(fit.coefficients, oracle, rtol=1e-8, atol=1e-10)

    def test_scaling_regressor_rescales_coefficient_only(self):
        rng = np.random.default_rng(7)
        n = 40
        base = np.column_stack([rng.normal(size=n), rng.normal(size=n), np.ones(n)])
        y = base @ [1.0, -2.0, 0.5] + rng.normal(size=n)
        names = ("a", "b", "const")
        fit1 = ols(y, DesignMatrix(names, base))
        scaled = base.copy()
        scaled[:, 0] *= 10.0
        fit2 = ols(y, DesignMatrix(names, scaled))
        assert fit2.coefficients[0] == pytest.approx(fit1.coefficients[0] / 10.0)
        assert fit2.t_stats[0] == pytest.approx(fit1.t_stats[0])
        assert fit2.p_values[0] == pytest.approx(fit1.p_values[0])
        assert fit2.r_squared == pytest.approx(fit1.r_squared)
        assert np.allclose(fit2.residuals, fit1.residuals)

    def test_fitted_plus_residuals_reconstruct(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(25, 3))
        y = rng.normal(size=25) * 100
        fit = ols(y, DesignMatrix(("a", "b", "c"), X))
        assert np.allclose(fit.fitted + fit.residuals, y, rtol=1e-10)

    def test_residuals_orthogonal_to_design(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(30, 4)) * [1, 10, 100, 1000]
        y = rng.normal(size=30)
        fit = ols(y, DesignMatrix(("a", "b", "c", "d"), X))
        for j in range(4):
            assert abs(X[:, j] @ fit.residuals) < 1e-6 * np.abs(X[:, j]).sum()

    def test_singular_design_names_columns(self):
        X = np.column_stack([np.arange(10.0), np.arange(10.0) * 2, np.ones(10)])
        with pytest.raises(SingularDesignError) as err:
            ols(np.arange(10.0), DesignMatrix(("a", "twice_a", "const"), X))
        assert "twice_a" in str(err.value) or "a" in str(err.value)

    def test_insufficient_sample(self):
        X = DesignMatrix(("a", "b"), np.ones((2, 2)))
        with pytest.raises(InsufficientSampleError):
            ols([1.0, 2.0], X)

    def test_t_equals_coef_over_se(self):
        rng = np.random.default_rng(10)
        X = rng.normal(size=(20, 3))
        y = rng.normal(size=20)
        fit = ols(y, DesignMatrix(("a", "b", "c"), X))
        assert np.allclose(fit.t_stats, fit.coefficients / fit.standard_errors)

    def test_f_statistic_against_r_squared_identity(self):
        rng = np.random.default_rng(12)
        n = 60
        X = np.column_stack([rng.normal(size=n), rng.normal(size=n), np.ones(n)])
        y = X @ [0.5, -0.2, 1.0] + rng.normal(size=n)
        fit = ols(y, DesignMatrix(("a", "b", "const"), X))
        r2 = fit.r_squared
        expected = (r2 / 2) / ((1 - r2) / (n - 3))
        assert fit.f_stat == pytest.approx(expected, rel=1e-10)
        assert fit.f_df == (2, 57)

    def test_render_layout(self):
        rng = np.random.default_rng(13)
        X = np.column_stack([rng.normal(size=30), np.ones(30)])
        y = 5 * X[:, 0] + rng.normal(size=30) * 0.1
        text = ols(y, DesignMatrix(("slope", "const"), X)).render(title="demo")
        assert "Estimate" in text and "Pr(>|t|)" in text
        assert "Observations" in text and "R-squared" in text
        assert "***" in text

    def test_round_trip_dict(self):
        rng = np.random.default_rng(14)
        X = np.column_stack([rng.normal(size=15), np.ones(15)])
        fit = ols(rng.normal(size=15), DesignMatrix(("a", "const"), X))
        again = RegressionResult.from_dict(fit.to_dict())
        assert again.regressor_names == fit.regressor_names
        assert np.allclose(again.coefficients, fit.coefficients)
        assert np.allclose(again.residuals, fit.residuals)


class TestStars:
    @pytest.mark.parametrize(
        "p,marker",
        [(0.0005, "***"), (0.005, "**"), (0.03, "*"), (0.08, "."), (0.5, "")],
    )
    def test_thresholds(self, p, marker):
        assert significance_stars(p) == marker
