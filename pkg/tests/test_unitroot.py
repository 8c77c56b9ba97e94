import numpy as np
import pytest

from vecmkit.errors import InsufficientSampleError
from vecmkit.unitroot import adf_test, classify_integration, engle_granger

from conftest import make_panel


def ar1(rng, n, phi, scale=1.0):
    out = np.zeros(n)
    shocks = rng.normal(size=n) * scale
    for t in range(1, n):
        out[t] = phi * out[t - 1] + shocks[t]
    return out


class TestAdf:
    def test_random_walk_mostly_fails_to_reject(self):
        rng = np.random.default_rng(101)
        rejections = sum(
            adf_test(np.cumsum(rng.normal(size=500))).rejects() for _ in range(200)
        )
        assert rejections / 200 <= 0.10

    def test_white_noise_always_rejected_at_t500(self):
        # power at this sample size is essentially one
        rng = np.random.default_rng(102)
        rejections = sum(adf_test(rng.normal(size=500)).rejects() for _ in range(200))
        assert rejections / 200 >= 0.99

    def test_statistic_scale_invariant(self):
        rng = np.random.default_rng(103)
        x = np.cumsum(rng.normal(size=300))
        base = adf_test(x).statistic
        assert adf_test(17.5 * x).statistic == pytest.approx(base, abs=1e-10)

    def test_decision_matches_critical_value(self):
        rng = np.random.default_rng(104)
        for _ in range(20):
            result = adf_test(np.cumsum(rng.normal(size=120)))
            assert result.rejects() == (result.statistic < result.critical_values["5%"])

    def test_too_short(self):
        with pytest.raises(InsufficientSampleError):
            adf_test(np.zeros(10), max_lags=4)

    def test_deterministic_specs_change_design(self):
        rng = np.random.default_rng(105)
        x = np.cumsum(rng.normal(size=200)) + np.arange(200) * 0.5
        none = adf_test(x, deterministic="none")
        const = adf_test(x, deterministic="constant")
        trend = adf_test(x, deterministic="constant+trend")
        assert len({none.statistic, const.statistic, trend.statistic}) == 3
        assert trend.critical_values["5%"] < const.critical_values["5%"]

    def test_bic_rule_prunes_lags_for_simple_ar(self):
        rng = np.random.default_rng(106)
        x = ar1(rng, 400, 0.5)
        result = adf_test(x, max_lags=6, lag_rule="bic")
        assert result.lags_used <= 2

    def test_snapshot_gdp_level_statistic(self, snapshot_panel):
        result = adf_test(snapshot_panel.column("gdp"))
        assert result.statistic == pytest.approx(2.03, abs=0.5)
        assert not result.rejects()


class TestClassifyIntegration:
    def test_random_walk_is_i1(self):
        rng = np.random.default_rng(107)
        hits = sum(
            classify_integration(np.cumsum(rng.normal(size=400))) == 1 for _ in range(50)
        )
        assert hits >= 45

    def test_white_noise_is_i0(self):
        rng = np.random.default_rng(108)
        hits = sum(classify_integration(rng.normal(size=400)) == 0 for _ in range(50))
        assert hits >= 48

    def test_differencing_lowers_order_by_one(self):
        rng = np.random.default_rng(109)
        for _ in range(20):
            x = np.cumsum(np.cumsum(rng.normal(size=500)))  # I(2)
            d_level = classify_integration(x, max_order=3)
            d_diff = classify_integration(np.diff(x), max_order=3)
            if d_level is not None and d_diff is not None:
                assert d_diff == d_level - 1

    def test_snapshot_variables_all_i1(self, snapshot_panel):
        for name in snapshot_panel.names:
            assert classify_integration(snapshot_panel.column(name)) == 1, name


class TestEngleGranger:
    def test_constructed_cointegration_detected(self):
        rng = np.random.default_rng(110)
        n = 500
        x1 = np.cumsum(rng.normal(size=n))
        x2 = np.cumsum(rng.normal(size=n))
        y = 2.0 * x1 - 1.0 * x2 + 3.0 + ar1(rng, n, 0.4)
        panel = make_panel({"y": y, "x1": x1, "x2": x2})
        result = engle_granger(panel, "y")
        assert result.cointegrated
        assert result.step1.coefficient("x1") == pytest.approx(2.0, abs=0.1)
        assert result.step1.coefficient("x2") == pytest.approx(-1.0, abs=0.1)

    def test_independent_walks_rarely_flagged(self):
        rng = np.random.default_rng(111)
        flagged = 0
        for _ in range(100):
            panel = make_panel(
                {
                    "a": np.cumsum(rng.normal(size=500)),
                    "b": np.cumsum(rng.normal(size=500)),
                }
            )
            flagged += engle_granger(panel, "a").cointegrated
        assert flagged / 100 <= 0.10

    def test_residuals_have_zero_mean(self):
        rng = np.random.default_rng(112)
        panel = make_panel(
            {
                "a": np.cumsum(rng.normal(size=200)),
                "b": np.cumsum(rng.normal(size=200)),
                "c": np.cumsum(rng.normal(size=200)),
            }
        )
        result = engle_granger(panel, "a")
        assert abs(result.step1.residuals.mean()) < 1e-8

    def test_residual_test_spec_is_none(self):
        rng = np.random.default_rng(113)
        panel = make_panel(
            {"a": np.cumsum(rng.normal(size=100)), "b": np.cumsum(rng.normal(size=100))}
        )
        result = engle_granger(panel, "a")
        assert result.residual_test.deterministic == "none"

    def test_snapshot_levels_regression(self, snapshot_panel):
        # reported step-1 coefficients: signs exact, magnitudes within 20%
        result = engle_granger(snapshot_panel, "gdp")
        step1 = result.step1
        assert step1.coefficient("disc_rate") == pytest.approx(-85, rel=0.2)
        assert step1.coefficient("cpi") == pytest.approx(27, rel=0.2)
        assert step1.coefficient("us_pop") == pytest.approx(0.050, rel=0.2)
        assert step1.coefficient("const") == pytest.approx(-6232, rel=0.2)

    def test_snapshot_residual_statistic(self, snapshot_panel):
        result = engle_granger(snapshot_panel, "gdp")
        assert result.residual_test.statistic == pytest.approx(-2.93, abs=0.5)
