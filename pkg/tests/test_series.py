import numpy as np
import pytest

from vecmkit.errors import InsufficientSampleError
from vecmkit.series import (
    DesignMatrix,
    DummySet,
    build_vecm_design,
    difference,
    lag,
    seasonal_dummies,
)

from conftest import make_panel, quarters


class TestDifference:
    def test_hand_computed(self):
        assert np.array_equal(difference([1, 3, 6], 1), [2, 3])

    def test_constant_series(self):
        for order in (1, 2, 3):
            assert np.all(difference(np.full(10, 7.0), order) == 0)

    def test_order_too_large(self):
        with pytest.raises(InsufficientSampleError):
            difference([1, 2, 3], 3)

    def test_inverts_cumsum(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=50)
        assert np.allclose(difference(np.cumsum(x), 1), x[1:], atol=1e-12)

    def test_snapshot_gdp_differences(self, snapshot_panel):
        d = difference(snapshot_panel.column("gdp"), 1)
        assert np.mean(d) == pytest.approx(55, rel=0.01)
        assert np.std(d, ddof=1) == pytest.approx(66, rel=0.01)


class TestLag:
    def test_basic_shift(self):
        out = lag([1.0, 2.0, 3.0], 1)
        assert np.isnan(out[0])
        assert np.array_equal(out[1:], [1.0, 2.0])

    def test_composition(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=30)
        twice = lag(lag(x, 1), 1)
        direct = lag(x, 2)
        assert np.array_equal(twice[2:], direct[2:])

    def test_identity(self):
        x = np.arange(5.0)
        assert np.array_equal(lag(x, 0), x)

    def test_lag_too_large(self):
        with pytest.raises(InsufficientSampleError):
            lag([1.0, 2.0], 2)


class TestSeasonalDummies:
    def test_one_year(self):
        d = seasonal_dummies(quarters(4))
        assert np.array_equal(d.sd1, [1, 0, 0, 0])
        assert np.array_equal(d.sd2, [0, 1, 0, 0])
        assert np.array_equal(d.sd3, [0, 0, 1, 0])

    def test_all_q4(self):
        idx = tuple(q for q in quarters(40) if q.quarter == 4)
        d = seasonal_dummies(idx)
        assert not d.sd1.any() and not d.sd2.any() and not d.sd3.any()

    def test_269_quarter_counts(self):
        # 1950..2016 contribute 67 of each quarter; 2017Q1 adds one more Q1
        d = seasonal_dummies(quarters(269))
        assert d.sd1.sum() == 68
        assert d.sd2.sum() == 67
        assert d.sd3.sum() == 67

    def test_row_sums_zero_or_one(self):
        d = seasonal_dummies(quarters(269))
        sums = d.sd1 + d.sd2 + d.sd3
        assert set(np.unique(sums)) <= {0.0, 1.0}

    def test_rejects_non_indicator(self):
        with pytest.raises(ValueError):
            DummySet(np.array([0.5]), np.array([0.0]), np.array([0.0]))


class TestBuildVecmDesign:
    def _panel(self, T=30, p=4, seed=0):
        rng = np.random.default_rng(seed)
        cols = {f"v{i}": np.cumsum(rng.normal(size=T)) for i in range(p)}
        return make_panel(cols)

    def test_reported_layout_p4_k2_r3(self):
        panel = self._panel()
        ec = [np.zeros(panel.nobs) for _ in range(3)]
        responses, design = build_vecm_design(panel, 2, ec, seasonal_dummies(panel.index))
        assert design.ncols == 15
        assert design.names == (
            "d.v0.l1", "d.v1.l1", "d.v2.l1", "d.v3.l1",
            "d.v0.l2", "d.v1.l2", "d.v2.l2", "d.v3.l2",
            "const", "sd1", "sd2", "sd3", "ec1", "ec2", "ec3",
        )
        assert set(responses) == {"d.v0", "d.v1", "d.v2", "d.v3"}

    def test_minimal_design(self):
        panel = self._panel(T=20, p=3)
        _, design = build_vecm_design(panel, 1, [], None)
        assert design.ncols == panel.nvars + 1

    def test_effective_sample_269_k2(self):
        panel = self._panel(T=269)
        responses, design = build_vecm_design(panel, 2, [], seasonal_dummies(panel.index))
        assert design.nrows == 266
        assert all(len(v) == 266 for v in responses.values())

    def test_column_count_formula(self):
        panel = self._panel(T=60)
        for k in (1, 2, 3):
            for r in (0, 1, 2):
                ec = [np.zeros(panel.nobs) for _ in range(r)]
                _, design = build_vecm_design(panel, k, ec, seasonal_dummies(panel.index))
                assert design.ncols == panel.nvars * k + 1 + 3 + r

    def test_alignment_against_hand_built_rows(self):
        # spot-check one row: regressors at t are the lagged differences
        panel = self._panel(T=12, p=2, seed=9)
        values = panel.values
        responses, design = build_vecm_design(panel, 2, [values[:, 0] * 0.5], None)
        t = 5  # level index; design row t - k - 1
        row = design.data[t - 3]
        deltas = np.diff(values, axis=0)
        assert responses["d.v0"][t - 3] == pytest.approx(deltas[t - 1, 0])
        assert row[0] == pytest.approx(deltas[t - 2, 0])  # d.v0.l1
        assert row[3] == pytest.approx(deltas[t - 3, 1])  # d.v1.l2
        assert row[4] == 1.0  # const
        assert row[5] == pytest.approx(0.5 * values[t - 1, 0])  # ec1 uses y_{t-1}

    def test_insufficient_sample(self):
        panel = self._panel(T=12)
        with pytest.raises(InsufficientSampleError):
            build_vecm_design(panel, 2, [], seasonal_dummies(panel.index))

    def test_design_unique_names_enforced(self):
        with pytest.raises(ValueError):
            DesignMatrix(("a", "a"), np.ones((3, 2)))
