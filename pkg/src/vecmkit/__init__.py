"""Cointegration and error-correction toolkit for quarterly macro panels."""

from .dataio import (
    Panel,
    QuarterIndex,
    SeriesSpec,
    load_panel,
    parse_quarter,
    quarter_range,
    read_panel_csv,
    summarize,
    write_panel_csv,
)
from .dynamics import (
    FevdMatrix,
    ForecastResult,
    IrfResult,
    LevelVarModel,
    fevd,
    forecast,
    irf,
    mape,
    rmse,
    vecm_to_var,
)
from .errors import (
    ConfigError,
    DataError,
    InsufficientSampleError,
    NumericalError,
    ParseError,
    SingularDesignError,
    VecmkitError,
)
from .johansen import (
    JohansenResult,
    VecmModel,
    estimate_vecm,
    johansen_trace,
    msbic,
    select_lag,
    select_rank,
)
from .regress import RegressionResult, ols, student_t_two_sided_p
from .series import (
    DesignMatrix,
    DummySet,
    build_vecm_design,
    difference,
    lag,
    seasonal_dummies,
)
from .unitroot import AdfResult, EgResult, adf_test, classify_integration, engle_granger

__version__ = "0.1.0"

__all__ = [
    "AdfResult",
    "ConfigError",
    "DataError",
    "DesignMatrix",
    "DummySet",
    "EgResult",
    "FevdMatrix",
    "ForecastResult",
    "InsufficientSampleError",
    "IrfResult",
    "JohansenResult",
    "LevelVarModel",
    "NumericalError",
    "Panel",
    "ParseError",
    "QuarterIndex",
    "RegressionResult",
    "SeriesSpec",
    "SingularDesignError",
    "VecmModel",
    "VecmkitError",
    "adf_test",
    "build_vecm_design",
    "classify_integration",
    "difference",
    "engle_granger",
    "estimate_vecm",
    "fevd",
    "forecast",
    "irf",
    "johansen_trace",
    "lag",
    "load_panel",
    "mape",
    "msbic",
    "ols",
    "parse_quarter",
    "quarter_range",
    "read_panel_csv",
    "rmse",
    "seasonal_dummies",
    "select_lag",
    "select_rank",
    "student_t_two_sided_p",
    "summarize",
    "vecm_to_var",
    "write_panel_csv",
]
