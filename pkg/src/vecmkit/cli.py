"""Command-line driver for the full quarterly-panel pipeline.

Subcommands mirror the analysis stages: summary statistics, unit-root
classification, the two-step residual cointegration test, the trace rank
test, system estimation, holdout forecasting, impulse responses, the
variance decomposition, and a combined report.  All behavior is driven
by a JSON config file; flags override config values.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import dynamics, johansen, svgplot, unitroot
from .dataio import (
    Panel,
    SeriesSpec,
    load_panel,
    panel_to_json_records,
    parse_quarter,
    summarize,
    write_panel_csv,
)
from .errors import ConfigError, DataError, NumericalError, VecmkitError
from .series import seasonal_dummies

FORMATS = ("text", "csv", "json", "svg")
SUBCOMMANDS = ("summary", "unitroot", "eg", "johansen", "fit", "forecast", "irf", "fevd", "report")


@dataclass
class RunConfig:
    """Fully resolved run settings; see configs/snapshot.json for a template."""

    data_dir: Path
    series: list[SeriesSpec]
    variable_order: list[str]
    date_column: str = "DATE"
    sample_start: str | None = None
    sample_end: str | None = None
    holdout: int = 8
    lags: int | str = "auto"
    rank: int | str = "auto"
    max_lag_grid: int = 6
    deterministic: str = "constant"
    adf_lags: int = 4
    adf_lag_rule: str = "fixed"
    dummies: bool = True
    cv_table: str = "standard"
    dependent: str | None = None
    ordering: list[str] = field(default_factory=list)
    horizon: int = 8
    out_dir: Path = Path("out")
    formats: list[str] = field(default_factory=lambda: ["text"])
    seed: int = 0

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["data_dir"] = str(self.data_dir)
        d["out_dir"] = str(self.out_dir)
        d["series"] = [
            {"name": s.name, "source_column": s.source_column, "transform": s.transform}
            for s in self.series
        ]
        return d


def _validate(raw: dict, base: Path) -> RunConfig:
    """Build a RunConfig, reporting every problem at once."""
    problems: list[str] = []

    def check(condition: bool, message: str) -> None:
        if not condition:
            problems.append(message)

    series_raw = raw.get("series", [])
    check(isinstance(series_raw, list) and series_raw, "config needs a nonempty 'series' list")
    series: list[SeriesSpec] = []
    for i, entry in enumerate(series_raw if isinstance(series_raw, list) else []):
        if not isinstance(entry, dict) or "name" not in entry or "source_column" not in entry:
            problems.append(f"series[{i}] must carry 'name' and 'source_column'")
            continue
        series.append(
            SeriesSpec(entry["name"], entry["source_column"], entry.get("transform", "none"))
        )
    names = [s.name for s in series]
    check(len(set(names)) == len(names), f"duplicate series names: {names}")

    order = raw.get("variable_order", names)
    for v in order:
        check(v in names, f"variable_order entry {v!r} not among series names")
    check(len(order) == len(names), "variable_order must list every series exactly once")

    dependent = raw.get("dependent", order[0] if order else None)
    if dependent is not None:
        check(dependent in names, f"dependent {dependent!r} not among series names")

    ordering = raw.get("ordering", order)
    check(sorted(ordering) == sorted(order), "ordering must be a permutation of variable_order")

    for key, value in (("lags", raw.get("lags", "auto")), ("rank", raw.get("rank", "auto"))):
        if value != "auto":
            check(isinstance(value, int) and value >= (1 if key == "lags" else 0),
                  f"{key} must be 'auto' or a nonnegative integer (positive for lags)")

    holdout = raw.get("holdout", 8)
    check(isinstance(holdout, int) and holdout >= 1, "holdout must be a positive integer")
    horizon = raw.get("horizon", 8)
    check(isinstance(horizon, int) and horizon >= 1, "horizon must be a positive integer")

    deterministic = raw.get("deterministic", "constant")
    check(deterministic in unitroot.DETERMINISTIC_SPECS,
          f"deterministic must be one of {unitroot.DETERMINISTIC_SPECS}")
    cv_table = raw.get("cv_table", "standard")
    check(cv_table in ("standard", "paper"), "cv_table must be 'standard' or 'paper'")
    adf_lag_rule = raw.get("adf_lag_rule", "fixed")
    check(adf_lag_rule in ("fixed", "bic"), "adf_lag_rule must be 'fixed' or 'bic'")

    formats = raw.get("formats", ["text"])
    for fmt in formats:
        check(fmt in FORMATS, f"unknown output format {fmt!r}")

    for key in ("sample_start", "sample_end"):
        if raw.get(key) is not None:
            try:
                parse_quarter(raw[key])
            except VecmkitError as exc:
                problems.append(f"{key}: {exc}")

    if "data_dir" not in raw:
        problems.append("config needs 'data_dir'")

    if problems:
        raise ConfigError("invalid configuration:\n  - " + "\n  - ".join(problems))

    data_dir = Path(raw["data_dir"])
    if not data_dir.is_absolute():
        data_dir = (base / data_dir).resolve()
    out_dir = Path(raw.get("out_dir", "out"))

    return RunConfig(
        data_dir=data_dir,
        series=series,
        variable_order=list(order),
        date_column=raw.get("date_column", "DATE"),
        sample_start=raw.get("sample_start"),
        sample_end=raw.get("sample_end"),
        holdout=holdout,
        lags=raw.get("lags", "auto"),
        rank=raw.get("rank", "auto"),
        max_lag_grid=raw.get("max_lag_grid", 6),
        deterministic=deterministic,
        adf_lags=raw.get("adf_lags", 4),
        adf_lag_rule=adf_lag_rule,
        dummies=raw.get("dummies", True),
        cv_table=cv_table,
        dependent=dependent,
        ordering=list(ordering),
        horizon=horizon,
        out_dir=out_dir,
        formats=list(formats),
        seed=raw.get("seed", 0),
    )


def load_config(path: str | Path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if overrides:
        raw.update({k: v for k, v in overrides.items() if v is not None})
    return _validate(raw, path.parent)


def _load_ordered_panel(config: RunConfig) -> Panel:
    panel = load_panel(config.data_dir, config.series, config.date_column)
    start = parse_quarter(config.sample_start) if config.sample_start else None
    end = parse_quarter(config.sample_end) if config.sample_end else None
    if start or end:
        panel = panel.subset(start, end)
    if config.holdout >= panel.nobs - 20:
        raise ConfigError(
            f"holdout {config.holdout} too large for a {panel.nobs}-quarter sample"
        )
    return panel.reorder(config.variable_order)


class _Emitter:
    """Routes rendered artifacts to stdout and the output directory."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.out = Path(config.out_dir)
        self.written: list[Path] = []

    def file(self, name: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        path = self.out / name
        self.written.append(path)
        return path

    def wants(self, fmt: str) -> bool:
        return fmt in self.config.formats

    def text(self, name: str, content: str) -> None:
        if self.wants("text"):
            print(content)
            self.file(f"{name}.txt").write_text(content + "\n", encoding="utf-8")

    def json(self, name: str, payload) -> None:
        if self.wants("json"):
            self.file(f"{name}.json").write_text(
                json.dumps(payload, indent=2) + "\n", encoding="utf-8"
            )

    def csv_via(self, name: str, writer_fn) -> None:
        if self.wants("csv"):
            writer_fn(self.file(f"{name}.csv"))

    def svg_path(self, name: str) -> Path:
        return self.file(f"{name}.svg")


def _fit_models(config: RunConfig, panel: Panel):
    """Resolve auto settings and estimate the system on the given sample."""
    k = config.lags if isinstance(config.lags, int) else johansen.select_lag(
        panel, config.max_lag_grid, dummies=config.dummies
    )
    if isinstance(config.rank, int):
        rank = config.rank
    else:
        rank = johansen.johansen_trace(
            panel, k, dummies=config.dummies, cv_table=config.cv_table
        ).selected_rank
    model = johansen.estimate_vecm(
        panel, rank, k, dummies=config.dummies, cv_table=config.cv_table
    )
    return model, dynamics.vecm_to_var(model)


def cmd_summary(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    table = summarize(panel)
    emit = _Emitter(config)
    emit.text("summary", table.render())
    emit.json("summary", json.loads(table.to_json()))
    emit.csv_via("summary", table.write_csv)
    emit.csv_via("panel", lambda p: write_panel_csv(panel, p))
    if emit.wants("json"):
        emit.file("panel.json").write_text(panel_to_json_records(panel) + "\n", encoding="utf-8")


def cmd_unitroot(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    emit = _Emitter(config)
    lines = [
        f"{'variable':<12}{'statistic':>12}{'5% critical':>13}{'lags':>6}  decision (spec: "
        f"{config.deterministic})",
        "-" * 70,
    ]
    payload = []
    for name in panel.names:
        result = unitroot.adf_test(
            panel.column(name), config.deterministic, config.adf_lags, config.adf_lag_rule
        )
        order = unitroot.classify_integration(
            panel.column(name), 2, config.deterministic, config.adf_lags, config.adf_lag_rule
        )
        order_text = f"I({order})" if order is not None else "inconclusive"
        lines.append(
            f"{name:<12}{result.statistic:>12.3f}{result.critical_values['5%']:>13.3f}"
            f"{result.lags_used:>6}  {result.decision()} -> {order_text}"
        )
        payload.append({"variable": name, "integration_order": order, **result.to_dict()})
    emit.text("unitroot", "\n".join(lines))
    emit.json("unitroot", payload)


def cmd_eg(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    dependent = config.dependent or panel.names[0]
    result = unitroot.engle_granger(panel, dependent, config.adf_lags, config.adf_lag_rule)
    emit = _Emitter(config)
    text = result.step1.render(title=f"Levels regression, dependent: {dependent}")
    text += (
        f"\n\nResidual unit-root statistic: {result.residual_test.statistic:.3f}"
        f"  (5% critical {result.residual_test.critical_values['5%']:.3f})"
        f"\nCointegrated at 5%: {'yes' if result.cointegrated else 'no'}"
    )
    emit.text("eg", text)
    emit.json("eg", result.to_dict())


def cmd_johansen(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    k = config.lags if isinstance(config.lags, int) else johansen.select_lag(
        panel, config.max_lag_grid, dummies=config.dummies
    )
    result = johansen.johansen_trace(panel, k, dummies=config.dummies, cv_table=config.cv_table)
    emit = _Emitter(config)
    emit.text("johansen", result.render())
    emit.json("johansen", result.to_dict())


def cmd_fit(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    model, _ = _fit_models(config, panel)
    emit = _Emitter(config)
    emit.text("equations", model.render())
    # the model document is the contract artifact downstream tools consume
    emit.file("model.json").write_text(model.to_json() + "\n", encoding="utf-8")


def _holdout_forecast(config: RunConfig, panel: Panel):
    cut = panel.nobs - config.holdout
    fit_panel = Panel(panel.index[:cut], panel.names, panel.values[:cut])
    model, var_model = _fit_models(config, fit_panel)
    future_index = panel.index[cut:]
    dummies = seasonal_dummies(future_index) if config.dummies else None
    return dynamics.forecast(
        var_model,
        fit_panel,
        config.holdout,
        future_dummies=dummies,
        actuals=panel.values[cut:],
    )


def cmd_forecast(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    result = _holdout_forecast(config, panel)
    emit = _Emitter(config)
    emit.text("forecast", result.render())
    emit.json("forecast", result.to_dict())
    emit.csv_via("forecast", result.write_csv)
    if emit.wants("svg"):
        for j, name in enumerate(result.variable_names):
            svgplot.write_line_chart(
                emit.svg_path(f"forecast_{name}"),
                list(range(1, result.horizon + 1)),
                {
                    "actual": result.actuals[:, j],
                    "predicted": result.point_forecasts[:, j],
                },
                title=f"{name}: holdout forecast",
                x_label="quarters ahead",
                y_label=name,
            )


def cmd_irf(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    _, var_model = _fit_models(config, panel)
    emit = _Emitter(config)
    for impulse in config.ordering:
        result = dynamics.irf(var_model, impulse, config.horizon, ordering=config.ordering)
        emit.json(f"irf_{impulse}", result.to_dict())
        emit.csv_via(f"irf_{impulse}", result.write_csv)
        if emit.wants("svg"):
            svgplot.write_line_chart(
                emit.svg_path(f"irf_{impulse}"),
                list(range(result.horizon + 1)),
                {f"d.{n}": result.response(n) for n in result.variable_names},
                title=f"Orthogonal impulse response from d.{impulse}",
                x_label="horizon (quarters)",
                y_label="response",
            )
        if emit.wants("text"):
            lines = [f"Orthogonal impulse response from d.{impulse}"]
            lines.append("".join(f"{f'd.{n}':>14}" for n in result.variable_names))
            for s in range(result.horizon + 1):
                lines.append("".join(f"{v:>14.6g}" for v in result.responses[s]))
            emit.text(f"irf_{impulse}", "\n".join(lines))


def cmd_fevd(config: RunConfig) -> None:
    panel = _load_ordered_panel(config)
    _, var_model = _fit_models(config, panel)
    result = dynamics.fevd(var_model, config.horizon, ordering=config.ordering)
    emit = _Emitter(config)
    emit.text("fevd", result.render())
    emit.json("fevd", result.to_dict())
    emit.csv_via("fevd", result.write_csv)


def cmd_report(config: RunConfig) -> None:
    for step in (
        cmd_summary,
        cmd_unitroot,
        cmd_eg,
        cmd_johansen,
        cmd_fit,
        cmd_forecast,
        cmd_irf,
        cmd_fevd,
    ):
        step(config)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "run_config.json").write_text(
        json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8"
    )


_DISPATCH = {
    "summary": cmd_summary,
    "unitroot": cmd_unitroot,
    "eg": cmd_eg,
    "johansen": cmd_johansen,
    "fit": cmd_fit,
    "forecast": cmd_forecast,
    "irf": cmd_irf,
    "fevd": cmd_fevd,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vecmkit",
        description="Cointegration, error-correction estimation and forecasting "
        "for quarterly macroeconomic panels.",
    )
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--lags", help="differenced-lag count, or 'auto'")
    parser.add_argument("--rank", help="cointegration rank, or 'auto'")
    parser.add_argument("--holdout", type=int, help="holdout quarters for forecasting")
    parser.add_argument("--ordering", help="comma-separated shock ordering")
    parser.add_argument("--cv-table", dest="cv_table", choices=("standard", "paper"))
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", dest="formats", help="comma-separated: text,csv,json,svg")
    parser.add_argument("--seed", type=int, help="generator seed recorded with the run")
    return parser


def _overrides_from_args(args: argparse.Namespace) -> dict:
    overrides: dict = {}
    if args.lags is not None:
        overrides["lags"] = args.lags if args.lags == "auto" else _as_int("--lags", args.lags)
    if args.rank is not None:
        overrides["rank"] = args.rank if args.rank == "auto" else _as_int("--rank", args.rank)
    if args.holdout is not None:
        overrides["holdout"] = args.holdout
    if args.ordering is not None:
        overrides["ordering"] = [v.strip() for v in args.ordering.split(",") if v.strip()]
    if args.cv_table is not None:
        overrides["cv_table"] = args.cv_table
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.formats is not None:
        overrides["formats"] = [v.strip() for v in args.formats.split(",") if v.strip()]
    if args.seed is not None:
        overrides["seed"] = args.seed
    return overrides


def _as_int(flag: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{flag} expects an integer or 'auto', got {value!r}") from None


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, _overrides_from_args(args))
        _DISPATCH[args.command](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
