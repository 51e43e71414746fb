"""Experiment runner with CSV/JSON output.

Six scenarios: MSE versus polynomial degree (``sweep-l``), versus pilot SNR
with floor overlays (``sweep-snr``), versus receive-antenna count
(``sweep-nr``), sliding-window weight tracking (``adaptive``), shrinkage
covariance robustness (``shrinkage``), and FLOP cost curves (``flops``).
Every scenario is deterministic under a fixed seed and emits one CSV row per
(sweep value, estimator) pair plus a JSON twin of the table.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import analysis, estimators
from .adaptive import adaptive_init, adaptive_update, shrinkage_covariance
from .errors import ConfigError, PeachSimError, ShapeError
from .model import (
    ContaminationSpec,
    Dims,
    StatModel,
    build_stat_model,
    exp_correlation_matrix,
    kronecker,
    psd_factor,
    standard_complex_normal,
)

SCENARIOS = ("sweep-l", "sweep-snr", "sweep-nr", "adaptive", "shrinkage", "flops")

CSV_COLUMNS = (
    "scenario",
    "estimator",
    "sweep_value",
    "nmse_analytic",
    "nmse_monte_carlo",
    "mc_stderr",
    "floor",
    "flops",
)


@dataclass(frozen=True)
class SpatialCorrelation:
    """Exponential-model correlation coefficients for the desired and interfering links."""

    desired_tx: complex = 0.4 * np.exp(-1j * 0.9349 * np.pi)
    desired_rx: complex = 0.9 * np.exp(-1j * 0.9289 * np.pi)
    interferer_tx: tuple = (
        0.35 * np.exp(-1j * 0.8537 * np.pi),
        0.4 * np.exp(-1j * 0.4583 * np.pi),
    )
    interferer_rx: tuple = (
        0.9 * np.exp(-1j * 0.7464 * np.pi),
        0.9 * np.exp(-1j * 0.2649 * np.pi),
    )

    def validate(self):
        coeffs = (self.desired_tx, self.desired_rx, *self.interferer_tx, *self.interferer_rx)
        if any(abs(c) >= 1.0 for c in coeffs):
            raise ConfigError("all correlation coefficient magnitudes must be < 1")


DEFAULT_CORRELATION = SpatialCorrelation()


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; see :func:`default_config` for presets."""

    scenario: str
    n_r: int = 20
    n_t: int = 4
    b: int = 4
    snr_db: tuple = (5.0,)
    degrees: tuple = tuple(range(13))
    degree: int = 10
    betas: tuple = (1.0, 1.0)
    n_r_values: tuple = (10, 20, 40, 80)
    correlation: SpatialCorrelation = field(default_factory=SpatialCorrelation)
    noise_var: float = 1.0
    trials: int = 2000
    seed: int = 1234
    window: int = 100
    shrink_samples: tuple = (20, 40, 80, 160)
    q_ratio: float = 50.0
    tau_s: float = 5.0
    t_tot: float = 5.0
    monte_carlo: bool = True
    out: str = "results.csv"

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n_r < 1 or self.n_t < 1 or self.b < 1:
            raise ConfigError("antenna and pilot dimensions must be positive")
        for name in ("snr_db", "degrees", "n_r_values", "shrink_samples"):
            if len(getattr(self, name)) == 0:
                raise ConfigError(f"{name} must be non-empty")
        if any(d < 0 for d in self.degrees) or self.degree < 0:
            raise ConfigError("polynomial degrees must be nonnegative")
        if any(b < 0 for b in self.betas):
            raise ConfigError("interference ratios must be nonnegative")
        if any(n < 2 for n in self.shrink_samples):
            raise ConfigError("shrinkage sample counts must be >= 2")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if self.noise_var <= 0 or self.q_ratio <= 0 or self.tau_s <= 0 or self.t_tot <= 0:
            raise ConfigError("noise_var, q_ratio, tau_s and t_tot must be positive")
        self.correlation.validate()
        return self


_SCENARIO_DEFAULTS = {
    "sweep-l": dict(snr_db=(5.0,), betas=(1.0, 1.0), degrees=tuple(range(13)), out="sweep_l.csv"),
    "sweep-snr": dict(
        snr_db=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
        degree=10,
        betas=(0.1, 0.1),
        out="sweep_snr.csv",
    ),
    "sweep-nr": dict(snr_db=(5.0,), degree=4, betas=(1.0, 1.0), out="sweep_nr.csv"),
    "adaptive": dict(snr_db=(0.0, 5.0, 10.0, 15.0, 20.0), degree=4, betas=(), out="adaptive.csv"),
    "shrinkage": dict(snr_db=(5.0,), degree=8, betas=(), out="shrinkage.csv"),
    "flops": dict(
        n_t=10,
        b=10,
        degree=2,
        n_r_values=(50, 100, 150, 200, 250, 300, 350, 400, 450, 500),
        out="flops.csv",
    ),
}


def default_config(scenario: str, **overrides) -> ExperimentConfig:
    """Scenario preset with optional field overrides, validated."""
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    params = dict(_SCENARIO_DEFAULTS[scenario])
    params.update(overrides)
    config = ExperimentConfig(scenario=scenario, **params)
    config.validate()
    return config


@dataclass(frozen=True)
class ResultRow:
    """One experiment result; normalized MSE columns are relative to trace(r)."""

    scenario: str
    estimator: str
    sweep_value: float
    nmse_analytic: float | None = None
    nmse_monte_carlo: float | None = None
    mc_stderr: float | None = None
    floor: float | None = None
    flops: float | None = None


# ---------------------------------------------------------------------------
# model construction


def correlated_model(
    dims: Dims,
    gamma_db: float,
    betas: tuple,
    correlation: SpatialCorrelation = DEFAULT_CORRELATION,
    noise_var: float = 1.0,
) -> StatModel:
    """Kronecker-correlated desired channel plus pilot-reusing interferers.

    ``gamma_db`` is the normalized pilot SNR in dB, so the pilot power is
    ``noise_var * 10**(gamma_db / 10)``.  Interferer ``i`` uses the ``i``-th
    correlation coefficient pair (cyclically) weakened by ``betas[i]``.
    """
    pilot_power = noise_var * 10.0 ** (gamma_db / 10.0)
    r_cov = kronecker(
        exp_correlation_matrix(dims.n_t, correlation.desired_tx),
        exp_correlation_matrix(dims.n_r, correlation.desired_rx),
    )
    n_pairs = len(correlation.interferer_tx)
    covs = []
    for i in range(len(betas)):
        tx = correlation.interferer_tx[i % n_pairs]
        rx = correlation.interferer_rx[i % n_pairs]
        covs.append(
            kronecker(
                exp_correlation_matrix(dims.n_t, tx),
                exp_correlation_matrix(dims.n_r, rx),
            )
        )
    contamination = ContaminationSpec(tuple(covs), tuple(betas), noise_var)
    return build_stat_model(dims, None, r_cov, None, contamination, pilot_power)


def summed_interference(model: StatModel, betas: tuple, correlation: SpatialCorrelation) -> np.ndarray:
    """Sum of beta-weighted interferer covariances matching :func:`correlated_model`."""
    dims = model.dims
    total = np.zeros((dims.n, dims.n), dtype=complex)
    n_pairs = len(correlation.interferer_tx)
    for i, beta in enumerate(betas):
        tx = correlation.interferer_tx[i % n_pairs]
        rx = correlation.interferer_rx[i % n_pairs]
        total = total + beta * kronecker(
            exp_correlation_matrix(dims.n_t, tx),
            exp_correlation_matrix(dims.n_r, rx),
        )
    return total


# ---------------------------------------------------------------------------
# Monte Carlo harness


def run_monte_carlo(model: StatModel, estimator, trials: int, seed, chunk_size: int = 512):
    """Empirical MSE of ``estimator(model, y)`` over seeded random draws.

    Draws (h, n) pairs, forms y, and averages the squared estimation error.
    Returns (mse_hat, standard_error).  Trials are processed in chunks with
    independent child streams, so results are reproducible and independent of
    chunk scheduling.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_chunks = (trials + chunk_size - 1) // chunk_size
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    factor_r = psd_factor(model.r_cov)
    factor_s = psd_factor(model.s_cov)
    sq_errors = np.empty(trials)
    pos = 0
    for child in children:
        count = min(chunk_size, trials - pos)
        rng = np.random.default_rng(child)
        h = model.h_mean[:, None] + factor_r @ standard_complex_normal(rng, model.dims.n, count)
        noise = model.n_mean[:, None] + factor_s @ standard_complex_normal(rng, model.dims.m, count)
        y = model.pilot_ext @ h + noise
        h_hat = estimator(model, y)
        if h_hat.shape != h.shape:
            raise ShapeError(f"estimator returned shape {h_hat.shape}, expected {h.shape}")
        sq_errors[pos : pos + count] = np.sum(np.abs(h - h_hat) ** 2, axis=0)
        pos += count
    mse_hat = float(np.mean(sq_errors))
    stderr = float(np.std(sq_errors, ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    return mse_hat, stderr


def _estimator_callables(model: StatModel, peach_est, wpeach_est) -> dict:
    return {
        "mmse": estimators.mmse_estimate,
        "mvu": estimators.mvu_estimate,
        "diagonalized": estimators.diag_estimate,
        "peach": lambda mdl, y: estimators.peach_estimate(mdl, peach_est, y),
        "wpeach": lambda mdl, y: estimators.wpeach_estimate(mdl, wpeach_est, y),
    }


# ---------------------------------------------------------------------------
# scenario runners


def _analytic_mses(model: StatModel, peach_est, wpeach_est) -> dict:
    # the polynomial columns report the MSE of the prepared estimators, so the
    # Monte Carlo confirmation measures exactly the same filters
    return {
        "mmse": estimators.mmse_mse(model),
        "mvu": estimators.mvu_variance(model),
        "diagonalized": estimators.diag_mse(model),
        "peach": estimators.peach_mse(model, peach_est.degree, peach_est.alpha),
        "wpeach": estimators.wpeach_mse_general(
            model, wpeach_est.degree, wpeach_est.alpha, wpeach_est.weights
        ),
    }


def _floor_values(model: StatModel, config: ExperimentConfig, degree: int) -> dict:
    r_cov = model.r_cov
    alpha_w = estimators.default_alpha_w(model)
    if any(beta > 0 for beta in config.betas):
        sum_interf = summed_interference(model, config.betas, config.correlation)
        floors = analysis.floor_contaminated(r_cov, sum_interf, degree, alpha_w)
        # high-power limit of the unbiased estimator's variance for an identity pilot
        mvu_floor = float(np.trace(sum_interf).real)
        return {
            "mmse": floors.mmse,
            "mvu": mvu_floor,
            "diagonalized": floors.diagonalized,
            "peach": floors.peach,
            "wpeach": floors.wpeach,
        }
    floors = analysis.floor_noise_limited(r_cov, degree, alpha_w)
    return {
        "mmse": 0.0,
        "mvu": 0.0,
        "diagonalized": 0.0,
        "peach": floors.peach,
        "wpeach": floors.wpeach,
    }


_ESTIMATOR_ORDER = ("mmse", "mvu", "diagonalized", "peach", "wpeach")


def _sweep_point_rows(model, config, degree, sweep_value, point_index):
    trace_r = float(np.trace(model.r_cov).real)
    peach_est = estimators.make_peach(model, degree)
    wpeach_est = estimators.make_wpeach(model, degree)
    mses = _analytic_mses(model, peach_est, wpeach_est)
    floors = _floor_values(model, config, degree)
    callables = _estimator_callables(model, peach_est, wpeach_est) if config.monte_carlo else None
    rows = []
    for name in _ESTIMATOR_ORDER:
        nmse_mc = stderr = None
        if callables is not None:
            mse_hat, se = run_monte_carlo(
                model, callables[name], config.trials, (config.seed, point_index)
            )
            nmse_mc, stderr = mse_hat / trace_r, se / trace_r
        rows.append(
            ResultRow(
                scenario=config.scenario,
                estimator=name,
                sweep_value=sweep_value,
                nmse_analytic=mses[name] / trace_r,
                nmse_monte_carlo=nmse_mc,
                mc_stderr=stderr,
                floor=floors[name] / trace_r,
            )
        )
    return rows


def _run_sweep_l(config: ExperimentConfig):
    dims = Dims(config.n_r, config.n_t, config.b)
    model = correlated_model(dims, config.snr_db[0], config.betas, config.correlation, config.noise_var)
    rows = []
    for index, degree in enumerate(config.degrees):
        rows.extend(_sweep_point_rows(model, config, degree, float(degree), index))
    return rows


def _run_sweep_snr(config: ExperimentConfig):
    dims = Dims(config.n_r, config.n_t, config.b)
    rows = []
    for index, gamma_db in enumerate(config.snr_db):
        model = correlated_model(dims, gamma_db, config.betas, config.correlation, config.noise_var)
        rows.extend(_sweep_point_rows(model, config, config.degree, float(gamma_db), index))
    return rows


def _run_sweep_nr(config: ExperimentConfig):
    rows = []
    for index, n_r in enumerate(config.n_r_values):
        dims = Dims(n_r, config.n_t, config.b)
        model = correlated_model(dims, config.snr_db[0], config.betas, config.correlation, config.noise_var)
        rows.extend(_sweep_point_rows(model, config, config.degree, float(n_r), index))
    return rows


def _run_adaptive(config: ExperimentConfig):
    """Sliding-window weights versus exactly optimized weights, both evaluated exactly."""
    dims = Dims(config.n_r, config.n_t, config.b)
    rows = []
    for index, gamma_db in enumerate(config.snr_db):
        model = correlated_model(dims, gamma_db, config.betas, config.correlation, config.noise_var)
        trace_r = float(np.trace(model.r_cov).real)
        wpeach_est = estimators.make_wpeach(model, config.degree)
        alpha_w = wpeach_est.alpha
        mse_opt = estimators.wpeach_mse_general(model, config.degree, alpha_w, wpeach_est.weights)
        child = np.random.SeedSequence((config.seed, index))
        stream_rng, probe_rng = (np.random.default_rng(s) for s in child.spawn(2))
        factor_r = psd_factor(model.r_cov)
        factor_s = psd_factor(model.s_cov)

        def draw_y(count):
            h = factor_r @ standard_complex_normal(stream_rng, dims.n, count)
            noise = factor_s @ standard_complex_normal(stream_rng, dims.m, count)
            return (model.pilot_ext @ h + noise + model.y_mean()[:, None]).T

        warmup = list(draw_y(config.window))
        state = adaptive_init(model, config.window, config.degree, alpha_w, warmup, probe_rng)
        w_approx = state.weights
        for y_new in draw_y(config.window):
            w_approx = adaptive_update(state, y_new)
        mse_approx = estimators.wpeach_mse_general(model, config.degree, alpha_w, w_approx)
        rows.append(
            ResultRow(config.scenario, "wpeach", float(gamma_db), nmse_analytic=mse_opt / trace_r)
        )
        rows.append(
            ResultRow(
                config.scenario,
                "wpeach-adaptive",
                float(gamma_db),
                nmse_analytic=mse_approx / trace_r,
            )
        )
    return rows


def _run_shrinkage(config: ExperimentConfig):
    """Estimators rebuilt from a shrinkage covariance estimate, scored on the truth."""
    dims = Dims(config.n_r, config.n_t, config.b)
    model = correlated_model(dims, config.snr_db[0], config.betas, config.correlation, config.noise_var)
    trace_r = float(np.trace(model.r_cov).real)
    factor_r = psd_factor(model.r_cov)
    mse_mmse = estimators.mmse_mse(model)
    mse_wpeach = estimators.wpeach_mse_optimal(model, config.degree)
    rows = []
    for index, n_samples in enumerate(config.shrink_samples):
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, index)))
        samples = (factor_r @ standard_complex_normal(rng, dims.n, n_samples)).T
        shrunk = shrinkage_covariance(samples, mode="plugin")
        model_est = StatModel(
            dims=dims,
            h_mean=model.h_mean,
            r_cov=shrunk.c_hat,
            n_mean=model.n_mean,
            s_cov=model.s_cov,
            pilot=model.pilot,
            pilot_ext=model.pilot_ext,
        )
        wpeach_est = estimators.make_wpeach(model_est, config.degree)
        g_wpeach = estimators.poly_filter_matrix(model_est, wpeach_est)
        g_mmse = estimators.mmse_filter_matrix(model_est)
        mse_wpeach_est = estimators.linear_filter_mse(model, g_wpeach)
        mse_mmse_est = estimators.linear_filter_mse(model, g_mmse)
        sweep = float(n_samples)
        rows.append(ResultRow(config.scenario, "mmse", sweep, nmse_analytic=mse_mmse / trace_r))
        rows.append(ResultRow(config.scenario, "mmse-est", sweep, nmse_analytic=mse_mmse_est / trace_r))
        rows.append(ResultRow(config.scenario, "wpeach", sweep, nmse_analytic=mse_wpeach / trace_r))
        rows.append(ResultRow(config.scenario, "wpeach-est", sweep, nmse_analytic=mse_wpeach_est / trace_r))
    return rows


def _run_flops(config: ExperimentConfig):
    rows = []
    for n_r in config.n_r_values:
        dims = Dims(n_r, config.n_t, config.b)
        fm = analysis.FlopModel(
            dims=dims,
            tau_s=config.tau_s,
            tau_c=config.tau_s / config.q_ratio,
            t_tot=config.t_tot,
        )
        for name in ("mmse", "mvu", "peach", "wpeach"):
            degree = config.degree if name in ("peach", "wpeach") else None
            rows.append(
                ResultRow(
                    config.scenario,
                    name,
                    float(n_r),
                    flops=analysis.flops(name, fm, degree),
                )
            )
    return rows


_RUNNERS = {
    "sweep-l": _run_sweep_l,
    "sweep-snr": _run_sweep_snr,
    "sweep-nr": _run_sweep_nr,
    "adaptive": _run_adaptive,
    "shrinkage": _run_shrinkage,
    "flops": _run_flops,
}


def run_experiment(config: ExperimentConfig):
    """Run one scenario and write its CSV (plus a JSON twin); returns the rows.

    Rows are ordered by sweep value, then estimator.  Re-running with the same
    configuration and seed produces byte-identical output files.
    """
    config.validate()
    rows = _RUNNERS[config.scenario](config)
    write_rows(rows, Path(config.out))
    return rows


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.9g}"


def write_rows(rows, path: Path):
    """Write rows as CSV with 9-significant-digit floats, plus ``<path>.json``."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([_format_value(getattr(row, column)) for column in CSV_COLUMNS])
    payload = [{column: getattr(row, column) for column in CSV_COLUMNS} for row in rows]
    with open(path.with_suffix(".json"), "w") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


# ---------------------------------------------------------------------------
# command-line interface


def _parse_int_list(text: str) -> tuple:
    text = text.strip()
    if ":" in text:
        start, stop = text.split(":", 1)
        return tuple(range(int(start), int(stop) + 1))
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_float_list(text: str) -> tuple:
    return tuple(float(part) for part in text.split(",") if part.strip())


_CONFIG_PARSERS = {
    "n_r": int,
    "n_t": int,
    "b": int,
    "snr_db": _parse_float_list,
    "degrees": _parse_int_list,
    "degree": int,
    "betas": _parse_float_list,
    "n_r_values": _parse_int_list,
    "noise_var": float,
    "trials": int,
    "seed": int,
    "window": int,
    "shrink_samples": _parse_int_list,
    "q_ratio": float,
    "tau_s": float,
    "t_tot": float,
    "monte_carlo": lambda text: text.strip().lower() in ("1", "true", "yes", "on"),
    "out": str,
}


def load_config_file(path: str, scenario: str) -> dict:
    """Read overrides from a flat key = value file with one section per scenario."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    overrides = {}
    for section in ("common", scenario):
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            key = key.replace("-", "_")
            if key not in _CONFIG_PARSERS:
                raise ConfigError(f"unknown config key {key!r} in section [{section}]")
            try:
                overrides[key] = _CONFIG_PARSERS[key](raw)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r} in section [{section}]: {raw!r}") from exc
    return overrides


def _build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peachsim",
        description="Channel-estimation experiments: MSE sweeps, floors, adaptive weights, "
        "shrinkage robustness and FLOP cost curves, written as CSV.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    for scenario in SCENARIOS:
        p = sub.add_parser(scenario, help=f"run the {scenario} scenario")
        p.add_argument("--config", help="INI file with [common] and per-scenario sections")
        p.add_argument("--seed", type=int, help="master seed (64-bit)")
        p.add_argument("--trials", type=int, help="Monte Carlo trials per row")
        p.add_argument("--out", help="output CSV path")
        p.add_argument(
            "--no-montecarlo",
            action="store_true",
            help="skip Monte Carlo confirmation columns",
        )
        p.add_argument("--n-r", type=int, dest="n_r", help="receive antennas")
        p.add_argument("--n-t", type=int, dest="n_t", help="transmit antennas (pilot length follows)")
        p.add_argument("--snr-db", dest="snr_db", help="comma-separated pilot SNR values in dB")
        p.add_argument("--betas", help="comma-separated interference power ratios")
        p.add_argument("--degree", type=int, help="fixed polynomial degree")
        if scenario == "sweep-l":
            p.add_argument("--degrees", help="degree grid, e.g. 0:12 or 0,2,4")
        if scenario in ("sweep-nr", "flops"):
            p.add_argument("--nr-values", dest="n_r_values", help="receive-antenna grid, e.g. 10,20,40,80")
        if scenario == "adaptive":
            p.add_argument("--window", type=int, help="sliding-window length")
        if scenario == "shrinkage":
            p.add_argument("--samples", dest="shrink_samples", help="sample-count grid, e.g. 20,40,80")
        if scenario == "flops":
            p.add_argument("--q", type=float, dest="q_ratio", help="stationarity ratio tau_s / tau_c")
            p.add_argument("--tau-s", type=float, dest="tau_s", help="statistics coherence time [s]")
            p.add_argument("--t-tot", type=float, dest="t_tot", help="total operating time [s]")
    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {}
    if args.config:
        overrides.update(load_config_file(args.config, args.scenario))
    field_names = {f.name for f in fields(ExperimentConfig)}
    for key, value in vars(args).items():
        if key in ("scenario", "config", "no_montecarlo") or value is None:
            continue
        if key not in field_names:
            continue
        if isinstance(value, str) and key in _CONFIG_PARSERS and key != "out":
            value = _CONFIG_PARSERS[key](value)
        overrides[key] = value
    if args.no_montecarlo:
        overrides["monte_carlo"] = False
    if args.n_t is not None and "b" not in overrides and args.scenario != "flops":
        overrides["b"] = args.n_t
    return default_config(args.scenario, **overrides)


def main(argv=None) -> int:
    parser = _build_arg_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
        rows = run_experiment(config)
    except (PeachSimError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"{config.scenario}: wrote {len(rows)} rows to {config.out} (seed {config.seed})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
