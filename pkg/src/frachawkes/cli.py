"""Command-line front end.

Each command validates its configuration (exit 2 on violation), runs the
requested computation (exit 3 on a numerical-tolerance failure), and writes
its artifacts (exit 1 on I/O failure): a delimited CSV or JSON payload, a
rendered PNG, and a manifest JSON recording parameters, seed, grid and
tolerances so the run can be regenerated bit-identically.

Options may also come from a JSON config file via --config; explicit flags
override file values.
"""

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__, analysis, io, plotting, process, validation
from .laplace import InversionAccuracyError, LaplaceInversionConfig
from .mlf import QuadratureError

EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load_config_file(ctx, param, value):
    """--config callback: file values become defaults, flags still override."""
    if value is None:
        return None
    try:
        with open(value) as fh:
            data = json.load(fh)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        _fail(EXIT_CONFIG, f"malformed config file: {exc}")
    ctx.default_map = {**(ctx.default_map or {}), **data}
    return value


def _config_option():
    return click.option(
        "--config",
        type=click.Path(exists=False),
        callback=_load_config_file,
        expose_value=False,
        is_eager=True,
        help="JSON file with option defaults; explicit flags override.",
    )


def _params_options(fn):
    fn = click.option("--lambda", "lam", type=float, default=1.0, show_default=True, help="Baseline rate.")(fn)
    fn = click.option("--alpha", type=float, default=0.5, show_default=True, help="Branching ratio (< 1).")(fn)
    fn = click.option("--beta", type=float, default=0.5, show_default=True, help="Kernel exponent in (0, 1].")(fn)
    return fn


def _build_params(lam, alpha, beta):
    try:
        return process.ModelParams(lam=lam, alpha=alpha, beta=beta)
    except ValueError as exc:
        _fail(EXIT_CONFIG, str(exc))


def _out_paths(out, default_stem, fmt):
    out = Path(out) if out else Path(f"{default_stem}.{ 'json' if fmt == 'json' else 'csv'}")
    return out, out.with_suffix(".png"), out.parent / (out.stem + ".manifest.json")


def _write_curve(grid, out, fmt):
    if fmt == "json":
        io.write_curve_json(grid, out)
        return [str(out)]
    sidecar = io.write_curve_csv(grid, out)
    return [str(out), sidecar]


@click.group()
@click.version_option(version=__version__)
def main():
    """Fractional Hawkes process toolkit: simulation and Laplace-domain analytics."""


@main.command()
@_config_option()
@_params_options
@click.option("--T", "--horizon", "horizon", type=float, default=10.0, show_default=True, help="Simulation horizon.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--replications", type=int, default=1, show_default=True)
@click.option("--epsilon", type=float, default=1e-10, show_default=True, help="Thinning epsilon shift.")
@click.option("--max-events", type=int, default=1_000_000, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Parallel workers for replications.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Output path (events or summary).")
@click.option("--plot/--no-plot", default=True, show_default=True, help="Render a PNG next to the output.")
def simulate(lam, alpha, beta, horizon, seed, replications, epsilon, max_events, jobs, fmt, out, plot):
    """Simulate event sequences by Ogata thinning.

    One replication writes the event epochs; several replications write a
    count summary (mean, standard error, dispersion).
    """
    params = _build_params(lam, alpha, beta)
    if replications < 1:
        _fail(EXIT_CONFIG, "replications must be >= 1")
    if horizon <= 0:
        _fail(EXIT_CONFIG, "horizon must be positive")
    try:
        config = process.ThinningConfig(epsilon=epsilon, max_events=max_events)
    except ValueError as exc:
        _fail(EXIT_CONFIG, str(exc))

    out, png, manifest = _out_paths(out, "events" if replications == 1 else "counts", fmt)
    artifacts = []
    try:
        if replications == 1:
            seq = process.simulate(params, horizon, config, seed=seed)
            if fmt == "json":
                seq.to_json(out)
            else:
                seq.to_csv(out)
            artifacts.append(str(out))
            if plot:
                plotting.save_counting_path(seq, png, title=f"N(t), seed={seed}")
                artifacts.append(str(png))
            click.echo(f"{len(seq)} events on [0, {horizon}] -> {out}")
        else:
            counts = process.replicate_counts(
                params, horizon, config, master_seed=seed, n=replications, jobs=jobs
            )
            summary = {
                "replications": replications,
                "mean_count": float(counts.mean()),
                "stderr_mean": float(counts.std(ddof=1) / math.sqrt(replications)),
                "var_count": float(counts.var(ddof=1)),
                "dispersion": float(counts.var(ddof=1) / counts.mean()),
                "min": int(counts.min()),
                "max": int(counts.max()),
            }
            summary_path = out.with_suffix(".json") if fmt == "csv" else out
            with open(summary_path, "w") as fh:
                json.dump(summary, fh, indent=2)
            artifacts.append(str(summary_path))
            if fmt == "csv":
                with open(out, "w", newline="") as fh:
                    fh.write("count\n")
                    fh.writelines(f"{c}\n" for c in counts)
                artifacts.append(str(out))
            click.echo(
                f"mean N({horizon}) = {summary['mean_count']:.4f} "
                f"+/- {summary['stderr_mean']:.4f} ({replications} replications) -> {summary_path}"
            )
    except process.SimulationCapError as exc:
        _fail(EXIT_NUMERICAL, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))

    io.write_manifest(
        manifest, "simulate", params, artifacts,
        horizon=horizon, seed=seed, replications=replications,
        tolerances={"epsilon": epsilon},
    )


@main.command("intensity-path")
@_config_option()
@click.option("--events", "events_file", type=click.Path(), required=True, help="EventSequence JSON from `simulate --format json`.")
@click.option("--points", type=int, default=2000, show_default=True)
@click.option("--epsilon", type=float, default=1e-10, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--plot/--no-plot", default=True, show_default=True)
def intensity_path_cmd(events_file, points, epsilon, fmt, out, plot):
    """Sample the conditional intensity of a stored event sequence."""
    try:
        seq = process.EventSequence.from_json(events_file)
    except OSError as exc:
        _fail(EXIT_IO, f"cannot read events file: {exc}")
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        _fail(EXIT_CONFIG, f"malformed events file: {exc}")
    if points < 2:
        _fail(EXIT_CONFIG, "points must be >= 2")

    grid = np.linspace(0.0, seq.horizon, points)
    path = process.intensity_path(seq, grid, epsilon=epsilon)
    curve = analysis.CurveGrid(
        x=path.grid,
        y=path.values,
        meta={
            "quantity": "intensity_path",
            "xlabel": "t",
            "ylabel": "lambda(t|H_t)",
            "params": seq.params.as_dict(),
            "seed": seq.seed,
            "horizon": seq.horizon,
        },
    )
    out, png, manifest = _out_paths(out, "intensity_path", fmt)
    try:
        artifacts = _write_curve(curve, out, fmt)
        if plot:
            plotting.save_intensity_path(path, png)
            artifacts.append(str(png))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    io.write_manifest(
        manifest, "intensity-path", seq.params, artifacts,
        horizon=seq.horizon, seed=seq.seed,
        grid={"points": points, "spacing": "linear"},
        tolerances={"epsilon": epsilon},
    )
    click.echo(f"intensity path ({points} points) -> {out}")


def _curve_command(name, quantity, compute, default_tol, helptext):
    """Shared skeleton of the mean-intensity / expected-count commands."""

    @main.command(name, help=helptext)
    @_config_option()
    @_params_options
    @click.option("--tmin", type=float, default=0.01, show_default=True)
    @click.option("--tmax", type=float, default=20.0, show_default=True)
    @click.option("--points", type=int, default=200, show_default=True)
    @click.option("--spacing", type=click.Choice(["linear", "log"]), default="linear", show_default=True)
    @click.option("--tol", type=float, default=default_tol, show_default=True, help="Inversion target tolerance.")
    @click.option("--nodes", type=int, default=32, show_default=True, help="Talbot contour nodes.")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
    @click.option("--out", type=click.Path(), default=None)
    @click.option("--plot/--no-plot", default=True, show_default=True)
    def cmd(lam, alpha, beta, tmin, tmax, points, spacing, tol, nodes, fmt, out, plot):
        params = _build_params(lam, alpha, beta)
        if not 0 < tmin < tmax:
            _fail(EXIT_CONFIG, "need 0 < tmin < tmax")
        if points < 2:
            _fail(EXIT_CONFIG, "points must be >= 2")
        try:
            cfg = LaplaceInversionConfig(node_count=nodes, target_tol=tol)
        except ValueError as exc:
            _fail(EXIT_CONFIG, str(exc))
        if spacing == "log":
            times = np.logspace(math.log10(tmin), math.log10(tmax), points)
        else:
            times = np.linspace(tmin, tmax, points)
        try:
            curve = compute(params, times, cfg)
        except InversionAccuracyError as exc:
            _fail(EXIT_NUMERICAL, str(exc))
        out_, png, manifest = _out_paths(out, quantity, fmt)
        try:
            artifacts = _write_curve(curve, out_, fmt)
            if plot:
                plotting.save_curve(curve, png, logx=(spacing == "log"))
                artifacts.append(str(png))
        except OSError as exc:
            _fail(EXIT_IO, str(exc))
        io.write_manifest(
            manifest, name, params, artifacts,
            grid={"tmin": tmin, "tmax": tmax, "points": points, "spacing": spacing},
            tolerances={"target_tol": tol, "node_count": nodes},
        )
        click.echo(f"{quantity} ({points} points) -> {out_}")

    return cmd


def _compute_mean_intensity(params, times, cfg):
    return analysis.mean_intensity(params, times, cfg)


def _compute_expected_count(params, times, cfg):
    values = np.array([analysis.expected_count(params, t, cfg) for t in times])
    return analysis.CurveGrid(
        x=times,
        y=values,
        meta={
            "quantity": "expected_count",
            "xlabel": "t",
            "ylabel": "E[N(t)]",
            "params": params.as_dict(),
            "method": cfg.method,
            "node_count": cfg.node_count,
            "target_tol": cfg.target_tol,
        },
    )


_curve_command(
    "mean-intensity", "mean_intensity", _compute_mean_intensity, 1e-7,
    "Mean intensity Lambda(t) by numerical Laplace inversion.",
)
_curve_command(
    "expected-count", "expected_count", _compute_expected_count, 1e-7,
    "Expected event count E[N(t)] by numerical Laplace inversion.",
)


@main.command()
@_config_option()
@_params_options
@click.option("--omega-max", type=float, default=50.0, show_default=True)
@click.option("--points", type=int, default=501, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--plot/--no-plot", default=True, show_default=True)
def spectrum(lam, alpha, beta, omega_max, points, fmt, out, plot):
    """Bartlett spectrum f(omega) on a symmetric frequency grid."""
    params = _build_params(lam, alpha, beta)
    if omega_max <= 0 or points < 2:
        _fail(EXIT_CONFIG, "need omega_max > 0 and points >= 2")
    omegas = np.linspace(-omega_max, omega_max, points)
    curve = analysis.bartlett_spectrum(params, omegas)
    out, png, manifest = _out_paths(out, "spectrum", fmt)
    try:
        artifacts = _write_curve(curve, out, fmt)
        if plot:
            plotting.save_curve(curve, png)
            artifacts.append(str(png))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    io.write_manifest(
        manifest, "spectrum", params, artifacts,
        grid={"omega_max": omega_max, "points": points},
    )
    click.echo(f"spectrum ({points} points) -> {out}")


@main.command()
@click.option("--deep", is_flag=True, help="Include 10,000-replication statistical checks.")
def validate(deep):
    """Run built-in correctness checks and print a pass/fail table."""
    checks = validation.deep_checks() if deep else validation.fast_checks()
    failures = []
    width = max(len(name) for name, _ in checks)
    for name, passed, detail in validation.run_checks(checks):
        status = "PASS" if passed else "FAIL"
        click.echo(f"{name:<{width}}  {status}  {detail}")
        if not passed:
            failures.append(name)
    if failures:
        _fail(EXIT_NUMERICAL, f"check failed: {failures[0]}")
    click.echo("all checks passed")


if __name__ == "__main__":
    main()
