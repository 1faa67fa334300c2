"""Acceptance suite: eight end-to-end criteria, one pass/fail line each.

Run with `pytest -s tests/test_acceptance.py` to see the table.
"""

import json
import math
import time

import numpy as np
import pytest
from click.testing import CliRunner
from scipy import integrate, special, stats

from frachawkes import io, mlf
from frachawkes.analysis import (
    bartlett_spectrum,
    covariance_laplace,
    mean_intensity,
    stationary_mean,
)
from frachawkes.cli import main as cli_main
from frachawkes.laplace import LaplaceInversionConfig
from frachawkes.process import ModelParams, intensity_path, replicate_counts, simulate

from _oracles import cluster_hawkes_counts

# frozen value of integral_0^10 (2 - e^(t/4) erfc(sqrt(t)/2)) dt,
# computed by adaptive quadrature of the erfcx closed form at 40 digits
MEAN_COUNT_10 = 15.6283293085557816


def _report(name, passed, detail):
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"


def test_criterion_1_closed_form_mean_intensity():
    params = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    ts = np.logspace(-2, 2, 50)
    start = time.perf_counter()
    curve = mean_intensity(params, ts, LaplaceInversionConfig(target_tol=1e-7))
    elapsed = time.perf_counter() - start
    closed = 2.0 - special.erfcx(np.sqrt(ts) / 2.0)
    err = float(np.max(np.abs(curve.y - closed)))
    _report(
        "closed-form mean intensity",
        err <= 1e-6 and elapsed < 1.0,
        f"max abs err {err:.2e} (tol 1e-6), {elapsed:.3f}s (< 1s)",
    )


def test_criterion_2_stationary_limit():
    # the heavy t^(-1/2) tail leaves Lambda(1e4) = 2 - erfcx(50) = 1.98872,
    # so the 1% band around 2 is applied at t = 1e6; at 1e4 the inverted
    # value must instead match the closed form
    params = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    at_1e4 = mean_intensity(params, [1e4]).y[0]
    at_1e6 = mean_intensity(params, [1e6]).y[0]
    closed_1e4 = 2.0 - float(special.erfcx(50.0))
    ok = abs(at_1e4 - closed_1e4) <= 1e-6 and 1.99 <= at_1e6 <= 2.01
    _report(
        "stationary limit",
        ok,
        f"Lambda(1e4) = {at_1e4:.6f} vs closed {closed_1e4:.6f}, "
        f"Lambda(1e6) = {at_1e6:.6f} (band [1.99, 2.01])",
    )


def test_criterion_3_beta_one_degeneration():
    ts = np.logspace(-2, 2, 50)
    worst = 0.0
    for alpha in (0.1, 0.5, 0.9):
        params = ModelParams(lam=1.0, alpha=alpha, beta=1.0)
        curve = mean_intensity(params, ts, LaplaceInversionConfig(target_tol=1e-7))
        closed = 1.0 / (1.0 - alpha) * (1.0 - alpha * np.exp(-(1.0 - alpha) * ts))
        worst = max(worst, float(np.max(np.abs(curve.y - closed))))
    _report(
        "beta=1 degeneration",
        worst <= 1e-8,
        f"max abs err {worst:.2e} (tol 1e-8)",
    )


def test_criterion_4_mittag_leffler_accuracy():
    ts = np.linspace(0.0, 50.0, 101)
    err_exp = float(np.max(np.abs(mlf.mlf_one_param(ts, 1.0) - np.exp(-ts))))
    err_half = float(np.max(np.abs(mlf.mlf_one_param(ts, 0.5) - special.erfcx(np.sqrt(ts)))))
    err_norm = 0.0
    for beta in (0.3, 0.5, 0.7, 0.9):
        head, _ = integrate.quad(
            lambda u: mlf.mlf_pdf(u ** (1.0 / beta), beta) * u ** (1.0 / beta - 1.0) / beta,
            0.0, 1.0, epsabs=1e-10,
        )
        tail, _ = integrate.quad(
            lambda t: mlf.mlf_pdf(t, beta), 1.0, np.inf, epsabs=1e-10, limit=400
        )
        err_norm = max(err_norm, abs(head + tail - 1.0))
    err_mix = 0.0
    for beta in (0.3, 0.7):
        for t in (0.5, 2.0, 10.0):
            err_mix = max(
                err_mix,
                abs(mlf.mlf_pdf_via_mixture(t, beta, tol=1e-10) - mlf.mlf_pdf(t, beta)),
            )
    ok = err_exp <= 1e-12 and err_half <= 1e-8 and err_norm <= 1e-6 and err_mix <= 1e-8
    _report(
        "Mittag-Leffler accuracy",
        ok,
        f"exp {err_exp:.2e} (1e-12), erfcx {err_half:.2e} (1e-8), "
        f"norm {err_norm:.2e} (1e-6), mixture {err_mix:.2e} (1e-8)",
    )


def test_criterion_5_simulation_statistical_validity():
    n = 10_000
    params = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    start = time.perf_counter()
    counts = replicate_counts(params, 10.0, master_seed=20240801, n=n)
    elapsed = time.perf_counter() - start
    se = counts.std(ddof=1) / math.sqrt(n)
    dev = abs(counts.mean() - MEAN_COUNT_10)
    poisson = replicate_counts(
        ModelParams(lam=1.0, alpha=0.0, beta=0.5), 10.0, master_seed=20240802, n=n
    )
    ratio = poisson.var(ddof=1) / poisson.mean()
    se_ratio = math.sqrt(2.0 / (n - 1))
    ok = dev <= 3.0 * se and abs(ratio - 1.0) <= 3.0 * se_ratio and elapsed < 120.0
    _report(
        "simulation statistical validity",
        ok,
        f"mean {counts.mean():.3f} vs {MEAN_COUNT_10:.3f} (3 SE = {3*se:.3f}), "
        f"dispersion {ratio:.4f} (3 SE = {3*se_ratio:.4f}), {elapsed:.0f}s (< 120s)",
    )


def test_criterion_6_thinning_cross_validation():
    n = 10_000
    lam, alpha, horizon = 1.0, 0.5, 5.0
    params = ModelParams(lam=lam, alpha=alpha, beta=1.0)
    thinned = replicate_counts(params, horizon, master_seed=20240803, n=n)
    clustered = cluster_hawkes_counts(lam, alpha, horizon, n=n, seed=20240804)
    _, pvalue = stats.ks_2samp(thinned, clustered)
    _report(
        "thinning cross-validation (beta=1)",
        pvalue > 0.01,
        f"two-sample KS p = {pvalue:.3f} (> 0.01), n = {n} each",
    )


def test_criterion_7_spectrum_checks():
    params = ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    want0 = stationary_mean(params) / (2.0 * math.pi * (1.0 - params.alpha) ** 2)
    err0 = abs(bartlett_spectrum(params, 0.0) - want0)
    omegas = np.linspace(-50.0, 50.0, 501)
    curve = bartlett_spectrum(params, omegas)
    even = float(np.max(np.abs(curve.y - curve.y[::-1])))
    positive = bool(np.all(curve.y > 0.0))
    err_cov = 0.0
    for w in (0.5, 2.0, 10.0, 50.0):
        err_cov = max(
            err_cov,
            abs(covariance_laplace(params, 1j * w) - 2.0 * math.pi * bartlett_spectrum(params, w)),
        )
    ok = err0 <= 1e-12 and even <= 1e-12 and positive and err_cov <= 1e-10
    _report(
        "spectrum checks",
        ok,
        f"f(0) err {err0:.2e} (1e-12), evenness {even:.2e}, positive {positive}, "
        f"covariance match {err_cov:.2e} (1e-10)",
    )


def test_criterion_8_figure_regeneration(tmp_path):
    runner = CliRunner()
    out = tmp_path / "mean_intensity.csv"
    res = runner.invoke(cli_main, [
        "mean-intensity", "--lambda", "1", "--alpha", "0.5", "--beta", "0.5",
        "--tmin", "0.01", "--tmax", "100", "--points", "50", "--spacing", "log",
        "--out", str(out),
    ], catch_exceptions=False)
    assert res.exit_code == 0
    curve = io.read_curve_csv(out)
    closed = 2.0 - special.erfcx(np.sqrt(curve.x) / 2.0)
    err_curve = float(np.max(np.abs(curve.y - closed)))
    png_ok = (tmp_path / "mean_intensity.png").exists()

    paths_ok = True
    for beta in (0.9, 0.7):
        params = ModelParams(lam=1.0, alpha=0.9, beta=beta)
        seq = simulate(params, 5.0, seed=5)
        grid = np.linspace(0.0, 5.0, 2001)
        path = intensity_path(seq, grid)
        paths_ok &= bool(np.all(path.values >= params.lam))
        boundaries = np.concatenate([seq.epochs, [5.0]])
        for lo, hi in zip(boundaries[:-1], boundaries[1:]):
            inside = (path.grid > lo) & (path.grid < hi)
            if inside.sum() > 1:
                paths_ok &= bool(np.all(np.diff(path.values[inside]) < 0.0))
    ok = err_curve <= 1e-6 and png_ok and paths_ok
    _report(
        "figure regeneration",
        ok,
        f"CLI curve err {err_curve:.2e} (1e-6), png {png_ok}, "
        f"intensity-path invariants {paths_ok}",
    )
