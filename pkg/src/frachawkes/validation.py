"""Self-checks against closed forms and statistical ground truth.

The fast suite verifies the special-function stack and the Laplace
analytics against independently computable values (exponential and erfcx
closed forms, direct series, partial fractions).  The deep suite adds
replicated simulations with statistical acceptance bands.
"""

import math

import numpy as np
from scipy import integrate, special

from . import analysis, laplace, mlf, process

__all__ = ["fast_checks", "deep_checks", "run_checks"]


def _check_exp_degeneration():
    ts = np.linspace(0.0, 50.0, 101)
    err = np.max(np.abs(mlf.mlf_one_param(ts, 1.0) - np.exp(-ts)))
    return err <= 1e-12, f"max err {err:.2e} (tol 1e-12)"


def _check_half_closed_form():
    ts = np.linspace(0.0, 50.0, 101)
    closed = special.erfcx(np.sqrt(ts))
    err = np.max(np.abs(mlf.mlf_one_param(ts, 0.5) - closed))
    return err <= 1e-8, f"max err {err:.2e} (tol 1e-8)"


def _check_series_consistency():
    # direct 64-term series with lgamma, independent of the rgamma-based path
    worst = 0.0
    for z in [-0.1, -0.5, -1.0]:
        for g, d in [(0.3, 0.3), (0.7, 0.7), (0.9, 1.0)]:
            direct = sum(
                z**n * math.exp(-math.lgamma(n * g + d)) for n in range(64)
            )
            worst = max(worst, abs(mlf.mlf_two_param(z, g, d) - direct))
    return worst <= 1e-12, f"max err {worst:.2e} (tol 1e-12)"


def _check_pdf_normalization():
    worst = 0.0
    for beta in (0.3, 0.5, 0.7, 0.9):
        head, _ = integrate.quad(
            lambda u: mlf.mlf_pdf(u ** (1.0 / beta), beta) * u ** (1.0 / beta - 1.0) / beta,
            0.0,
            1.0,
            epsabs=1e-10,
        )
        tail, _ = integrate.quad(
            lambda t: mlf.mlf_pdf(t, beta), 1.0, np.inf, epsabs=1e-10, limit=400
        )
        worst = max(worst, abs(head + tail - 1.0))
    return worst <= 1e-6, f"max |integral-1| {worst:.2e} (tol 1e-6)"


def _check_mixture_identity():
    worst = 0.0
    for beta in (0.3, 0.7):
        for t in (0.5, 2.0, 10.0):
            worst = max(
                worst,
                abs(
                    mlf.mlf_one_param_via_mixture(t, beta, tol=1e-10)
                    - mlf.mlf_one_param(t, beta)
                ),
            )
    return worst <= 1e-8, f"max err {worst:.2e} (tol 1e-8)"


def _check_mean_intensity_half():
    params = process.ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    cfg = laplace.LaplaceInversionConfig(target_tol=1e-7)
    got = analysis.mean_intensity(params, [1.0], cfg).y[0]
    want = 2.0 - math.exp(0.25) * special.erfc(0.5)
    err = abs(got - want)
    return err <= 1e-6, f"err {err:.2e} (tol 1e-6)"


def _check_inversion_beta_one():
    ts = np.logspace(-2, 2, 25)
    cfg = laplace.LaplaceInversionConfig(target_tol=1e-7)
    worst = 0.0
    for alpha in (0.1, 0.5, 0.9):
        params = process.ModelParams(lam=1.0, alpha=alpha, beta=1.0)
        got = analysis.mean_intensity(params, ts, cfg).y
        want = 1.0 / (1.0 - alpha) * (1.0 - alpha * np.exp(-(1.0 - alpha) * ts))
        worst = max(worst, float(np.max(np.abs(got - want))))
    return worst <= 1e-8, f"max err {worst:.2e} (tol 1e-8)"


def _check_spectrum_zero():
    params = process.ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    got = analysis.bartlett_spectrum(params, np.array([0.0])).y[0]
    want = analysis.stationary_mean(params) / (2.0 * math.pi * (1.0 - params.alpha) ** 2)
    err = abs(got - want)
    return err <= 1e-12, f"err {err:.2e} (tol 1e-12)"


def _closed_form_mean_integral(t_max):
    """integral_0^T (2 - e^(t/4) erfc(sqrt(t)/2)) dt for lam=1, alpha=beta=1/2."""
    value, _ = integrate.quad(
        lambda t: 2.0 - special.erfcx(math.sqrt(t) / 2.0), 0.0, t_max, epsabs=1e-10
    )
    return value


def _check_poisson_dispersion(n=10_000, seed=20240817):
    params = process.ModelParams(lam=1.0, alpha=0.0, beta=0.7)
    counts = process.replicate_counts(params, 10.0, master_seed=seed, n=n)
    mean = counts.mean()
    ratio = counts.var(ddof=1) / mean
    # variance of the dispersion ratio under Poisson is ~2/(n-1)
    se = math.sqrt(2.0 / (n - 1))
    ok = abs(ratio - 1.0) <= 3.0 * se and abs(mean - 10.0) <= 3.0 * math.sqrt(10.0 / n)
    return ok, f"mean {mean:.3f}, var/mean {ratio:.4f} (3 SE = {3*se:.4f})"


def _check_mean_count(n=10_000, seed=20240818):
    params = process.ModelParams(lam=1.0, alpha=0.5, beta=0.5)
    counts = process.replicate_counts(params, 10.0, master_seed=seed, n=n)
    want = _closed_form_mean_integral(10.0)
    se = counts.std(ddof=1) / math.sqrt(n)
    err = abs(counts.mean() - want)
    return err <= 3.0 * se, f"mean {counts.mean():.3f} vs {want:.3f} (3 SE = {3*se:.3f})"


FAST_CHECKS = [
    ("ml-exp-degeneration", _check_exp_degeneration),
    ("ml-half-closed-form", _check_half_closed_form),
    ("ml-series-consistency", _check_series_consistency),
    ("ml-pdf-normalization", _check_pdf_normalization),
    ("ml-mixture-identity", _check_mixture_identity),
    ("mean-intensity-closed-form", _check_mean_intensity_half),
    ("inversion-beta-one", _check_inversion_beta_one),
    ("spectrum-at-zero", _check_spectrum_zero),
]

DEEP_CHECKS = [
    ("poisson-dispersion", _check_poisson_dispersion),
    ("mean-count-closed-form", _check_mean_count),
]


def fast_checks():
    return list(FAST_CHECKS)


def deep_checks():
    return FAST_CHECKS + DEEP_CHECKS


def run_checks(checks):
    """Run (name, fn) pairs; yields (name, passed, detail)."""
    for name, fn in checks:
        try:
            passed, detail = fn()
        except Exception as exc:  # a crash counts as a failure, not an abort
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        yield name, passed, detail
