"""Mittag-Leffler functions on the negative real axis and the associated kernels.

Everything downstream (conditional intensities, Laplace analytics) is built on
the survival function E_beta(-t^beta), its density f_beta(t) =
t^(beta-1) E_{beta,beta}(-t^beta), and the exponential-mixture kernel
K_beta(theta) through which both can be written as continuous sums of
exponentials.

Evaluation uses three regimes on the negative real axis:

* small arguments: the defining power series in double precision (terms are
  bounded by 1/Gamma(n*gamma + delta), so there is no catastrophic
  cancellation for |z| <= 1);
* large arguments: the algebraic asymptotic series, truncated at its smallest
  term, with the smallest term used as the error estimate;
* the gap in between: the power series summed in arbitrary precision
  (mpmath), with working precision scaled to the worst-case term magnitude
  exp(x**(1/gamma)).

The half-integer closed forms (erfcx) and the exponential case are dispatched
directly.
"""

import math

import mpmath
import numpy as np
from scipy import integrate, special

__all__ = [
    "mlf_one_param",
    "mlf_two_param",
    "mlf_pdf",
    "mixture_kernel",
    "mlf_pdf_via_mixture",
    "QuadratureError",
]

# reciprocal gamma; module-level so tests can fault-inject a perturbed version
_rgamma = special.rgamma

_SERIES_CUTOFF = 1.0
# beyond this the double-precision series always cancels catastrophically
_SERIES_MAX = 8.0
# accept the asymptotic series only if its smallest term is this small
# relative to the partial sum
_ASYMPTOTIC_RTOL = 1e-13
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


def _check_indices(gamma, delta):
    if not (gamma > 0.0 and delta > 0.0):
        raise ValueError(f"indices must be positive, got gamma={gamma}, delta={delta}")


def _series_float(x, gamma, delta):
    """Power series of E_{gamma,delta}(-x) in double precision.

    Returns (value, max_term); the ratio max_term/|value| measures the
    cancellation and bounds the relative rounding error at ~1e-15 times it.
    """
    total = 0.0
    power = 1.0
    max_term = 0.0
    for n in range(0, 400):
        term = power * _rgamma(n * gamma + delta)
        total += term
        max_term = max(max_term, abs(term))
        if abs(term) < 1e-17 * abs(total) and n > 2:
            return total, max_term
        if abs(power) > 1e290:
            break
        power *= -x
    # did not converge within the term budget (slowly growing gamma argument)
    return total, math.inf


def _series_asymptotic(x, gamma, delta):
    """Algebraic expansion of E_{gamma,delta}(-x) for large x.

    Sums sum_{n>=1} (-1)^(n-1) x^(-n) / Gamma(delta - n*gamma) up to its
    smallest nonzero term.  Returns (value, error_estimate); the estimate is
    the magnitude of that smallest term.  Returns (nan, inf) if the expansion
    never settles (caller falls back to high precision).
    """
    log_x = math.log(x)
    log_pi = math.log(math.pi)
    total = 0.0
    log_env_min = math.inf
    sign = 1.0
    for n in range(1, 200):
        a = delta - n * gamma
        # envelope of |x^-n / Gamma(a)| via the reflection formula; the raw
        # term can dip to ~0 near poles of Gamma, which must not be mistaken
        # for the optimal truncation point
        if a > 0.5:
            log_env = -n * log_x - math.lgamma(a)
            term = sign * math.exp(log_env)
        else:
            log_env = -n * log_x + math.lgamma(1.0 - a) - log_pi
            term = sign * math.exp(log_env) * math.sin(math.pi * a)
        if log_env > log_env_min:
            break  # envelope started growing: optimal truncation reached
        log_env_min = log_env
        if log_env < -400.0:
            break  # remaining terms cannot move a double-precision sum
        total += term
        sign = -sign
    best_err = math.exp(log_env_min) if log_env_min < math.inf else math.inf
    # For gamma > 2/3 there is a recessive oscillatory-exponential component
    # ~ (2/gamma) |w|^(1-delta) e^(Re w), w = x^(1/gamma) e^(i pi/gamma),
    # invisible to the algebraic series; fold its scale into the error bound.
    re_w = x ** (1.0 / gamma) * math.cos(math.pi / gamma)
    if re_w < 0.0:
        log_exp_bound = (
            math.log(2.0 / gamma) + (1.0 - delta) * math.log(x) / gamma + re_w
        )
        if log_exp_bound > -700.0:
            best_err += math.exp(log_exp_bound)
    return total, best_err


def _series_mp(x, gamma, delta):
    """Arbitrary-precision power series; rigorous but slower.

    The largest term of the series is of order exp(x**(1/gamma)), which sets
    the cancellation and hence the working precision.
    """
    dps = 30 + int(0.4343 * x ** (1.0 / gamma))
    with mpmath.workdps(dps):
        z = -mpmath.mpf(x)
        g = mpmath.mpf(gamma)
        d = mpmath.mpf(delta)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        prev = mpmath.inf
        n = 0
        while True:
            # gamma argument must be formed in working precision: a float
            # rounding of n*gamma is amplified by psi(n*gamma) and ruins the
            # cancellation for large terms
            term = power / mpmath.gamma(g * n + d)
            total += term
            magnitude = abs(term)
            if n > 2 and magnitude < prev and magnitude < mpmath.mp.eps * (abs(total) + 1):
                break
            if n > 10_000_000:
                raise RuntimeError("Mittag-Leffler series failed to converge")
            prev = magnitude
            power *= z
            n += 1
        return float(total)


def _ml_neg_scalar(x, gamma, delta):
    """E_{gamma,delta}(-x) for scalar x >= 0."""
    if x == 0.0:
        return _rgamma(delta)
    if x <= _SERIES_CUTOFF:
        return _series_float(x, gamma, delta)[0]
    if x <= _SERIES_MAX:
        value, max_term = _series_float(x, gamma, delta)
        # accept unless cancellation ate too many digits
        if max_term <= 1e3 * abs(value):
            return value
    if gamma < 1.0:
        value, err = _series_asymptotic(x, gamma, delta)
        if err <= _ASYMPTOTIC_RTOL * (abs(value) + 1e-300):
            return value
    return _series_mp(x, gamma, delta)


def ml_neg(x, gamma, delta):
    """Evaluate E_{gamma,delta}(-x) for x >= 0 (scalar or array).

    Closed forms are used for (gamma, delta) in {(1,1), (1/2,1), (1/2,1/2)};
    otherwise the three-regime scheme applies elementwise.
    """
    _check_indices(gamma, delta)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError("ml_neg requires x >= 0")
    if gamma == 1.0 and delta == 1.0:
        out = np.exp(-x)
    elif gamma == 0.5 and delta == 1.0:
        # E_{1/2}(-x) = exp(x^2) erfc(x)
        out = special.erfcx(x)
    elif gamma == 0.5 and delta == 0.5:
        # E_{1/2,1/2}(-x) = 1/sqrt(pi) - x exp(x^2) erfc(x)
        out = _INV_SQRT_PI - x * special.erfcx(x)
    else:
        flat = x.ravel()
        out = np.array([_ml_neg_scalar(v, gamma, delta) for v in flat]).reshape(x.shape)
    if x.ndim == 0:
        return float(out)
    return out


def mlf_one_param(t, beta):
    """Survival function E_beta(-t^beta) for t >= 0, beta in (0, 1].

    Strictly decreasing in t with values in (0, 1]; decays like
    t^(-beta)/Gamma(1-beta) for large t.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be non-negative")
    return ml_neg(t**beta, beta, 1.0)


def mlf_two_param(z, gamma, delta):
    """Two-parameter Mittag-Leffler function E_{gamma,delta}(z) for z <= 0.

    Only the negative real axis is supported; this is the region used by the
    kernel and all analytics.
    """
    _check_indices(gamma, delta)
    z = np.asarray(z, dtype=float)
    if np.any(z > 0.0):
        raise ValueError("mlf_two_param supports z <= 0 only")
    return ml_neg(-z, gamma, delta)


def mlf_pdf(t, beta):
    """Mittag-Leffler density f_beta(t) = t^(beta-1) E_{beta,beta}(-t^beta).

    The excitation kernel of the fractional Hawkes process.  For beta < 1
    it diverges like t^(beta-1)/Gamma(beta) at the origin, so t = 0 is
    rejected; callers that need values arbitrarily close to an event time
    must shift by their own epsilon.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be non-negative")
    if np.any(t == 0.0):
        if beta < 1.0:
            raise ValueError("f_beta(0) diverges for beta < 1; shift t away from 0")
        # beta == 1: f_1(t) = exp(-t), finite at 0
    if beta == 1.0:
        out = np.exp(-t)
    else:
        out = t ** (beta - 1.0) * ml_neg(t**beta, beta, beta)
    if t.ndim == 0:
        return float(out)
    return out


def mixture_kernel(theta, beta):
    """Spectral weight K_beta(theta) of the exponential mixture.

    E_beta(-t^beta) = int_0^inf exp(-theta t) K_beta(theta) dtheta with

        K_beta(theta) = (1/pi) theta^(beta-1) sin(beta pi)
                        / (theta^(2 beta) + 2 theta^beta cos(beta pi) + 1).

    At beta = 1 the mixture degenerates to a point mass at theta = 1 and is
    not a function; the exponential kernel must be special-cased by callers.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"mixture_kernel requires beta in (0, 1), got {beta}")
    theta = np.asarray(theta, dtype=float)
    if np.any(theta <= 0.0):
        raise ValueError("theta must be positive")
    tb = theta**beta
    out = (
        theta ** (beta - 1.0)
        * math.sin(beta * math.pi)
        / (math.pi * (tb * tb + 2.0 * tb * math.cos(beta * math.pi) + 1.0))
    )
    if theta.ndim == 0:
        return float(out)
    return out


def _mixture_quad(t, beta, moment, tol):
    """int_0^inf theta^moment exp(-theta t) K_beta(theta) dtheta.

    Substituting theta = exp(u) makes the integrand smooth and doubly
    exponentially decaying, which adaptive Gauss-Kronrod handles well.
    """

    def integrand(u):
        if u > 690.0 or u < -690.0:
            return 0.0  # integrand underflows in both tails
        theta = math.exp(u)
        damping = theta * t
        if damping > 745.0:
            return 0.0
        return theta ** (moment + 1) * math.exp(-damping) * mixture_kernel(theta, beta)

    value, abserr = integrate.quad(
        integrand, -np.inf, np.inf, epsabs=tol, epsrel=tol, limit=400
    )
    if abserr > 10.0 * tol * (abs(value) + 1.0):
        raise QuadratureError("mixture quadrature did not converge", abserr)
    return value


def mlf_pdf_via_mixture(t, beta, tol=1e-10):
    """f_beta(t) computed from the exponential mixture representation.

    Independent of the series/asymptotic path in :func:`mlf_pdf`; used as a
    cross-check and as the basis of the Markovian simulation approximation.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    if t <= 0.0:
        raise ValueError("t must be positive")
    return _mixture_quad(t, beta, 1, tol)


def mlf_one_param_via_mixture(t, beta, tol=1e-10):
    """E_beta(-t^beta) computed from the exponential mixture representation."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    if t < 0.0:
        raise ValueError("t must be non-negative")
    if t == 0.0:
        return 1.0
    return _mixture_quad(t, beta, 0, tol)
