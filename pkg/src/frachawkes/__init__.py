"""Fractional Hawkes processes with Mittag-Leffler excitation kernels.

Submodules:
  mlf       Mittag-Leffler function family and mixture kernel
  process   conditional intensity and thinning simulation
  analysis  mean intensity, expected counts, Bartlett spectrum
  laplace   numerical Laplace inversion (Talbot, Gaver-Stehfest)
  cli       command-line front end
"""

__version__ = "0.1.0"

from .mlf import (
    mlf_one_param,
    mlf_two_param,
    mlf_pdf,
    mixture_kernel,
    mlf_pdf_via_mixture,
)
from .process import (
    ModelParams,
    ThinningConfig,
    EventSequence,
    IntensityPath,
    conditional_intensity,
    simulate,
    intensity_path,
    replicate_counts,
)
from .analysis import (
    CurveGrid,
    stationary_mean,
    mean_intensity_laplace,
    mean_intensity,
    expected_count,
    bartlett_spectrum,
    covariance_laplace,
)
from .laplace import LaplaceInversionConfig
