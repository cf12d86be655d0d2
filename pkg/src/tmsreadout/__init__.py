"""Two-mode-squeezing qubit readout: analytic metrics, shot simulation and calibration."""

from .errors import ConfigError, DomainError, FitError, NumericalError
from .squeeze import (
    CombinedQuad,
    QuadMeans,
    SqueezeParams,
    combine,
    gain_to_r,
    nbar_combined,
    nbar_mode,
    output_covariance,
    propagate_means,
)

__version__ = "0.1.0"

__all__ = [
    "CombinedQuad",
    "ConfigError",
    "DomainError",
    "FitError",
    "NumericalError",
    "QuadMeans",
    "SqueezeParams",
    "__version__",
    "combine",
    "gain_to_r",
    "nbar_combined",
    "nbar_mode",
    "output_covariance",
    "propagate_means",
]
