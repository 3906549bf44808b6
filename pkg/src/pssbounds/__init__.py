"""Entanglement bounds for two-mode photon-subtracted states from second moments."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundsReport,
    MixedPss,
    delta_max,
    error_band,
    lower_bound,
    mixed_bounds,
    pss_cm,
    upper_bound,
    upsilon,
    upsilon_max,
)
from .fock import PssPure  # noqa: E402
from .gaussian import StandardFormCM, to_standard_form  # noqa: E402

__all__ = [
    "__version__",
    "BoundsReport",
    "MixedPss",
    "PssPure",
    "StandardFormCM",
    "delta_max",
    "error_band",
    "lower_bound",
    "mixed_bounds",
    "pss_cm",
    "to_standard_form",
    "upper_bound",
    "upsilon",
    "upsilon_max",
]
