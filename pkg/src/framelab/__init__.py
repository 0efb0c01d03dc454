"""Finite frame and discrete Gabor analysis toolkit."""

from .frames import (
    Frame,
    canonical_dual,
    canonical_tight,
    diagnostics,
    frame_bounds,
    is_dual,
)
from .gabor import GaborSystem, dual_window, make_window, spectral_bounds
from .linalg import DEFAULT_TOL, TolerancePolicy
from .perturb import perturbation_report
from .projection import finite_sections
from .suite import run_suite
from .translates import classify_translates, translate_system
from .zak import critical_spectrum, zak_forward, zak_inverse

__all__ = [
    "DEFAULT_TOL",
    "Frame",
    "GaborSystem",
    "TolerancePolicy",
    "canonical_dual",
    "canonical_tight",
    "classify_translates",
    "critical_spectrum",
    "diagnostics",
    "dual_window",
    "finite_sections",
    "frame_bounds",
    "is_dual",
    "make_window",
    "perturbation_report",
    "run_suite",
    "spectral_bounds",
    "translate_system",
    "zak_forward",
    "zak_inverse",
]
__version__ = "0.1.0"
