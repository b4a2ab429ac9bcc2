"""Spherical analysis on Damek-Ricci spaces and multipliers of Laplacians with drift."""

from __future__ import annotations

__version__ = "0.1.0"

from .model import GroupParams, GroupPoint, DriftParam, PRESETS, preset, radius, density_A
from .spherical import phi, spherical_evaluator
from .transforms import abel_forward, abel_inverse, spherical_transform, spherical_inverse
from .multiplier import (
    CutoffFamily,
    MultiplierContext,
    SpectralMultiplier,
    heat_multiplier,
    resolvent_exp_multiplier,
)

__all__ = [
    "__version__",
    "GroupParams",
    "GroupPoint",
    "DriftParam",
    "PRESETS",
    "preset",
    "radius",
    "density_A",
    "phi",
    "spherical_evaluator",
    "abel_forward",
    "abel_inverse",
    "spherical_transform",
    "spherical_inverse",
    "CutoffFamily",
    "MultiplierContext",
    "SpectralMultiplier",
    "heat_multiplier",
    "resolvent_exp_multiplier",
]
