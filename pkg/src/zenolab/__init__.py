"""Survival laws, spectral poles and Zeno crossovers for a spherical
well-plus-barrier tunneling model (s-wave, natural units with hbar = 1)."""

from zenolab.model import ModelParams, PhysicalConfig, to_dimensionless, validate
from zenolab.quasibound import QuasiLevel, find_levels
from zenolab.spectral import SpectralShape, TaylorCoeffs, shape_constants, taylor_expand
from zenolab.poles import (
    LevelAnalysis,
    Pole,
    PoleSet,
    SurvivalParams,
    analyze_level,
    pole2,
    pole4,
    quartic_roots,
    survival_params,
)
from zenolab.survival import p2, p4, p4_approx, p_oracle, short_time_coefficients
from zenolab.zeno import crossover, phi

__version__ = "0.1.0"

__all__ = [
    "LevelAnalysis",
    "ModelParams",
    "PhysicalConfig",
    "Pole",
    "PoleSet",
    "QuasiLevel",
    "SpectralShape",
    "SurvivalParams",
    "TaylorCoeffs",
    "analyze_level",
    "crossover",
    "find_levels",
    "p2",
    "p4",
    "p4_approx",
    "p_oracle",
    "phi",
    "pole2",
    "pole4",
    "quartic_roots",
    "shape_constants",
    "short_time_coefficients",
    "survival_params",
    "taylor_expand",
    "to_dimensionless",
    "validate",
]
