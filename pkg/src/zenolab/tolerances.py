"""Named tolerance profiles, selected with ``ZENOLAB_TOLERANCE_PROFILE``."""

from __future__ import annotations

import os

ENV_VAR = "ZENOLAB_TOLERANCE_PROFILE"

PROFILES: dict[str, dict[str, float]] = {
    "default": {
        "level_residual": 1e-12,
        "quadrature_abs": 1e-10,
        "oracle_vs_p4": 5e-3,
        "oracle_evenness": 1e-9,
        "pole_residual": 1e-10,
        "linear_term": 1e-12,
        "crossover_phi": 1e-10,
    },
    "strict": {
        "level_residual": 1e-13,
        "quadrature_abs": 1e-12,
        "oracle_vs_p4": 5e-3,
        "oracle_evenness": 1e-11,
        "pole_residual": 1e-11,
        "linear_term": 1e-13,
        "crossover_phi": 1e-11,
    },
}


def profile_name() -> str:
    name = os.environ.get(ENV_VAR, "default").strip().lower() or "default"
    if name not in PROFILES:
        raise ValueError(f"{ENV_VAR} must be one of {sorted(PROFILES)}, got {name!r}")
    return name


def current() -> dict[str, float]:
    return dict(PROFILES[profile_name()])
