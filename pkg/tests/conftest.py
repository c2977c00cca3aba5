from __future__ import annotations

import math
import sys
from pathlib import Path

import pytest
from hypothesis import settings

from zenolab import tolerances
from zenolab.errors import RegimeError
from zenolab.model import ModelParams
from zenolab.poles import analyze_level
from zenolab.quasibound import find_levels

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

GRID_ROOT_U = (2 * math.pi, 3 * math.pi, 4 * math.pi)
GRID_W = (0.6, 1.0, 1.4)


def grid_params():
    return [ModelParams(ru * ru, w) for ru in GRID_ROOT_U for w in GRID_W]


def grid_levels(include_shallow: bool = False):
    """(params, level) for every level of the reference grid."""
    return [(p, lv) for p in grid_params() for lv in find_levels(p, include_shallow=include_shallow)]


def validated_analyses():
    """Analyses for grid levels with a two-pole quartic; plus the excluded."""
    ok, excluded = [], []
    for p, lv in grid_levels():
        try:
            ok.append(analyze_level(p, lv))
        except RegimeError as exc:
            excluded.append((p, lv, str(exc)))
    return ok, excluded


def level_id(item) -> str:
    p, lv = item[0], item[1]
    return f"rootu={math.sqrt(p.u) / math.pi:.0f}pi-w={p.w:g}-n={lv.index}"


@pytest.fixture(scope="session")
def tol():
    return tolerances.current()


@pytest.fixture(scope="session")
def analyses():
    return validated_analyses()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
