import functools
import os

import pytest
from hypothesis import HealthCheck, settings

from lfkirby.fibration import load_dataset
from lfkirby.scenarios import run_disk_piece
from lfkirby.surface import build_surface, simple_curves

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GRID = [(h, n) for h in (1, 2, 3) for n in (1, 2, 3)]

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@functools.lru_cache(maxsize=None)
def dataset(h, n):
    return load_dataset(h, n)


@functools.lru_cache(maxsize=None)
def disk_piece_run(h, n):
    return run_disk_piece(h, n, dataset(h, n))


@functools.lru_cache(maxsize=None)
def curve_pool(g):
    return tuple(simple_curves(build_surface(g), {1: 4, 2: 4, 3: 3}[g]))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def acceptance():
    return ACCEPTANCE
