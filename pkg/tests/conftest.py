import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from weierstrass_disks import ConstructionParams, build_domain

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ORACLES = json.loads((Path(__file__).parent / "data" / "oracles.json").read_text())

FAMILIES = {
    "n1": ([0.0], 0.1),
    "n2": ([-0.2, 0.2], 0.1),
    "n3": ([-0.3, 0.0, 0.3], 0.05),
}


@pytest.fixture
def oracles():
    return ORACLES


@pytest.fixture(params=sorted(FAMILIES))
def family(request):
    pts, a = FAMILIES[request.param]
    return ConstructionParams(pts, a)


def random_domain_points(params, n, seed=0, frac=1.0):
    """Uniform x, uniform y inside the column (scaled by ``frac``)."""
    rng = np.random.default_rng(seed)
    spec = build_domain(params)
    x = rng.uniform(-0.5, 0.5, n)
    w = spec.column_width(x)
    y = frac * w * rng.uniform(-1, 1, n)
    return x + 1j * y


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
