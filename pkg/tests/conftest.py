import random
import sys

import pytest
from hypothesis import HealthCheck, settings

from xilab import fincat, lsc, rgraph as rg
from xilab import presheaf as ps

settings.register_profile(
    "xilab", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("xilab")

SITES = fincat.CATALOG


@pytest.fixture(scope="session")
def delta1():
    return fincat.catalog("delta1")


@pytest.fixture(scope="session")
def xi(delta1):
    return lsc.build_xi(delta1)


@pytest.fixture
def A(delta1):
    return ps.representable(delta1, "[1]")


@pytest.fixture
def L(xi):
    return ps.quotient_by_congruence(xi.lookup("loop@[1]"))[0]


@pytest.fixture
def q(xi):
    """The collapse A -> L, as the quotient map of the loop congruence."""
    return ps.quotient_by_congruence(xi.lookup("loop@[1]"))[1]


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    RESULTS = getattr(module, "RESULTS", None)
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, seconds, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {detail}")
