import functools
import random

import pytest
from hypothesis import HealthCheck, settings

from spinlab.correspondence import random_ruling_curve
from spinlab.field import PrimeField, rationals
from spinlab.quadric import sample_context

settings.register_profile("spinlab", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("spinlab")

# criterion number -> (passed, one-line detail), filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")


def field_of(desc):
    return rationals() if desc == "qq" else PrimeField(int(desc[3:]))


@functools.lru_cache(maxsize=None)
def context(desc, seed):
    return sample_context(field_of(desc), random.Random(seed))


@functools.lru_cache(maxsize=None)
def instance(desc, d, seed):
    """(ctx, R, corr) for a seeded sample; cached across tests."""
    ctx = context(desc, seed)
    R, corr = random_ruling_curve(ctx, d, seed=1000 + seed)
    return ctx, R, corr


@pytest.fixture(scope="session")
def F101():
    return PrimeField(101)


@pytest.fixture(scope="session")
def QQ():
    return rationals()
