import random

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20261014, help="seed for the sampled property suites")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one verdict line per acceptance criterion; printed in the summary."""
    def record(n: int, ok: bool, detail: str) -> None:
        _ACCEPTANCE[n] = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_ACCEPTANCE[n])
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
