"""Suite-wide options and fixtures.

Every randomized test draws from the `rng` fixture, which is seeded from
the --seed option so runs are reproducible by default and explorable on
demand (pytest --seed 12345). The acceptance module registers its
per-criterion results here to print one line each at the end of the run.
"""

import random

import pytest

DEFAULT_SEED = 20260814

acceptance_lines = []


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        type=int,
        default=DEFAULT_SEED,
        help="seed for randomized property tests (default %(default)s)",
    )


@pytest.fixture(scope="session")
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    if not acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines:
        terminalreporter.write_line(line)
